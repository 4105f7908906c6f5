#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "gwlab/decomposition.hpp"
#include "gwlab/error.hpp"
#include "gwlab/moments.hpp"
#include "gwlab/simulate.hpp"
#include "gwlab/stats.hpp"

using namespace gwlab;

namespace {

bool close_rel(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::fmax(1.0, std::fabs(b)); }

bool close_rel(const Mat2& a, const Mat2& b, double rel) {
  double scale = 1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) scale = std::fmax(scale, std::fabs(b(i, j)));
  return max_abs_diff(a, b) <= rel * scale;
}

std::vector<ModelParams> covered_models() {
  return {fixtures::poisson_model(1.0, 0.0, 1.0, 2.0, 3.0), fixtures::poisson_model(1.0, 0.7, 1.0, 1.5, 0.5),
          fixtures::poisson_model(1.0, 0.0, 0.5, 1.0, 2.0), fixtures::poisson_model(1.0, 0.4, 0.6, 1.0, 1.0),
          fixtures::poisson_model(0.5, 0.5, 1.0, 1.0, 1.0), fixtures::correlated_poisson_model(1.0, 0.0, 0.5, 0.7, 0.3, 0.2)};
}

const BivariateLaw kCorrelatedType1 =
    BivariateLaw::table({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {0.4, 0.3, 0.1, 0.2});

}  // namespace

TEST_CASE("mean examples per case") {
  const auto c1 = fixtures::poisson_model(1.0, 0.0, 1.0, 2.0, 3.0);
  CHECK(mean_closed_form(c1, 10) == Vec2{20.0, 30.0});
  const auto c2 = fixtures::poisson_model(1.0, 0.5, 1.0, 1.0, 1.0);
  const Vec2 m2 = mean_closed_form(c2, 20);
  CHECK(m2[0] == doctest::Approx(20.0));
  CHECK(m2[1] == doctest::Approx(115.0));
  const auto c3 = fixtures::poisson_model(1.0, 0.0, 0.5, 1.0, 2.0);
  CHECK(mean_closed_form(c3, 3)[1] == doctest::Approx(2.0 * (1.0 + 0.5 + 0.25)));
  const auto c5 = fixtures::poisson_model(0.5, 0.5, 1.0, 1.0, 1.0);
  CHECK(mean_closed_form(c5, 2)[0] == doctest::Approx(1.5));
  CHECK(mean_closed_form(c5, 2)[1] == doctest::Approx(2.0 + 0.5));
  CHECK(mean_closed_form(c1, 0) == Vec2{0.0, 0.0});
}

TEST_CASE("generic and closed-form means agree for every k up to 10^4") {
  auto models = covered_models();
  models.push_back(fixtures::poisson_model(0.3, 0.8, 0.3));  // NotCovered, equal diagonal
  models.push_back(fixtures::poisson_model(0.5, 0.2, 0.9));  // NotCovered
  for (const auto& p : models) {
    const auto series = mean_generic_series(p, 10000);
    for (long k = 0; k <= 10000; ++k) {
      const Vec2 c = mean_closed_form(p, k);
      const Vec2 g = series[static_cast<std::size_t>(k)];
      if (!close_rel(c[0], g[0], 1e-9) || !close_rel(c[1], g[1], 1e-9)) {
        CAPTURE(k);
        CAPTURE(p.case_label.to_string());
        FAIL("closed form disagrees");
      }
    }
    const auto em = exact_mean(p, 777);
    CHECK(close_rel(em.generic[1], em.closed_form[1], 1e-9));
  }
}

TEST_CASE("covariance recursion equals the double sum and stays PSD") {
  auto models = covered_models();
  const auto zero = UnivariateLaw::deterministic(0);
  models.push_back(build_model(kCorrelatedType1, BivariateLaw::independent(zero, UnivariateLaw::geometric(0.5)),
                               BivariateLaw::bivariate_poisson(0.5, 0.5, 0.5)));
  for (const auto& p : models) {
    const auto series = exact_cov_series(p, 300);
    for (long k : {1L, 2L, 7L, 50L, 300L}) {
      const Mat2 v = exact_cov(p, k);
      CHECK(close_rel(series[static_cast<std::size_t>(k)], v, 1e-9));
    }
    for (const auto& v : series) {
      CHECK(v(0, 1) == doctest::Approx(v(1, 0)));
      CHECK(min_symmetric_eigenvalue(v) >= -1e-9 * std::fmax(1.0, v(1, 1)));
    }
  }
}

TEST_CASE("brute-force oracle examples") {
  const auto d = UnivariateLaw::deterministic;
  const auto empty = build_model(BivariateLaw::independent(UnivariateLaw::bernoulli(0.5), d(0)),
                                 BivariateLaw::independent(d(0), d(1)), BivariateLaw::independent(d(0), d(0)));
  const auto pmf0 = brute_force_pmf(empty, 10, 5);
  CHECK(pmf0.at(0, 0) == 1.0);
  CHECK(pmf0.leaked == 0.0);

  const auto p = fixtures::bernoulli_model();
  const auto one = brute_force_pmf(p, 1, 4);
  CHECK(one.at(0, 0) == doctest::Approx(0.3));
  CHECK(one.at(1, 0) == doctest::Approx(0.2));
  CHECK(one.at(0, 1) == doctest::Approx(0.1));
  CHECK(one.at(1, 1) == doctest::Approx(0.4));
}

TEST_CASE("exact moments match the brute-force distribution") {
  const auto p = fixtures::bernoulli_model();
  for (long k : {1L, 2L, 4L, 5L}) {
    const auto pmf = brute_force_pmf(p, k, 120);
    REQUIRE(pmf.leaked < 1e-14);
    const Vec2 m = pmf.mean();
    const Vec2 e = exact_mean(p, k).closed_form;
    CHECK(m[0] == doctest::Approx(e[0]).epsilon(1e-10));
    CHECK(m[1] == doctest::Approx(e[1]).epsilon(1e-10));
    CHECK(max_abs_diff(pmf.covariance(), exact_cov(p, k)) <= 1e-10 * std::fmax(1.0, exact_cov(p, k)(1, 1)));
  }
  CHECK_THROWS_AS(brute_force_pmf(p, 6, 200, 50), BudgetError);
  CHECK_THROWS_AS(brute_force_pmf(fixtures::poisson_model(1.0, 0.5, 1.0), 2, 10), ValidationError);
}

TEST_CASE("Case 3 cross-time covariance against the matrix oracle") {
  const auto p = fixtures::correlated_poisson_model(1.0, 0.0, 0.5, 0.7, 0.3, 0.2);
  REQUIRE(p.case_label.kind == CaseKind::Case3);
  const long n1 = 40, n2 = 30;
  for (double t1 : {0.0, 0.25, 0.5, 1.0})
    for (double t2 : {0.0, 0.3, 0.5, 1.0}) {
      const long K1 = static_cast<long>(std::floor(n1 * t1)), K2 = static_cast<long>(std::floor(n2 * t2));
      const double oracle = K2 >= K1 ? exact_cross_cov(p, K2, K1)(1, 0) : exact_cross_cov(p, K1, K2)(0, 1);
      const double got = cross_time_cov_case3(p, n1, n2, t1, t2);
      CAPTURE(t1);
      CAPTURE(t2);
      CHECK(got == doctest::Approx(oracle / n1).epsilon(1e-10).scale(1.0));
      CHECK(std::fabs(got) <= cross_time_bound_case3(p, n1) * (1.0 + 1e-12));
    }
  const auto indep = fixtures::poisson_model(1.0, 0.0, 0.5);
  CHECK(cross_time_cov_case3(indep, 50, 50, 1.0, 1.0) == 0.0);
  CHECK(cross_time_bound_case3(p, 100) == doctest::Approx(0.7 / (0.5 * 100)));
  CHECK_THROWS(cross_time_cov_case3(fixtures::poisson_model(1.0, 0.5, 1.0), 10, 10, 1.0, 1.0));
}

TEST_CASE("Case 5 cross-time covariance against the matrix oracle") {
  const auto zero = UnivariateLaw::deterministic(0);
  const auto p = build_model(kCorrelatedType1, BivariateLaw::independent(zero, UnivariateLaw::poisson(1.0)),
                             BivariateLaw::bivariate_poisson(0.6, 0.4, 0.9));
  REQUIRE(p.case_label.kind == CaseKind::Case5);
  const long n1 = 25, n2 = 35;
  for (double t1 : {0.0, 0.2, 0.6, 1.0})
    for (double t2 : {0.0, 0.3, 0.5, 1.0}) {
      const long K1 = static_cast<long>(std::floor(n1 * t1)), K2 = static_cast<long>(std::floor(n2 * t2));
      const double oracle = K2 >= K1 ? exact_cross_cov(p, K2, K1)(1, 0) : exact_cross_cov(p, K1, K2)(0, 1);
      CAPTURE(t1);
      CAPTURE(t2);
      CHECK(cross_time_cov_case5(p, n1, n2, t1, t2) == doctest::Approx(oracle / n2).epsilon(1e-10).scale(1.0));
    }
  CHECK(cross_time_cov_case5(p, 10, 10, 0.0, 1.0) == 0.0);
}

TEST_CASE("growth exponent table examples") {
  const auto c2 = CaseLabel::of(2);
  CHECK(growth_exponent(c2, GrowthQuantity::MeanX2) == 2.0);
  CHECK(growth_exponent(c2, GrowthQuantity::SecondM2) == 2.0);
  CHECK_FALSE(growth_exponent(c2, GrowthQuantity::FourthV1).has_value());
  CHECK(growth_exponent(CaseLabel::of(3), GrowthQuantity::SecondM2) == 0.0);
  CHECK(growth_exponent(CaseLabel::of(4), GrowthQuantity::FourthV2) == 2.0);
  CHECK(growth_exponent(CaseLabel::of(5), GrowthQuantity::SecondVtilde1) == 0.0);
  CHECK_THROWS_AS(growth_exponents(CaseLabel{CaseKind::NotCovered, "subcritical"}), ValidationError);
}

TEST_CASE("exact second moments follow the stated growth orders") {
  for (const auto& p : covered_models()) {
    const auto& label = p.case_label;
    const auto e2m2 = [&](long k) { return expected_mm(p, k)(1, 1); };
    const auto e2m1 = [&](long k) { return expected_mm(p, k)(0, 0); };
    const double s2 = std::log(e2m2(20000) / e2m2(10000)) / std::log(2.0);
    const double s1 = std::log(e2m1(20000) / e2m1(10000)) / std::log(2.0);
    CAPTURE(label.to_string());
    CHECK(s2 <= *growth_exponent(label, GrowthQuantity::SecondM2) + 0.05);
    CHECK(s1 <= *growth_exponent(label, GrowthQuantity::SecondM1) + 0.05);
  }
}

TEST_CASE("conditional variance matches Monte Carlo") {
  const auto zero = UnivariateLaw::deterministic(0);
  const auto p = build_model(kCorrelatedType1, BivariateLaw::independent(zero, UnivariateLaw::geometric(0.5)),
                             BivariateLaw::bivariate_poisson(0.5, 0.5, 0.5));
  const Population state{3, 4};
  const Mat2 target = conditional_variance(state.as_real(), p);
  std::vector<double> x1, x2;
  auto rng = open_stream(make_stream(31, StreamPurpose::Auxiliary, 0));
  for (int r = 0; r < 40000; ++r) {
    const auto x = step(p, state, rng);
    x1.push_back(static_cast<double>(x.type1));
    x2.push_back(static_cast<double>(x.type2));
  }
  const auto c11 = covariance_estimate(x1, x1);
  const auto c12 = covariance_estimate(x1, x2);
  const auto c22 = covariance_estimate(x2, x2);
  CHECK(std::fabs(c11.value - target(0, 0)) <= 4.0 * c11.se);
  CHECK(std::fabs(c12.value - target(0, 1)) <= 4.0 * c12.se);
  CHECK(std::fabs(c22.value - target(1, 1)) <= 4.0 * c22.se);
}

TEST_CASE("Case 4 fourth moment of the filtered second martingale grows at most quadratically") {
  const auto p = fixtures::poisson_model(1.0, 0.4, 0.6, 1.0, 1.0);
  REQUIRE(p.case_label.kind == CaseKind::Case4);
  const std::vector<long> ks{50, 100, 200, 400};
  std::vector<double> fourth(ks.size(), 0.0);
  const int R = 20000;
  for (int r = 0; r < R; ++r) {
    const auto path = simulate_path(p, ks.back(), make_stream(32, StreamPurpose::BranchingPath, static_cast<std::uint64_t>(r)));
    const auto s = decompose_second(path, p, DecompositionMethod::Recursive);
    REQUIRE(s.V2.has_value());
    for (std::size_t i = 0; i < ks.size(); ++i) fourth[i] += std::pow((*s.V2)[static_cast<std::size_t>(ks[i])], 4) / R;
  }
  std::vector<double> kd(ks.begin(), ks.end());
  CHECK(loglog_slope(kd, fourth) <= 2.3);
}
