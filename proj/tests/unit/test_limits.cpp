#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/distributions/poisson.hpp>

#include "fixtures.hpp"
#include "gwlab/error.hpp"
#include "gwlab/limits.hpp"
#include "gwlab/stats.hpp"

using namespace gwlab;

namespace {

RngStream limit_rng(std::uint64_t seed, std::uint64_t rep) {
  return open_stream(make_stream(seed, StreamPurpose::LimitPath, rep));
}

struct SbpSample {
  std::vector<double> at_half, at_one;
  std::vector<Vec2> joint;  // (X_1, int_0^1 X)
};

SbpSample sample_sbp(double b, double v, int L, std::uint64_t seed) {
  const SdeConfig cfg{b, v, 1.0, 1e-3};
  SbpSample s;
  for (int r = 0; r < L; ++r) {
    auto rng = limit_rng(seed, static_cast<std::uint64_t>(r));
    const auto p = simulate_sbp(cfg, rng);
    s.at_half.push_back(p.x1[500]);
    s.at_one.push_back(p.x1.back());
    s.joint.push_back({p.x1.back(), p.integral.back()});
  }
  return s;
}

}  // namespace

TEST_CASE("degenerate squared Bessel paths") {
  auto rng = limit_rng(1, 0);
  const auto det = simulate_sbp({1.5, 0.0, 2.0, 0.01}, rng);
  REQUIRE(det.t.size() == 201);
  for (std::size_t i = 0; i < det.t.size(); ++i) {
    CHECK(det.x1[i] == doctest::Approx(1.5 * det.t[i]));
    CHECK(det.integral[i] == doctest::Approx(0.75 * det.t[i] * det.t[i]));
  }
  const auto zero = simulate_sbp({0.0, 2.0, 1.0, 0.01}, rng);
  for (double x : zero.x1) CHECK(x == 0.0);
  CHECK_THROWS_AS(simulate_sbp({1.0, 1.0, 1.0, 0.0}, rng), ValidationError);
  CHECK_THROWS_AS(simulate_sbp({-1.0, 1.0, 1.0, 0.1}, rng), ValidationError);
}

TEST_CASE("simulated squared Bessel process matches its Gamma marginal and joint transform") {
  const int L = 20000;
  const auto s = sample_sbp(1.0, 2.0, L, 2);
  CHECK(ks_distance(s.at_one, [](double x) { return sbp_marginal_cdf(x, 1.0, 2.0, 1.0); }) <= 0.02);
  CHECK(ks_distance(s.at_half, [](double x) { return sbp_marginal_cdf(x, 1.0, 2.0, 0.5); }) <= 0.02);
  for (auto [s1, s2] : {std::pair{0.5, 0.5}, std::pair{1.0, 0.5}, std::pair{0.5, 1.0}}) {
    const auto e = empirical_laplace(s.joint, {s1, s2});
    CHECK(std::fabs(e.value - laplace_joint_case2(s1, s2, 1.0, 1.0, 2.0, 1.0)) <= 0.01);
  }
  const auto s2 = sample_sbp(1.5, 1.0, L, 3);
  CHECK(ks_distance(s2.at_one, [](double x) { return sbp_marginal_cdf(x, 1.5, 1.0, 1.0); }) <= 0.02);
  const auto e = empirical_laplace(s2.joint, {0.5, 0.5});
  CHECK(std::fabs(e.value - laplace_joint_case2(0.5, 0.5, 1.0, 1.5, 1.0, 1.0)) <= 0.01);
}

TEST_CASE("laplace_sbp examples") {
  CHECK(laplace_sbp(0.0, 0.0, 1.0, 0.3) == 1.0);
  CHECK(laplace_sbp(0.5, 0.0, 2.0, 1.0) == doctest::Approx(std::pow(3.0, -2.0)));
  CHECK(laplace_sbp(0.25, 1.0, 1.0, 0.0) == doctest::Approx(1.0 / (std::cosh(1.0) + 0.5 * std::sinh(1.0))));
  CHECK(laplace_sbp(0.7, 1e-7, 1.3, 0.5) == doctest::Approx(laplace_sbp(0.7, 0.0, 1.3, 0.5)).epsilon(1e-9));
  // Large beta t stays finite and continuous across the switch to the log form.
  CHECK(laplace_sbp(0.3, 1.0, 20.0 - 1e-9, 0.2) == doctest::Approx(laplace_sbp(0.3, 1.0, 20.0 + 1e-9, 0.2)));
  CHECK(laplace_sbp(0.3, 50.0, 100.0, 0.2) >= 0.0);
  CHECK_THROWS_AS(laplace_sbp(-1.0, 0.0, 1.0, 0.0), ValidationError);
}

TEST_CASE("joint transform examples") {
  // No integral weight: Gamma Laplace transform (1 + s1 v t / 2)^{-2 b1 / v}.
  CHECK(laplace_joint_case2(0.5, 0.0, 1.0, 1.0, 2.0, 1.0) == doctest::Approx(1.0 / 1.5));
  CHECK(laplace_joint_case2(0.4, 0.0, 2.0, 3.0, 1.0, 0.7) == doctest::Approx(std::pow(1.4, -6.0)));
  // v = 0: deterministic path b1 t.
  CHECK(laplace_joint_case2(0.5, 0.2, 2.0, 1.0, 0.0, 0.5) ==
        doctest::Approx(std::exp(-0.5 * 2.0 - 0.2 * 0.5 * 1.0 * 2.0)));
}

TEST_CASE("tanh-integral representation equals the closed form") {
  for (double b1 : {0.0, 0.3, 1.0, 2.5})
    for (double v : {0.5, 1.0, 3.0})
      for (double a21 : {0.4, 1.0, 2.0})
        for (auto [s1, s2] : {std::pair{0.0, 0.5}, std::pair{0.5, 0.5}, std::pair{1.0, 0.5}, std::pair{0.5, 1.0},
                              std::pair{3.0, 0.1}}) {
          CAPTURE(b1);
          CAPTURE(v);
          CAPTURE(a21);
          CAPTURE(s1);
          CAPTURE(s2);
          CHECK(laplace_joint_fosterney(s1, s2, b1, v, a21) ==
                doctest::Approx(laplace_joint_case2(s1, s2, 1.0, b1, v, a21)).epsilon(1e-9));
        }
}

TEST_CASE("Gamma marginal cdf") {
  CHECK(sbp_marginal_cdf(-1.0, 1.0, 2.0, 1.0) == 0.0);
  CHECK(sbp_marginal_cdf(1.0, 1.0, 2.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(sbp_marginal_cdf(1.0, 1.0, 2.0, 2.0) == doctest::Approx(1.0 - std::exp(-0.5)));
  CHECK(sbp_marginal_cdf(2.0, 1.0, 0.0, 2.0) == 1.0);
  CHECK(sbp_marginal_cdf_left(2.0, 1.0, 0.0, 2.0) == 0.0);
  CHECK(sbp_marginal_cdf(0.0, 0.0, 1.0, 1.0) == 1.0);
}

TEST_CASE("stationary pgf examples") {
  const auto G = UnivariateLaw::geometric(2.0 / 3.0);
  const auto H = UnivariateLaw::poisson(1.0);
  CHECK(std::abs(stationary_pgf(G, H, 1.0) - 1.0) <= 1e-14);
  for (double r : {0.0, 0.3, 0.9, 1.0})
    for (double th : {0.0, 1.0, 2.5}) CHECK(std::abs(stationary_pgf(G, H, std::polar(r, th))) <= 1.0 + 1e-12);
  // Zero offspring: the stationary law is the immigration law.
  const auto none = UnivariateLaw::deterministic(0);
  const std::complex<double> z(0.3, 0.4);
  CHECK(std::abs(stationary_pgf(none, H, z) - H.pgf(z)) <= 1e-14);
}

TEST_CASE("stationary law by Fourier inversion") {
  SUBCASE("Bernoulli thinning with Poisson immigration is Poisson") {
    const auto law = stationary_law(UnivariateLaw::bernoulli(0.5), UnivariateLaw::poisson(1.0), 64, 1024);
    const boost::math::poisson_distribution<> ref(2.0);
    for (long k = 0; k <= 64; ++k)
      CHECK(std::fabs(law.pmf[static_cast<std::size_t>(k)] - boost::math::pdf(ref, static_cast<double>(k))) <= 1e-13);
    CHECK(law.mean_theory == doctest::Approx(2.0));
  }
  SUBCASE("geometric offspring with Poisson immigration") {
    const auto law = stationary_law(UnivariateLaw::geometric(2.0 / 3.0), UnivariateLaw::poisson(1.0));
    CHECK(law.mean_theory == doctest::Approx(2.0));
    CHECK(law.mean_from_pmf == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(law.leaked <= 1e-6);
    double total = 0.0;
    for (double p : law.pmf) {
      CHECK(p >= -1e-12);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("no immigration is a point mass at zero") {
    const auto law = stationary_law(UnivariateLaw::poisson(0.5), UnivariateLaw::deterministic(0), 16, 64);
    CHECK(law.pmf[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < law.pmf.size(); ++k) CHECK(std::fabs(law.pmf[k]) <= 1e-14);
  }
  SUBCASE("heavy tail beyond N is rejected") {
    CHECK_THROWS_AS(stationary_law(UnivariateLaw::geometric(0.6), UnivariateLaw::poisson(5.0), 8, 64), ValidationError);
  }
  CHECK_THROWS_AS(stationary_law(UnivariateLaw::poisson(1.0), UnivariateLaw::poisson(1.0)), ValidationError);
}

TEST_CASE("per-case limit structure") {
  SUBCASE("Case 4 second coordinate is proportional to the first") {
    const auto p = fixtures::poisson_model(1.0, 0.3, 0.0);
    auto rng = limit_rng(5, 0);
    const auto path = simulate_limit_case(p, 1.0, 1e-2, rng);
    for (std::size_t i = 0; i < path.x1.size(); ++i) CHECK(path.x2[i] == doctest::Approx(0.3 * path.x1[i]));
  }
  SUBCASE("Case 2 with v = 0 is deterministic") {
    const auto p = fixtures::deterministic_case2();
    auto rng = limit_rng(5, 1);
    const auto path = simulate_limit_case(p, 2.0, 1e-2, rng);
    for (std::size_t i = 0; i < path.t.size(); ++i) {
      CHECK(path.x1[i] == doctest::Approx(path.t[i]));
      CHECK(path.x2[i] == doctest::Approx(0.5 * path.t[i] * path.t[i]));
    }
  }
  SUBCASE("Case 5 drift gives the mean of the second coordinate") {
    const auto p = fixtures::poisson_model(0.5, 0.5, 1.0, 1.0, 1.0);
    const auto cfg = limit_sde(p, 1.0, 1e-2);
    CHECK(cfg.drift == doctest::Approx(1.0 + 0.5 * 1.0 / 0.5));
    std::vector<double> ends;
    for (int r = 0; r < 4000; ++r) {
      auto rng = limit_rng(6, static_cast<std::uint64_t>(r));
      const auto path = simulate_limit_case(p, 1.0, 1e-2, rng);
      CHECK(path.x1.empty());
      ends.push_back(path.x2.back());
    }
    const auto m = mean_estimate(ends);
    CHECK(std::fabs(m.value - cfg.drift) <= 4.0 * m.se);
  }
  SUBCASE("Case 1 coordinates use their own drifts") {
    const auto p = fixtures::poisson_model(1.0, 0.0, 1.0, 0.5, 2.0);
    std::vector<double> e1, e2;
    for (int r = 0; r < 4000; ++r) {
      auto rng = limit_rng(7, static_cast<std::uint64_t>(r));
      const auto path = simulate_limit_case(p, 1.0, 1e-2, rng);
      e1.push_back(path.x1.back());
      e2.push_back(path.x2.back());
    }
    const auto m1 = mean_estimate(e1), m2 = mean_estimate(e2);
    CHECK(std::fabs(m1.value - 0.5) <= 4.0 * m1.se);
    CHECK(std::fabs(m2.value - 2.0) <= 4.0 * m2.se);
    CHECK(std::fabs(correlation(e1, e2)) <= 4.0 / std::sqrt(4000.0));
  }
}

TEST_CASE("limit processes are only defined for covered cases") {
  auto rng = limit_rng(8, 0);
  CHECK_THROWS_AS(simulate_limit_case(fixtures::poisson_model(0.5, 0.0, 0.5), 1.0, 1e-2, rng), ValidationError);
}
