#include <doctest.h>

#include <cmath>
#include <vector>

#include "gwlab/error.hpp"
#include "gwlab/laws.hpp"

using namespace gwlab;

namespace {

// Truncated pmf computed from the textbook formulas, independent of the library.
std::vector<double> reference_pmf(const UnivariateLaw& law, int kmax) {
  std::vector<double> p(static_cast<std::size_t>(kmax) + 1, 0.0);
  if (auto* l = std::get_if<PoissonLaw>(&law.kind())) {
    for (int k = 0; k <= kmax; ++k)
      p[k] = std::exp(-l->mean + k * std::log(l->mean) - std::lgamma(k + 1.0));
  } else if (auto* g = std::get_if<GeometricLaw>(&law.kind())) {
    for (int k = 0; k <= kmax; ++k) p[k] = g->success * std::pow(1.0 - g->success, k);
  } else if (auto* b = std::get_if<BernoulliLaw>(&law.kind())) {
    p[0] = 1.0 - b->p;
    p[1] = b->p;
  }
  return p;
}

struct Moments {
  double mean, var, m4;
};

Moments summed_moments(const std::vector<double>& p) {
  long double m = 0, v = 0, m4 = 0;
  for (std::size_t k = 0; k < p.size(); ++k) m += k * p[k];
  for (std::size_t k = 0; k < p.size(); ++k) {
    const long double d = k - m;
    v += d * d * p[k];
    m4 += d * d * d * d * p[k];
  }
  return {static_cast<double>(m), static_cast<double>(v), static_cast<double>(m4)};
}

}  // namespace

TEST_CASE("parametric moments equal direct summation of the pmf") {
  for (const auto& law : {UnivariateLaw::poisson(0.7), UnivariateLaw::poisson(3.5), UnivariateLaw::geometric(2.0 / 3.0),
                          UnivariateLaw::geometric(0.2), UnivariateLaw::bernoulli(0.3)}) {
    CAPTURE(law.describe());
    const Moments m = summed_moments(reference_pmf(law, 600));
    CHECK(law.mean() == doctest::Approx(m.mean).epsilon(1e-12));
    CHECK(law.variance() == doctest::Approx(m.var).epsilon(1e-11));
    CHECK(law.fourth_central_moment() == doctest::Approx(m.m4).epsilon(1e-10));
  }
}

TEST_CASE("table moments and pgf equal direct summation") {
  const auto law = UnivariateLaw::table({0, 1, 3}, {0.25, 0.5, 0.25});
  CHECK(law.mean() == doctest::Approx(1.25));
  CHECK(law.variance() == doctest::Approx(0.25 * 1.5625 + 0.5 * 0.0625 + 0.25 * 3.0625));
  CHECK(law.fourth_central_moment() ==
        doctest::Approx(0.25 * std::pow(1.25, 4) + 0.5 * std::pow(0.25, 4) + 0.25 * std::pow(1.75, 4)));
  const std::complex<double> z(0.3, -0.4);
  const auto expect = 0.25 + 0.5 * z + 0.25 * z * z * z;
  CHECK(std::abs(law.pgf(z) - expect) < 1e-15);
}

TEST_CASE("pgf agrees with the truncated series and equals 1 at z = 1") {
  const std::complex<double> z(0.2, 0.5);
  for (const auto& law : {UnivariateLaw::poisson(1.3), UnivariateLaw::geometric(0.4), UnivariateLaw::bernoulli(0.6)}) {
    const auto p = reference_pmf(law, 400);
    std::complex<double> s = 0.0, zk = 1.0;
    for (double pk : p) {
      s += pk * zk;
      zk *= z;
    }
    CHECK(std::abs(law.pgf(z) - s) < 1e-12);
    CHECK(std::abs(law.pgf(1.0) - 1.0) < 1e-15);
  }
}

TEST_CASE("invalid laws are rejected") {
  CHECK_THROWS_AS(UnivariateLaw::table({0, 1}, {0.5, 0.4}), ValidationError);
  CHECK_THROWS_AS(UnivariateLaw::table({0, -1}, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(UnivariateLaw::table({0, 1}, {1.2, -0.2}), ValidationError);
  CHECK_THROWS_AS(UnivariateLaw::poisson(-1.0), ValidationError);
  CHECK_THROWS_AS(UnivariateLaw::geometric(0.0), ValidationError);
  CHECK_THROWS_AS(UnivariateLaw::bernoulli(1.5), ValidationError);
  CHECK_THROWS_AS(BivariateLaw::table({{0, 0}}, {0.9}), ValidationError);
  CHECK_NOTHROW(UnivariateLaw::table({0, 1, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
}

TEST_CASE("bivariate moments") {
  const auto bp = BivariateLaw::bivariate_poisson(0.5, 0.25, 1.0);
  CHECK(bp.mean() == Vec2{0.75, 1.5});
  CHECK(bp.covariance() == Mat2(0.75, 0.5, 0.5, 1.5));

  const auto t = BivariateLaw::table({{0, 0}, {1, 2}, {2, 1}}, {0.5, 0.25, 0.25});
  CHECK(t.mean()[0] == doctest::Approx(0.75));
  CHECK(t.mean()[1] == doctest::Approx(0.75));
  // E X1 X2 = 0.25 * 2 + 0.25 * 2 = 1
  CHECK(t.covariance()(0, 1) == doctest::Approx(1.0 - 0.75 * 0.75));
  CHECK(t.marginal(0).mean() == doctest::Approx(0.75));

  const auto sw = t.swapped();
  CHECK(sw.covariance()(0, 0) == doctest::Approx(t.covariance()(1, 1)));
}

TEST_CASE("sampling reproduces the declared moments") {
  RngStream rng(11, 0);
  const int R = 200000;
  for (const auto& law : {UnivariateLaw::poisson(2.5), UnivariateLaw::geometric(0.3), UnivariateLaw::bernoulli(0.2),
                          UnivariateLaw::table({0, 2, 5}, {0.2, 0.5, 0.3})}) {
    CAPTURE(law.describe());
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < R; ++i) {
      const double x = static_cast<double>(law.sample(rng));
      s += x;
      ss += x * x;
    }
    const double m = s / R, v = ss / R - m * m;
    CHECK(std::fabs(m - law.mean()) < 4.0 * std::sqrt(law.variance() / R));
    CHECK(v == doctest::Approx(law.variance()).epsilon(0.03));
  }
}

TEST_CASE("aggregate and per-individual sums have the same law") {
  const int R = 40000;
  const std::int64_t count = 30;
  for (const auto& law : {BivariateLaw::independent(UnivariateLaw::poisson(0.8), UnivariateLaw::geometric(0.5)),
                          BivariateLaw::bivariate_poisson(0.3, 0.2, 0.1),
                          BivariateLaw::table({{0, 0}, {1, 0}, {2, 3}}, {0.3, 0.5, 0.2}),
                          BivariateLaw::independent(UnivariateLaw::bernoulli(0.4), UnivariateLaw::deterministic(2))}) {
    CAPTURE(law.describe());
    for (auto mode : {SamplingMode::Aggregate, SamplingMode::PerIndividual}) {
      RngStream rng(5, static_cast<std::uint64_t>(mode));
      double s1 = 0, s2 = 0, q1 = 0, q12 = 0;
      for (int i = 0; i < R; ++i) {
        const Population x = law.sample_sum(count, rng, mode);
        s1 += x.type1;
        s2 += x.type2;
        q1 += static_cast<double>(x.type1) * x.type1;
        q12 += static_cast<double>(x.type1) * x.type2;
      }
      const Vec2 mean = law.mean();
      const Mat2 cov = law.covariance();
      const double m1 = s1 / R, m2 = s2 / R;
      CHECK(std::fabs(m1 - count * mean[0]) <= 4.0 * std::sqrt(count * cov(0, 0) / R) + 1e-12);
      CHECK(std::fabs(m2 - count * mean[1]) <= 4.0 * std::sqrt(count * cov(1, 1) / R) + 1e-12);
      CHECK(q1 / R - m1 * m1 == doctest::Approx(count * cov(0, 0)).epsilon(0.05));
      const double cov_se = count * std::sqrt(cov(0, 0) * cov(1, 1) + cov(0, 1) * cov(0, 1)) / std::sqrt(R);
      CHECK(std::fabs(q12 / R - m1 * m2 - count * cov(0, 1)) <= 5.0 * cov_se + 1e-12);
    }
  }
}

TEST_CASE("edge cases of aggregate sampling") {
  RngStream rng(1, 1);
  CHECK(UnivariateLaw::poisson(0.0).sample_sum(1000, rng, SamplingMode::Aggregate) == 0);
  CHECK(UnivariateLaw::geometric(1.0).sample_sum(1000, rng, SamplingMode::Aggregate) == 0);
  CHECK(UnivariateLaw::bernoulli(1.0).sample_sum(1000, rng, SamplingMode::Aggregate) == 1000);
  CHECK(UnivariateLaw::deterministic(3).sample_sum(7, rng, SamplingMode::Aggregate) == 21);
  CHECK(UnivariateLaw::poisson(2.0).sample_sum(0, rng, SamplingMode::Aggregate) == 0);
}

TEST_CASE("overflow is reported, never wrapped") {
  RngStream rng(1, 2);
  CHECK_THROWS_AS(UnivariateLaw::deterministic(4).sample_sum(std::int64_t{1} << 62, rng, SamplingMode::Aggregate),
                  OverflowError);
  CHECK_THROWS_AS(UnivariateLaw::poisson(10.0).sample_sum(std::int64_t{1} << 62, rng, SamplingMode::Aggregate),
                  OverflowError);
  CHECK_THROWS_AS(checked_add(INT64_MAX, 1), OverflowError);
}
