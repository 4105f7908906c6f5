#include "gwlab/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/geometric_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "gwlab/error.hpp"

namespace gwlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInt64Limit = 9.0e18;

void check_probability(double p, const char* what) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0)
    throw ValidationError(std::string(what) + " must lie in [0, 1]");
}

void check_mass(const std::vector<double>& probs, const char* what) {
  if (probs.empty()) throw ValidationError(std::string(what) + ": empty probability table");
  long double total = 0.0L;
  for (double p : probs) {
    check_probability(p, what);
    total += p;
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": total mass " << static_cast<double>(total) << " differs from 1";
    throw ValidationError(os.str());
  }
}

// Guard against a sum whose expectation alone already leaves int64.
void check_expected_sum(double mean, const char* what) {
  if (!(mean < kInt64Limit))
    throw OverflowError(std::string(what) + ": expected population exceeds the 64-bit range");
}

std::int64_t draw_poisson(double mean, RngStream& rng) {
  if (mean <= 0.0) return 0;
  check_expected_sum(mean, "poisson draw");
  return boost::random::poisson_distribution<std::int64_t, double>(mean)(rng);
}

std::int64_t draw_binomial(std::int64_t n, double p, RngStream& rng) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  return boost::random::binomial_distribution<std::int64_t, double>(n, p)(rng);
}

// Negative binomial as a gamma-mixed Poisson: failures before the n-th success.
std::int64_t draw_negative_binomial(std::int64_t n, double success, RngStream& rng) {
  if (n <= 0 || success >= 1.0) return 0;
  const double q = 1.0 - success;
  check_expected_sum(static_cast<double>(n) * q / success, "negative binomial draw");
  const double lambda =
      boost::random::gamma_distribution<double>(static_cast<double>(n), q / success)(rng);
  return draw_poisson(lambda, rng);
}

std::int64_t draw_geometric(double success, RngStream& rng) {
  if (success >= 1.0) return 0;
  return boost::random::geometric_distribution<std::int64_t, double>(success)(rng);
}

// Multinomial cell counts by sequential conditional binomials.
std::vector<std::int64_t> draw_multinomial(std::int64_t n, const std::vector<double>& probs,
                                           RngStream& rng) {
  std::vector<std::int64_t> counts(probs.size(), 0);
  double remaining_mass = 1.0;
  std::int64_t remaining = n;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    const double p = remaining_mass > 0.0 ? std::clamp(probs[i] / remaining_mass, 0.0, 1.0) : 1.0;
    counts[i] = draw_binomial(remaining, p, rng);
    remaining -= counts[i];
    remaining_mass -= probs[i];
  }
  counts.back() += remaining;
  return counts;
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("population counter overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("population counter overflow");
  return r;
}

AliasTable::AliasTable(const std::vector<double>& probs) {
  const std::size_t n = probs.size();
  threshold_.assign(n, 1.0);
  alias_.resize(n);
  std::iota(alias_.begin(), alias_.end(), std::size_t{0});
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probs[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::size_t i : small) threshold_[i] = 1.0;
  for (std::size_t i : large) threshold_[i] = 1.0;
}

std::size_t AliasTable::sample(RngStream& rng) const {
  const double u = rng.uniform01() * static_cast<double>(threshold_.size());
  const auto i = std::min(static_cast<std::size_t>(u), threshold_.size() - 1);
  return (u - static_cast<double>(i)) < threshold_[i] ? i : alias_[i];
}

// ---------------------------------------------------------------------------
// UnivariateLaw

UnivariateLaw::UnivariateLaw(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const PoissonLaw& l) {
                   if (!std::isfinite(l.mean) || l.mean < 0.0)
                     throw ValidationError("poisson mean must be finite and nonnegative");
                 },
                 [](const GeometricLaw& l) {
                   check_probability(l.success, "geometric success probability");
                   if (l.success <= 0.0)
                     throw ValidationError("geometric success probability must be positive");
                 },
                 [](const BernoulliLaw& l) { check_probability(l.p, "bernoulli probability"); },
                 [](const DeterministicLaw& l) {
                   if (l.value < 0) throw ValidationError("deterministic value must be nonnegative");
                 },
                 [this](const UnivariateTable& t) {
                   if (t.values.size() != t.probs.size())
                     throw ValidationError("table: values and probabilities differ in length");
                   for (auto v : t.values)
                     if (v < 0) throw ValidationError("table: values must be nonnegative");
                   check_mass(t.probs, "table");
                   alias_ = AliasTable(t.probs);
                 },
             },
             kind_);
}

double UnivariateLaw::mean() const {
  return std::visit(overloaded{
                        [](const PoissonLaw& l) { return l.mean; },
                        [](const GeometricLaw& l) { return (1.0 - l.success) / l.success; },
                        [](const BernoulliLaw& l) { return l.p; },
                        [](const DeterministicLaw& l) { return static_cast<double>(l.value); },
                        [](const UnivariateTable& t) {
                          long double m = 0.0L;
                          for (std::size_t i = 0; i < t.values.size(); ++i)
                            m += static_cast<long double>(t.values[i]) * t.probs[i];
                          return static_cast<double>(m);
                        },
                    },
                    kind_);
}

double UnivariateLaw::variance() const {
  return std::visit(overloaded{
                        [](const PoissonLaw& l) { return l.mean; },
                        [](const GeometricLaw& l) {
                          return (1.0 - l.success) / (l.success * l.success);
                        },
                        [](const BernoulliLaw& l) { return l.p * (1.0 - l.p); },
                        [](const DeterministicLaw&) { return 0.0; },
                        [this](const UnivariateTable& t) {
                          const long double m = mean();
                          long double v = 0.0L;
                          for (std::size_t i = 0; i < t.values.size(); ++i) {
                            const long double d = t.values[i] - m;
                            v += d * d * t.probs[i];
                          }
                          return static_cast<double>(v);
                        },
                    },
                    kind_);
}

double UnivariateLaw::fourth_central_moment() const {
  return std::visit(overloaded{
                        [](const PoissonLaw& l) { return l.mean + 3.0 * l.mean * l.mean; },
                        [](const GeometricLaw& l) {
                          const double p = l.success, q = 1.0 - p;
                          return q * (9.0 * q + p * p) / (p * p * p * p);
                        },
                        [](const BernoulliLaw& l) {
                          const double p = l.p, q = 1.0 - p;
                          return p * q * (p * p * p + q * q * q);
                        },
                        [](const DeterministicLaw&) { return 0.0; },
                        [this](const UnivariateTable& t) {
                          const long double m = mean();
                          long double v = 0.0L;
                          for (std::size_t i = 0; i < t.values.size(); ++i) {
                            const long double d = t.values[i] - m;
                            v += d * d * d * d * t.probs[i];
                          }
                          return static_cast<double>(v);
                        },
                    },
                    kind_);
}

std::complex<double> UnivariateLaw::pgf(std::complex<double> z) const {
  using C = std::complex<double>;
  return std::visit(overloaded{
                        [z](const PoissonLaw& l) { return std::exp(l.mean * (z - 1.0)); },
                        [z](const GeometricLaw& l) {
                          return C(l.success) / (1.0 - (1.0 - l.success) * z);
                        },
                        [z](const BernoulliLaw& l) { return (1.0 - l.p) + l.p * z; },
                        [z](const DeterministicLaw& l) {
                          return std::pow(z, static_cast<double>(l.value));
                        },
                        [z](const UnivariateTable& t) {
                          C s = 0.0;
                          for (std::size_t i = 0; i < t.values.size(); ++i)
                            s += t.probs[i] * std::pow(z, static_cast<double>(t.values[i]));
                          return s;
                        },
                    },
                    kind_);
}

std::int64_t UnivariateLaw::sample(RngStream& rng) const {
  return std::visit(overloaded{
                        [&](const PoissonLaw& l) { return draw_poisson(l.mean, rng); },
                        [&](const GeometricLaw& l) { return draw_geometric(l.success, rng); },
                        [&](const BernoulliLaw& l) {
                          return static_cast<std::int64_t>(rng.uniform01() < l.p);
                        },
                        [](const DeterministicLaw& l) { return l.value; },
                        [&](const UnivariateTable& t) { return t.values[alias_.sample(rng)]; },
                    },
                    kind_);
}

std::int64_t UnivariateLaw::sample_sum(std::int64_t count, RngStream& rng,
                                       SamplingMode mode) const {
  if (count < 0) throw ValidationError("sample_sum: negative count");
  if (count == 0) return 0;
  if (mode == SamplingMode::PerIndividual) {
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < count; ++i) total = checked_add(total, sample(rng));
    return total;
  }
  const double n = static_cast<double>(count);
  return std::visit(
      overloaded{
          [&](const PoissonLaw& l) { return draw_poisson(n * l.mean, rng); },
          [&](const GeometricLaw& l) { return draw_negative_binomial(count, l.success, rng); },
          [&](const BernoulliLaw& l) { return draw_binomial(count, l.p, rng); },
          [&](const DeterministicLaw& l) { return checked_mul(count, l.value); },
          [&](const UnivariateTable& t) {
            const auto cells = draw_multinomial(count, t.probs, rng);
            std::int64_t total = 0;
            for (std::size_t i = 0; i < cells.size(); ++i)
              total = checked_add(total, checked_mul(cells[i], t.values[i]));
            return total;
          },
      },
      kind_);
}

std::optional<std::vector<std::pair<std::int64_t, double>>> UnivariateLaw::finite_support()
    const {
  using Out = std::optional<std::vector<std::pair<std::int64_t, double>>>;
  return std::visit(overloaded{
                        [](const PoissonLaw& l) -> Out {
                          if (l.mean == 0.0) return std::vector<std::pair<std::int64_t, double>>{{0, 1.0}};
                          return std::nullopt;
                        },
                        [](const GeometricLaw& l) -> Out {
                          if (l.success == 1.0) return std::vector<std::pair<std::int64_t, double>>{{0, 1.0}};
                          return std::nullopt;
                        },
                        [](const BernoulliLaw& l) -> Out {
                          std::vector<std::pair<std::int64_t, double>> out;
                          if (l.p < 1.0) out.emplace_back(0, 1.0 - l.p);
                          if (l.p > 0.0) out.emplace_back(1, l.p);
                          return out;
                        },
                        [](const DeterministicLaw& l) -> Out {
                          return std::vector<std::pair<std::int64_t, double>>{{l.value, 1.0}};
                        },
                        [](const UnivariateTable& t) -> Out {
                          std::vector<std::pair<std::int64_t, double>> out;
                          for (std::size_t i = 0; i < t.values.size(); ++i)
                            if (t.probs[i] > 0.0) out.emplace_back(t.values[i], t.probs[i]);
                          return out;
                        },
                    },
                    kind_);
}

bool UnivariateLaw::is_zero() const {
  auto s = finite_support();
  return s && s->size() == 1 && s->front().first == 0;
}

std::string UnivariateLaw::describe() const {
  return std::visit(overloaded{
                        [](const PoissonLaw& l) { return "poisson(" + fmt_double(l.mean) + ")"; },
                        [](const GeometricLaw& l) {
                          return "geometric(" + fmt_double(l.success) + ")";
                        },
                        [](const BernoulliLaw& l) { return "bernoulli(" + fmt_double(l.p) + ")"; },
                        [](const DeterministicLaw& l) {
                          return "deterministic(" + std::to_string(l.value) + ")";
                        },
                        [](const UnivariateTable& t) {
                          std::string s = "table(";
                          for (std::size_t i = 0; i < t.values.size(); ++i) {
                            if (i) s += ", ";
                            s += std::to_string(t.values[i]) + ":" + fmt_double(t.probs[i]);
                          }
                          return s + ")";
                        },
                    },
                    kind_);
}

// ---------------------------------------------------------------------------
// BivariateLaw

BivariateLaw::BivariateLaw(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const IndependentComponents&) {},
                 [](const BivariatePoisson& l) {
                   for (double m : {l.common, l.first_only, l.second_only})
                     if (!std::isfinite(m) || m < 0.0)
                       throw ValidationError("bivariate poisson rates must be finite and nonnegative");
                 },
                 [this](const JointTable& t) {
                   if (t.outcomes.size() != t.probs.size())
                     throw ValidationError("joint table: outcomes and probabilities differ in length");
                   for (const auto& o : t.outcomes)
                     if (o.type1 < 0 || o.type2 < 0)
                       throw ValidationError("joint table: outcomes must be nonnegative");
                   check_mass(t.probs, "joint table");
                   alias_ = AliasTable(t.probs);
                 },
             },
             kind_);
}

Vec2 BivariateLaw::mean() const { return {marginal(0).mean(), marginal(1).mean()}; }

Mat2 BivariateLaw::covariance() const {
  const double v1 = marginal(0).variance();
  const double v2 = marginal(1).variance();
  const double c = std::visit(overloaded{
                                  [](const IndependentComponents&) { return 0.0; },
                                  [](const BivariatePoisson& l) { return l.common; },
                                  [this](const JointTable& t) {
                                    const Vec2 m = mean();
                                    long double s = 0.0L;
                                    for (std::size_t i = 0; i < t.outcomes.size(); ++i)
                                      s += (t.outcomes[i].type1 - static_cast<long double>(m[0])) *
                                           (t.outcomes[i].type2 - static_cast<long double>(m[1])) *
                                           t.probs[i];
                                    return static_cast<double>(s);
                                  },
                              },
                              kind_);
  return {v1, c, c, v2};
}

Vec2 BivariateLaw::fourth_central_moments() const {
  return {marginal(0).fourth_central_moment(), marginal(1).fourth_central_moment()};
}

UnivariateLaw BivariateLaw::marginal(int i) const {
  return std::visit(overloaded{
                        [i](const IndependentComponents& l) { return i == 0 ? l.first : l.second; },
                        [i](const BivariatePoisson& l) {
                          return UnivariateLaw::poisson(l.common +
                                                        (i == 0 ? l.first_only : l.second_only));
                        },
                        [i](const JointTable& t) {
                          std::vector<std::int64_t> values;
                          std::vector<double> probs;
                          for (std::size_t j = 0; j < t.outcomes.size(); ++j) {
                            const std::int64_t v = t.outcomes[j][i];
                            auto it = std::find(values.begin(), values.end(), v);
                            if (it == values.end()) {
                              values.push_back(v);
                              probs.push_back(t.probs[j]);
                            } else {
                              probs[static_cast<std::size_t>(it - values.begin())] += t.probs[j];
                            }
                          }
                          return UnivariateLaw::table(std::move(values), std::move(probs));
                        },
                    },
                    kind_);
}

Population BivariateLaw::sample(RngStream& rng) const {
  return std::visit(overloaded{
                        [&](const IndependentComponents& l) {
                          const std::int64_t x1 = l.first.sample(rng);
                          return Population{x1, l.second.sample(rng)};
                        },
                        [&](const BivariatePoisson& l) {
                          const std::int64_t c = draw_poisson(l.common, rng);
                          const std::int64_t a = draw_poisson(l.first_only, rng);
                          const std::int64_t b = draw_poisson(l.second_only, rng);
                          return Population{checked_add(c, a), checked_add(c, b)};
                        },
                        [&](const JointTable& t) { return t.outcomes[alias_.sample(rng)]; },
                    },
                    kind_);
}

Population BivariateLaw::sample_sum(std::int64_t count, RngStream& rng, SamplingMode mode) const {
  if (count < 0) throw ValidationError("sample_sum: negative count");
  if (count == 0) return {};
  if (mode == SamplingMode::PerIndividual) {
    Population total;
    for (std::int64_t i = 0; i < count; ++i) {
      const Population x = sample(rng);
      total = {checked_add(total.type1, x.type1), checked_add(total.type2, x.type2)};
    }
    return total;
  }
  const double n = static_cast<double>(count);
  return std::visit(
      overloaded{
          [&](const IndependentComponents& l) {
            const std::int64_t x1 = l.first.sample_sum(count, rng, mode);
            return Population{x1, l.second.sample_sum(count, rng, mode)};
          },
          [&](const BivariatePoisson& l) {
            const std::int64_t c = draw_poisson(n * l.common, rng);
            const std::int64_t a = draw_poisson(n * l.first_only, rng);
            const std::int64_t b = draw_poisson(n * l.second_only, rng);
            return Population{checked_add(c, a), checked_add(c, b)};
          },
          [&](const JointTable& t) {
            const auto cells = draw_multinomial(count, t.probs, rng);
            Population total;
            for (std::size_t i = 0; i < cells.size(); ++i) {
              total.type1 = checked_add(total.type1, checked_mul(cells[i], t.outcomes[i].type1));
              total.type2 = checked_add(total.type2, checked_mul(cells[i], t.outcomes[i].type2));
            }
            return total;
          },
      },
      kind_);
}

std::optional<std::vector<std::pair<Population, double>>> BivariateLaw::finite_support() const {
  using Support = std::vector<std::pair<Population, double>>;
  return std::visit(overloaded{
                        [](const IndependentComponents& l) -> std::optional<Support> {
                          auto s1 = l.first.finite_support();
                          auto s2 = l.second.finite_support();
                          if (!s1 || !s2) return std::nullopt;
                          Support out;
                          for (const auto& [x1, p1] : *s1)
                            for (const auto& [x2, p2] : *s2) out.push_back({{x1, x2}, p1 * p2});
                          return out;
                        },
                        [](const BivariatePoisson& l) -> std::optional<Support> {
                          if (l.common == 0.0 && l.first_only == 0.0 && l.second_only == 0.0)
                            return Support{{{0, 0}, 1.0}};
                          return std::nullopt;
                        },
                        [](const JointTable& t) -> std::optional<Support> {
                          Support out;
                          for (std::size_t i = 0; i < t.outcomes.size(); ++i)
                            if (t.probs[i] > 0.0) out.push_back({t.outcomes[i], t.probs[i]});
                          return out;
                        },
                    },
                    kind_);
}

BivariateLaw BivariateLaw::swapped() const {
  return std::visit(overloaded{
                        [](const IndependentComponents& l) {
                          return BivariateLaw::independent(l.second, l.first);
                        },
                        [](const BivariatePoisson& l) {
                          return BivariateLaw::bivariate_poisson(l.common, l.second_only,
                                                                 l.first_only);
                        },
                        [](const JointTable& t) {
                          std::vector<Population> out;
                          out.reserve(t.outcomes.size());
                          for (const auto& o : t.outcomes) out.push_back({o.type2, o.type1});
                          return BivariateLaw::table(std::move(out), t.probs);
                        },
                    },
                    kind_);
}

std::string BivariateLaw::describe() const {
  return std::visit(overloaded{
                        [](const IndependentComponents& l) {
                          return "independent(" + l.first.describe() + ", " + l.second.describe() +
                                 ")";
                        },
                        [](const BivariatePoisson& l) {
                          return "bivariate_poisson(" + fmt_double(l.common) + ", " +
                                 fmt_double(l.first_only) + ", " + fmt_double(l.second_only) + ")";
                        },
                        [](const JointTable& t) {
                          std::string s = "joint_table(";
                          for (std::size_t i = 0; i < t.outcomes.size(); ++i) {
                            if (i) s += ", ";
                            s += "(" + std::to_string(t.outcomes[i].type1) + "," +
                                 std::to_string(t.outcomes[i].type2) + "):" + fmt_double(t.probs[i]);
                          }
                          return s + ")";
                        },
                    },
                    kind_);
}

}  // namespace gwlab
