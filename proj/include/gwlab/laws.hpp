#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gwlab/linalg.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

/// How sums of i.i.d. copies are drawn.
///
/// `Aggregate` draws the sum of `count` copies in one shot from its exact law
/// (Poisson additivity, binomial / negative binomial sums, multinomial counts
/// over a finite table). `PerIndividual` draws every copy separately.
/// Both are exact; they differ only in cost and in the random numbers consumed.
enum class SamplingMode { Aggregate, PerIndividual };

/// Tolerance for probability tables summing to one.
inline constexpr double kMassTolerance = 1e-12;

/// Walker/Vose alias table over indices 0..n-1.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& probs);
  std::size_t sample(RngStream& rng) const;
  std::size_t size() const { return threshold_.size(); }

 private:
  std::vector<double> threshold_;
  std::vector<std::size_t> alias_;
};

struct PoissonLaw {
  double mean = 0.0;
};
/// Number of failures before the first success; support {0, 1, 2, ...}.
struct GeometricLaw {
  double success = 1.0;
};
struct BernoulliLaw {
  double p = 0.0;
};
struct DeterministicLaw {
  std::int64_t value = 0;
};
struct UnivariateTable {
  std::vector<std::int64_t> values;
  std::vector<double> probs;
};

/// Law of a nonnegative integer random variable with exact moments up to order 4.
class UnivariateLaw {
 public:
  using Kind = std::variant<PoissonLaw, GeometricLaw, BernoulliLaw, DeterministicLaw, UnivariateTable>;

  UnivariateLaw() : UnivariateLaw(DeterministicLaw{0}) {}
  explicit UnivariateLaw(Kind kind);

  static UnivariateLaw poisson(double mean) { return UnivariateLaw(PoissonLaw{mean}); }
  static UnivariateLaw geometric(double success) { return UnivariateLaw(GeometricLaw{success}); }
  static UnivariateLaw bernoulli(double p) { return UnivariateLaw(BernoulliLaw{p}); }
  static UnivariateLaw deterministic(std::int64_t v) { return UnivariateLaw(DeterministicLaw{v}); }
  static UnivariateLaw table(std::vector<std::int64_t> values, std::vector<double> probs) {
    return UnivariateLaw(UnivariateTable{std::move(values), std::move(probs)});
  }

  const Kind& kind() const { return kind_; }

  double mean() const;
  double variance() const;
  double fourth_central_moment() const;

  /// Probability generating function E z^X on the closed unit disk.
  std::complex<double> pgf(std::complex<double> z) const;

  std::int64_t sample(RngStream& rng) const;
  /// Sum of `count` i.i.d. copies. Throws OverflowError if the sum leaves int64.
  std::int64_t sample_sum(std::int64_t count, RngStream& rng, SamplingMode mode) const;

  /// Exact pmf as (value, probability) pairs when the support is finite.
  std::optional<std::vector<std::pair<std::int64_t, double>>> finite_support() const;

  /// True when the law is a point mass at zero.
  bool is_zero() const;

  std::string describe() const;

 private:
  Kind kind_;
  AliasTable alias_;
};

struct IndependentComponents {
  UnivariateLaw first;
  UnivariateLaw second;
};
/// (P0 + P1, P0 + P2) with independent Poisson P0 ~ common, P1 ~ first_only, P2 ~ second_only.
struct BivariatePoisson {
  double common = 0.0;
  double first_only = 0.0;
  double second_only = 0.0;
};
struct JointTable {
  std::vector<Population> outcomes;
  std::vector<double> probs;
};

/// Law of a Z_+^2-valued random vector: offspring of one parent, or one immigration batch.
class BivariateLaw {
 public:
  using Kind = std::variant<IndependentComponents, BivariatePoisson, JointTable>;

  BivariateLaw() : BivariateLaw(IndependentComponents{}) {}
  explicit BivariateLaw(Kind kind);

  static BivariateLaw independent(UnivariateLaw first, UnivariateLaw second) {
    return BivariateLaw(IndependentComponents{std::move(first), std::move(second)});
  }
  static BivariateLaw bivariate_poisson(double common, double first_only, double second_only) {
    return BivariateLaw(BivariatePoisson{common, first_only, second_only});
  }
  static BivariateLaw table(std::vector<Population> outcomes, std::vector<double> probs) {
    return BivariateLaw(JointTable{std::move(outcomes), std::move(probs)});
  }

  const Kind& kind() const { return kind_; }

  Vec2 mean() const;
  Mat2 covariance() const;
  /// Componentwise fourth central moments.
  Vec2 fourth_central_moments() const;
  /// Law of coordinate i (0 or 1).
  UnivariateLaw marginal(int i) const;

  Population sample(RngStream& rng) const;
  Population sample_sum(std::int64_t count, RngStream& rng, SamplingMode mode) const;

  std::optional<std::vector<std::pair<Population, double>>> finite_support() const;

  /// Same law with the two coordinates exchanged.
  BivariateLaw swapped() const;

  std::string describe() const;

 private:
  Kind kind_;
  AliasTable alias_;
};

using OffspringLaw = BivariateLaw;
using ImmigrationLaw = BivariateLaw;

/// a + b, throwing OverflowError instead of wrapping.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace gwlab
