#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwlab/linalg.hpp"
#include "gwlab/model.hpp"

namespace gwlab {

/// E X_k by two independent routes.
struct ExactMean {
  Vec2 generic;      ///< sum_{j<k} A^j b
  Vec2 closed_form;  ///< per-case closed form
};

ExactMean exact_mean(const ModelParams& params, long k);

/// Closed form of E X_k. Covered cases use the per-case displays; NotCovered
/// configurations fall back to the general geometric-sum form.
Vec2 mean_closed_form(const ModelParams& params, long k);

/// E X_0, ..., E X_kmax by cumulative summation of A^j b.
std::vector<Vec2> mean_generic_series(const ModelParams& params, long kmax);

/// Var(X_k | X_{k-1} = state) = V0 + state_1 V1 + state_2 V2.
Mat2 conditional_variance(Vec2 state, const ModelParams& params);

/// E(M_k M_k^T) = V0 + E X_{k-1,1} V1 + E X_{k-1,2} V2, for k >= 1.
Mat2 expected_mm(const ModelParams& params, long k);

/// Var X_k = sum_{j<k} A^j E(M_{k-j} M_{k-j}^T) (A^T)^j, for k >= 1.
Mat2 exact_cov(const ModelParams& params, long k);

/// Var X_0..Var X_kmax by Var_k = A Var_{k-1} A^T + E(M_k M_k^T).
std::vector<Mat2> exact_cov_series(const ModelParams& params, long kmax);

/// Cov(X_{k2}, X_{k1}) = A^{k2-k1} Var X_{k1} for k2 >= k1.
Mat2 exact_cross_cov(const ModelParams& params, long k2, long k1);

/// cov(n1^{-1} X_{floor(n1 t1),1}, X_{floor(n2 t2),2}) in Case 3.
double cross_time_cov_case3(const ModelParams& params, long n1, long n2, double t1, double t2);

/// sup bound |v0_12| / ((1 - a22) n1) for the Case 3 covariance.
double cross_time_bound_case3(const ModelParams& params, long n1);

/// cov(X_{floor(n1 t1),1}, n2^{-1} X_{floor(n2 t2),2}) in Case 5.
double cross_time_cov_case5(const ModelParams& params, long n1, long n2, double t1, double t2);

enum class GrowthQuantity {
  MeanX1,
  MeanX2,
  AbsM1,
  AbsM2,
  SecondM1,
  SecondM2,
  SecondX1,
  SecondX2,
  FourthM1,
  FourthM2,
  FourthV1,
  FourthV2,
  SecondVtilde1,
};

std::string to_string(GrowthQuantity q);

struct GrowthEntry {
  GrowthQuantity quantity;
  double exponent;  ///< quantity is O(k^exponent)
};

/// Known orders of growth for a covered case. Quantities without a known order
/// are absent.
std::vector<GrowthEntry> growth_exponents(const CaseLabel& label);

/// Exponent for one quantity, if stated for the case.
std::optional<double> growth_exponent(const CaseLabel& label, GrowthQuantity q);

/// Exact distribution of X_k on {0..N}^2.
struct ExactPmf {
  long N = 0;
  long k = 0;
  std::vector<double> table;  ///< row-major, index x1 * (N + 1) + x2
  double leaked = 0.0;        ///< mass that left {0..N}^2

  double at(long x1, long x2) const {
    return table[static_cast<std::size_t>(x1 * (N + 1) + x2)];
  }
  Vec2 mean() const;
  Mat2 covariance() const;
};

inline constexpr std::size_t kBruteForceBudget = 1'000'000;

/// Dynamic programming over states with exact convolutions. All laws must have
/// finite support. Throws BudgetError when the number of stored (state,
/// probability) pairs would exceed `budget`.
ExactPmf brute_force_pmf(const ModelParams& params, long k, long N,
                         std::size_t budget = kBruteForceBudget);

}  // namespace gwlab
