#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gwlab/model.hpp"
#include "gwlab/simulate.hpp"

namespace gwlab {

/// Martingale differences and the split of the second coordinate along one path.
///
/// Every vector is indexed by k = 0..K with the k = 0 slot equal to zero.
struct DecompositionSeries {
  std::vector<Vec2> M;
  std::vector<double> x1part;  ///< X^{(1)}_{k,2}
  std::vector<double> x2part;  ///< X^{(2)}_{k,2}
  std::optional<std::vector<double>> V1;       ///< a22-filter of M_{k,1}
  std::optional<std::vector<double>> V2;       ///< a22-filter of M_{k,2}
  std::optional<std::vector<double>> Vtilde1;  ///< a11-filter of M_{k,1}
};

/// M_k = X_k - A X_{k-1} - b for k = 1..K.
DecompositionSeries martingale_increments(const PathRecord& path, const ModelParams& params);

enum class DecompositionMethod {
  DirectSum,  ///< the branch sums, O(K^2)
  Recursive,  ///< X^{(1)}_k = a22 X^{(1)}_{k-1} + X_{k-1,1}, O(K)
};

/// Fills M, x1part, x2part and whichever AR(1) filters have coefficient in [0, 1).
/// Throws Error if X_{k,2} = a21 X^{(1)}_{k,2} + X^{(2)}_{k,2} fails beyond 1e-9 relative.
DecompositionSeries decompose_second(const PathRecord& path, const ModelParams& params,
                                     DecompositionMethod method = DecompositionMethod::DirectSum);

/// V_0 = 0, V_k = a V_{k-1} + M_k. Takes M_1..M_K and returns V_1..V_K.
std::vector<double> ar1_filter(std::span<const double> innovations, double a);

/// Same quantity by the direct sum sum_j a^{k-j} M_j (O(K^2), for cross-checks).
std::vector<double> ar1_direct(std::span<const double> innovations, double a);

/// X_k = sum_{j<=k} A^{k-j}(M_j + b), for k = 0..K.
std::vector<Vec2> reconstruct_path(const DecompositionSeries& series, const ModelParams& params);

/// Component i (0 or 1) of M_1..M_K.
std::vector<double> increments_component(const DecompositionSeries& series, int i);

}  // namespace gwlab
