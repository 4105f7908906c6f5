#pragma once

#include <cstdint>
#include <vector>

#include "gwlab/model.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

/// One trajectory X_0 = 0, X_1, ..., X_K.
struct PathRecord {
  std::vector<Population> populations;  // size K + 1
  StreamDescriptor stream;

  long horizon() const { return static_cast<long>(populations.size()) - 1; }
  const Population& operator[](long k) const {
    return populations[static_cast<std::size_t>(k)];
  }
};

/// Exact branching simulation: X_k = sum of X_{k-1,1} copies of xi_1, X_{k-1,2} copies
/// of xi_2, plus one immigration draw. Throws OverflowError when a counter leaves int64.
PathRecord simulate_path(const ModelParams& params, long K, const StreamDescriptor& stream,
                         SamplingMode mode = SamplingMode::Aggregate);

/// One generation step from `state`, drawing from `rng`.
Population step(const ModelParams& params, const Population& state, RngStream& rng,
                SamplingMode mode = SamplingMode::Aggregate);

}  // namespace gwlab
