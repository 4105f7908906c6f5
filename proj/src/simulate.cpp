#include "gwlab/simulate.hpp"

#include "gwlab/error.hpp"

namespace gwlab {

Population step(const ModelParams& params, const Population& state, RngStream& rng,
                SamplingMode mode) {
  const Population from1 = params.offspring_type1.sample_sum(state.type1, rng, mode);
  const Population from2 = params.offspring_type2.sample_sum(state.type2, rng, mode);
  const Population imm = params.immigration.sample(rng);
  return {checked_add(checked_add(from1.type1, from2.type1), imm.type1),
          checked_add(checked_add(from1.type2, from2.type2), imm.type2)};
}

PathRecord simulate_path(const ModelParams& params, long K, const StreamDescriptor& stream,
                         SamplingMode mode) {
  if (K < 0) throw ValidationError("simulate_path: horizon must be nonnegative");
  PathRecord rec;
  rec.stream = stream;
  rec.populations.reserve(static_cast<std::size_t>(K) + 1);
  rec.populations.push_back({0, 0});
  RngStream rng = open_stream(stream);
  for (long k = 1; k <= K; ++k) rec.populations.push_back(step(params, rec.populations.back(), rng, mode));
  return rec;
}

}  // namespace gwlab
