#include "gwlab/rng.hpp"

#include "gwlab/error.hpp"

namespace gwlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream_id)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_id_(stream_id) {}

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (buffered_ == 0) {
    const Counter ctr{static_cast<std::uint32_t>(block_index_),
                      static_cast<std::uint32_t>(block_index_ >> 32),
                      static_cast<std::uint32_t>(stream_id_),
                      static_cast<std::uint32_t>(stream_id_ >> 32)};
    buffer_ = block(ctr, key_);
    ++block_index_;
    buffered_ = 2;
  }
  const int at = 2 * (2 - buffered_);
  --buffered_;
  return (static_cast<std::uint64_t>(buffer_[at + 1]) << 32) | buffer_[at];
}

StreamDescriptor make_stream(std::uint64_t master_seed, StreamPurpose purpose,
                             std::uint64_t replicate) {
  if (replicate > StreamDescriptor::kReplicateMask)
    throw ValidationError("replicate index exceeds 2^48 - 1");
  return {master_seed, (static_cast<std::uint64_t>(purpose) << 48) | replicate};
}

std::string to_string(StreamPurpose p) {
  switch (p) {
    case StreamPurpose::BranchingPath: return "branching";
    case StreamPurpose::LimitPath: return "limit";
    case StreamPurpose::Covariance: return "covariance";
    case StreamPurpose::Auxiliary: return "auxiliary";
  }
  return "unknown";
}

}  // namespace gwlab
