#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

namespace gwlab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 128-bit counter is split into a 64-bit block index (words 0-1) and a
/// 64-bit stream id (words 2-3); the 64-bit key holds the master seed. Two
/// generators with different (seed, stream id) never share a counter/key pair,
/// so streams are independent and need no shared state.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Raw block function, exposed for known-answer tests.
  static Counter block(Counter counter, Key key);

 private:
  Key key_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  Counter buffer_{};
  int buffered_ = 0;  // number of unread 64-bit halves left in buffer_
};

/// What a stream is used for; occupies the top 16 bits of the stream id.
enum class StreamPurpose : std::uint16_t {
  BranchingPath = 0,
  LimitPath = 1,
  Covariance = 2,
  Auxiliary = 3,
};

/// Stable identity of one random stream: (master seed, stream id).
struct StreamDescriptor {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  StreamPurpose purpose() const { return static_cast<StreamPurpose>(stream_id >> 48); }
  std::uint64_t replicate() const { return stream_id & kReplicateMask; }

  friend bool operator==(const StreamDescriptor&, const StreamDescriptor&) = default;

  static constexpr std::uint64_t kReplicateMask = (std::uint64_t{1} << 48) - 1;
};

/// Injective map (seed, purpose, replicate < 2^48) -> descriptor. Stable across versions.
StreamDescriptor make_stream(std::uint64_t master_seed, StreamPurpose purpose,
                             std::uint64_t replicate);

using RngStream = Philox4x32;

inline RngStream open_stream(const StreamDescriptor& d) { return {d.master_seed, d.stream_id}; }

std::string to_string(StreamPurpose p);

}  // namespace gwlab
