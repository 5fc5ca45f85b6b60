#pragma once

#include <array>
#include <cstdint>

namespace vague {

/// Counter-based uniform stream (Philox4x32-10).
///
/// The 64-bit master seed is the Philox key; the 128-bit counter holds the
/// stream index in its upper half and a block counter in its lower half, so
/// distinct (seed, index) pairs never share a block. Each block yields two
/// 64-bit words.
///
/// Single-owner mutable state: one stream per task.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1), 53-bit resolution; exact zeros are
  /// redrawn.
  double uniform();

  /// Standard normal by inversion.
  double normal();

  /// Standard exponential, -log(U).
  double exponential();

  /// Raw Philox4x32-10 block function.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

/// Deterministic substream derivation.
RngStream substream(std::uint64_t master_seed, std::uint64_t index);

}  // namespace vague
