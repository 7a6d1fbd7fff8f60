#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace polymer_traps {

/// Purpose tags keep the random streams of different modules disjoint.
enum class StreamPurpose : std::uint64_t {
  kInitialProfile = 0,
  kNoise = 1,
  kTraps = 2,
  kHitOrMiss = 3,
};

/// One step of SplitMix64: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256** generator with Gaussian and uniform helpers.
///
/// A stream built with `RandomStream::zero()` is degenerate: every Gaussian
/// draw is exactly 0 and every uniform draw is 0.5. Solvers fed such a stream
/// integrate the noiseless equation, which is what the deterministic tests use.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream zero();

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();
  void fill_normal(std::span<double> out);
  /// Exponential with unit rate.
  double exponential();

  bool degenerate() const { return degenerate_; }

 private:
  RandomStream() = default;

  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
  bool degenerate_ = false;
};

/// Deterministic stream for (master seed, replica, purpose).
///
/// The SplitMix64 state is initialised to
/// `master_seed ^ replica_index ^ (purpose_tag * 0x9E3779B97F4A7C15)` (wrapping
/// multiply), four SplitMix64 outputs seed the xoshiro256** state, and the
/// stream's words are the xoshiro256** outputs from there on.
RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t replica_index,
                           std::uint64_t purpose_tag);

inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t replica_index,
                                  StreamPurpose purpose) {
  return derive_stream(master_seed, replica_index, static_cast<std::uint64_t>(purpose));
}

}  // namespace polymer_traps
