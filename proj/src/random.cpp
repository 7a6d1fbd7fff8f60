#include "polymer_traps/random.hpp"

#include <bit>
#include <cmath>

namespace polymer_traps {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += kGolden;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

RandomStream RandomStream::zero() {
  RandomStream stream;
  stream.degenerate_ = true;
  return stream;
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() {
  if (degenerate_) return 0.5;
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
  if (degenerate_) return 0.5;
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

// Marsaglia polar method; the second variate of each pair is cached.
double RandomStream::normal() {
  if (degenerate_) return 0.0;
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

void RandomStream::fill_normal(std::span<double> out) {
  for (double& x : out) x = normal();
}

double RandomStream::exponential() {
  if (degenerate_) return 1.0;
  return -std::log(uniform_open());
}

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t replica_index,
                           std::uint64_t purpose_tag) {
  return RandomStream(master_seed ^ replica_index ^ (purpose_tag * kGolden));
}

}  // namespace polymer_traps
