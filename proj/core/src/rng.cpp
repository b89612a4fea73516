#include "cbai/rng.hpp"

#include <cmath>
#include <numbers>

namespace cbai {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer: full-avalanche 64-bit mixer.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

std::uint64_t absorb(std::uint64_t h, std::uint64_t v) {
  return mix64(h + kGolden * (v + 1));
}

}  // namespace

StreamRng::StreamRng(const SeedSpec& seeds, Stream stream) {
  std::uint64_t h = mix64(seeds.master_seed + kGolden);
  h = absorb(h, seeds.trial_index);
  h = absorb(h, static_cast<std::uint64_t>(stream));
  key_ = h;
}

std::uint64_t StreamRng::word(std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) const {
  std::uint64_t h = key_;
  h = absorb(h, c1);
  h = absorb(h, c2);
  h = absorb(h, c3);
  return h;
}

double StreamRng::u01(std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) const {
  // Top 53 bits, shifted into (0, 1] so log(u) is always finite.
  return static_cast<double>((word(c1, c2, c3) >> 11) + 1) * 0x1.0p-53;
}

double StreamRng::gaussian(std::uint64_t c1, std::uint64_t c2) const {
  const double u1 = u01(c1, c2, 0);
  const double u2 = u01(c1, c2, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace cbai
