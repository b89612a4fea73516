#pragma once

#include <cstdint>

namespace cbai {

// Identifies one deterministic random stream inside one trial. Streams are
// independent: a value at a given counter never depends on how many values
// were consumed elsewhere.
enum class Stream : std::uint64_t {
  natural_reward = 1,
  corruption_coin = 2,
  adversarial_sample = 3,
  policy = 4,
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

// Counter-based generator: a pure function of (seed spec, stream, counters).
// Replaying any subset of counters reproduces the same values bit for bit,
// regardless of evaluation order or thread placement.
class StreamRng {
 public:
  StreamRng() = default;
  StreamRng(const SeedSpec& seeds, Stream stream);

  // Uniform draw in (0, 1] at counter coordinates (c1, c2, c3).
  double u01(std::uint64_t c1, std::uint64_t c2 = 0, std::uint64_t c3 = 0) const;

  // Standard normal draw at (c1, c2); consumes counter slots (c1, c2, {0,1}).
  double gaussian(std::uint64_t c1, std::uint64_t c2 = 0) const;

  std::uint64_t word(std::uint64_t c1, std::uint64_t c2 = 0, std::uint64_t c3 = 0) const;
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_ = 0;
};

}  // namespace cbai
