#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace monoqkd {

// A named, independently seeded random stream. Bounded draws and unit
// doubles are produced from raw mt19937_64 output directly so that the bit
// stream does not depend on the standard library's distribution
// implementations.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint32_t stream_id);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53 bits of precision.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Multiply-shift reduction.
  std::uint64_t next_below(std::uint64_t n);

  int next_bit() { return static_cast<int>(next_u64() >> 63); }

  bool bernoulli(double p) { return next_unit() < p; }

 private:
  std::mt19937_64 engine_;
};

// Every source of randomness in a run is one of these named sub-streams of
// the master seed, so each component is reproducible in isolation.
enum class StreamId : std::uint32_t {
  alice_bases = 0,
  bob_bases = 1,
  quantum_sampling = 2,
  round_selection = 3,
  role_selection = 4,
  random_bits = 5,
  lambda_draws = 6,
  eve_guess = 7,
};

inline constexpr std::size_t kStreamCount = 8;

class StreamSet {
 public:
  explicit StreamSet(std::uint64_t master_seed);

  RandomStream& get(StreamId id) {
    return streams_[static_cast<std::size_t>(id)];
  }
  std::uint64_t master_seed() const { return master_seed_; }

 private:
  std::uint64_t master_seed_;
  std::array<RandomStream, kStreamCount> streams_;
};

// splitmix64 step; used to derive per-repetition seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace monoqkd
