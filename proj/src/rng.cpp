#include "monoqkd/rng.hpp"

namespace monoqkd {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint32_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), stream_id};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint32_t stream_id)
    : engine_(make_engine(seed, stream_id)) {}

std::uint64_t RandomStream::next_below(std::uint64_t n) {
  using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
}

StreamSet::StreamSet(std::uint64_t master_seed)
    : master_seed_(master_seed),
      streams_{RandomStream(master_seed, 0), RandomStream(master_seed, 1),
               RandomStream(master_seed, 2), RandomStream(master_seed, 3),
               RandomStream(master_seed, 4), RandomStream(master_seed, 5),
               RandomStream(master_seed, 6), RandomStream(master_seed, 7)} {}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace monoqkd
