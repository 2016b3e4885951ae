#pragma once

#include <cstdint>
#include <random>

namespace retrobell {

using Rng = std::mt19937_64;

/// Independent generator for substream `stream` of a run seeded with `seed`.
/// The mapping depends only on (seed, stream), never on the worker count.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  return Rng(seq);
}

}  // namespace retrobell

namespace retrobell {

/// splitmix64 finalizer; used to derive per-run seeds from a scenario seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace retrobell
