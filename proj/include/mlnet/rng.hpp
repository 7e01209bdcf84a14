#pragma once

#include <cstdint>
#include <random>

namespace mlnet {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for one (parameter point, realization) cell of an experiment. Pure
/// function of its inputs so records never depend on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                                    std::uint64_t realization) {
  return mix64(mix64(mix64(master) ^ point) ^ (realization * 0xd1b54a32d192ed03ULL));
}

}  // namespace mlnet
