#pragma once

#include <cstdint>

namespace smcsweep::engine {

inline constexpr std::uint64_t kSplitMixIncrement = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output function applied to an already-incremented state.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// (run_index + 1)-th output of the SplitMix64 stream started at seed_of_seeds.
// O(1), so seeds do not depend on which worker executes which run.
constexpr std::uint64_t seed_for_run(std::uint64_t seed_of_seeds, std::uint64_t run_index) noexcept {
  return splitmix64_mix(seed_of_seeds + (run_index + 1) * kSplitMixIncrement);
}

}  // namespace smcsweep::engine
