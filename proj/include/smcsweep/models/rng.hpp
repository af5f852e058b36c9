#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace smcsweep::models {

// xoshiro256** seeded through SplitMix64. Normal deviates use Box-Muller, so
// streams are identical on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed);
  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  std::optional<double> spare_;
};

}  // namespace smcsweep::models
