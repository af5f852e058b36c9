#pragma once

#include <cstdint>

namespace smcsweep::stats {

// Welford accumulator: count, mean and sum of squared deviations.
class RunningStat {
 public:
  // Throws std::invalid_argument for NaN or infinite samples.
  void update(double x);

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double m2() const noexcept { return m2_; }
  // Unbiased sample variance; 0 while count() < 2.
  double variance() const noexcept;

  friend bool operator==(const RunningStat&, const RunningStat&) = default;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace smcsweep::stats
