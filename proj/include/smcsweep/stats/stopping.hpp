#pragma once

#include <cstdint>
#include <optional>

#include "smcsweep/stats/running_stat.hpp"

namespace smcsweep::stats {

struct StoppingPolicy {
  double alpha = 0.05;
  double delta = 0.0;  // target CI half-width, must be set
  std::uint64_t block_size = 30;
  std::optional<std::uint64_t> max_runs;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

// Student-t half-width t_{1-alpha/2, n-1} * s / sqrt(n). Throws std::invalid_argument for n < 2.
double half_width(const RunningStat& stat, double alpha);

// Per-point accumulator that stops taking samples once its interval is tight enough.
class PointAccumulator {
 public:
  // No-op once frozen.
  void update(double x);
  void freeze(double half_width);

  const RunningStat& stat() const noexcept { return stat_; }
  bool frozen() const noexcept { return frozen_; }
  std::optional<std::uint64_t> n_at_convergence() const noexcept { return n_at_convergence_; }
  std::optional<double> final_mean() const noexcept { return final_mean_; }
  std::optional<double> final_half_width() const noexcept { return final_half_width_; }

 private:
  RunningStat stat_;
  bool frozen_ = false;
  std::optional<std::uint64_t> n_at_convergence_;
  std::optional<double> final_mean_;
  std::optional<double> final_half_width_;
};

// True iff n >= block size and the half-width is within delta. Meant for block boundaries only.
bool check_convergence(const PointAccumulator& acc, const StoppingPolicy& policy);

}  // namespace smcsweep::stats
