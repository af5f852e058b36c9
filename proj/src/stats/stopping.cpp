#include "smcsweep/stats/stopping.hpp"

#include <cmath>
#include <stdexcept>

#include "smcsweep/stats/t_dist.hpp"

namespace smcsweep::stats {

void StoppingPolicy::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be a positive number");
  if (block_size < 2) throw std::invalid_argument("block size must be >= 2");
  if (max_runs && *max_runs < block_size) throw std::invalid_argument("max-runs must be at least one block");
}

double half_width(const RunningStat& stat, double alpha) {
  if (stat.count() < 2) throw std::invalid_argument("half_width needs at least two samples");
  const double n = static_cast<double>(stat.count());
  const double sd = std::sqrt(stat.m2() / (n - 1.0));
  if (sd == 0.0) return 0.0;
  return t_quantile(1.0 - alpha / 2.0, stat.count() - 1) * sd / std::sqrt(n);
}

void PointAccumulator::update(double x) {
  if (!frozen_) stat_.update(x);
}

void PointAccumulator::freeze(double hw) {
  if (frozen_) return;
  frozen_ = true;
  n_at_convergence_ = stat_.count();
  final_mean_ = stat_.mean();
  final_half_width_ = hw;
}

bool check_convergence(const PointAccumulator& acc, const StoppingPolicy& policy) {
  const auto n = acc.stat().count();
  if (n < policy.block_size || n < 2) return false;
  return half_width(acc.stat(), policy.alpha) <= policy.delta;
}

}  // namespace smcsweep::stats
