#include "smcsweep/stats/running_stat.hpp"

#include <cmath>
#include <stdexcept>

namespace smcsweep::stats {

void RunningStat::update(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("RunningStat::update: non-finite sample");
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
  if (m2_ < 0.0) m2_ = 0.0;
}

double RunningStat::variance() const noexcept {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

}  // namespace smcsweep::stats
