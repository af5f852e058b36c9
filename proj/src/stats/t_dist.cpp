#include "smcsweep/stats/t_dist.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <stdexcept>

namespace smcsweep::stats {

double t_quantile(double p, std::uint64_t dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("t_quantile: p must lie in (0, 1)");
  if (dof == 0) throw std::domain_error("t_quantile: dof must be >= 1");
  if (p == 0.5) return 0.0;
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, p);
}

double z_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("z_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal(), p);
}

}  // namespace smcsweep::stats
