#pragma once

#include <cstdint>

namespace smcsweep::stats {

// Inverse CDF of Student's t with `dof` degrees of freedom.
// Throws std::domain_error unless 0 < p < 1 and dof >= 1.
double t_quantile(double p, std::uint64_t dof);

// Inverse CDF of the standard normal. Throws std::domain_error unless 0 < p < 1.
double z_quantile(double p);

}  // namespace smcsweep::stats
