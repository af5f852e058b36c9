#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "smcsweep/engine/engine.hpp"

namespace smcsweep::engine {

inline constexpr std::string_view kTrajectoryHeader =
    "experiment,param_name,param_value,observable,step,mean,ci_halfwidth,n_at_convergence";

// Identifies which sweep job a trajectory belongs to; empty for single queries.
struct JobLabel {
  std::string experiment;
  std::string param_name;
  std::optional<double> param_value;
};

// One row per plan point. n_at_convergence is left empty for unfrozen points.
// Wall time is not written, so output is byte-stable across reruns.
void write_trajectory_csv(std::ostream& out, const TrajectoryResult& result, const JobLabel& label = {});

}  // namespace smcsweep::engine
