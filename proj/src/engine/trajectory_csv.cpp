#include "smcsweep/engine/trajectory_csv.hpp"

#include "smcsweep/csv.hpp"

namespace smcsweep::engine {

void write_trajectory_csv(std::ostream& out, const TrajectoryResult& result, const JobLabel& label) {
  out << kTrajectoryHeader << '\n';
  const std::string prefix = csv::escape(label.experiment) + "," + csv::escape(label.param_name) + "," +
                             (label.param_value ? csv::format_double(*label.param_value) : std::string()) + ",";
  for (const auto& p : result.points) {
    out << prefix << csv::escape(p.observable) << ',' << p.step << ',' << csv::format_double(p.mean) << ','
        << csv::format_double(p.half_width) << ',';
    if (p.frozen) out << p.n;
    out << '\n';
  }
}

}  // namespace smcsweep::engine
