#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "smcsweep/analysis/metrics.hpp"
#include "smcsweep/analysis/results_io.hpp"

namespace smcsweep::analysis {

// sweep_point,step,mean,lower,upper with one row per sweep point and step.
void write_long_csv(std::ostream& out, const std::vector<Trajectory>& points);

// step,point_a,point_b,significant for every ordered pair (diagonal included).
void write_significance_csv(std::ostream& out, const std::vector<Trajectory>& points, double alpha,
                            SignificanceTest test = SignificanceTest::z_test);

// Self-contained SVG line chart of the means with shaded confidence bands.
std::string render_svg(const std::string& title, const std::vector<Trajectory>& points);

struct PlotFiles {
  std::filesystem::path long_csv;
  std::filesystem::path significance_csv;
  std::optional<std::filesystem::path> svg;
};

// Writes <dir>/<experiment>_<observable>.csv, ..._significance.csv and,
// if requested, ..._plot.svg. Throws std::runtime_error on I/O failure.
PlotFiles emit_plotdata(const std::string& experiment, const std::string& observable,
                        const std::vector<Trajectory>& points, const std::filesystem::path& dir, double alpha,
                        SignificanceTest test, bool svg);

}  // namespace smcsweep::analysis
