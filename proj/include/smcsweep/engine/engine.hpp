#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "smcsweep/blackbox/simulator.hpp"
#include "smcsweep/quatex/ast.hpp"
#include "smcsweep/quatex/plan.hpp"
#include "smcsweep/stats/stopping.hpp"

namespace smcsweep::engine {

struct ProgressEvent {
  enum class Kind { runs_committed, point_frozen } kind;
  std::uint64_t committed = 0;
  std::size_t point = 0;  // for point_frozen
  std::size_t frozen = 0;
  std::size_t total_points = 0;
};

struct EngineConfig {
  std::size_t workers = 1;
  std::uint64_t seed_of_seeds = 1;
  stats::StoppingPolicy policy;  // policy.delta is the default per-point target
  std::int64_t horizon = 600;
  // Per-observable delta overriding policy.delta.
  std::map<std::string, double> delta_by_observable;
  // Fresh-simulator retries for a run that failed with a simulator error.
  int max_retries = 3;
  std::function<void(const ProgressEvent&)> on_progress;

  void validate() const;
};

enum class RunStatus { complete, partial };

struct TrajectoryPoint {
  std::int64_t step;
  std::string observable;
  double mean;
  double half_width;
  std::uint64_t n;  // n-at-convergence when frozen, committed runs otherwise
  bool frozen;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct TrajectoryResult {
  std::vector<TrajectoryPoint> points;
  std::uint64_t total_runs = 0;
  std::chrono::duration<double> wall_time{0};
  RunStatus status = RunStatus::complete;
};

// Creates the simulator owned by worker `worker` (also used for restarts).
using SimulatorFactory = std::function<std::unique_ptr<blackbox::Simulator>(std::size_t worker)>;

class EngineFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs iid simulations (run i seeded with seed_for_run(seed_of_seeds, i)) on
// `workers` threads until every plan point is frozen or the run cap is hit.
// Samples are committed in run-index order, so the result does not depend on
// the worker count. Throws EngineFailure when a run keeps failing.
TrajectoryResult run_query(const quatex::QueryAst& ast, const quatex::ObservationPlan& plan,
                           const SimulatorFactory& factory, const EngineConfig& config);

}  // namespace smcsweep::engine
