#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "smcsweep/stats/stopping.hpp"

namespace smcsweep::engine {

class DuplicateRun : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Single committing context for one query: buffers per-run sample vectors,
// applies them strictly in run-index order, and at every block boundary
// freezes the points whose interval reached their delta.
class SampleCommitter {
 public:
  // One delta per plan point; alpha, block size and the run cap come from `policy`.
  SampleCommitter(std::vector<double> deltas, stats::StoppingPolicy policy);

  // Throws DuplicateRun if `run_index` was already committed or buffered.
  // Runs arriving after the stopping point are discarded.
  void commit(std::uint64_t run_index, std::vector<double> samples);

  bool finished() const noexcept { return all_frozen() || cap_reached(); }
  bool all_frozen() const noexcept { return frozen_count_ == points_.size(); }
  bool cap_reached() const noexcept { return run_cap_ && committed_ >= *run_cap_; }

  std::uint64_t committed() const noexcept { return committed_; }
  std::uint64_t last_boundary() const noexcept { return committed_ - committed_ % policy_.block_size; }
  std::size_t frozen_count() const noexcept { return frozen_count_; }
  std::size_t buffered() const noexcept { return pending_.size(); }
  // Runs are never committed past this index (max-runs rounded down to a block multiple).
  std::optional<std::uint64_t> run_cap() const noexcept { return run_cap_; }

  const std::vector<stats::PointAccumulator>& points() const noexcept { return points_; }
  const stats::StoppingPolicy& policy() const noexcept { return policy_; }
  double delta(std::size_t point) const { return deltas_.at(point); }

 private:
  void apply(const std::vector<double>& samples);
  void check_boundary();

  std::vector<double> deltas_;
  stats::StoppingPolicy policy_;
  std::optional<std::uint64_t> run_cap_;
  std::vector<stats::PointAccumulator> points_;
  std::map<std::uint64_t, std::vector<double>> pending_;
  std::uint64_t committed_ = 0;
  std::size_t frozen_count_ = 0;
};

}  // namespace smcsweep::engine
