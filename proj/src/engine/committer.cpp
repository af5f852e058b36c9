#include "smcsweep/engine/committer.hpp"

#include <string>

namespace smcsweep::engine {

SampleCommitter::SampleCommitter(std::vector<double> deltas, stats::StoppingPolicy policy)
    : deltas_(std::move(deltas)), policy_(policy), points_(deltas_.size()) {
  if (deltas_.empty()) throw std::invalid_argument("SampleCommitter: empty plan");
  for (double d : deltas_) {
    stats::StoppingPolicy p = policy_;
    p.delta = d;
    p.validate();
  }
  if (policy_.max_runs) run_cap_ = *policy_.max_runs - *policy_.max_runs % policy_.block_size;
}

void SampleCommitter::commit(std::uint64_t run_index, std::vector<double> samples) {
  if (run_index < committed_ || pending_.count(run_index)) {
    throw DuplicateRun("run " + std::to_string(run_index) + " committed twice");
  }
  if (samples.size() != points_.size()) {
    throw std::invalid_argument("run " + std::to_string(run_index) + " delivered " + std::to_string(samples.size()) +
                                " samples for " + std::to_string(points_.size()) + " plan points");
  }
  if (finished()) return;
  pending_.emplace(run_index, std::move(samples));
  while (!finished()) {
    auto it = pending_.find(committed_);
    if (it == pending_.end()) break;
    apply(it->second);
    pending_.erase(it);
    ++committed_;
    if (committed_ % policy_.block_size == 0) check_boundary();
  }
  if (finished()) pending_.clear();
}

void SampleCommitter::apply(const std::vector<double>& samples) {
  for (std::size_t i = 0; i < points_.size(); ++i) points_[i].update(samples[i]);
}

void SampleCommitter::check_boundary() {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto& acc = points_[i];
    if (acc.frozen()) continue;
    stats::StoppingPolicy p = policy_;
    p.delta = deltas_[i];
    if (stats::check_convergence(acc, p)) {
      acc.freeze(stats::half_width(acc.stat(), policy_.alpha));
      ++frozen_count_;
    }
  }
}

}  // namespace smcsweep::engine
