#include "smcsweep/engine/engine.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <thread>

#include "smcsweep/diagnostics.hpp"
#include "smcsweep/engine/committer.hpp"
#include "smcsweep/engine/seeding.hpp"
#include "smcsweep/quatex/evaluator.hpp"

namespace smcsweep::engine {

void EngineConfig::validate() const {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (max_retries < 0) throw std::invalid_argument("max retries must be >= 0");
  policy.validate();
  for (const auto& [name, d] : delta_by_observable) {
    if (!(d > 0.0)) throw std::invalid_argument("delta for '" + name + "' must be positive");
  }
}

namespace {

// Shared between the workers and the committing thread.
class RunBoard {
 public:
  // Blocks until a run index below the launch limit is available; nullopt once stopped.
  std::optional<std::uint64_t> take() {
    std::unique_lock lock(mutex_);
    work_cv_.wait(lock, [&] { return stopped_ || next_ < limit_; });
    if (stopped_) return std::nullopt;
    return next_++;
  }

  void post(std::uint64_t index, std::vector<double> samples) {
    {
      std::lock_guard lock(mutex_);
      results_.emplace_back(index, std::move(samples));
    }
    result_cv_.notify_one();
  }

  void fail(std::string message) {
    {
      std::lock_guard lock(mutex_);
      if (!failure_) failure_ = std::move(message);
    }
    result_cv_.notify_one();
  }

  // Waits for finished runs; returns false on worker failure.
  bool collect(std::deque<std::pair<std::uint64_t, std::vector<double>>>& out) {
    std::unique_lock lock(mutex_);
    result_cv_.wait(lock, [&] { return failure_.has_value() || !results_.empty(); });
    if (failure_) return false;
    out.swap(results_);
    return true;
  }

  void set_limit(std::uint64_t limit) {
    {
      std::lock_guard lock(mutex_);
      limit_ = std::max(limit_, limit);
    }
    work_cv_.notify_all();
  }

  void stop() {
    {
      std::lock_guard lock(mutex_);
      stopped_ = true;
    }
    work_cv_.notify_all();
  }

  std::string failure() {
    std::lock_guard lock(mutex_);
    return failure_.value_or("");
  }

 private:
  std::mutex mutex_;
  std::condition_variable work_cv_;
  std::condition_variable result_cv_;
  std::uint64_t next_ = 0;
  std::uint64_t limit_ = 0;
  bool stopped_ = false;
  std::deque<std::pair<std::uint64_t, std::vector<double>>> results_;
  std::optional<std::string> failure_;
};

void worker_loop(std::size_t worker, const quatex::Evaluator& evaluator, const SimulatorFactory& factory,
                 const EngineConfig& config, RunBoard& board) {
  std::unique_ptr<blackbox::Simulator> sim;
  while (auto index = board.take()) {
    const std::uint64_t seed = seed_for_run(config.seed_of_seeds, *index);
    for (int attempt = 0;; ++attempt) {
      try {
        if (!sim) sim = factory(worker);
        board.post(*index, evaluator.run(*sim, seed));
        break;
      } catch (const blackbox::ProtocolMisuse& e) {
        board.fail("run " + std::to_string(*index) + " failed: " + e.what());
        return;
      } catch (const blackbox::UnknownObservable& e) {
        board.fail("run " + std::to_string(*index) + " failed: " + e.what());
        return;
      } catch (const blackbox::SimulatorError& e) {
        sim.reset();
        if (attempt >= config.max_retries) {
          board.fail("run " + std::to_string(*index) + " failed after " + std::to_string(attempt + 1) +
                     " attempt(s): " + e.what());
          return;
        }
        warn("run " + std::to_string(*index) + " (seed " + std::to_string(seed) + ") failed: " + e.what() +
             "; retrying on a fresh simulator");
      } catch (const std::exception& e) {
        board.fail("run " + std::to_string(*index) + " failed: " + e.what());
        return;
      }
    }
  }
}

}  // namespace

TrajectoryResult run_query(const quatex::QueryAst& ast, const quatex::ObservationPlan& plan,
                           const SimulatorFactory& factory, const EngineConfig& config) {
  config.validate();
  if (plan.points.empty()) throw std::invalid_argument("run_query: empty observation plan");
  if (plan.max_step > config.horizon) {
    throw std::invalid_argument("plan needs step " + std::to_string(plan.max_step) + " but horizon is " +
                                std::to_string(config.horizon));
  }
  const auto started = std::chrono::steady_clock::now();

  std::vector<double> deltas;
  deltas.reserve(plan.points.size());
  for (const auto& p : plan.points) {
    auto it = config.delta_by_observable.find(p.observable);
    deltas.push_back(it != config.delta_by_observable.end() ? it->second : config.policy.delta);
  }
  SampleCommitter committer(std::move(deltas), config.policy);
  const std::uint64_t block = config.policy.block_size;
  const auto launch_limit = [&] {
    // Current block plus one speculative block, and at most two runs in flight per worker.
    std::uint64_t limit = std::min(committer.last_boundary() + 2 * block, committer.committed() + 2 * config.workers);
    if (committer.run_cap()) limit = std::min(limit, *committer.run_cap());
    return limit;
  };

  quatex::Evaluator evaluator(ast, plan, config.horizon);
  RunBoard board;
  board.set_limit(launch_limit());

  std::vector<std::thread> threads;
  threads.reserve(config.workers);
  for (std::size_t w = 0; w < config.workers; ++w) {
    threads.emplace_back(worker_loop, w, std::cref(evaluator), std::cref(factory), std::cref(config), std::ref(board));
  }

  bool failed = false;
  std::deque<std::pair<std::uint64_t, std::vector<double>>> batch;
  while (!committer.finished()) {
    batch.clear();
    if (!board.collect(batch)) {
      failed = true;
      break;
    }
    for (auto& [index, samples] : batch) {
      const auto before_runs = committer.committed();
      const auto before_frozen = committer.frozen_count();
      std::vector<bool> was_frozen;
      if (config.on_progress) {
        for (const auto& acc : committer.points()) was_frozen.push_back(acc.frozen());
      }
      committer.commit(index, std::move(samples));
      if (config.on_progress && committer.committed() != before_runs) {
        config.on_progress({ProgressEvent::Kind::runs_committed, committer.committed(), 0, committer.frozen_count(),
                            plan.points.size()});
        if (committer.frozen_count() != before_frozen) {
          for (std::size_t i = 0; i < was_frozen.size(); ++i) {
            if (!was_frozen[i] && committer.points()[i].frozen()) {
              config.on_progress({ProgressEvent::Kind::point_frozen, committer.committed(), i,
                                  committer.frozen_count(), plan.points.size()});
            }
          }
        }
      }
    }
    board.set_limit(launch_limit());
  }
  board.stop();
  for (auto& t : threads) t.join();
  if (failed) throw EngineFailure(board.failure());

  TrajectoryResult result;
  result.total_runs = committer.committed();
  result.status = committer.all_frozen() ? RunStatus::complete : RunStatus::partial;
  result.points.reserve(plan.points.size());
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    const auto& acc = committer.points()[i];
    TrajectoryPoint tp{plan.points[i].step, plan.points[i].observable, 0.0, 0.0, 0, acc.frozen()};
    if (acc.frozen()) {
      tp.mean = *acc.final_mean();
      tp.half_width = *acc.final_half_width();
      tp.n = *acc.n_at_convergence();
    } else {
      tp.mean = acc.stat().mean();
      tp.n = acc.stat().count();
      tp.half_width = tp.n >= 2 ? stats::half_width(acc.stat(), config.policy.alpha) : 0.0;
    }
    result.points.push_back(std::move(tp));
  }
  result.wall_time = std::chrono::steady_clock::now() - started;
  return result;
}

}  // namespace smcsweep::engine
