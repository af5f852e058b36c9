#pragma once

#include <cstdint>
#include <vector>

#include "smcsweep/blackbox/simulator.hpp"
#include "smcsweep/quatex/ast.hpp"
#include "smcsweep/quatex/plan.hpp"

namespace smcsweep::quatex {

// Drives one simulator run and extracts one sample per plan point.
// Holds references to the AST and plan; both must outlive the evaluator.
// Stateless between runs, so one instance may be shared by several workers.
class Evaluator {
 public:
  Evaluator(const QueryAst& ast, const ObservationPlan& plan, std::int64_t horizon);

  // Issues one reset(seed), then advances step by step, reading each point's
  // observable at its step. Direct points cost (max_step - 1) advances in total.
  // Throws HorizonExceeded if a point cannot be answered within the horizon,
  // EvalError on type errors, and lets simulator errors propagate.
  std::vector<double> run(blackbox::Simulator& sim, std::uint64_t seed) const;

 private:
  struct Read {
    std::size_t point;
    const std::string* observable;
  };
  struct StepReads {
    std::int64_t step;
    std::vector<Read> reads;
  };

  const QueryAst& ast_;
  const ObservationPlan& plan_;
  std::int64_t horizon_;
  std::vector<StepReads> schedule_;  // ascending by step
  std::vector<std::size_t> generic_points_;
};

std::vector<double> evaluate_run(const QueryAst& ast, const ObservationPlan& plan, blackbox::Simulator& sim,
                                 std::uint64_t seed, std::int64_t horizon);

}  // namespace smcsweep::quatex
