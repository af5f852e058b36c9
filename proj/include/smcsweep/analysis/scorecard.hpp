#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "smcsweep/analysis/metrics.hpp"
#include "smcsweep/analysis/results_io.hpp"

namespace smcsweep::analysis {

// Metrics of one experiment-observable block. Fields other than `observable`
// and `complete` are meaningful only when every sweep value has a trajectory.
struct ObservableSummary {
  std::string observable;
  bool complete = false;
  double mean_nsamples = 0.0;  // over all grid points and sweep values
  PairCount final_diff;
  TailMetrics tail;
  BestPoint best;
};

struct ScorecardRow {
  std::string experiment;
  std::string parameter;
  std::size_t n_values = 0;
  std::size_t winwin = 0;
  std::size_t mixed = 0;
  std::size_t loselose = 0;
  // Per sweep value; nullopt for the baseline and for values lacking data.
  std::vector<std::optional<Tradeoff>> tradeoffs;
  std::string best_obs;
  std::optional<BestPoint> best;
  std::vector<ObservableSummary> observables;  // campaign observable order
  bool partial = false;

  const ObservableSummary* find(std::string_view observable) const;
};

struct ScorecardOptions {
  double alpha = 0.05;
  double tail_fraction = 0.3;
  SignificanceTest test = SignificanceTest::z_test;
  campaign::TradeoffPair pair;
  // Observable for the best-tail-signal column; defaults to pair.bad.
  std::optional<std::string> best_observable;
};

// Options taken from the campaign configuration; throws std::invalid_argument
// if the campaign declares no trade-off pair.
ScorecardOptions default_scorecard_options(const CampaignResults& results);

ObservableSummary summarize(const std::string& observable, const std::vector<Trajectory>& points,
                            Direction direction, double alpha, double tail_fraction, SignificanceTest test);

std::vector<ScorecardRow> build_scorecard(const CampaignResults& results, const ScorecardOptions& options);

// experiment,winwin,mixed,loselose,best_obs,best_point,best_tail_mean,
// mean_nsamples_<obs>...,final_diff_<obs>...,tail_share_<obs>...
// Metrics that a partial row lacks are left empty.
void write_scorecard_csv(std::ostream& out, const std::vector<ScorecardRow>& rows,
                         const std::vector<std::string>& observables);

// Aligned plain-text table.
std::string render_scorecard(const std::vector<ScorecardRow>& rows, const std::vector<std::string>& observables);

}  // namespace smcsweep::analysis
