#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smcsweep/analysis/metrics.hpp"
#include "smcsweep/campaign/config.hpp"

namespace smcsweep::analysis {

struct TrajectoryRow {
  std::string experiment;
  std::string param_name;
  std::optional<double> param_value;
  std::string observable;
  std::int64_t step = 0;
  double mean = 0.0;
  double half_width = 0.0;
  std::optional<std::uint64_t> n;  // empty when the point did not converge
};

// Parses the trajectory CSV written by the engine. Throws std::runtime_error
// with a line number on malformed input.
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

struct ExperimentResults {
  campaign::SweepExperiment spec;
  // observable -> per sweep value; nullopt when the job is missing, failed,
  // or has points that did not converge.
  std::map<std::string, std::vector<std::optional<Trajectory>>> by_observable;
};

struct CampaignResults {
  std::string campaign_hash;
  double alpha = 0.05;
  double tail_fraction = 0.3;
  std::vector<campaign::ObservableSpec> observables;
  std::vector<ExperimentResults> experiments;
  std::optional<campaign::TradeoffPair> tradeoff;

  const campaign::ObservableSpec* find_observable(std::string_view name) const;
};

// Loads manifest.json and the trajectory files it references.
CampaignResults load_campaign_results(const std::filesystem::path& dir);

}  // namespace smcsweep::analysis
