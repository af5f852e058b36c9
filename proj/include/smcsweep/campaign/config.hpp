#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "smcsweep/models/registry.hpp"

namespace smcsweep::campaign {

enum class Direction { lower_is_better, higher_is_better };

std::string_view to_string(Direction d);

struct ObservableSpec {
  std::string name;
  double delta = 0.0;
  Direction direction = Direction::lower_is_better;
};

struct SweepExperiment {
  std::string id;         // e.g. "E1"
  std::string parameter;  // model parameter, or a label for external simulators
  std::vector<double> values;
  std::size_t baseline_index = 0;
  std::int64_t code = 0;  // -experimentMV value for external simulators
};

struct ExternalSimulatorSpec {
  std::string executable;
  std::vector<std::string> args;
  std::chrono::milliseconds startup_timeout{std::chrono::seconds(60)};
  std::chrono::milliseconds response_timeout{std::chrono::seconds(30)};
};

struct Grid {
  std::int64_t lo = 101;
  std::int64_t step = 10;
  std::int64_t hi = 600;
};

struct TradeoffPair {
  std::string good;  // higher is better
  std::string bad;   // lower is better
};

struct CampaignConfig {
  std::variant<models::ModelSpec, ExternalSimulatorSpec> simulator;
  std::int64_t horizon = 600;
  Grid grid;
  double alpha = 0.05;
  std::uint64_t block_size = 30;
  std::size_t workers = 1;
  std::uint64_t seed_of_seeds = 1;
  std::optional<std::uint64_t> max_runs;
  double tail_fraction = 0.3;
  std::vector<ObservableSpec> observables;
  std::vector<SweepExperiment> experiments;
  std::optional<TradeoffPair> tradeoff;
  // Query source (`query` inline or `query_file`) with an `obs` placeholder;
  // defaults to the step-indexed observation template over `grid`.
  std::string query_text;
  // Normalized configuration with defaults applied; echoed into the manifest.
  nlohmann::json echo;

  const ObservableSpec* find_observable(std::string_view name) const;
};

// Thrown with a JSON-path style location, e.g. "observables[1].delta: missing".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Step-indexed observation query over `grid` with observable parameter `obs`.
std::string default_query(const Grid& grid);

CampaignConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
CampaignConfig load_config(const std::filesystem::path& path);

}  // namespace smcsweep::campaign
