#include "smcsweep/analysis/results_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "smcsweep/campaign/campaign.hpp"
#include "smcsweep/csv.hpp"
#include "smcsweep/diagnostics.hpp"
#include "smcsweep/engine/trajectory_csv.hpp"

namespace smcsweep::analysis {

using nlohmann::json;

const campaign::ObservableSpec* CampaignResults::find_observable(std::string_view name) const {
  for (const auto& o : observables) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

namespace {

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != engine::kTrajectoryHeader) throw std::runtime_error("line 1: unexpected trajectory CSV header");

  std::vector<TrajectoryRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      return std::runtime_error("line " + std::to_string(lineno) + ": " + what);
    };
    const auto f = csv::split_record(line);
    if (f.size() != 8) throw fail("expected 8 fields, got " + std::to_string(f.size()));
    TrajectoryRow r;
    r.experiment = f[0];
    r.param_name = f[1];
    if (!f[2].empty()) {
      r.param_value = csv::parse_double(f[2]);
      if (!r.param_value) throw fail("bad param_value '" + f[2] + "'");
    }
    r.observable = f[3];
    auto step = parse_int<std::int64_t>(f[4]);
    auto mean = csv::parse_double(f[5]);
    auto hw = csv::parse_double(f[6]);
    if (!step) throw fail("bad step '" + f[4] + "'");
    if (!mean) throw fail("bad mean '" + f[5] + "'");
    if (!hw || *hw < 0) throw fail("bad ci_halfwidth '" + f[6] + "'");
    r.step = *step;
    r.mean = *mean;
    r.half_width = *hw;
    if (!f[7].empty()) {
      r.n = parse_int<std::uint64_t>(f[7]);
      if (!r.n) throw fail("bad n_at_convergence '" + f[7] + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

CampaignResults load_campaign_results(const std::filesystem::path& dir) {
  const auto manifest_path = dir / campaign::kManifestName;
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open " + manifest_path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(manifest_path.string() + ": " + e.what());
  }

  CampaignResults out;
  try {
    const auto config = campaign::parse_config(doc.at("config"), dir);
    out.campaign_hash = doc.at("campaign_hash").get<std::string>();
    out.alpha = config.alpha;
    out.tail_fraction = config.tail_fraction;
    out.observables = config.observables;
    out.tradeoff = config.tradeoff;
    for (const auto& exp : config.experiments) {
      ExperimentResults er;
      er.spec = exp;
      for (const auto& o : config.observables) er.by_observable[o.name].resize(exp.values.size());
      out.experiments.push_back(std::move(er));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(manifest_path.string() + ": " + e.what());
  } catch (const campaign::ConfigError& e) {
    throw std::runtime_error(manifest_path.string() + ": config." + e.what());
  }

  for (const auto& job : doc.at("jobs")) {
    const auto status = job.at("status").get<std::string>();
    const auto exp_id = job.at("experiment").get<std::string>();
    const auto obs = job.at("observable").get<std::string>();
    const auto vi = job.at("value_index").get<std::size_t>();
    if (status == "failed" || !job.contains("file")) continue;

    ExperimentResults* er = nullptr;
    for (auto& e : out.experiments) {
      if (e.spec.id == exp_id) er = &e;
    }
    if (!er || !er->by_observable.count(obs) || vi >= er->spec.values.size()) {
      throw std::runtime_error(manifest_path.string() + ": job does not match the configuration");
    }

    const auto file = dir / job.at("file").get<std::string>();
    std::ifstream tin(file);
    if (!tin) {
      warn("missing trajectory file " + file.string());
      continue;
    }
    std::vector<TrajectoryRow> rows;
    try {
      rows = read_trajectory_csv(tin);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(file.string() + ": " + e.what());
    }
    Trajectory t;
    bool converged = true;
    for (const auto& r : rows) {
      if (r.observable != obs) continue;
      if (!r.n) converged = false;
      t.push_back({r.step, r.mean, r.half_width, r.n.value_or(0)});
    }
    if (!converged) {
      warn(file.string() + ": not every point converged; excluded from the analysis");
      continue;
    }
    if (t.empty()) {
      warn(file.string() + ": no rows for observable " + obs);
      continue;
    }
    er->by_observable[obs][vi] = std::move(t);
  }
  return out;
}

}  // namespace smcsweep::analysis
