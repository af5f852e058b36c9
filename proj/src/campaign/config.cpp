#include "smcsweep/campaign/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "smcsweep/quatex/parser.hpp"
#include "smcsweep/quatex/plan.hpp"

namespace smcsweep::campaign {

using nlohmann::json;

std::string_view to_string(Direction d) {
  return d == Direction::lower_is_better ? "lower-is-better" : "higher-is-better";
}

const ObservableSpec* CampaignConfig::find_observable(std::string_view name) const {
  for (const auto& o : observables) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

ConfigError::ConfigError(const std::string& path, const std::string& message)
    : std::runtime_error(path.empty() ? message : path + ": " + message), path_(path) {}

std::string default_query(const Grid& grid) {
  return "obsAtStep(x, obs) =\n"
         "  if (s.rval(\"steps\") == x) then s.rval(obs)\n"
         "  else # obsAtStep(x, obs) fi;\n\n"
         "eval parametric(E[obsAtStep(x, obs)], x, " +
         std::to_string(grid.lo) + ", " + std::to_string(grid.step) + ", " + std::to_string(grid.hi) + ");\n";
}

namespace {

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [key, _] : node_.items()) {
      if (!known.count(key)) throw ConfigError(sub(key), "unknown key");
    }
  }

  bool has(const char* key) const { return node_.contains(key); }
  const json& at(const char* key) const {
    if (!node_.contains(key)) throw ConfigError(sub(key), "missing");
    return node_.at(key);
  }
  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(sub(key), "expected a number");
    return v.get<double>();
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const char* key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(sub(key), "expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const char* key, std::int64_t fallback) const { return has(key) ? integer(key) : fallback; }

  std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(sub(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(sub(key), "expected a string");
    return v.get<std::string>();
  }

  const json& array(const char* key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(sub(key), "expected an array");
    return v;
  }

  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
};

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

}  // namespace

CampaignConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  Reader root(doc, "");
  root.allow({"simulator", "horizon", "grid", "alpha", "block_size", "workers", "seed_of_seeds", "max_runs",
              "tail_fraction", "query", "query_file", "observables", "experiments", "tradeoff"});

  CampaignConfig cfg;
  json echo;

  // simulator
  {
    Reader sim(root.at("simulator"), "simulator");
    sim.allow({"builtin", "params", "external"});
    if (sim.has("builtin") == sim.has("external")) {
      throw ConfigError("simulator", "exactly one of 'builtin' or 'external' is required");
    }
    if (sim.has("builtin")) {
      models::ModelSpec spec;
      try {
        spec = models::parse_model_spec(sim.string("builtin"));
        if (sim.has("params")) {
          Reader params(sim.at("params"), "simulator.params");
          for (const auto& [key, value] : sim.at("params").items()) {
            if (!value.is_number()) throw ConfigError(params.sub(key), "expected a number");
            spec.set(key, value.get<double>());
          }
        }
        models::make_model(spec);  // range-check the base parameters
      } catch (const std::invalid_argument& e) {
        throw ConfigError("simulator", e.what());
      }
      cfg.simulator = spec;
      echo["simulator"] = {{"builtin", spec.to_string()}};
    } else {
      Reader ext(sim.at("external"), "simulator.external");
      ext.allow({"path", "args", "startup_timeout_s", "response_timeout_s"});
      ExternalSimulatorSpec spec;
      spec.executable = ext.string("path");
      if (spec.executable.empty()) throw ConfigError(ext.sub("path"), "must not be empty");
      if (ext.has("args")) {
        const json& args = ext.array("args");
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (!args[i].is_string()) throw ConfigError(indexed(ext.sub("args"), i), "expected a string");
          spec.args.push_back(args[i].get<std::string>());
        }
      }
      const double startup = ext.number("startup_timeout_s", 60.0);
      const double response = ext.number("response_timeout_s", 30.0);
      if (!(startup > 0)) throw ConfigError(ext.sub("startup_timeout_s"), "must be positive");
      if (!(response > 0)) throw ConfigError(ext.sub("response_timeout_s"), "must be positive");
      spec.startup_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(startup * 1000.0));
      spec.response_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(response * 1000.0));
      cfg.simulator = spec;
      echo["simulator"] = {{"external",
                            {{"path", spec.executable},
                             {"args", spec.args},
                             {"startup_timeout_s", startup},
                             {"response_timeout_s", response}}}};
    }
  }

  // statistical settings
  cfg.horizon = root.integer("horizon", 600);
  if (cfg.horizon < 1) throw ConfigError("horizon", "must be >= 1");
  if (root.has("grid")) {
    Reader grid(root.at("grid"), "grid");
    grid.allow({"lo", "step", "hi"});
    cfg.grid.lo = grid.integer("lo", 101);
    cfg.grid.step = grid.integer("step", 10);
    cfg.grid.hi = grid.integer("hi", 600);
  }
  if (cfg.grid.lo < 1) throw ConfigError("grid.lo", "must be >= 1");
  if (cfg.grid.step < 1) throw ConfigError("grid.step", "must be >= 1");
  if (cfg.grid.hi < cfg.grid.lo) throw ConfigError("grid.hi", "must be >= grid.lo");
  if (cfg.grid.hi > cfg.horizon) throw ConfigError("grid.hi", "exceeds horizon " + std::to_string(cfg.horizon));

  cfg.alpha = root.number("alpha", 0.05);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
  cfg.block_size = root.unsigned_integer("block_size", 30);
  if (cfg.block_size < 2) throw ConfigError("block_size", "must be >= 2");
  cfg.workers = root.unsigned_integer("workers", 1);
  if (cfg.workers < 1) throw ConfigError("workers", "must be >= 1");
  cfg.seed_of_seeds = root.unsigned_integer("seed_of_seeds", 1);
  if (root.has("max_runs")) {
    cfg.max_runs = root.unsigned_integer("max_runs", 0);
    if (*cfg.max_runs < cfg.block_size) throw ConfigError("max_runs", "must be at least one block");
  }
  cfg.tail_fraction = root.number("tail_fraction", 0.3);
  if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0)) throw ConfigError("tail_fraction", "must lie in (0, 1]");

  // observables
  const json& obs = root.array("observables");
  if (obs.empty()) throw ConfigError("observables", "at least one observable is required");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    Reader o(obs[i], indexed("observables", i));
    o.allow({"name", "delta", "direction"});
    ObservableSpec spec;
    spec.name = o.string("name");
    if (spec.name.empty() || spec.name.find_first_of(" \t\r\n") != std::string::npos) {
      throw ConfigError(o.sub("name"), "must be a non-empty name without whitespace");
    }
    if (spec.name == "steps") throw ConfigError(o.sub("name"), "'steps' is the engine clock, not an observable");
    spec.delta = o.number("delta");
    if (!(spec.delta > 0.0)) throw ConfigError(o.sub("delta"), "must be positive");
    const std::string dir = o.string("direction");
    if (dir == "lower-is-better") spec.direction = Direction::lower_is_better;
    else if (dir == "higher-is-better") spec.direction = Direction::higher_is_better;
    else throw ConfigError(o.sub("direction"), "expected 'lower-is-better' or 'higher-is-better'");
    if (cfg.find_observable(spec.name)) throw ConfigError(o.sub("name"), "duplicate observable '" + spec.name + "'");
    cfg.observables.push_back(spec);
    echo["observables"].push_back({{"name", spec.name}, {"delta", spec.delta}, {"direction", dir}});
  }

  // experiments
  const json& exps = root.array("experiments");
  if (exps.empty()) throw ConfigError("experiments", "at least one experiment is required");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    Reader e(exps[i], indexed("experiments", i));
    e.allow({"id", "parameter", "values", "baseline_index", "code"});
    SweepExperiment spec;
    spec.id = e.string("id");
    if (spec.id.empty()) throw ConfigError(e.sub("id"), "must not be empty");
    if (!ids.insert(spec.id).second) throw ConfigError(e.sub("id"), "duplicate experiment id '" + spec.id + "'");
    spec.parameter = e.string("parameter");
    const json& values = e.array("values");
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!values[k].is_number()) throw ConfigError(indexed(e.sub("values"), k), "expected a number");
      double v = values[k].get<double>();
      for (double prev : spec.values) {
        if (prev == v) throw ConfigError(indexed(e.sub("values"), k), "duplicate sweep value");
      }
      spec.values.push_back(v);
    }
    if (spec.values.size() < 2) throw ConfigError(e.sub("values"), "a sweep needs at least two values");
    const auto baseline = e.integer("baseline_index", 0);
    if (baseline < 0 || static_cast<std::size_t>(baseline) >= spec.values.size()) {
      throw ConfigError(e.sub("baseline_index"), "out of range");
    }
    spec.baseline_index = static_cast<std::size_t>(baseline);
    spec.code = e.integer("code", static_cast<std::int64_t>(i + 1));

    if (auto* model = std::get_if<models::ModelSpec>(&cfg.simulator)) {
      for (std::size_t k = 0; k < spec.values.size(); ++k) {
        try {
          models::ModelSpec probe = *model;
          probe.set(spec.parameter, spec.values[k]);
          models::make_model(probe);
        } catch (const std::invalid_argument& err) {
          throw ConfigError(indexed(e.sub("values"), k), err.what());
        }
      }
    }
    cfg.experiments.push_back(spec);
    echo["experiments"].push_back({{"id", spec.id},
                                   {"parameter", spec.parameter},
                                   {"values", spec.values},
                                   {"baseline_index", spec.baseline_index},
                                   {"code", spec.code}});
  }

  if (root.has("tradeoff")) {
    Reader t(root.at("tradeoff"), "tradeoff");
    t.allow({"good", "bad"});
    TradeoffPair pair{t.string("good"), t.string("bad")};
    const auto* good = cfg.find_observable(pair.good);
    const auto* bad = cfg.find_observable(pair.bad);
    if (!good) throw ConfigError(t.sub("good"), "unknown observable '" + pair.good + "'");
    if (!bad) throw ConfigError(t.sub("bad"), "unknown observable '" + pair.bad + "'");
    if (good->direction != Direction::higher_is_better) throw ConfigError(t.sub("good"), "must be higher-is-better");
    if (bad->direction != Direction::lower_is_better) throw ConfigError(t.sub("bad"), "must be lower-is-better");
    cfg.tradeoff = pair;
    echo["tradeoff"] = {{"good", pair.good}, {"bad", pair.bad}};
  }

  if (root.has("query") && root.has("query_file")) {
    throw ConfigError("query", "give either 'query' or 'query_file', not both");
  }
  if (root.has("query")) {
    cfg.query_text = root.string("query");
  } else if (root.has("query_file")) {
    std::filesystem::path qpath = root.string("query_file");
    if (qpath.is_relative()) qpath = base_dir / qpath;
    std::ifstream in(qpath);
    if (!in) throw ConfigError("query_file", "cannot read '" + qpath.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    cfg.query_text = text.str();
  } else {
    cfg.query_text = default_query(cfg.grid);
  }
  try {
    const auto ast = quatex::parse(cfg.query_text);
    quatex::ExpandOptions expand;
    expand.horizon = cfg.horizon;
    const auto plan = quatex::expand_parametric(ast, {{"obs", cfg.observables.front().name}}, expand);
    if (plan.max_step > cfg.horizon) {
      throw ConfigError(root.has("query") ? "query" : "query_file",
                        "observes step " + std::to_string(plan.max_step) + " beyond horizon " +
                            std::to_string(cfg.horizon));
    }
  } catch (const quatex::QueryError& e) {
    throw ConfigError(root.has("query") ? "query" : "query_file", e.what());
  }

  echo["horizon"] = cfg.horizon;
  echo["grid"] = {{"lo", cfg.grid.lo}, {"step", cfg.grid.step}, {"hi", cfg.grid.hi}};
  echo["alpha"] = cfg.alpha;
  echo["block_size"] = cfg.block_size;
  echo["workers"] = cfg.workers;
  echo["seed_of_seeds"] = cfg.seed_of_seeds;
  if (cfg.max_runs) echo["max_runs"] = *cfg.max_runs;
  echo["tail_fraction"] = cfg.tail_fraction;
  echo["query"] = cfg.query_text;
  cfg.echo = std::move(echo);
  return cfg;
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

}  // namespace smcsweep::campaign
