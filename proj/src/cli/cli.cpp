#include "smcsweep/cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smcsweep/analysis/plotdata.hpp"
#include "smcsweep/analysis/results_io.hpp"
#include "smcsweep/analysis/scorecard.hpp"
#include "smcsweep/blackbox/conformance.hpp"
#include "smcsweep/blackbox/external.hpp"
#include "smcsweep/campaign/campaign.hpp"
#include "smcsweep/campaign/config.hpp"
#include "smcsweep/csv.hpp"
#include "smcsweep/diagnostics.hpp"
#include "smcsweep/engine/engine.hpp"
#include "smcsweep/engine/trajectory_csv.hpp"
#include "smcsweep/models/registry.hpp"
#include "smcsweep/quatex/error.hpp"
#include "smcsweep/quatex/parser.hpp"
#include "smcsweep/quatex/plan.hpp"

namespace smcsweep::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw UsageError(std::string(flag) + " expects NAME=VALUE, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

double parse_number(const std::string& text, const char* flag) {
  auto v = csv::parse_double(text);
  if (!v) throw UsageError(std::string(flag) + ": '" + text + "' is not a number");
  return *v;
}

void progress_line(std::ostream& err, const engine::ProgressEvent& ev, const json& context) {
  json j = context;
  if (ev.kind == engine::ProgressEvent::Kind::runs_committed) {
    j["event"] = "runs_committed";
  } else {
    j["event"] = "point_frozen";
    j["point"] = ev.point;
  }
  j["committed"] = ev.committed;
  j["frozen"] = ev.frozen;
  j["points"] = ev.total_points;
  err << j.dump() << '\n';
}

// ---------------------------------------------------------------- run-query

struct RunQueryArgs {
  std::string query_file;
  std::vector<std::string> bindings;
  std::vector<std::string> deltas;
  double alpha = 0.05;
  std::uint64_t block = 30;
  std::size_t workers = 1;
  std::uint64_t seed_of_seeds = 1;
  std::int64_t horizon = 600;
  std::optional<std::uint64_t> max_runs;
  std::string sim;
  std::vector<std::string> sim_args;
  std::int64_t experiment_id = 1;
  std::int64_t param_index = 1;
  double startup_timeout = 60;
  double response_timeout = 30;
  std::string out;
  bool verbose = false;
};

int run_query_cmd(const RunQueryArgs& a, std::ostream& out, std::ostream& err) {
  const std::string source = a.query_file.empty() ? campaign::default_query({}) : read_file(a.query_file);
  const auto ast = quatex::parse(source);

  quatex::ObsBinding binding;
  for (const auto& b : a.bindings) {
    auto [name, obs] = split_assignment(b, "--obs");
    binding[name] = obs;
  }
  quatex::ExpandOptions expand;
  expand.horizon = a.horizon;
  const auto plan = quatex::expand_parametric(ast, binding, expand);

  engine::EngineConfig ec;
  ec.workers = a.workers;
  ec.seed_of_seeds = a.seed_of_seeds;
  ec.horizon = a.horizon;
  ec.policy.alpha = a.alpha;
  ec.policy.block_size = a.block;
  ec.policy.max_runs = a.max_runs;
  std::optional<double> fallback;
  for (const auto& d : a.deltas) {
    if (d.find('=') == std::string::npos) {
      fallback = parse_number(d, "--delta");
    } else {
      auto [name, value] = split_assignment(d, "--delta");
      ec.delta_by_observable[name] = parse_number(value, "--delta");
    }
  }
  for (const auto& p : plan.points) {
    if (!fallback && !ec.delta_by_observable.count(p.observable)) {
      throw UsageError("no --delta for observable '" + p.observable + "'");
    }
  }
  ec.policy.delta = fallback ? *fallback : ec.delta_by_observable.begin()->second;

  std::vector<std::string> declared;
  for (const auto& p : plan.points) {
    if (!p.generic && std::find(declared.begin(), declared.end(), p.observable) == declared.end()) {
      declared.push_back(p.observable);
    }
  }

  engine::SimulatorFactory factory;
  if (a.sim.rfind("exec:", 0) == 0) {
    blackbox::LaunchSpec launch;
    launch.executable = a.sim.substr(5);
    launch.args = a.sim_args;
    launch.experiment_id = a.experiment_id;
    launch.param_index = a.param_index;
    launch.startup_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(a.startup_timeout * 1000));
    launch.response_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(a.response_timeout * 1000));
    launch.validate();
    factory = [launch](std::size_t) -> std::unique_ptr<blackbox::Simulator> { return blackbox::spawn_external(launch); };
  } else {
    if (!a.sim_args.empty()) throw UsageError("--sim-arg is only valid with --sim exec:PATH");
    const auto spec = models::parse_model_spec(a.sim);
    models::make_model(spec);
    factory = [spec, declared](std::size_t) {
      auto sim = models::make_simulator(spec);
      if (!declared.empty()) sim->declare_observables(declared);
      return sim;
    };
  }
  if (a.verbose) {
    ec.on_progress = [&err](const engine::ProgressEvent& ev) { progress_line(err, ev, json::object()); };
  }

  engine::TrajectoryResult result;
  try {
    result = engine::run_query(ast, plan, factory, ec);
  } catch (const engine::EngineFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitJobFailure;
  }

  if (a.out.empty() || a.out == "-") {
    engine::write_trajectory_csv(out, result);
  } else {
    std::ofstream file(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
    engine::write_trajectory_csv(file, result);
  }
  if (a.verbose) {
    err << json{{"event", "done"},
                {"status", result.status == engine::RunStatus::complete ? "complete" : "partial"},
                {"total_runs", result.total_runs},
                {"wall_time_s", result.wall_time.count()}}
               .dump()
        << '\n';
  }
  if (result.status == engine::RunStatus::partial) {
    err << "warning: run cap reached before every point converged\n";
    return kExitPartial;
  }
  return kExitOk;
}

// ------------------------------------------------------------- run-campaign

struct RunCampaignArgs {
  std::string config;
  std::string out;
  std::size_t jobs = 1;
  bool fail_fast = false;
  bool verbose = false;
};

int run_campaign_cmd(const RunCampaignArgs& a, std::ostream& out, std::ostream& err) {
  const auto config = campaign::load_config(a.config);
  campaign::CampaignOptions options;
  options.fail_fast = a.fail_fast;
  options.parallel_jobs = a.jobs;
  if (a.verbose) {
    options.on_progress = [&err](const campaign::Job& job, const engine::ProgressEvent& ev) {
      progress_line(err, ev, {{"job", job.ordinal}, {"experiment", job.experiment}, {"observable", job.observable}});
    };
  }
  options.on_job_done = [&err, verbose = a.verbose](const campaign::JobOutcome& o) {
    if (verbose) {
      json j{{"event", "job_done"},
             {"job", o.job.ordinal},
             {"experiment", o.job.experiment},
             {"value_index", o.job.value_index},
             {"observable", o.job.observable},
             {"status", campaign::to_string(o.status)}};
      if (o.trajectory) j["total_runs"] = o.trajectory->total_runs;
      err << j.dump() << '\n';
    }
    if (o.status == campaign::JobStatus::failed) {
      err << "error: job " << o.job.experiment << " p" << o.job.value_index + 1 << " " << o.job.observable << ": "
          << o.error << '\n';
    }
  };

  const auto result = campaign::run_campaign(config, a.out, options);
  out << "campaign " << result.campaign_hash << ": " << result.outcomes.size() << " jobs, "
      << result.count(campaign::JobStatus::completed) << " completed, "
      << result.count(campaign::JobStatus::partial) << " partial, " << result.count(campaign::JobStatus::failed)
      << " failed\n";
  if (result.count(campaign::JobStatus::failed)) return kExitJobFailure;
  if (result.count(campaign::JobStatus::partial)) return kExitPartial;
  return kExitOk;
}

// -------------------------------------------------------- analyze/scorecard

struct AnalysisArgs {
  std::string in;
  std::string out;
  std::optional<double> tail_frac;
  std::optional<double> alpha;
  std::string pair;
  std::string test = "z";
  std::string best_obs;
  std::string csv;
  bool svg = false;
};

analysis::ScorecardOptions analysis_options(const analysis::CampaignResults& results, const AnalysisArgs& a,
                                            bool need_pair) {
  analysis::ScorecardOptions o;
  o.alpha = a.alpha.value_or(results.alpha);
  o.tail_fraction = a.tail_frac.value_or(results.tail_fraction);
  if (!(o.alpha > 0 && o.alpha < 1)) throw UsageError("--alpha must lie in (0, 1)");
  if (!(o.tail_fraction > 0 && o.tail_fraction <= 1)) throw UsageError("--tail-frac must lie in (0, 1]");
  o.test = analysis::parse_significance_test(a.test);
  if (!a.pair.empty()) {
    const auto comma = a.pair.find(',');
    if (comma == std::string::npos) throw UsageError("--pair expects GOOD,BAD");
    o.pair = {a.pair.substr(0, comma), a.pair.substr(comma + 1)};
  } else if (results.tradeoff) {
    o.pair = *results.tradeoff;
  } else if (need_pair) {
    throw UsageError("the campaign declares no trade-off pair; pass --pair GOOD,BAD");
  }
  for (const auto& name : {o.pair.good, o.pair.bad}) {
    if (!name.empty() && !results.find_observable(name)) throw UsageError("unknown observable '" + name + "'");
  }
  if (!a.best_obs.empty()) o.best_observable = a.best_obs;
  return o;
}

int analyze_cmd(const AnalysisArgs& a, std::ostream& out) {
  const auto results = analysis::load_campaign_results(a.in);
  const auto o = analysis_options(results, a, false);
  const std::filesystem::path dir = a.out.empty() ? std::filesystem::path(a.in) / "analysis" : std::filesystem::path(a.out);
  std::filesystem::create_directories(dir);

  std::ofstream summary(dir / "summary.csv");
  if (!summary) throw std::runtime_error("cannot write " + (dir / "summary.csv").string());
  summary << "experiment,observable,complete,mean_nsamples,final_diff,total_pairs,tail_window,tail_diff_share,"
             "tail_majority,best_point,best_param_value,best_tail_mean\n";
  bool incomplete = false;
  for (const auto& exp : results.experiments) {
    for (const auto& obs : results.observables) {
      const auto& per_value = exp.by_observable.at(obs.name);
      std::vector<analysis::Trajectory> points;
      for (const auto& t : per_value) {
        if (t) points.push_back(*t);
      }
      summary << csv::escape(exp.spec.id) << ',' << csv::escape(obs.name) << ',';
      if (points.size() != per_value.size()) {
        incomplete = true;
        summary << "false,,,,,,,,,\n";
        out << exp.spec.id << ' ' << obs.name << ": incomplete (" << points.size() << "/" << per_value.size()
            << " sweep points)\n";
        continue;
      }
      const auto s = analysis::summarize(obs.name, points, obs.direction, o.alpha, o.tail_fraction, o.test);
      summary << "true," << csv::format_double(s.mean_nsamples) << ',' << s.final_diff.significant << ','
              << s.final_diff.total << ',' << s.tail.window << ',' << csv::format_double(s.tail.tail_diff_share)
              << ',' << s.tail.tail_majority << ',' << s.best.label << ','
              << csv::format_double(exp.spec.values[s.best.index]) << ',' << csv::format_double(s.best.value)
              << '\n';
      analysis::emit_plotdata(exp.spec.id, obs.name, points, dir, o.alpha, o.test, a.svg);
      out << exp.spec.id << ' ' << obs.name << ": final diff " << s.final_diff.significant << '/'
          << s.final_diff.total << ", tail share " << csv::format_double(s.tail.tail_diff_share)
          << ", tail majority " << s.tail.tail_majority << '/' << s.tail.total_pairs << ", best "
          << s.best.label << " (" << exp.spec.parameter << '=' << csv::format_double(exp.spec.values[s.best.index])
          << ")\n";
    }
  }

  if (!o.pair.good.empty()) {
    const auto rows = analysis::build_scorecard(results, o);
    std::ofstream trade(dir / "tradeoffs.csv");
    if (!trade) throw std::runtime_error("cannot write " + (dir / "tradeoffs.csv").string());
    trade << "experiment,sweep_point,param_value,classification\n";
    for (std::size_t e = 0; e < rows.size(); ++e) {
      const auto& spec = results.experiments[e].spec;
      for (std::size_t v = 0; v < rows[e].tradeoffs.size(); ++v) {
        trade << csv::escape(spec.id) << ',' << analysis::point_label(v) << ',' << csv::format_double(spec.values[v])
              << ',';
        if (v == spec.baseline_index) trade << "baseline";
        else if (rows[e].tradeoffs[v]) trade << analysis::to_string(*rows[e].tradeoffs[v]);
        trade << '\n';
      }
    }
  }
  out << "analysis written to " << dir.string() << '\n';
  return incomplete ? kExitPartial : kExitOk;
}

int scorecard_cmd(const AnalysisArgs& a, std::ostream& out) {
  const auto results = analysis::load_campaign_results(a.in);
  const auto o = analysis_options(results, a, true);
  const auto rows = analysis::build_scorecard(results, o);
  std::vector<std::string> names;
  for (const auto& obs : results.observables) names.push_back(obs.name);

  const std::filesystem::path csv_path = a.csv.empty() ? std::filesystem::path(a.in) / "scorecard.csv" : std::filesystem::path(a.csv);
  std::ofstream file(csv_path);
  if (!file) throw std::runtime_error("cannot write " + csv_path.string());
  analysis::write_scorecard_csv(file, rows, names);
  out << analysis::render_scorecard(rows, names);
  const bool partial = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.partial; });
  return partial ? kExitPartial : kExitOk;
}

// ----------------------------------------------------------- protocol-check

struct ProtocolCheckArgs {
  std::vector<std::string> cmd;
  std::string observable = "X";
  std::uint64_t seed = 7;
  int steps = 5;
  double timeout = 10;
  std::int64_t experiment_id = 1;
  std::int64_t param_index = 1;
};

int protocol_check_cmd(const ProtocolCheckArgs& a, std::ostream& out) {
  if (a.cmd.empty()) throw UsageError("--cmd BIN is required");
  blackbox::LaunchSpec spec;
  spec.executable = a.cmd.front();
  spec.args.assign(a.cmd.begin() + 1, a.cmd.end());
  spec.experiment_id = a.experiment_id;
  spec.param_index = a.param_index;
  spec.startup_timeout = spec.response_timeout =
      std::chrono::milliseconds(static_cast<std::int64_t>(a.timeout * 1000));
  blackbox::ConformanceOptions options;
  options.observable = a.observable;
  options.seed = a.seed;
  options.steps = a.steps;
  if (a.steps < 2) throw UsageError("--steps must be >= 2");

  // The sentinel probe triggers a warning by design.
  auto previous = set_warning_sink([](const std::string&) {});
  const auto checks = blackbox::check_conformance(spec, options);
  set_warning_sink(std::move(previous));
  bool ok = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
    ok &= c.passed;
  }
  out << (ok ? "protocol-check: conforming\n" : "protocol-check: NOT conforming\n");
  return ok ? kExitOk : kExitJobFailure;
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistical model checking of simulators over parameter sweeps", "smcsweep"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.get_formatter()->column_width(40);

  RunQueryArgs rq;
  auto* run_query = app.add_subcommand("run-query", "Estimate a query's trajectory with one simulator");
  run_query->add_option("--query", rq.query_file, "Query file (default: observe `obs` at steps 101,111,...,591)");
  run_query->add_option("--obs", rq.bindings, "Bind a query name to an observable, NAME=OBS (repeatable)")
      ->default_str("none");
  run_query
      ->add_option("--delta", rq.deltas,
                   "CI half-width target: D for every point, or OBS=D per observable (repeatable)")
      ->required()
      ->default_str("none");
  run_query->add_option("--alpha", rq.alpha, "Significance level of the confidence intervals")
      ->check(CLI::Range(0.0, 1.0).description("in (0,1)"));
  run_query->add_option("--block", rq.block, "Runs between convergence checks")->check(CLI::Range(2, 1 << 30));
  run_query->add_option("--workers", rq.workers, "Worker threads")->check(CLI::Range(1, 4096));
  run_query->add_option("--seed-of-seeds", rq.seed_of_seeds, "Master seed for every run seed");
  run_query->add_option("--horizon", rq.horizon, "Maximum steps per run")->check(CLI::PositiveNumber);
  run_query->add_option("--max-runs", rq.max_runs, "Run cap (rounded down to a block multiple)")
      ->default_str("none");
  run_query
      ->add_option("--sim", rq.sim,
                   "Simulator: counter | bernoulli:P | gaussian:MU,SD | switching[:k=v,...] | exec:PATH")
      ->required();
  run_query->add_option("--sim-arg", rq.sim_args, "Extra argument for an exec: simulator (repeatable)")
      ->allow_extra_args(false)
      ->default_str("none");
  run_query->add_option("--experiment-id", rq.experiment_id, "-experimentMV value for an exec: simulator");
  run_query->add_option("--param-index", rq.param_index, "-numMCexpMV value for an exec: simulator");
  run_query->add_option("--startup-timeout", rq.startup_timeout, "Seconds to wait for the first response");
  run_query->add_option("--response-timeout", rq.response_timeout, "Seconds to wait for later responses");
  run_query->add_option("--out", rq.out, "Trajectory CSV path")->default_str("stdout");
  run_query->add_flag("--verbose", rq.verbose, "JSON-lines progress on stderr");

  RunCampaignArgs rc;
  auto* run_campaign = app.add_subcommand("run-campaign", "Run every job of a sweep campaign");
  run_campaign->add_option("--config", rc.config, "Campaign configuration (JSON)")->required();
  run_campaign->add_option("--out", rc.out, "Output directory")->required();
  run_campaign->add_option("--jobs", rc.jobs, "Jobs run concurrently")->check(CLI::Range(1, 1024));
  run_campaign->add_flag("--fail-fast", rc.fail_fast, "Stop at the first failed job");
  run_campaign->add_flag("--verbose", rc.verbose, "JSON-lines progress on stderr");

  AnalysisArgs an;
  auto add_analysis_flags = [](CLI::App* cmd, AnalysisArgs& a) {
    cmd->add_option("--in", a.in, "Campaign output directory")->required();
    cmd->add_option("--tail-frac", a.tail_frac, "Fraction of grid points forming the tail")
        ->default_str("campaign tail_fraction");
    cmd->add_option("--alpha", a.alpha, "Significance level for pairwise tests")->default_str("campaign alpha");
    cmd->add_option("--pair", a.pair, "Trade-off pair GOOD,BAD (higher-better, lower-better)")
        ->default_str("campaign tradeoff");
    cmd->add_option("--test", a.test, "Pairwise test")->check(CLI::IsMember({"z", "ci-overlap"}));
  };
  auto* analyze = app.add_subcommand("analyze", "Separation metrics and plot data per experiment and observable");
  add_analysis_flags(analyze, an);
  analyze->add_option("--out", an.out, "Output directory")->default_str("IN/analysis");
  analyze->add_flag("--svg", an.svg, "Also write SVG charts");

  AnalysisArgs sc;
  auto* scorecard = app.add_subcommand("scorecard", "Cross-experiment scorecard");
  add_analysis_flags(scorecard, sc);
  scorecard->add_option("--best-obs", sc.best_obs, "Observable for the best tail signal")
      ->default_str("lower-better member of the pair");
  scorecard->add_option("--csv", sc.csv, "Scorecard CSV path")->default_str("IN/scorecard.csv");

  ProtocolCheckArgs pc;
  std::string pc_bin;
  auto* protocol_check =
      app.add_subcommand("protocol-check", "Conformance transcript against an external simulator");
  protocol_check->add_option("--cmd", pc_bin, "Simulator executable; everything after it is passed as arguments")
      ->required();
  protocol_check->add_option("--observable", pc.observable, "Observable the simulator is expected to know");
  protocol_check->add_option("--seed", pc.seed, "Seed sent with reset");
  protocol_check->add_option("--steps", pc.steps, "Steps per transcript");
  protocol_check->add_option("--timeout", pc.timeout, "Seconds to wait for each response");
  protocol_check->add_option("--experiment-id", pc.experiment_id, "-experimentMV value");
  protocol_check->add_option("--param-index", pc.param_index, "-numMCexpMV value");

  // Everything after `protocol-check ... --cmd BIN` belongs to the child.
  std::vector<std::string> args(raw_args.begin() + (raw_args.empty() ? 0 : 1), raw_args.end());
  std::vector<std::string> child_args;
  if (!args.empty() && args.front() == "protocol-check") {
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--cmd" && i + 1 < args.size()) {
        child_args.assign(args.begin() + static_cast<std::ptrdiff_t>(i + 2), args.end());
        args.resize(i + 2);
        break;
      }
      if (args[i].rfind("--cmd=", 0) == 0) {
        child_args.assign(args.begin() + static_cast<std::ptrdiff_t>(i + 1), args.end());
        args.resize(i + 1);
        break;
      }
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_query) return run_query_cmd(rq, out, err);
    if (*run_campaign) return run_campaign_cmd(rc, out, err);
    if (*analyze) return analyze_cmd(an, out);
    if (*scorecard) return scorecard_cmd(sc, out);
    if (*protocol_check) {
      pc.cmd.push_back(pc_bin);
      pc.cmd.insert(pc.cmd.end(), child_args.begin(), child_args.end());
      return protocol_check_cmd(pc, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const quatex::QueryError& e) {
    err << "query error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const campaign::ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitJobFailure;
  }
  return kExitUsage;
}

int dispatch(const std::vector<std::string>& args) { return dispatch(args, std::cout, std::cerr); }

}  // namespace smcsweep::cli
