#include "smcsweep/campaign/campaign.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "smcsweep/blackbox/external.hpp"
#include "smcsweep/engine/seeding.hpp"
#include "smcsweep/engine/trajectory_csv.hpp"
#include "smcsweep/quatex/parser.hpp"

namespace smcsweep::campaign {

using nlohmann::json;

std::string_view to_string(JobStatus s) {
  switch (s) {
    case JobStatus::completed: return "completed";
    case JobStatus::partial: return "partial";
    case JobStatus::failed: return "failed";
  }
  return "failed";
}

std::size_t CampaignResult::count(JobStatus s) const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += o.status == s;
  return n;
}

std::string file_safe(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

std::vector<Job> plan_jobs(const CampaignConfig& config) {
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < config.experiments.size(); ++e) {
    const auto& exp = config.experiments[e];
    for (std::size_t v = 0; v < exp.values.size(); ++v) {
      for (const auto& obs : config.observables) {
        Job job;
        job.ordinal = jobs.size();
        job.experiment_index = e;
        job.value_index = v;
        job.experiment = exp.id;
        job.parameter = exp.parameter;
        job.value = exp.values[v];
        job.observable = obs.name;
        job.seed_of_seeds = engine::seed_for_run(config.seed_of_seeds, job.ordinal);
        job.file = std::string(kTrajectoryDir) + "/" + file_safe(exp.id) + "_p" + std::to_string(v + 1) + "_" +
                   file_safe(obs.name) + ".csv";
        jobs.push_back(std::move(job));
      }
    }
  }
  return jobs;
}

std::string campaign_hash(const CampaignConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.echo.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

engine::TrajectoryResult run_job(const CampaignConfig& config, const Job& job,
                                 const std::function<void(const engine::ProgressEvent&)>& on_progress) {
  const quatex::QueryAst ast = quatex::parse(config.query_text);
  quatex::ExpandOptions expand;
  expand.horizon = config.horizon;
  const quatex::ObservationPlan plan = expand_parametric(ast, {{"obs", job.observable}}, expand);

  std::vector<std::string> declared;
  for (const auto& o : config.observables) declared.push_back(o.name);

  engine::SimulatorFactory factory;
  if (const auto* model = std::get_if<models::ModelSpec>(&config.simulator)) {
    models::ModelSpec spec = *model;
    spec.set(job.parameter, job.value);
    factory = [spec, declared](std::size_t) {
      auto sim = models::make_simulator(spec);
      sim->declare_observables(declared);
      return sim;
    };
  } else {
    const auto& ext = std::get<ExternalSimulatorSpec>(config.simulator);
    blackbox::LaunchSpec launch;
    launch.executable = ext.executable;
    launch.args = ext.args;
    launch.experiment_id = config.experiments[job.experiment_index].code;
    launch.param_index = static_cast<std::int64_t>(job.value_index + 1);
    launch.startup_timeout = ext.startup_timeout;
    launch.response_timeout = ext.response_timeout;
    factory = [launch, declared](std::size_t) -> std::unique_ptr<blackbox::Simulator> {
      auto sim = blackbox::spawn_external(launch);
      sim->declare_observables(declared);
      return sim;
    };
  }

  engine::EngineConfig ec;
  ec.workers = config.workers;
  ec.seed_of_seeds = job.seed_of_seeds;
  ec.horizon = config.horizon;
  ec.policy.alpha = config.alpha;
  ec.policy.block_size = config.block_size;
  ec.policy.max_runs = config.max_runs;
  ec.policy.delta = config.find_observable(job.observable)->delta;
  ec.on_progress = on_progress;
  return engine::run_query(ast, plan, factory, ec);
}

namespace {

json manifest_entry(const JobOutcome& o) {
  json j = {{"ordinal", o.job.ordinal},
            {"experiment", o.job.experiment},
            {"param_name", o.job.parameter},
            {"param_value", o.job.value},
            {"value_index", o.job.value_index},
            {"observable", o.job.observable},
            {"seed_of_seeds", o.job.seed_of_seeds},
            {"status", to_string(o.status)}};
  if (o.trajectory) {
    j["file"] = o.job.file;
    j["total_runs"] = o.trajectory->total_runs;
    j["wall_time_s"] = o.trajectory->wall_time.count();
  }
  if (!o.error.empty()) j["error"] = o.error;
  return j;
}

void write_manifest(const std::filesystem::path& out_dir, const CampaignConfig& config, const CampaignResult& result) {
  json doc;
  doc["campaign_hash"] = result.campaign_hash;
  doc["config"] = config.echo;
  doc["jobs"] = json::array();
  for (const auto& o : result.outcomes) doc["jobs"].push_back(manifest_entry(o));
  doc["summary"] = {{"jobs", result.outcomes.size()},
                    {"completed", result.count(JobStatus::completed)},
                    {"partial", result.count(JobStatus::partial)},
                    {"failed", result.count(JobStatus::failed)},
                    {"wall_time_s", result.wall_time_s}};
  const auto tmp = out_dir / (std::string(kManifestName) + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, out_dir / kManifestName);
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& config, const std::filesystem::path& out_dir,
                            const CampaignOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir / kTrajectoryDir);

  const std::vector<Job> jobs = plan_jobs(config);
  CampaignResult result;
  result.campaign_hash = campaign_hash(config);
  result.outcomes.resize(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    result.outcomes[i].job = jobs[i];
    result.outcomes[i].error = "not run";
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex callback_mutex;

  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      JobOutcome& outcome = result.outcomes[i];
      const Job& job = jobs[i];
      try {
        std::function<void(const engine::ProgressEvent&)> progress;
        if (options.on_progress) {
          progress = [&](const engine::ProgressEvent& ev) {
            std::lock_guard lock(callback_mutex);
            options.on_progress(job, ev);
          };
        }
        auto trajectory = run_job(config, job, progress);
        const auto path = out_dir / job.file;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_trajectory_csv(out, trajectory, {job.experiment, job.parameter, job.value});
        out.close();
        if (!out) throw std::runtime_error("error writing " + path.string());
        outcome.status =
            trajectory.status == engine::RunStatus::complete ? JobStatus::completed : JobStatus::partial;
        outcome.trajectory = std::move(trajectory);
        outcome.error.clear();
      } catch (const std::exception& e) {
        outcome.status = JobStatus::failed;
        outcome.error = e.what();
        if (options.fail_fast) abort.store(true);
      }
      if (options.on_job_done) {
        std::lock_guard lock(callback_mutex);
        options.on_job_done(outcome);
      }
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(options.parallel_jobs, jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest(out_dir, config, result);
  return result;
}

}  // namespace smcsweep::campaign
