#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smcsweep/campaign/config.hpp"
#include "smcsweep/engine/engine.hpp"

namespace smcsweep::campaign {

// One (experiment, sweep value, observable) query.
struct Job {
  std::size_t ordinal = 0;
  std::size_t experiment_index = 0;
  std::size_t value_index = 0;
  std::string experiment;
  std::string parameter;
  double value = 0.0;
  std::string observable;
  std::uint64_t seed_of_seeds = 0;
  std::string file;  // relative to the campaign output directory
};

enum class JobStatus { completed, partial, failed };
std::string_view to_string(JobStatus s);

struct JobOutcome {
  Job job;
  JobStatus status = JobStatus::failed;
  std::optional<engine::TrajectoryResult> trajectory;
  std::string error;
};

struct CampaignOptions {
  bool fail_fast = false;
  // Number of jobs executed concurrently; each job uses config.workers threads.
  std::size_t parallel_jobs = 1;
  std::function<void(const JobOutcome&)> on_job_done;
  std::function<void(const Job&, const engine::ProgressEvent&)> on_progress;
};

struct CampaignResult {
  std::string campaign_hash;
  std::vector<JobOutcome> outcomes;
  double wall_time_s = 0.0;

  std::size_t count(JobStatus s) const;
};

// Replaces characters outside [A-Za-z0-9._-] with '_'.
std::string file_safe(std::string_view text);

// Expands the configuration into jobs in (experiment, value, observable) order.
std::vector<Job> plan_jobs(const CampaignConfig& config);

// FNV-1a over the normalized configuration.
std::string campaign_hash(const CampaignConfig& config);

// Runs a single job and returns its trajectory. Throws on failure.
engine::TrajectoryResult run_job(const CampaignConfig& config, const Job& job,
                                 const std::function<void(const engine::ProgressEvent&)>& on_progress = {});

// Runs every job, writing trajectories/<file> and manifest.json under out_dir.
// A failed job is recorded in the manifest and the remaining jobs continue
// unless options.fail_fast is set.
CampaignResult run_campaign(const CampaignConfig& config, const std::filesystem::path& out_dir,
                            const CampaignOptions& options = {});

inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kTrajectoryDir = "trajectories";

}  // namespace smcsweep::campaign
