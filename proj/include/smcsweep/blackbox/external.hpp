#pragma once

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smcsweep/blackbox/simulator.hpp"

namespace smcsweep::blackbox {

class SpawnFailure : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

class ResponseTimeout : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

// Write to the child failed or the child closed its output.
class ChannelClosed : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

struct LaunchSpec {
  std::string executable;
  std::vector<std::string> args;  // passed before the experiment flags
  std::int64_t experiment_id = 1;
  std::int64_t param_index = 1;
  // Bounds the first response of the process lifetime (model loading happens lazily).
  std::chrono::milliseconds startup_timeout{std::chrono::seconds(60)};
  std::chrono::milliseconds response_timeout{std::chrono::seconds(30)};
  bool record_transcript = false;

  // Throws std::invalid_argument for an empty path or non-positive timeouts.
  void validate() const;
  // executable, args..., -experimentMV <id>, -numMCexpMV <index>
  std::vector<std::string> argv() const;
};

// A child process speaking the line protocol on its stdin/stdout.
// Requests are fire-and-forget; only observe() waits for an answer.
class ExternalSimulator final : public Simulator {
 public:
  ~ExternalSimulator() override;

  pid_t pid() const noexcept { return pid_; }

  // Lines written to the child (without '\n') and response lines read back,
  // when LaunchSpec::record_transcript is set.
  const std::vector<std::string>& sent() const noexcept { return sent_; }
  const std::vector<std::string>& received() const noexcept { return received_; }

  // Returns a line the child wrote without being asked, waiting up to `wait`.
  // Used by the conformance checker; a conforming simulator yields nullopt.
  std::optional<std::string> unsolicited_line(std::chrono::milliseconds wait);

  // Closes the child's stdin and waits up to `grace` for it to exit.
  // Returns the exit status, or nullopt if it had to be killed or was killed by a signal.
  std::optional<int> shutdown(std::chrono::milliseconds grace);

 protected:
  void do_reset(std::uint64_t seed) override;
  void do_advance() override;
  double do_observe(std::string_view name) override;

 private:
  friend std::unique_ptr<ExternalSimulator> spawn_external(const LaunchSpec& spec);
  ExternalSimulator(const LaunchSpec& spec, pid_t pid, int to_child, int from_child);

  void send(const std::string& line);
  std::string read_line(std::chrono::milliseconds timeout);
  void close_stdin();

  LaunchSpec spec_;
  pid_t pid_;
  int to_child_;
  int from_child_;
  bool reaped_ = false;
  bool answered_once_ = false;
  std::string inbox_;
  std::vector<std::string> sent_;
  std::vector<std::string> received_;
  std::set<std::string, std::less<>> sentinel_warned_;
};

// Starts the child with LaunchSpec::argv(). Throws SpawnFailure if it cannot be executed.
std::unique_ptr<ExternalSimulator> spawn_external(const LaunchSpec& spec);

}  // namespace smcsweep::blackbox
