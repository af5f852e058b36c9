#include "smcsweep/blackbox/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "smcsweep/blackbox/wire.hpp"
#include "smcsweep/diagnostics.hpp"

extern char** environ;

namespace smcsweep::blackbox {

using namespace std::chrono_literals;

void LaunchSpec::validate() const {
  if (executable.empty()) throw std::invalid_argument("launch spec: executable path is empty");
  if (startup_timeout <= 0ms) throw std::invalid_argument("launch spec: startup timeout must be positive");
  if (response_timeout <= 0ms) throw std::invalid_argument("launch spec: response timeout must be positive");
}

std::vector<std::string> LaunchSpec::argv() const {
  std::vector<std::string> out;
  out.reserve(args.size() + 5);
  out.push_back(executable);
  out.insert(out.end(), args.begin(), args.end());
  out.push_back("-experimentMV");
  out.push_back(std::to_string(experiment_id));
  out.push_back("-numMCexpMV");
  out.push_back(std::to_string(param_index));
  return out;
}

namespace {

// A dead child must surface as EPIPE on write, not kill this process.
void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string errno_text(int err) { return std::strerror(err); }

}  // namespace

std::unique_ptr<ExternalSimulator> spawn_external(const LaunchSpec& spec) {
  spec.validate();
  ignore_sigpipe();

  int in_pipe[2];   // parent writes -> child stdin
  int out_pipe[2];  // child stdout -> parent reads
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw SpawnFailure("pipe: " + errno_text(errno));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    int err = errno;
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw SpawnFailure("pipe: " + errno_text(err));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  const std::vector<std::string> args = spec.argv();
  std::vector<char*> cargs;
  cargs.reserve(args.size() + 1);
  for (const auto& a : args) cargs.push_back(const_cast<char*>(a.c_str()));
  cargs.push_back(nullptr);

  pid_t pid = -1;
  int rc = ::posix_spawnp(&pid, spec.executable.c_str(), &actions, nullptr, cargs.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw SpawnFailure("cannot start '" + spec.executable + "': " + errno_text(rc));
  }
  return std::unique_ptr<ExternalSimulator>(new ExternalSimulator(spec, pid, in_pipe[1], out_pipe[0]));
}

ExternalSimulator::ExternalSimulator(const LaunchSpec& spec, pid_t pid, int to_child, int from_child)
    : Simulator(SimulatorKind::external), spec_(spec), pid_(pid), to_child_(to_child), from_child_(from_child) {}

ExternalSimulator::~ExternalSimulator() {
  shutdown(2s);
  if (from_child_ >= 0) ::close(from_child_);
}

void ExternalSimulator::close_stdin() {
  if (to_child_ >= 0) {
    ::close(to_child_);
    to_child_ = -1;
  }
}

std::optional<int> ExternalSimulator::shutdown(std::chrono::milliseconds grace) {
  close_stdin();
  if (reaped_) return std::nullopt;
  const auto deadline = std::chrono::steady_clock::now() + grace;
  int status = 0;
  while (true) {
    pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) break;
    if (r < 0 && errno != EINTR) {
      reaped_ = true;
      return std::nullopt;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
      reaped_ = true;
      return std::nullopt;
    }
    std::this_thread::sleep_for(5ms);
  }
  reaped_ = true;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return std::nullopt;
}

void ExternalSimulator::send(const std::string& line) {
  if (to_child_ < 0) throw ChannelClosed("simulator stdin already closed");
  std::size_t done = 0;
  while (done < line.size()) {
    ssize_t n = ::write(to_child_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ChannelClosed("write to simulator failed: " + errno_text(errno));
    }
    done += static_cast<std::size_t>(n);
  }
  if (spec_.record_transcript) sent_.push_back(line.substr(0, line.size() - 1));
}

std::string ExternalSimulator::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    auto nl = inbox_.find('\n');
    if (nl != std::string::npos) {
      std::string line = inbox_.substr(0, nl);
      inbox_.erase(0, nl + 1);
      return line;
    }
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining <= 0ms) {
      throw ResponseTimeout("no response from simulator within " + std::to_string(timeout.count()) + " ms");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw ChannelClosed("poll failed: " + errno_text(errno));
    }
    if (rc == 0) continue;
    char buf[4096];
    ssize_t n = ::read(from_child_, buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ChannelClosed("read from simulator failed: " + errno_text(errno));
    }
    if (n == 0) throw ChannelClosed("simulator closed its output");
    inbox_.append(buf, static_cast<std::size_t>(n));
  }
}

std::optional<std::string> ExternalSimulator::unsolicited_line(std::chrono::milliseconds wait) {
  try {
    return read_line(wait);
  } catch (const ResponseTimeout&) {
    return std::nullopt;
  }
}

void ExternalSimulator::do_reset(std::uint64_t seed) { send(wire::encode_reset(seed)); }

void ExternalSimulator::do_advance() { send(wire::encode_next()); }

double ExternalSimulator::do_observe(std::string_view name) {
  send(wire::encode_observe(name));
  std::string line = read_line(answered_once_ ? spec_.response_timeout : spec_.startup_timeout);
  answered_once_ = true;
  if (spec_.record_transcript) received_.push_back(line);
  auto value = wire::parse_response(line);
  if (!value) throw wire::MalformedResponse("malformed simulator response: '" + line + "'");
  if (*value == kUnknownObservableSentinel && sentinel_warned_.emplace(name).second) {
    warn("simulator answered the -1 sentinel for '" + std::string(name) + "'; it may not expose this observable");
  }
  return *value;
}

}  // namespace smcsweep::blackbox
