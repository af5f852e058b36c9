#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "smcsweep/blackbox/conformance.hpp"
#include "smcsweep/blackbox/external.hpp"
#include "smcsweep/blackbox/wire.hpp"
#include "smcsweep/diagnostics.hpp"

using namespace smcsweep;
using namespace smcsweep::blackbox;
using namespace std::chrono_literals;

namespace {

LaunchSpec line_sim(std::vector<std::string> args = {}) {
  LaunchSpec spec;
  spec.executable = LINE_SIM_PATH;
  spec.args = std::move(args);
  spec.startup_timeout = 5s;
  spec.response_timeout = 5s;
  return spec;
}

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "smcsweep_external_test";
  std::filesystem::create_directories(dir);
  auto p = dir / (name + "_" + std::to_string(::getpid()));
  std::filesystem::remove(p);
  return p;
}

std::vector<std::string> lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(LaunchSpec, ArgvCarriesExperimentFlags) {
  LaunchSpec spec = line_sim({"--foo"});
  spec.experiment_id = 2;
  spec.param_index = 1;
  EXPECT_EQ(spec.argv(),
            (std::vector<std::string>{LINE_SIM_PATH, "--foo", "-experimentMV", "2", "-numMCexpMV", "1"}));
}

TEST(LaunchSpec, Validation) {
  LaunchSpec spec = line_sim();
  spec.response_timeout = 0ms;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = line_sim();
  spec.executable.clear();
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(External, ChildSeesFlags) {
  const auto dump = temp_path("argv");
  LaunchSpec spec = line_sim({"--argv-dump", dump.string()});
  spec.experiment_id = 2;
  spec.param_index = 1;
  {
    auto sim = spawn_external(spec);
    sim->reset(1);
    sim->observe("X");  // synchronizes: the dump is written before the first response
  }
  const auto got = lines(dump);
  EXPECT_EQ(got, (std::vector<std::string>{"--argv-dump", dump.string(), "-experimentMV", "2", "-numMCexpMV", "1"}));
}

TEST(External, NonexistentExecutable) {
  LaunchSpec spec = line_sim();
  spec.executable = "/nonexistent/simulator-binary";
  EXPECT_THROW(spawn_external(spec), SpawnFailure);
}

TEST(External, ObserveBeforeResetIsMisuse) {
  auto sim = spawn_external(line_sim());
  EXPECT_EQ(sim->state(), SimulatorState::idle);
  EXPECT_EQ(sim->step(), 0);
  EXPECT_THROW(sim->observe("X"), ProtocolMisuse);
  EXPECT_THROW(sim->advance(), ProtocolMisuse);
  EXPECT_EQ(sim->state(), SimulatorState::idle);
}

TEST(External, WireTranscript) {
  const auto log = temp_path("log");
  LaunchSpec spec = line_sim({"--log", log.string()});
  spec.record_transcript = true;
  auto sim = spawn_external(spec);
  sim->reset(42);
  EXPECT_EQ(sim->step(), 1);
  sim->advance();
  sim->advance();
  EXPECT_EQ(sim->step(), 3);
  EXPECT_EQ(sim->observe("T"), 3.0);
  EXPECT_EQ(sim->sent(), (std::vector<std::string>{"reset 42", "next", "next", "T"}));
  ASSERT_EQ(sim->received().size(), 1u);
  EXPECT_EQ(sim->received()[0], "OUTPUTMV:3");
  EXPECT_EQ(sim->shutdown(2s), 0);
  EXPECT_EQ(lines(log), (std::vector<std::string>{"reset 42", "next", "next", "T"}));
}

TEST(External, SameSeedSameSequence) {
  auto sim = spawn_external(line_sim());
  auto trace = [&] {
    std::vector<double> v;
    sim->reset(7);
    for (int i = 0; i < 20; ++i) {
      v.push_back(sim->observe("X"));
      sim->advance();
    }
    return v;
  };
  const auto a = trace();
  EXPECT_EQ(trace(), a);
}

TEST(External, SentinelIsReturnedWithWarning) {
  std::vector<std::string> warnings;
  auto previous = set_warning_sink([&](const std::string& m) { warnings.push_back(m); });
  auto sim = spawn_external(line_sim());
  sim->reset(1);
  EXPECT_EQ(sim->observe("BOGUS"), -1.0);
  EXPECT_EQ(sim->observe("BOGUS"), -1.0);
  set_warning_sink(previous);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("BOGUS"), std::string::npos);
}

TEST(External, DeclaredObservablesCheckedClientSide) {
  const auto log = temp_path("declared");
  auto sim = spawn_external(line_sim({"--log", log.string()}));
  sim->declare_observables({"X"});
  sim->reset(1);
  EXPECT_THROW(sim->observe("BOGUS"), UnknownObservable);
  EXPECT_EQ(sim->state(), SimulatorState::in_run);
  EXPECT_NO_THROW(sim->observe("X"));
  EXPECT_THROW(sim->observe("steps"), ProtocolMisuse);
  sim->shutdown(2s);
  EXPECT_EQ(lines(log), (std::vector<std::string>{"reset 1", "X"}));
}

TEST(External, ResponseTimeout) {
  LaunchSpec spec = line_sim({"--silent"});
  spec.startup_timeout = 200ms;
  auto sim = spawn_external(spec);
  sim->reset(1);
  EXPECT_THROW(sim->observe("X"), ResponseTimeout);
  EXPECT_EQ(sim->state(), SimulatorState::failed);
  EXPECT_THROW(sim->reset(2), ProtocolMisuse);
}

TEST(External, StartupTimeoutOnlyForFirstResponse) {
  LaunchSpec spec = line_sim({"--slow-start-ms", "300"});
  spec.startup_timeout = 3s;
  spec.response_timeout = 100ms;
  auto sim = spawn_external(spec);
  sim->reset(1);
  EXPECT_NO_THROW(sim->observe("X"));
  EXPECT_NO_THROW(sim->observe("X"));
}

TEST(External, MalformedResponse) {
  auto sim = spawn_external(line_sim({"--garbage-after", "1"}));
  sim->reset(1);
  EXPECT_NO_THROW(sim->observe("X"));
  EXPECT_THROW(sim->observe("X"), wire::MalformedResponse);
  EXPECT_EQ(sim->state(), SimulatorState::failed);
}

TEST(External, CrashSurfacesAsChannelClosed) {
  auto sim = spawn_external(line_sim({"--crash-after", "1"}));
  sim->reset(1);
  EXPECT_NO_THROW(sim->observe("X"));
  EXPECT_THROW(sim->observe("X"), ChannelClosed);
  EXPECT_EQ(sim->state(), SimulatorState::failed);
}

TEST(External, WritesAfterChildExitDoNotKillUs) {
  auto sim = spawn_external(line_sim({"--crash-after", "0"}));
  sim->reset(1);
  EXPECT_THROW(sim->observe("X"), SimulatorError);
}

TEST(External, ShutdownExitStatus) {
  auto sim = spawn_external(line_sim({"--exit-code", "4"}));
  sim->reset(1);
  EXPECT_EQ(sim->shutdown(2s), 4);
}

TEST(External, ShutdownKillsStuckChild) {
  auto sim = spawn_external(line_sim({"--ignore-eof"}));
  const auto started = std::chrono::steady_clock::now();
  EXPECT_EQ(sim->shutdown(300ms), std::nullopt);
  EXPECT_LT(std::chrono::steady_clock::now() - started, 3s);
}

TEST(Conformance, LineSimConforms) {
  auto previous = set_warning_sink([](const std::string&) {});
  const auto checks = check_conformance(line_sim());
  set_warning_sink(previous);
  ASSERT_GE(checks.size(), 7u);
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(Conformance, ChattySimulatorFails) {
  auto previous = set_warning_sink([](const std::string&) {});
  const auto checks = check_conformance(line_sim({"--chatty"}));
  set_warning_sink(previous);
  bool silent_failed = false;
  for (const auto& c : checks) {
    if (c.name == "silent-commands") silent_failed = !c.passed;
  }
  EXPECT_TRUE(silent_failed);
}

TEST(Conformance, MissingBinaryFailsLaunch) {
  LaunchSpec spec = line_sim();
  spec.executable = "/nonexistent/simulator-binary";
  const auto checks = check_conformance(spec);
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_FALSE(checks[0].passed);
}
