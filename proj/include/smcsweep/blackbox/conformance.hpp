#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "smcsweep/blackbox/external.hpp"

namespace smcsweep::blackbox {

struct ConformanceOptions {
  std::string observable = "X";  // a name the simulator is expected to know
  std::string unknown_observable = "__protocol_check_unknown__";
  std::uint64_t seed = 7;
  int steps = 5;
  // How long to wait for output that must not appear.
  std::chrono::milliseconds quiet_window{200};
  std::chrono::milliseconds exit_grace{std::chrono::seconds(5)};
};

struct ConformanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Drives the simulator through a fixed transcript suite: response framing,
// silence after reset/next, the -1 sentinel, reset determinism within and
// across processes, and clean exit at end of input.
std::vector<ConformanceCheck> check_conformance(const LaunchSpec& spec, const ConformanceOptions& options = {});

}  // namespace smcsweep::blackbox
