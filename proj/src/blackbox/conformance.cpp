#include "smcsweep/blackbox/conformance.hpp"

#include <regex>

#include "smcsweep/csv.hpp"

namespace smcsweep::blackbox {

namespace {

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + csv::format_double(x);
  return out;
}

// reset, observe, then (next, observe) repeated; checks silence along the way.
std::vector<double> trace(ExternalSimulator& sim, const ConformanceOptions& o, std::string* stray) {
  std::vector<double> values;
  sim.reset(o.seed);
  if (auto line = sim.unsolicited_line(o.quiet_window); line && stray->empty()) *stray = "after reset: '" + *line + "'";
  values.push_back(sim.observe(o.observable));
  for (int k = 1; k < o.steps; ++k) {
    sim.advance();
    if (auto line = sim.unsolicited_line(k == 1 ? o.quiet_window : std::chrono::milliseconds(0));
        line && stray->empty()) {
      *stray = "after next: '" + *line + "'";
    }
    values.push_back(sim.observe(o.observable));
  }
  return values;
}

}  // namespace

std::vector<ConformanceCheck> check_conformance(const LaunchSpec& base, const ConformanceOptions& o) {
  std::vector<ConformanceCheck> checks;
  auto record = [&](std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
    return ok;
  };

  LaunchSpec spec = base;
  spec.record_transcript = true;

  std::unique_ptr<ExternalSimulator> sim;
  try {
    sim = spawn_external(spec);
  } catch (const std::exception& e) {
    record("launch", false, e.what());
    return checks;
  }
  record("launch", true, "pid " + std::to_string(sim->pid()));

  std::vector<double> first;
  std::string stray;
  try {
    first = trace(*sim, o, &stray);
  } catch (const std::exception& e) {
    record("framing", false, e.what());
    return checks;
  }

  static const std::regex form(R"(OUTPUTMV:-?[0-9.eE+-]+)");
  std::string bad_line;
  for (const auto& line : sim->received()) {
    if (!std::regex_match(line, form)) bad_line = line;
  }
  record("framing", bad_line.empty(),
         bad_line.empty() ? std::to_string(sim->received().size()) + " responses, values " + join(first)
                          : "irregular response line '" + bad_line + "'");
  record("silent-commands", stray.empty(), stray.empty() ? "no output after reset/next" : "unsolicited output " + stray);

  try {
    const double v = sim->observe(o.unknown_observable);
    record("unknown-sentinel", v == kUnknownObservableSentinel, "answered " + csv::format_double(v));
  } catch (const std::exception& e) {
    record("unknown-sentinel", false, e.what());
  }

  try {
    std::string stray2;
    auto again = trace(*sim, o, &stray2);
    record("reset-restarts", again == first, again == first ? "" : "second reset gave " + join(again));
  } catch (const std::exception& e) {
    record("reset-restarts", false, e.what());
  }

  const auto status = sim->shutdown(o.exit_grace);
  record("eof-shutdown", status && *status == 0,
         status ? "exit status " + std::to_string(*status) : "did not exit cleanly at end of input");

  try {
    auto fresh = spawn_external(spec);
    std::string stray3;
    auto values = trace(*fresh, o, &stray3);
    record("cross-process-determinism", values == first, values == first ? "" : "fresh process gave " + join(values));
  } catch (const std::exception& e) {
    record("cross-process-determinism", false, e.what());
  }
  return checks;
}

}  // namespace smcsweep::blackbox
