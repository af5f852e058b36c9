#include "smcsweep/blackbox/simulator.hpp"

#include "smcsweep/diagnostics.hpp"

namespace smcsweep::blackbox {

template <typename F>
auto Simulator::guarded(F&& f) {
  try {
    return f();
  } catch (const ProtocolMisuse&) {
    throw;
  } catch (const UnknownObservable&) {
    throw;
  } catch (...) {
    state_ = SimulatorState::failed;
    step_ = 0;
    throw;
  }
}

void Simulator::reset(std::uint64_t seed) {
  if (state_ == SimulatorState::failed) throw ProtocolMisuse("reset on a failed simulator handle");
  guarded([&] { do_reset(seed); });
  state_ = SimulatorState::in_run;
  step_ = 1;
}

void Simulator::advance() {
  if (state_ != SimulatorState::in_run) throw ProtocolMisuse("advance outside of a run (call reset first)");
  guarded([&] { do_advance(); });
  ++step_;
}

double Simulator::observe(std::string_view name) {
  if (state_ != SimulatorState::in_run) throw ProtocolMisuse("observe outside of a run (call reset first)");
  if (name == "steps") throw ProtocolMisuse("'steps' is answered by the engine and never forwarded");
  if (!declared_.empty() && !declared_.count(name)) {
    throw UnknownObservable("observable '" + std::string(name) + "' is not declared");
  }
  return guarded([&] { return do_observe(name); });
}

void Simulator::declare_observables(const std::vector<std::string>& names) {
  declared_.clear();
  declared_.insert(names.begin(), names.end());
}

InProcessSimulator::InProcessSimulator(std::unique_ptr<Model> model)
    : Simulator(SimulatorKind::in_process), model_(std::move(model)) {}

void InProcessSimulator::do_reset(std::uint64_t seed) {
  model_->initialize(seed);
  model_->step();
}

void InProcessSimulator::do_advance() { model_->step(); }

double InProcessSimulator::do_observe(std::string_view name) {
  if (auto v = model_->value(name)) return *v;
  if (warned_.emplace(name).second) {
    warn("model has no observable '" + std::string(name) + "'; returning sentinel -1");
  }
  return kUnknownObservableSentinel;
}

}  // namespace smcsweep::blackbox
