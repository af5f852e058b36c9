#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smcsweep::blackbox {

class SimulatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke the reset/advance/observe contract (e.g. observe while idle).
class ProtocolMisuse : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

// Name not in the declared observable list; nothing was sent to the simulator.
class UnknownObservable : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

enum class SimulatorKind { in_process, external };
enum class SimulatorState { idle, in_run, failed };

// A driveable simulator: reset(seed) starts a run and performs step 1,
// advance() performs one more step, observe(name) reads an observable.
// The step counter is kept here, on the engine side; "steps" is never
// forwarded to the implementation.
class Simulator {
 public:
  virtual ~Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimulatorKind kind() const noexcept { return kind_; }
  SimulatorState state() const noexcept { return state_; }
  std::int64_t step() const noexcept { return step_; }

  void reset(std::uint64_t seed);
  void advance();
  double observe(std::string_view name);

  // Restricts observe() to the given names. An empty list lifts the restriction.
  void declare_observables(const std::vector<std::string>& names);

 protected:
  explicit Simulator(SimulatorKind kind) : kind_(kind) {}

  virtual void do_reset(std::uint64_t seed) = 0;
  virtual void do_advance() = 0;
  virtual double do_observe(std::string_view name) = 0;

 private:
  template <typename F>
  auto guarded(F&& f);

  SimulatorKind kind_;
  SimulatorState state_ = SimulatorState::idle;
  std::int64_t step_ = 0;
  std::set<std::string, std::less<>> declared_;
};

// In-process model contract. initialize() must not advance time; the wrapper
// performs the first step right after it.
class Model {
 public:
  virtual ~Model() = default;
  virtual void initialize(std::uint64_t seed) = 0;
  virtual void step() = 0;
  // nullopt for names the model does not expose.
  virtual std::optional<double> value(std::string_view name) const = 0;
  virtual std::vector<std::string> observables() const = 0;
};

class InProcessSimulator final : public Simulator {
 public:
  explicit InProcessSimulator(std::unique_ptr<Model> model);

  const Model& model() const { return *model_; }

 protected:
  void do_reset(std::uint64_t seed) override;
  void do_advance() override;
  // Unknown names yield the -1 sentinel plus a warning, like an external simulator would.
  double do_observe(std::string_view name) override;

 private:
  std::unique_ptr<Model> model_;
  std::set<std::string, std::less<>> warned_;
};

inline constexpr double kUnknownObservableSentinel = -1.0;

}  // namespace smcsweep::blackbox
