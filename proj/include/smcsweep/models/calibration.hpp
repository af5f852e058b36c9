#pragma once

#include <cstdint>

#include "smcsweep/blackbox/simulator.hpp"
#include "smcsweep/models/rng.hpp"

namespace smcsweep::models {

// Deterministic: VAL equals the step number (1 right after reset).
class CounterModel final : public blackbox::Model {
 public:
  void initialize(std::uint64_t seed) override;
  void step() override;
  std::optional<double> value(std::string_view name) const override;
  std::vector<std::string> observables() const override { return {"VAL"}; }

 private:
  std::int64_t count_ = 0;
};

// X is a fresh Bernoulli(p) draw at every step.
class BernoulliModel final : public blackbox::Model {
 public:
  explicit BernoulliModel(double p);

  void initialize(std::uint64_t seed) override;
  void step() override;
  std::optional<double> value(std::string_view name) const override;
  std::vector<std::string> observables() const override { return {"X"}; }

 private:
  double p_;
  Rng rng_;
  double x_ = 0.0;
};

// X is a fresh N(mu, sd^2) draw at every step.
class GaussianModel final : public blackbox::Model {
 public:
  GaussianModel(double mu, double sd);

  void initialize(std::uint64_t seed) override;
  void step() override;
  std::optional<double> value(std::string_view name) const override;
  std::vector<std::string> observables() const override { return {"X"}; }

 private:
  double mu_;
  double sd_;
  Rng rng_;
  double x_ = 0.0;
};

}  // namespace smcsweep::models
