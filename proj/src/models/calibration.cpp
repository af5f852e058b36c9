#include "smcsweep/models/calibration.hpp"

#include <cmath>
#include <stdexcept>

namespace smcsweep::models {

void CounterModel::initialize(std::uint64_t) { count_ = 0; }

void CounterModel::step() { ++count_; }

std::optional<double> CounterModel::value(std::string_view name) const {
  if (name == "VAL") return static_cast<double>(count_);
  return std::nullopt;
}

BernoulliModel::BernoulliModel(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p must lie in [0, 1]");
}

void BernoulliModel::initialize(std::uint64_t seed) {
  rng_.reseed(seed);
  x_ = 0.0;
}

void BernoulliModel::step() { x_ = rng_.uniform() < p_ ? 1.0 : 0.0; }

std::optional<double> BernoulliModel::value(std::string_view name) const {
  if (name == "X") return x_;
  return std::nullopt;
}

GaussianModel::GaussianModel(double mu, double sd) : mu_(mu), sd_(sd) {
  if (!std::isfinite(mu)) throw std::invalid_argument("gaussian: mu must be finite");
  if (!(sd > 0.0) || !std::isfinite(sd)) throw std::invalid_argument("gaussian: sd must be positive");
}

void GaussianModel::initialize(std::uint64_t seed) {
  rng_.reseed(seed);
  x_ = mu_;
}

void GaussianModel::step() { x_ = mu_ + sd_ * rng_.normal(); }

std::optional<double> GaussianModel::value(std::string_view name) const {
  if (name == "X") return x_;
  return std::nullopt;
}

}  // namespace smcsweep::models
