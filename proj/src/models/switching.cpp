#include "smcsweep/models/switching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smcsweep::models {

void SwitchingParams::validate() const {
  const auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string("switching: ") + name + " must lie in [0, 1]");
  };
  const auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("switching: ") + name + " must be >= 0");
  };
  nonneg(beta, "beta");
  unit(delta_s, "delta_s");
  unit(eta, "eta");
  nonneg(omega_ada, "omega_ada");
  nonneg(omega_wtr, "omega_wtr");
  nonneg(omega_str, "omega_str");
  unit(omega_aa, "omega_aa");
  if (!(feedback > 0.0 && feedback < 1.0)) throw std::invalid_argument("switching: feedback must lie in (0, 1)");
  if (!(noise_sd > 0.0) || !std::isfinite(noise_sd)) throw std::invalid_argument("switching: noise_sd must be > 0");
  if (n_agents < 1) throw std::invalid_argument("switching: n_agents must be >= 1");
}

bool SwitchingParams::set(std::string_view name, double value) {
  if (name == "beta") beta = value;
  else if (name == "delta_s") delta_s = value;
  else if (name == "eta") eta = value;
  else if (name == "omega_ada") omega_ada = value;
  else if (name == "omega_wtr") omega_wtr = value;
  else if (name == "omega_str") omega_str = value;
  else if (name == "omega_aa") omega_aa = value;
  else if (name == "feedback") feedback = value;
  else if (name == "noise_sd") noise_sd = value;
  else if (name == "n_agents") {
    if (value != std::floor(value)) throw std::invalid_argument("switching: n_agents must be an integer");
    n_agents = static_cast<std::int64_t>(value);
  } else {
    return false;
  }
  return true;
}

double forecast(Heuristic h, const SwitchingState& s, const SwitchingParams& p) {
  if (s.history < 2) throw std::logic_error("forecast needs at least two past outcomes");
  const double trend = s.x_prev1 - s.x_prev2;
  switch (h) {
    case Heuristic::naive: return s.x_prev1;
    case Heuristic::adaptive: return s.ada_memory + p.omega_ada * (s.x_prev1 - s.ada_memory);
    case Heuristic::weak_trend: return s.x_prev1 + p.omega_wtr * trend;
    case Heuristic::strong_trend: return s.x_prev1 + p.omega_str * trend;
    case Heuristic::anchor_adjust: return p.omega_aa * s.anchor + (1.0 - p.omega_aa) * s.x_prev1 + trend;
  }
  return 0.0;
}

void update_scores(SwitchingState& s, const SwitchingParams& p, double realized) {
  for (std::size_t h = 0; h < kHeuristicCount; ++h) {
    const double err = realized - s.forecast[h];
    s.score[h] = p.eta * s.score[h] - (1.0 - p.eta) * err * err;
  }
}

PerHeuristic logit_weights(const PerHeuristic& scores, double beta) {
  const double top = *std::max_element(scores.begin(), scores.end());
  PerHeuristic w{};
  double total = 0.0;
  for (std::size_t h = 0; h < kHeuristicCount; ++h) {
    w[h] = std::exp(beta * (scores[h] - top));
    total += w[h];
  }
  for (auto& v : w) v /= total;
  return w;
}

void switch_shares(SwitchingState& s, const SwitchingParams& p) {
  const PerHeuristic logit = logit_weights(s.score, p.beta);
  double total = 0.0;
  for (std::size_t h = 0; h < kHeuristicCount; ++h) {
    s.share[h] = p.delta_s * s.share[h] + (1.0 - p.delta_s) * logit[h];
    total += s.share[h];
  }
  for (auto& v : s.share) v /= total;
}

void switching_step(SwitchingState& s, const SwitchingParams& p, Rng& rng) {
  for (std::size_t h = 0; h < kHeuristicCount; ++h) s.forecast[h] = forecast(static_cast<Heuristic>(h), s, p);

  const double expectation = std::inner_product(s.share.begin(), s.share.end(), s.forecast.begin(), 0.0);
  const double shock_sd = p.noise_sd / std::sqrt(static_cast<double>(p.n_agents));
  const double x = p.feedback * expectation + shock_sd * rng.normal();

  double ferr = 0.0;
  for (std::size_t h = 0; h < kHeuristicCount; ++h) {
    const double err = x - s.forecast[h];
    ferr += s.share[h] * err * err;
  }

  update_scores(s, p, x);
  switch_shares(s, p);

  s.ada_memory = s.forecast[static_cast<std::size_t>(Heuristic::adaptive)];
  s.x_prev2 = s.x_prev1;
  s.x_prev1 = x;
  ++s.history;
  s.anchor += (x - s.anchor) / static_cast<double>(s.history);
  s.x = x;
  s.ferr = ferr;
}

SwitchingModel::SwitchingModel(SwitchingParams params) : params_(params) { params_.validate(); }

void SwitchingModel::initialize(std::uint64_t seed) {
  state_ = SwitchingState{};
  rng_.reseed(seed);
}

void SwitchingModel::step() { switching_step(state_, params_, rng_); }

std::optional<double> SwitchingModel::value(std::string_view name) const {
  if (name == "X") return state_.x;
  if (name == "FERR") return state_.ferr;
  if (name.size() == 6 && name.substr(0, 5) == "SHARE" && name[5] >= '1' && name[5] <= '5') {
    return state_.share[static_cast<std::size_t>(name[5] - '1')];
  }
  return std::nullopt;
}

std::vector<std::string> SwitchingModel::observables() const {
  return {"X", "FERR", "SHARE1", "SHARE2", "SHARE3", "SHARE4", "SHARE5"};
}

}  // namespace smcsweep::models
