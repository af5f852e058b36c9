#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "smcsweep/blackbox/simulator.hpp"
#include "smcsweep/models/rng.hpp"

namespace smcsweep::models {

// Forecasting rules in SHARE1..SHARE5 order.
enum class Heuristic : std::size_t { naive, adaptive, weak_trend, strong_trend, anchor_adjust };
inline constexpr std::size_t kHeuristicCount = 5;
using PerHeuristic = std::array<double, kHeuristicCount>;

// Expectation-feedback economy with discrete-choice switching among five
// forecasting rules. Defaults are the within-sweep baseline values.
struct SwitchingParams {
  double beta = 0.4;       // intensity of choice
  double delta_s = 0.7;    // inertia of population shares
  double eta = 0.7;        // memory of performance scores
  double omega_ada = 0.65;
  double omega_wtr = 0.4;
  double omega_str = 1.3;
  double omega_aa = 0.5;
  double feedback = 0.9;   // aggregate response to the mean forecast
  double noise_sd = 0.1;
  // Independent forecaster populations averaged into the aggregate; the shock
  // standard deviation scales as noise_sd / sqrt(n_agents).
  std::int64_t n_agents = 1;

  // Throws std::invalid_argument on range violations.
  void validate() const;
  // Sets a parameter by its sweep name; returns false for unknown names.
  bool set(std::string_view name, double value);
};

struct SwitchingState {
  double x_prev1 = 0.0;  // x_{t-1}
  double x_prev2 = 0.0;  // x_{t-2}
  double anchor = 0.0;   // running mean of every outcome so far
  std::uint64_t history = 2;
  double ada_memory = 0.0;  // previous adaptive forecast
  PerHeuristic score{};
  PerHeuristic share{0.2, 0.2, 0.2, 0.2, 0.2};
  PerHeuristic forecast{};  // forecasts made for the current step
  double x = 0.0;           // latest outcome
  double ferr = 0.0;        // share-weighted squared forecast error of the latest step
};

// Throws std::logic_error when fewer than two past outcomes exist.
double forecast(Heuristic h, const SwitchingState& state, const SwitchingParams& params);

// U_h <- eta * U_h - (1 - eta) * (realized - forecast_h)^2, using state.forecast.
void update_scores(SwitchingState& state, const SwitchingParams& params, double realized);

// Logit weights exp(beta U_h) / sum_k exp(beta U_k), with max-score subtraction.
PerHeuristic logit_weights(const PerHeuristic& scores, double beta);

// n_h <- delta_s n_h + (1 - delta_s) logit_h, renormalized to sum 1.
void switch_shares(SwitchingState& state, const SwitchingParams& params);

// Forecast, realize x_t, score, switch, roll the history.
void switching_step(SwitchingState& state, const SwitchingParams& params, Rng& rng);

// Observables: X, FERR, SHARE1..SHARE5.
class SwitchingModel final : public blackbox::Model {
 public:
  explicit SwitchingModel(SwitchingParams params);

  void initialize(std::uint64_t seed) override;
  void step() override;
  std::optional<double> value(std::string_view name) const override;
  std::vector<std::string> observables() const override;

  const SwitchingState& state() const { return state_; }
  const SwitchingParams& params() const { return params_; }

 private:
  SwitchingParams params_;
  SwitchingState state_;
  Rng rng_;
};

}  // namespace smcsweep::models
