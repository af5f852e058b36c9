#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "smcsweep/diagnostics.hpp"
#include "smcsweep/models/calibration.hpp"
#include "smcsweep/models/registry.hpp"
#include "smcsweep/models/rng.hpp"
#include "smcsweep/models/switching.hpp"

using namespace smcsweep;
using namespace smcsweep::models;

namespace {

SwitchingState history(double x1, double x2, double anchor = 0.0, double ada = 0.0) {
  SwitchingState s;
  s.x_prev1 = x1;
  s.x_prev2 = x2;
  s.anchor = anchor;
  s.ada_memory = ada;
  return s;
}

double sum(const PerHeuristic& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

class SilenceWarnings {
 public:
  SilenceWarnings() : previous_(set_warning_sink([](const std::string&) {})) {}
  ~SilenceWarnings() { set_warning_sink(previous_); }

 private:
  WarningSink previous_;
};

}  // namespace

TEST(Forecast, Rules) {
  SwitchingParams p;
  const auto s = history(2.0, 1.0, 0.5, 1.5);
  EXPECT_DOUBLE_EQ(forecast(Heuristic::naive, s, p), 2.0);
  EXPECT_DOUBLE_EQ(forecast(Heuristic::adaptive, s, p), 1.5 + 0.65 * 0.5);
  EXPECT_DOUBLE_EQ(forecast(Heuristic::weak_trend, s, p), 2.4);
  EXPECT_DOUBLE_EQ(forecast(Heuristic::strong_trend, s, p), 3.3);
  EXPECT_DOUBLE_EQ(forecast(Heuristic::anchor_adjust, s, p), 0.5 * 0.5 + 0.5 * 2.0 + 1.0);
}

TEST(Forecast, AnchorAdjustPureAnchor) {
  SwitchingParams p;
  p.omega_aa = 1.0;
  const auto flat = history(3.0, 3.0, 0.25);
  EXPECT_DOUBLE_EQ(forecast(Heuristic::anchor_adjust, flat, p), 0.25);
}

TEST(Forecast, NeedsHistory) {
  SwitchingState s;
  s.history = 1;
  EXPECT_THROW(forecast(Heuristic::naive, s, SwitchingParams{}), std::logic_error);
}

TEST(Scores, Memory) {
  SwitchingState s;
  s.score = {-1.0, -2.0, -3.0, 0.0, 0.5};
  s.forecast = {1.0, 1.0, 1.0, 1.0, 1.0};
  SwitchingParams p;

  p.eta = 1.0;
  auto a = s;
  update_scores(a, p, 3.0);
  EXPECT_EQ(a.score, s.score);

  p.eta = 0.0;
  auto b = s;
  update_scores(b, p, 3.0);
  for (double u : b.score) EXPECT_DOUBLE_EQ(u, -4.0);

  p.eta = 0.7;
  auto c = s;
  c.score[0] = -1.0;
  update_scores(c, p, 3.0);
  EXPECT_NEAR(c.score[0], 0.7 * -1.0 - 0.3 * 4.0, 1e-15);
  EXPECT_NEAR(c.score[3], -1.2, 1e-15);
}

TEST(Logit, Limits) {
  const PerHeuristic scores{-1.0, -0.2, -3.0, -0.5, -2.0};
  for (double w : logit_weights(scores, 0.0)) EXPECT_DOUBLE_EQ(w, 0.2);
  const auto sharp = logit_weights(scores, 1e3);
  EXPECT_NEAR(sharp[1], 1.0, 1e-9);
  EXPECT_NEAR(sum(sharp), 1.0, 1e-12);
  const auto huge = logit_weights({-1e6, 0.0, -1e6, -1e6, -1e6}, 50.0);
  EXPECT_EQ(huge[1], 1.0);
}

TEST(Logit, AgainstDirectFormula) {
  const PerHeuristic scores{-0.3, -0.1, -0.7, -0.25, -0.05};
  const double beta = 2.5;
  double z = 0;
  for (double u : scores) z += std::exp(beta * u);
  const auto w = logit_weights(scores, beta);
  for (std::size_t h = 0; h < kHeuristicCount; ++h) EXPECT_NEAR(w[h], std::exp(beta * scores[h]) / z, 1e-15);
}

TEST(Switching, FullInertiaFreezesShares) {
  SwitchingParams p;
  p.delta_s = 1.0;
  SwitchingState s;
  s.score = {-5.0, 0.0, -1.0, -2.0, -3.0};
  s.share = {0.1, 0.2, 0.3, 0.15, 0.25};
  const auto before = s.share;
  switch_shares(s, p);
  for (std::size_t h = 0; h < kHeuristicCount; ++h) EXPECT_NEAR(s.share[h], before[h], 1e-15);
}

TEST(Switching, SharesStayOnSimplex) {
  Rng rng(99);
  for (int trial = 0; trial < 10000; ++trial) {
    SwitchingParams p;
    p.beta = rng.uniform() * 20.0;
    p.delta_s = rng.uniform();
    p.eta = rng.uniform();
    SwitchingState s;
    for (auto& u : s.score) u = -rng.uniform() * 10.0;
    PerHeuristic raw{};
    for (auto& v : raw) v = rng.uniform() + 1e-3;
    const double total = sum(raw);
    for (std::size_t h = 0; h < kHeuristicCount; ++h) s.share[h] = raw[h] / total;
    switch_shares(s, p);
    ASSERT_NEAR(sum(s.share), 1.0, 1e-12);
    for (double v : s.share) ASSERT_GE(v, 0.0);
  }
}

TEST(Switching, TrajectorySharesSumToOne) {
  SwitchingModel model(SwitchingParams{});
  model.initialize(5);
  for (int t = 0; t < 600; ++t) {
    model.step();
    double total = 0;
    for (int h = 1; h <= 5; ++h) total += *model.value("SHARE" + std::to_string(h));
    ASSERT_NEAR(total, 1.0, 1e-12);
    ASSERT_GE(*model.value("FERR"), 0.0);
  }
}

TEST(Switching, StationaryMeanNearZero) {
  // Zero-mean shocks and feedback below one: the long-run mean of x is 0.
  double grand = 0;
  const int seeds = 30;
  for (int seed = 1; seed <= seeds; ++seed) {
    SwitchingModel model(SwitchingParams{});
    model.initialize(static_cast<std::uint64_t>(seed));
    double acc = 0;
    for (int t = 0; t < 600; ++t) {
      model.step();
      if (t >= 100) acc += *model.value("X");
    }
    grand += acc / 500.0;
  }
  EXPECT_NEAR(grand / seeds, 0.0, 0.05);
}

TEST(Switching, DeterministicPerSeed) {
  SwitchingModel a(SwitchingParams{}), b(SwitchingParams{});
  a.initialize(42);
  b.initialize(42);
  for (int t = 0; t < 100; ++t) {
    a.step();
    b.step();
  }
  EXPECT_EQ(*a.value("X"), *b.value("X"));
  b.initialize(43);
  b.step();
  a.initialize(42);
  a.step();
  EXPECT_NE(*a.value("X"), *b.value("X"));
}

TEST(Switching, ParamValidation) {
  SwitchingParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE(p.set("beta", 2.0));
  EXPECT_EQ(p.beta, 2.0);
  EXPECT_FALSE(p.set("gamma", 1.0));
  p.set("delta_s", 1.5);
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.set("feedback", 1.0);
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  EXPECT_THROW(p.set("n_agents", 1.5), std::invalid_argument);
  p.feedback = 1.0;
  EXPECT_THROW(SwitchingModel{p}, std::invalid_argument);
}

TEST(InProcess, UnknownObservableSentinel) {
  SilenceWarnings quiet;
  auto sim = make_simulator(parse_model_spec("switching"));
  sim->reset(1);
  EXPECT_EQ(sim->observe("BOGUS"), -1.0);
}

TEST(Calibration, BernoulliSupport) {
  BernoulliModel m(0.3);
  m.initialize(11);
  int ones = 0;
  for (int i = 0; i < 10000; ++i) {
    m.step();
    const double x = *m.value("X");
    ASSERT_TRUE(x == 0.0 || x == 1.0);
    ones += x == 1.0;
  }
  EXPECT_NEAR(ones / 10000.0, 0.3, 0.02);
  EXPECT_THROW(BernoulliModel(1.5), std::invalid_argument);
}

TEST(Calibration, GaussianMoments) {
  GaussianModel m(2.0, 0.5);
  m.initialize(3);
  double s = 0, s2 = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    m.step();
    const double x = *m.value("X");
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  EXPECT_NEAR(mean, 2.0, 0.02);
  EXPECT_NEAR(std::sqrt(s2 / n - mean * mean), 0.5, 0.02);
}

TEST(Calibration, CounterValue) {
  auto sim = make_simulator(parse_model_spec("counter"));
  sim->reset(9);
  EXPECT_EQ(sim->observe("VAL"), 1.0);
  sim->advance();
  sim->advance();
  EXPECT_EQ(sim->observe("VAL"), 3.0);
}

TEST(Registry, Specs) {
  EXPECT_EQ(parse_model_spec("gaussian:0,1").params.at("sd"), 1.0);
  EXPECT_EQ(parse_model_spec("switching:beta=0.2,eta=0.5").params.at("eta"), 0.5);
  EXPECT_THROW(parse_model_spec("nosuch"), std::invalid_argument);
  EXPECT_THROW(parse_model_spec("bernoulli:x"), std::invalid_argument);
  EXPECT_THROW(parse_model_spec("switching:gamma=1"), std::invalid_argument);
  auto spec = parse_model_spec("switching");
  spec.set("beta", 0.8);
  EXPECT_THROW(spec.set("gamma", 1.0), std::invalid_argument);
  const auto model = make_model(spec);
  EXPECT_EQ(dynamic_cast<const SwitchingModel&>(*model).params().beta, 0.8);
  EXPECT_EQ(parse_model_spec(spec.to_string()).params, spec.params);
}

TEST(Rng, Reproducible) {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
  a.reseed(5);
  b.reseed(5);
  EXPECT_EQ(a.normal(), b.normal());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
