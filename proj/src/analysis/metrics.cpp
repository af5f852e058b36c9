#include "smcsweep/analysis/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "smcsweep/stats/t_dist.hpp"

namespace smcsweep::analysis {

std::string_view to_string(SignificanceTest t) {
  return t == SignificanceTest::z_test ? "z" : "ci-overlap";
}

SignificanceTest parse_significance_test(std::string_view text) {
  if (text == "z") return SignificanceTest::z_test;
  if (text == "ci-overlap") return SignificanceTest::ci_non_overlap;
  throw std::invalid_argument("unknown significance test '" + std::string(text) + "' (expected z or ci-overlap)");
}

std::string_view to_string(Tradeoff t) {
  switch (t) {
    case Tradeoff::win_win: return "win-win";
    case Tradeoff::mixed: return "mixed";
    case Tradeoff::lose_lose: return "lose-lose";
  }
  return "mixed";
}

std::string point_label(std::size_t index) { return "p" + std::to_string(index + 1); }

double recovered_sd(const PointEstimate& p, double alpha) {
  if (p.n < 2) throw std::invalid_argument("point estimate needs n >= 2");
  if (p.half_width == 0.0) return 0.0;
  const double t = stats::t_quantile(1.0 - alpha / 2.0, p.n - 1);
  return p.half_width * std::sqrt(static_cast<double>(p.n)) / t;
}

bool significant_pair(const PointEstimate& a, const PointEstimate& b, double alpha, SignificanceTest test) {
  if (a.step != b.step) {
    throw std::invalid_argument("significance test across different steps (" + std::to_string(a.step) + " vs " +
                                std::to_string(b.step) + ")");
  }
  const double diff = std::abs(a.mean - b.mean);
  if (test == SignificanceTest::ci_non_overlap) return diff > a.half_width + b.half_width;
  const double sa = recovered_sd(a, alpha);
  const double sb = recovered_sd(b, alpha);
  const double se = std::sqrt(sa * sa / static_cast<double>(a.n) + sb * sb / static_cast<double>(b.n));
  return diff > stats::z_quantile(1.0 - alpha / 2.0) * se;
}

namespace {

std::size_t check_grid(const std::vector<Trajectory>& points) {
  if (points.empty()) throw std::invalid_argument("no sweep points");
  const std::size_t g = points.front().size();
  for (const auto& t : points) {
    if (t.size() != g) throw std::invalid_argument("sweep points do not share the evaluation grid");
    for (std::size_t s = 0; s < g; ++s) {
      if (t[s].step != points.front()[s].step) {
        throw std::invalid_argument("sweep points do not share the evaluation grid");
      }
    }
  }
  return g;
}

std::size_t pair_total(std::size_t k) { return k * (k - 1) / 2; }

}  // namespace

std::vector<std::vector<bool>> significance_matrix(const std::vector<Trajectory>& points, std::size_t step_index,
                                                   double alpha, SignificanceTest test) {
  const std::size_t g = check_grid(points);
  if (step_index >= g) throw std::out_of_range("step index outside the grid");
  const std::size_t k = points.size();
  std::vector<std::vector<bool>> m(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      m[i][j] = m[j][i] = significant_pair(points[i][step_index], points[j][step_index], alpha, test);
    }
  }
  return m;
}

PairCount final_diff_count(const std::vector<Trajectory>& points, double alpha, SignificanceTest test) {
  const std::size_t g = check_grid(points);
  if (g == 0) throw std::invalid_argument("empty evaluation grid");
  const auto m = significance_matrix(points, g - 1, alpha, test);
  PairCount c{0, pair_total(points.size())};
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) c.significant += m[i][j];
  }
  return c;
}

std::size_t tail_window(std::size_t grid_length, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("tail fraction must lie in (0, 1]");
  // Products that are integral up to rounding error are not rounded up.
  const double raw = fraction * static_cast<double>(grid_length);
  const double nearest = std::round(raw);
  const std::size_t w =
      std::abs(raw - nearest) < 1e-9 ? static_cast<std::size_t>(nearest) : static_cast<std::size_t>(std::ceil(raw));
  return std::min(grid_length, std::max<std::size_t>(1, w));
}

TailMetrics tail_metrics(const std::vector<Trajectory>& points, double alpha, double tail_fraction,
                         SignificanceTest test) {
  const std::size_t g = check_grid(points);
  if (g == 0) throw std::invalid_argument("empty tail window");
  TailMetrics out;
  out.window = tail_window(g, tail_fraction);
  const std::size_t k = points.size();
  const std::size_t first = g - out.window;
  out.total_pairs = pair_total(k);

  for (const auto& t : points) {
    double sum = 0.0;
    for (std::size_t s = first; s < g; ++s) sum += t[s].mean;
    out.tail_means.push_back(sum / static_cast<double>(out.window));
  }

  std::vector<std::vector<std::size_t>> hits(k, std::vector<std::size_t>(k, 0));
  double share_sum = 0.0;
  for (std::size_t s = first; s < g; ++s) {
    const auto m = significance_matrix(points, s, alpha, test);
    std::size_t sig = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (m[i][j]) {
          ++sig;
          ++hits[i][j];
        }
      }
    }
    if (out.total_pairs > 0) share_sum += static_cast<double>(sig) / static_cast<double>(out.total_pairs);
  }
  out.tail_diff_share = share_sum / static_cast<double>(out.window);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) out.tail_majority += 2 * hits[i][j] >= out.window;
  }
  return out;
}

BestPoint best_tail_point(const std::vector<double>& tail_means, Direction direction) {
  if (tail_means.empty()) throw std::invalid_argument("no sweep points");
  std::size_t best = 0;
  for (std::size_t i = 1; i < tail_means.size(); ++i) {
    const bool better = direction == Direction::lower_is_better ? tail_means[i] < tail_means[best]
                                                                : tail_means[i] > tail_means[best];
    if (better) best = i;
  }
  return {best, point_label(best), tail_means[best]};
}

Tradeoff classify_tradeoff(const std::map<std::string, double>& point_tail_means,
                           const std::map<std::string, double>& baseline_tail_means, const std::string& good,
                           const std::string& bad) {
  auto get = [](const std::map<std::string, double>& m, const std::string& name, const char* which) {
    auto it = m.find(name);
    if (it == m.end()) throw std::invalid_argument(std::string(which) + " has no tail mean for '" + name + "'");
    return it->second;
  };
  const double pg = get(point_tail_means, good, "sweep point");
  const double pb = get(point_tail_means, bad, "sweep point");
  const double bg = get(baseline_tail_means, good, "baseline");
  const double bb = get(baseline_tail_means, bad, "baseline");
  if (pg > bg && pb < bb) return Tradeoff::win_win;
  if (pg < bg && pb > bb) return Tradeoff::lose_lose;
  return Tradeoff::mixed;
}

}  // namespace smcsweep::analysis
