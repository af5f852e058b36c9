#pragma once

// Brute-force reference for the sweep metrics. Shares no code with the
// library: quantiles come from numerical integration and bisection.

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <random>
#include <vector>

#include "oracles.hpp"

namespace oracle {

struct Est {
  std::int64_t step;
  double mean;
  double hw;
  std::uint64_t n;
};
using Traj = std::vector<Est>;

inline double normal_quantile(double p) {
  double lo = 0, hi = 10;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// The integration is slow, so quantiles are memoized per (p, dof).
inline double cached_t(double p, std::uint64_t dof) {
  static std::map<std::pair<double, std::uint64_t>, double> cache;
  auto [it, fresh] = cache.try_emplace({p, dof}, 0.0);
  if (fresh) it->second = t_quantile(p, static_cast<double>(dof));
  return it->second;
}

inline double cached_z(double p) {
  static std::map<double, double> cache;
  auto [it, fresh] = cache.try_emplace(p, 0.0);
  if (fresh) it->second = normal_quantile(p);
  return it->second;
}

inline bool separated(const Est& a, const Est& b, double alpha) {
  const double t_a = cached_t(1 - alpha / 2, a.n - 1);
  const double t_b = cached_t(1 - alpha / 2, b.n - 1);
  const double sa = a.hw * std::sqrt(static_cast<double>(a.n)) / t_a;
  const double sb = b.hw * std::sqrt(static_cast<double>(b.n)) / t_b;
  const double se = std::sqrt(sa * sa / a.n + sb * sb / b.n);
  return std::abs(a.mean - b.mean) > cached_z(1 - alpha / 2) * se;
}

struct Counts {
  std::size_t final_sig = 0;
  std::size_t pairs = 0;
  std::size_t window = 0;
  double share = 0;
  std::size_t majority = 0;
  std::vector<double> tail_means;
};

inline Counts enumerate(const std::vector<Traj>& pts, double alpha, double frac) {
  Counts c;
  const std::size_t k = pts.size(), g = pts[0].size();
  // Smallest w with w >= frac * g, counted up in integers.
  while (static_cast<double>(c.window) < frac * static_cast<double>(g) - 1e-9) ++c.window;
  if (c.window == 0) c.window = 1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i < j) ++c.pairs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) c.final_sig += separated(pts[i][g - 1], pts[j][g - 1], alpha);
  for (const auto& t : pts) {
    double s = 0;
    for (std::size_t x = g - c.window; x < g; ++x) s += t[x].mean;
    c.tail_means.push_back(s / static_cast<double>(c.window));
  }
  double share = 0;
  for (std::size_t x = g - c.window; x < g; ++x) {
    std::size_t sig = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) sig += separated(pts[i][x], pts[j][x], alpha);
    share += c.pairs ? static_cast<double>(sig) / static_cast<double>(c.pairs) : 0.0;
  }
  c.share = share / static_cast<double>(c.window);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      std::size_t hits = 0;
      for (std::size_t x = g - c.window; x < g; ++x) hits += separated(pts[i][x], pts[j][x], alpha);
      if (static_cast<double>(hits) >= static_cast<double>(c.window) / 2.0) ++c.majority;
    }
  return c;
}

// k sweep points over g steps. At each step every point joins one of a few
// clusters: points in one cluster share a mean, distinct clusters sit 10
// combined standard errors apart, so every pair is clearly separated or
// clearly not.
inline std::vector<Traj> clustered(std::size_t k, std::size_t g, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const double hw = 0.02;
  const std::uint64_t n = 100;
  const double s = hw * std::sqrt(static_cast<double>(n)) / cached_t(0.975, n - 1);
  const double gap = 10 * std::sqrt(2 * s * s / n);
  std::uniform_int_distribution<int> clusters(1, static_cast<int>(k));
  std::vector<Traj> pts(k);
  for (std::size_t x = 0; x < g; ++x) {
    const int m = clusters(gen);
    std::uniform_int_distribution<int> pick(0, m - 1);
    for (std::size_t i = 0; i < k; ++i) {
      pts[i].push_back({101 + 10 * static_cast<std::int64_t>(x), 0.5 + gap * pick(gen), hw, n});
    }
  }
  return pts;
}

}  // namespace oracle
