#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smcsweep/campaign/config.hpp"

namespace smcsweep::analysis {

using campaign::Direction;

struct PointEstimate {
  std::int64_t step = 0;
  double mean = 0.0;
  double half_width = 0.0;
  std::uint64_t n = 0;
};

// Estimates of one sweep point over the evaluation grid.
using Trajectory = std::vector<PointEstimate>;

enum class SignificanceTest {
  z_test,          // two-sample z on standard deviations recovered from the half-widths
  ci_non_overlap,  // the two confidence intervals are disjoint
};

std::string_view to_string(SignificanceTest t);
SignificanceTest parse_significance_test(std::string_view text);

// Sample standard deviation recovered from a stored half-width: hw*sqrt(n)/t_{1-alpha/2,n-1}.
double recovered_sd(const PointEstimate& p, double alpha);

// Strict: a difference exactly at the threshold is not significant.
// Throws std::invalid_argument when the steps differ.
bool significant_pair(const PointEstimate& a, const PointEstimate& b, double alpha,
                      SignificanceTest test = SignificanceTest::z_test);

struct PairCount {
  std::size_t significant = 0;
  std::size_t total = 0;
};

// Significant pairs at grid index `step_index`; entry [i][j] for sweep points i, j.
std::vector<std::vector<bool>> significance_matrix(const std::vector<Trajectory>& points, std::size_t step_index,
                                                   double alpha, SignificanceTest test = SignificanceTest::z_test);

// Significant pairs at the last grid step, out of C(k, 2).
PairCount final_diff_count(const std::vector<Trajectory>& points, double alpha,
                           SignificanceTest test = SignificanceTest::z_test);

// ceil(fraction * grid_length), at least 1.
std::size_t tail_window(std::size_t grid_length, double fraction);

struct TailMetrics {
  std::size_t window = 0;
  std::vector<double> tail_means;  // per sweep point
  double tail_diff_share = 0.0;    // mean over tail steps of significant/total pairs
  std::size_t tail_majority = 0;   // pairs significant on at least half of the tail steps
  std::size_t total_pairs = 0;
};

TailMetrics tail_metrics(const std::vector<Trajectory>& points, double alpha, double tail_fraction,
                         SignificanceTest test = SignificanceTest::z_test);

struct BestPoint {
  std::size_t index = 0;
  std::string label;  // p1, p2, ...
  double value = 0.0;
};

// argmin (lower-is-better) or argmax (higher-is-better), ties to the lower index.
BestPoint best_tail_point(const std::vector<double>& tail_means, Direction direction);

enum class Tradeoff { win_win, mixed, lose_lose };
std::string_view to_string(Tradeoff t);

// `good` is higher-is-better, `bad` lower-is-better. Any tie is mixed.
// Throws std::invalid_argument when either observable is missing.
Tradeoff classify_tradeoff(const std::map<std::string, double>& point_tail_means,
                           const std::map<std::string, double>& baseline_tail_means, const std::string& good,
                           const std::string& bad);

std::string point_label(std::size_t index);

}  // namespace smcsweep::analysis
