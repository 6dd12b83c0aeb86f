#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace csp {

struct BenchConfig {
  std::vector<std::size_t> grid = {256, 512, 1024, 2048, 4096, 8192};
  std::size_t channels = 8;
  std::vector<std::string> methods = {"csp", "softmax"}; ///< csp uses K=1 complete sorting
  std::size_t warmup = 3;
  std::size_t reps = 7;
  std::uint64_t seed = 0;
};

struct BenchPoint {
  std::string method;
  std::size_t n = 0;
  double median_seconds = 0.0;
};

struct BenchSlope {
  std::string method;
  double slope = 0.0; ///< fitted log-log runtime exponent
};

struct BenchResult {
  std::vector<BenchPoint> points;
  std::vector<BenchSlope> slopes;
};

/// Least-squares slope of log(t) against log(n).
double fit_loglog_slope(std::span<const double> n, std::span<const double> seconds);

/// Times each method's forward pass over the N grid at fixed channel count:
/// per point, enough inner repetitions for a measurable interval, then
/// `warmup` discarded runs and the median of `reps` timed runs. Throws Error
/// when the monotonic clock cannot resolve a point (advising a larger N).
BenchResult run_scaling_bench(const BenchConfig& cfg);

} // namespace csp
