#include "csp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "csp/attention.hpp"
#include "csp/csp_operator.hpp"
#include "csp/error.hpp"
#include "csp/matrix.hpp"
#include "csp/rng.hpp"

namespace csp {

double fit_loglog_slope(std::span<const double> n, std::span<const double> seconds) {
  if (n.size() != seconds.size() || n.size() < 2) {
    throw ShapeError("slope fit needs at least two points with matching lengths");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]);
    const double y = std::log(seconds[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(n.size());
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

namespace {

using Clock = std::chrono::steady_clock;

double time_once(const std::function<void()>& op, std::size_t inner) {
  const auto start = Clock::now();
  for (std::size_t i = 0; i < inner; ++i) op();
  const auto stop = Clock::now();
  return std::chrono::duration<double>(stop - start).count() / static_cast<double>(inner);
}

// Grows the inner repetition count until one measurement spans at least
// ~2 ms, so clock granularity stays far below the measured interval.
std::size_t calibrate_inner(const std::function<void()>& op) {
  constexpr double kTargetSeconds = 2e-3;
  std::size_t inner = 1;
  for (int attempt = 0; attempt < 30; ++attempt) {
    const auto start = Clock::now();
    for (std::size_t i = 0; i < inner; ++i) op();
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (elapsed >= kTargetSeconds) return inner;
    if (elapsed <= 0.0) {
      inner *= 16;
      continue;
    }
    const double scale = kTargetSeconds / elapsed;
    inner = static_cast<std::size_t>(static_cast<double>(inner) * std::min(scale * 1.3, 16.0)) + 1;
  }
  return inner;
}

} // namespace

BenchResult run_scaling_bench(const BenchConfig& cfg) {
  if (cfg.grid.empty() || cfg.methods.empty()) {
    throw ConfigError("bench needs a nonempty N grid and method list");
  }
  BenchResult result;
  for (const std::string& method : cfg.methods) {
    std::vector<double> ns, times;
    for (const std::size_t n : cfg.grid) {
      Rng rng(cfg.seed + n);
      const Matrix x = rng.uniform_matrix(n, cfg.channels, -1.0, 1.0);

      std::function<void()> op;
      if (method == "csp") {
        CspConfig csp_cfg;
        csp_cfg.groups = 1; // complete sorting
        op = [&x, csp_cfg] {
          volatile double sink = csp_forward(x, csp_cfg).output(0, 0);
          (void)sink;
        };
      } else if (method == "softmax") {
        op = [&x] {
          volatile double sink = softmax_attention(x, x, x)(0, 0);
          (void)sink;
        };
      } else {
        throw ConfigError("unknown bench method '" + method + "'");
      }

      const std::size_t inner = calibrate_inner(op);
      for (std::size_t w = 0; w < cfg.warmup; ++w) time_once(op, inner);
      std::vector<double> samples;
      samples.reserve(cfg.reps);
      for (std::size_t r = 0; r < cfg.reps; ++r) samples.push_back(time_once(op, inner));
      std::sort(samples.begin(), samples.end());
      const double median = samples[samples.size() / 2];
      if (!(median > 0.0)) {
        throw Error("timer resolution too coarse for n=" + std::to_string(n) +
                    "; use a larger sequence length");
      }
      result.points.push_back({method, n, median});
      ns.push_back(static_cast<double>(n));
      times.push_back(median);
    }
    if (ns.size() >= 2) {
      result.slopes.push_back({method, fit_loglog_slope(ns, times)});
    }
  }
  return result;
}

} // namespace csp
