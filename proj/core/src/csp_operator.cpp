#include "csp/csp_operator.hpp"

#include <string>

#include "csp/error.hpp"

namespace csp {

CspResult csp_forward(const Matrix& x, const CspConfig& cfg) {
  const std::size_t n = x.rows();
  const std::size_t c = x.cols();
  if (n == 0 || c == 0) {
    throw ShapeError("csp_forward requires a nonempty input, got " + x.shape_str());
  }
  if (cfg.reference_channel >= c) {
    throw ConfigError("reference channel " + std::to_string(cfg.reference_channel) +
                      " out of range for " + std::to_string(c) + " channels");
  }
  if (cfg.groups == 0 || n % cfg.groups != 0) {
    throw ConfigError("group count " + std::to_string(cfg.groups) +
                      " does not divide sequence length " + std::to_string(n));
  }
  Matrix v = x;
  if (cfg.projection.has_value()) {
    const Matrix& w = *cfg.projection;
    if (w.rows() != c || w.cols() != c) {
      throw ConfigError("projection must be " + std::to_string(c) + "x" + std::to_string(c) +
                        ", got " + w.shape_str());
    }
    v = matmul(x, w);
  }

  const ResolvedSchedule schedule = resolve_schedule(cfg.schedule, n, c);
  const std::vector<double> reference = v.col(cfg.reference_channel);

  CspResult result;
  result.output = Matrix(n, c);
  result.trace.reference_channel = cfg.reference_channel;
  result.trace.degenerate_schedule = schedule.degenerate;
  result.trace.per_channel_shift.reserve(c);
  result.trace.per_channel_sort.reserve(c);
  result.trace.per_channel_total.reserve(c);

  for (std::size_t ch = 0; ch < c; ++ch) {
    if (ch == cfg.reference_channel) {
      const Permutation id = Permutation::identity(n);
      result.trace.per_channel_shift.push_back(id);
      result.trace.per_channel_sort.push_back(id);
      result.trace.per_channel_total.push_back(id);
      result.output.set_col(ch, v.col(ch));
      continue;
    }
    Permutation shift = shift_permutation(n, schedule.steps[ch]);
    const std::vector<double> shifted = shift.apply(v.col(ch));
    Permutation sort = group_sort_permutation(reference, shifted, cfg.groups);
    Permutation total = compose(sort, shift);
    result.output.set_col(ch, sort.apply(shifted));
    result.trace.per_channel_shift.push_back(std::move(shift));
    result.trace.per_channel_sort.push_back(std::move(sort));
    result.trace.per_channel_total.push_back(std::move(total));
  }
  return result;
}

std::vector<Matrix> extract_attention_maps(const CspTrace& trace) {
  std::vector<Matrix> maps;
  maps.reserve(trace.per_channel_total.size());
  for (const Permutation& p : trace.per_channel_total) maps.push_back(to_dense_matrix(p));
  return maps;
}

Matrix shift_only_heads(const Matrix& v) {
  const std::size_t n = v.rows();
  Matrix out(n, v.cols());
  for (std::size_t c = 0; c < v.cols(); ++c) {
    const Permutation shift = shift_permutation(n, c % n);
    out.set_col(c, shift.apply(v.col(c)));
  }
  return out;
}

Permutation cross_channel_interaction(const CspTrace& trace, std::size_t c,
                                      std::size_t c_prime) {
  const std::size_t channels = trace.per_channel_total.size();
  if (c >= channels || c_prime >= channels) {
    throw ConfigError("channel index out of range: " + std::to_string(c) + ", " +
                      std::to_string(c_prime) + " vs " + std::to_string(channels));
  }
  return compose(trace.per_channel_total[c].inverse(), trace.per_channel_total[c_prime]);
}

} // namespace csp
