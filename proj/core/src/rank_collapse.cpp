#include "csp/rank_collapse.hpp"

#include <cmath>
#include <string>

#include "csp/error.hpp"

namespace csp {

double StackSpec::beta() const {
  if (kind != StackKind::CspStack) return 0.0;
  if (csp_weights.empty()) return 1.0;
  double beta = 0.0;
  for (const Matrix& w : csp_weights) beta = std::max(beta, norm1(w));
  return beta;
}

StackSpec make_csp_stack(std::size_t depth, const CspConfig& cfg, std::size_t channels,
                         double sigma, Pointwise pointwise, std::uint64_t seed) {
  StackSpec spec;
  spec.depth = depth;
  spec.kind = StackKind::CspStack;
  spec.pointwise = pointwise;
  spec.csp_config = cfg;
  spec.seed = seed;
  Rng rng(seed);
  for (std::size_t l = 0; l < depth; ++l)
    spec.csp_weights.push_back(rng.normal_matrix(channels, channels, sigma));
  return spec;
}

StackSpec make_mha_stack(std::size_t depth, std::size_t channels, std::size_t heads,
                         double sigma, Pointwise pointwise, std::uint64_t seed) {
  StackSpec spec;
  spec.depth = depth;
  spec.kind = StackKind::MhaStack;
  spec.pointwise = pointwise;
  spec.seed = seed;
  Rng rng(seed);
  for (std::size_t l = 0; l < depth; ++l)
    spec.mha_weights.push_back(AttentionParams::random(channels, heads, sigma, rng));
  return spec;
}

namespace {

Matrix apply_pointwise(const Matrix& x, Pointwise kind) {
  return kind == Pointwise::ReLU ? relu(x) : x;
}

Matrix apply_layer(const Matrix& x, const StackSpec& spec, std::size_t layer) {
  if (spec.kind == StackKind::CspStack) {
    CspConfig cfg = spec.csp_config;
    if (!spec.csp_weights.empty()) cfg.projection = spec.csp_weights[layer];
    return csp_forward(x, cfg).output;
  }
  return multi_head_attention(x, spec.mha_weights[layer]);
}

} // namespace

DecayCurve run_stack(const Matrix& x, const StackSpec& spec, bool with_spectra) {
  if (spec.kind == StackKind::CspStack && !spec.csp_weights.empty() &&
      spec.csp_weights.size() != spec.depth) {
    throw ConfigError("stack depth " + std::to_string(spec.depth) + " vs " +
                      std::to_string(spec.csp_weights.size()) + " projection matrices");
  }
  if (spec.kind == StackKind::MhaStack && spec.mha_weights.size() != spec.depth) {
    throw ConfigError("stack depth " + std::to_string(spec.depth) + " vs " +
                      std::to_string(spec.mha_weights.size()) + " attention parameter sets");
  }

  DecayCurve curve;
  const ResidualReport input_report = residual(x);
  curve.residual_norms.push_back(input_report.norm1_inf);
  if (with_spectra) curve.spectra.push_back(singular_spectrum(x));

  const bool csp_kind = spec.kind == StackKind::CspStack;
  const double lambda = 1.0; // Identity and ReLU are both 1-Lipschitz
  const double per_layer = csp_kind
      ? std::sqrt(static_cast<double>(x.cols())) * lambda * spec.beta()
      : 0.0;
  if (csp_kind) curve.bounds.push_back(input_report.norm1_inf);

  Matrix current = x;
  for (std::size_t l = 0; l < spec.depth; ++l) {
    current = apply_pointwise(apply_layer(current, spec, l), spec.pointwise);
    if (!current.all_finite()) {
      throw NumericError("non-finite values after layer " + std::to_string(l));
    }
    curve.residual_norms.push_back(residual(current).norm1_inf);
    if (csp_kind) curve.bounds.push_back(curve.bounds.back() * per_layer);
    if (with_spectra) curve.spectra.push_back(singular_spectrum(current));
  }
  return curve;
}

SingleLayerBoundReport single_layer_bound_report(const Matrix& x, const Matrix& w,
                                                 const CspConfig& cfg, Pointwise pointwise) {
  CspConfig layer_cfg = cfg;
  layer_cfg.projection = w;
  const Matrix out = apply_pointwise(csp_forward(x, layer_cfg).output, pointwise);

  const ResidualReport in_report = residual(x);
  const ResidualReport out_report = residual(out);
  const double w1 = norm1(w);
  const double c = static_cast<double>(x.cols());
  constexpr double kSlack = 1.0 + 1e-9;

  SingleLayerBoundReport report;
  report.lhs_1 = out_report.norm1;
  report.rhs_1 = w1 * in_report.norm1;
  report.lhs_inf = out_report.norm_inf;
  report.rhs_inf = c * w1 * in_report.norm_inf;
  report.lhs_1inf = out_report.norm1_inf;
  report.rhs_1inf = std::sqrt(c) * w1 * in_report.norm1_inf;
  report.holds_1 = report.lhs_1 <= report.rhs_1 * kSlack;
  report.holds_inf = report.lhs_inf <= report.rhs_inf * kSlack;
  report.holds_1inf = report.lhs_1inf <= report.rhs_1inf * kSlack;
  return report;
}

bool verify_single_layer_bound(const Matrix& x, const Matrix& w, const CspConfig& cfg,
                               Pointwise pointwise) {
  return single_layer_bound_report(x, w, cfg, pointwise).holds();
}

SpectrumDecayReport spectrum_decay_report(const Matrix& x, const StackSpec& csp_spec,
                                          const StackSpec& mha_spec) {
  SpectrumDecayReport report;
  report.csp = run_stack(x, csp_spec, true);
  report.mha = run_stack(x, mha_spec, true);
  return report;
}

} // namespace csp
