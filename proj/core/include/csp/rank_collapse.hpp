#pragma once

#include <cstdint>
#include <vector>

#include "csp/attention.hpp"
#include "csp/csp_operator.hpp"
#include "csp/matrix.hpp"
#include "csp/residual.hpp"
#include "csp/svd.hpp"

namespace csp {

enum class StackKind { CspStack, MhaStack };
enum class Pointwise { Identity, ReLU };

/// A deep attention-only stack without skip connections: per layer an
/// operator (CSP or softmax multi-head attention) followed by a pointwise
/// 1-Lipschitz map.
struct StackSpec {
  std::size_t depth = 0;
  StackKind kind = StackKind::CspStack;
  Pointwise pointwise = Pointwise::Identity;
  std::vector<Matrix> csp_weights;          ///< CSP: depth projection matrices (may be empty = identity)
  std::vector<AttentionParams> mha_weights; ///< MHA: depth parameter sets
  CspConfig csp_config;                     ///< CSP only
  std::uint64_t seed = 0;

  /// max over layers of the 1-norm of the projection (1.0 when identity).
  double beta() const;
};

/// Random Gaussian projections, entries N(0, sigma^2).
StackSpec make_csp_stack(std::size_t depth, const CspConfig& cfg, std::size_t channels,
                         double sigma, Pointwise pointwise, std::uint64_t seed);

/// Random Gaussian attention projections with the same entry scale.
StackSpec make_mha_stack(std::size_t depth, std::size_t channels, std::size_t heads,
                         double sigma, Pointwise pointwise, std::uint64_t seed);

/// Residual decay along the stack. Index 0 is the input; bounds hold the
/// per-layer geometric envelope C^(l/2) (lambda beta)^l * |eps(X)| for CSP
/// stacks and are empty for MHA stacks.
struct DecayCurve {
  std::vector<double> residual_norms; ///< (1,inf)-norm per layer, length depth+1
  std::vector<double> bounds;         ///< same length for CSP; empty for MHA
  std::vector<Spectrum> spectra;      ///< filled when requested
};

/// Applies the layers sequentially, recording the residual norm after each.
/// Throws NumericError naming the layer index if a non-finite value appears.
DecayCurve run_stack(const Matrix& x, const StackSpec& spec, bool with_spectra = false);

struct SingleLayerBoundReport {
  double lhs_1 = 0.0, rhs_1 = 0.0;       ///< 1-norm chain
  double lhs_inf = 0.0, rhs_inf = 0.0;   ///< inf-norm chain
  double lhs_1inf = 0.0, rhs_1inf = 0.0; ///< combined (1,inf) bound
  bool holds_1 = false, holds_inf = false, holds_1inf = false;
  bool holds() const { return holds_1 && holds_inf && holds_1inf; }
};

/// Evaluates the single-layer residual inequality
///   |eps(f(CSP_W(X)))|_{1,inf} <= sqrt(C) |W|_1 |eps(X)|_{1,inf}
/// together with the separate 1-norm and inf-norm chains, each with 1e-9
/// relative slack.
SingleLayerBoundReport single_layer_bound_report(const Matrix& x, const Matrix& w,
                                                 const CspConfig& cfg,
                                                 Pointwise pointwise = Pointwise::Identity);

bool verify_single_layer_bound(const Matrix& x, const Matrix& w, const CspConfig& cfg,
                               Pointwise pointwise = Pointwise::Identity);

struct SpectrumDecayReport {
  DecayCurve csp;
  DecayCurve mha;
};

/// Runs both stacks on the same input with per-layer spectra for side-by-side
/// reporting.
SpectrumDecayReport spectrum_decay_report(const Matrix& x, const StackSpec& csp_spec,
                                          const StackSpec& mha_spec);

} // namespace csp
