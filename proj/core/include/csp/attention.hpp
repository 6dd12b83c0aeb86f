#pragma once

#include <cstddef>
#include <vector>

#include "csp/matrix.hpp"
#include "csp/rng.hpp"

namespace csp {

/// Per-head projection matrices for classic multi-head attention.
/// M heads of C x D projections with M * D = C, so outputs concatenate back
/// to the model width.
struct AttentionParams {
  std::vector<Matrix> wq;
  std::vector<Matrix> wk;
  std::vector<Matrix> wv;

  std::size_t heads() const { return wv.size(); }
  std::size_t model_dim() const { return wv.empty() ? 0 : wv.front().rows(); }
  std::size_t head_dim() const { return wv.empty() ? 0 : wv.front().cols(); }

  /// Throws ConfigError unless all heads share C x D shapes and M * D == C.
  void validate() const;

  static AttentionParams random(std::size_t model_dim, std::size_t heads, double sigma,
                                Rng& rng);
};

/// Row-stochastic attention map Softmax(Q K^T / sqrt(D)), stabilized by
/// row-max subtraction.
Matrix softmax_attention_map(const Matrix& q, const Matrix& k);

/// Softmax(Q K^T / sqrt(D)) * V.
Matrix softmax_attention(const Matrix& v, const Matrix& q, const Matrix& k);

/// Per-head projections, per-head softmax attention, concatenation to N x C.
Matrix multi_head_attention(const Matrix& x, const AttentionParams& params);

/// t alternating normalizations, rows first then columns per iteration.
/// Requires strictly positive entries.
Matrix sinkhorn_normalize(const Matrix& a, std::size_t iterations);

struct SinkhornConfig {
  std::size_t iterations = 0; ///< t
  double temperature = 1.0;   ///< tau > 0
  std::size_t groups = 1;     ///< K; must divide N
};

struct GroupedSinkhornResult {
  Matrix output;                       ///< N x C
  std::vector<Matrix> maps;            ///< per-channel block-diagonal N x N map
  std::vector<bool> doubly_stochastic; ///< both margins within 1e-9 of 1
};

/// Entropic counterpart of the hard group sort: for each channel c builds the
/// per-group kernels exp(v_ref^(k) v_c^(k)T / tau) against the first column,
/// Sinkhorn-normalizes each block, assembles the block-diagonal map and
/// applies it to the channel. Any pre-shift of the channels is the caller's
/// responsibility.
GroupedSinkhornResult grouped_sinkhorn_attention(const Matrix& v, const SinkhornConfig& cfg);

} // namespace csp
