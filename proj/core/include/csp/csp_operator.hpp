#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "csp/matrix.hpp"
#include "csp/permutation.hpp"
#include "csp/schedule.hpp"

namespace csp {

/// Configuration of the channel-wise sample permutation operator.
struct CspConfig {
  std::size_t groups = 1;                  ///< K; must divide the sequence length
  ShiftSchedule schedule;                  ///< per-channel circular-shift steps
  std::size_t reference_channel = 0;       ///< never permuted; orders the group sorting
  std::optional<Matrix> projection;        ///< W (C x C); absent means identity
};

/// The per-channel permutations realized by one forward pass. Each channel's
/// total map factors as sort-after-shift, and the reference channel's total
/// map is the identity.
struct CspTrace {
  std::vector<Permutation> per_channel_shift; ///< circular shifts S
  std::vector<Permutation> per_channel_sort;  ///< block-diagonal group sorts T
  std::vector<Permutation> per_channel_total; ///< compose(sort, shift)
  std::size_t reference_channel = 0;
  bool degenerate_schedule = false; ///< power-law base collapsed to 1
};

struct CspResult {
  Matrix output; ///< N x C, column c equals per_channel_total[c] applied to V[:,c]
  CspTrace trace;
};

/// Applies the operator: V = X * W (identity when absent), then each
/// non-reference channel is circularly shifted by its scheduled step and
/// group-sorted against the un-shifted reference column of V. The reference
/// channel passes through unchanged.
CspResult csp_forward(const Matrix& x, const CspConfig& cfg);

/// Materializes each channel's attention map as a dense 0/1 doubly
/// stochastic matrix.
std::vector<Matrix> extract_attention_maps(const CspTrace& trace);

/// Shift-only multi-head construction: channel c (0-based) gets a circular
/// shift by c mod N and no sorting.
Matrix shift_only_heads(const Matrix& v);

/// Relative permutation between two channels: inverse(P_c) then P_c'.
Permutation cross_channel_interaction(const CspTrace& trace, std::size_t c,
                                      std::size_t c_prime);

} // namespace csp
