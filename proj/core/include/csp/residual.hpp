#pragma once

#include <span>
#include <vector>

#include "csp/matrix.hpp"

namespace csp {

/// Rank-1 estimation residual of a matrix: the distance of X from the nearest
/// matrix of the form 1*xhat^T, measured in the 1-, inf- and (1,inf)-norms.
struct ResidualReport {
  std::vector<double> xhat; ///< per-column minimizer (lower median)
  Matrix residual;          ///< X - 1 * xhat^T
  double norm1 = 0.0;       ///< max column abs sum of the residual
  double norm_inf = 0.0;    ///< max row abs sum of the residual
  double norm1_inf = 0.0;   ///< sqrt(norm1 * norm_inf)
};

/// Lower median: the smaller of the two central values for even length.
/// Exact minimizer of sum_i |v_i - a| over a.
double lower_median(std::span<const double> v);

/// Computes the rank-1 residual with xhat chosen per column as the lower
/// median, the exact minimizer of the column-decoupled 1-norm objective.
ResidualReport residual(const Matrix& x);

} // namespace csp
