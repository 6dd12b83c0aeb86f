#pragma once

#include <vector>

#include "csp/matrix.hpp"

namespace csp {

/// Singular values in nonincreasing order, length min(N, C).
struct Spectrum {
  std::vector<double> singular_values;
};

/// Singular values by one-sided Jacobi iteration: columns are rotated until
/// pairwise orthogonal to a relative off-diagonal tolerance of 1e-10, at most
/// 100 sweeps. Throws ConvergenceError (carrying the residual off-diagonal
/// mass) if the sweep budget is exhausted.
Spectrum singular_spectrum(const Matrix& x);

} // namespace csp
