#include "csp/svd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "csp/error.hpp"

namespace csp {

namespace {

constexpr double kJacobiTol = 1e-10;
constexpr std::size_t kMaxSweeps = 100;

} // namespace

Spectrum singular_spectrum(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) {
    throw ShapeError("singular_spectrum requires a nonempty matrix");
  }
  // One-sided Jacobi orthogonalizes columns; work on the tall orientation.
  Matrix a = x.rows() >= x.cols() ? x : transpose(x);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  double worst_ratio = 0.0;
  bool converged = (n == 1);
  for (std::size_t sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    worst_ratio = 0.0;

    // Columns this far below the dominant one carry singular values that are
    // zero at double precision; rotating them only churns underflow noise.
    double max_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < m; ++k) sum += a(k, j) * a(k, j);
      max_sq = std::max(max_sq, sum);
    }
    const double floor_sq = max_sq * 1e-30;

    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dot_ij = 0.0, dot_ii = 0.0, dot_jj = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          dot_ij += a(k, i) * a(k, j);
          dot_ii += a(k, i) * a(k, i);
          dot_jj += a(k, j) * a(k, j);
        }
        if (dot_ii <= floor_sq || dot_jj <= floor_sq) continue;
        const double denom = std::sqrt(dot_ii) * std::sqrt(dot_jj);
        worst_ratio = std::max(worst_ratio, std::abs(dot_ij) / denom);
        if (std::abs(dot_ij) <= kJacobiTol * denom) continue;
        converged = false;

        const double zeta = (dot_jj - dot_ii) / (2.0 * dot_ij);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double ai = a(k, i);
          const double aj = a(k, j);
          a(k, i) = c * ai - s * aj;
          a(k, j) = s * ai + c * aj;
        }
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("one-sided Jacobi did not converge in " +
                               std::to_string(kMaxSweeps) + " sweeps; worst relative off-diagonal " +
                               std::to_string(worst_ratio),
                           worst_ratio);
  }

  Spectrum spectrum;
  spectrum.singular_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) sum += a(k, j) * a(k, j);
    spectrum.singular_values[j] = std::sqrt(sum);
  }
  std::sort(spectrum.singular_values.begin(), spectrum.singular_values.end(), std::greater<>());
  return spectrum;
}

} // namespace csp
