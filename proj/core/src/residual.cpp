#include "csp/residual.hpp"

#include <algorithm>
#include <cmath>

#include "csp/error.hpp"

namespace csp {

double lower_median(std::span<const double> v) {
  if (v.empty()) {
    throw ShapeError("lower_median of empty vector");
  }
  std::vector<double> tmp(v.begin(), v.end());
  const std::size_t mid = (tmp.size() - 1) / 2;
  std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid), tmp.end());
  return tmp[mid];
}

ResidualReport residual(const Matrix& x) {
  if (x.rows() == 0) {
    throw ShapeError("residual requires at least one row");
  }
  ResidualReport report;
  report.xhat.resize(x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    report.xhat[c] = lower_median(x.col(c));
  }
  report.residual = Matrix(x.rows(), x.cols());
  for (std::size_t n = 0; n < x.rows(); ++n)
    for (std::size_t c = 0; c < x.cols(); ++c)
      report.residual(n, c) = x(n, c) - report.xhat[c];
  report.norm1 = norm1(report.residual);
  report.norm_inf = norm_inf(report.residual);
  report.norm1_inf = std::sqrt(report.norm1 * report.norm_inf);
  return report;
}

} // namespace csp
