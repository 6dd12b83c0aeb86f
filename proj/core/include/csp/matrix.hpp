#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace csp {

/// Dense row-major matrix of 64-bit reals. The universal carrier for inputs,
/// value/projection matrices and materialized attention maps.
///
/// Entries constructed from external data are validated to be finite;
/// arithmetic results are not re-checked.
class Matrix {
 public:
  Matrix() = default;

  /// Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major data. Throws ShapeError if the length does
  /// not match and NumericError if any entry is NaN or infinite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  /// Literal construction for tests and fixtures: {{1, 2}, {3, 4}}.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double> col(std::size_t c) const;
  void set_col(std::size_t c, std::span<const double> values);

  bool all_finite() const;

  /// "NxC" string for error messages.
  std::string shape_str() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Standard product with deterministic accumulation order (ascending k for
/// every output element), so results are bit-reproducible for a fixed build.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& x);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& x, double s);
Matrix relu(const Matrix& x);

/// Max column absolute sum.
double norm1(const Matrix& x);

/// Max row absolute sum.
double norm_inf(const Matrix& x);

double frobenius_norm(const Matrix& x);

double max_abs_diff(const Matrix& a, const Matrix& b);

} // namespace csp
