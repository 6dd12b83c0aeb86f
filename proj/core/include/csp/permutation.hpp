#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "csp/error.hpp"
#include "csp/matrix.hpp"

namespace csp {

/// A permutation of {0, ..., N-1} stored as an index vector:
/// output position i receives input element map()[i].
class Permutation {
 public:
  Permutation() = default;

  /// Validates that `map` is a bijection on {0, ..., N-1}.
  explicit Permutation(std::vector<std::size_t> map);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return map_.size(); }
  std::size_t operator[](std::size_t i) const { return map_[i]; }
  const std::vector<std::size_t>& map() const { return map_; }

  bool is_identity() const;

  Permutation inverse() const;

  /// out[i] = in[map()[i]]; preserves the multiset of values.
  template <typename T>
  std::vector<T> apply(std::span<const T> in) const {
    if (in.size() != map_.size()) {
      throw ShapeError("permutation of size " + std::to_string(map_.size()) +
                       " applied to vector of length " + std::to_string(in.size()));
    }
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < map_.size(); ++i) out[i] = in[map_[i]];
    return out;
  }

  template <typename T>
  std::vector<T> apply(const std::vector<T>& in) const {
    return apply(std::span<const T>(in));
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.map_ == b.map_;
  }

 private:
  std::vector<std::size_t> map_;
};

/// Circular shift by j steps (reduced modulo n): the element at input
/// position p moves to output position (p + j) mod n. Its dense form is the
/// block matrix with I_j top-right and I_{n-j} bottom-left.
Permutation shift_permutation(std::size_t n, std::size_t j);

/// Monotone rearrangement: the r-th smallest element of `values` is placed at
/// the position where `reference` holds its r-th smallest element. Ties in
/// either vector break by original index (stable). This is the 1-D optimal
/// transport plan aligning `values` to `reference`.
Permutation reference_sort_permutation(std::span<const double> reference,
                                       std::span<const double> values);

/// Splits indices into k contiguous groups of size N/k and applies
/// reference_sort_permutation within each group; the result is
/// block-diagonal. Throws ConfigError when k does not divide N.
Permutation group_sort_permutation(std::span<const double> reference,
                                   std::span<const double> values, std::size_t k);

/// Permutation whose action equals applying `inner` first, then `outer`.
Permutation compose(const Permutation& outer, const Permutation& inner);

/// N x N 0/1 matrix M with M * v == p.apply(v).
Matrix to_dense_matrix(const Permutation& p);

/// Stable ascending argsort (ties keep original order).
std::vector<std::size_t> argsort_stable(std::span<const double> v);

} // namespace csp
