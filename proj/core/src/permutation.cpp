#include "csp/permutation.hpp"

#include <algorithm>
#include <numeric>

namespace csp {

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
  std::vector<bool> seen(map_.size(), false);
  for (const std::size_t v : map_) {
    if (v >= map_.size() || seen[v]) {
      throw ConfigError("index vector of length " + std::to_string(map_.size()) +
                        " is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  Permutation p;
  p.map_ = std::move(map);
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < map_.size(); ++i)
    if (map_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
  Permutation p;
  p.map_ = std::move(inv);
  return p;
}

Permutation shift_permutation(std::size_t n, std::size_t j) {
  if (n == 0) {
    throw ConfigError("shift_permutation requires n >= 1");
  }
  j %= n;
  std::vector<std::size_t> map(n);
  for (std::size_t i = 0; i < n; ++i) map[i] = (i + n - j) % n;
  return Permutation(std::move(map));
}

std::vector<std::size_t> argsort_stable(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

Permutation reference_sort_permutation(std::span<const double> reference,
                                       std::span<const double> values) {
  if (reference.size() != values.size()) {
    throw ShapeError("reference_sort_permutation: reference length " +
                     std::to_string(reference.size()) + " vs values length " +
                     std::to_string(values.size()));
  }
  if (reference.empty()) {
    throw ShapeError("reference_sort_permutation requires length >= 1");
  }
  const auto by_ref = argsort_stable(reference);
  const auto by_val = argsort_stable(values);
  std::vector<std::size_t> map(reference.size());
  for (std::size_t r = 0; r < map.size(); ++r) map[by_ref[r]] = by_val[r];
  return Permutation(std::move(map));
}

namespace {

// min-max fast path for groups of size two; same stable tie rule as the
// argsort path (strict comparisons, ties keep original order).
void sort_pair(std::span<const double> reference, std::span<const double> values,
               std::size_t base, std::vector<std::size_t>& map) {
  const bool ref_swapped = reference[base + 1] < reference[base];
  const bool val_swapped = values[base + 1] < values[base];
  const std::size_t lo = base + (val_swapped ? 1 : 0);
  const std::size_t hi = base + (val_swapped ? 0 : 1);
  if (ref_swapped) {
    map[base] = hi;
    map[base + 1] = lo;
  } else {
    map[base] = lo;
    map[base + 1] = hi;
  }
}

} // namespace

Permutation group_sort_permutation(std::span<const double> reference,
                                   std::span<const double> values, std::size_t k) {
  if (reference.size() != values.size()) {
    throw ShapeError("group_sort_permutation: reference length " +
                     std::to_string(reference.size()) + " vs values length " +
                     std::to_string(values.size()));
  }
  const std::size_t n = reference.size();
  if (k == 0 || n % k != 0) {
    throw ConfigError("group count " + std::to_string(k) + " does not divide length " +
                      std::to_string(n));
  }
  const std::size_t group = n / k;
  std::vector<std::size_t> map(n);
  for (std::size_t g = 0; g < k; ++g) {
    const std::size_t base = g * group;
    if (group == 1) {
      map[base] = base;
      continue;
    }
    if (group == 2) {
      sort_pair(reference, values, base, map);
      continue;
    }
    const Permutation local = reference_sort_permutation(
        reference.subspan(base, group), values.subspan(base, group));
    for (std::size_t i = 0; i < group; ++i) map[base + i] = base + local[i];
  }
  return Permutation(std::move(map));
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) {
    throw ShapeError("compose: sizes " + std::to_string(outer.size()) + " vs " +
                     std::to_string(inner.size()));
  }
  std::vector<std::size_t> map(outer.size());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = inner[outer[i]];
  return Permutation(std::move(map));
}

Matrix to_dense_matrix(const Permutation& p) {
  Matrix m(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m(i, p[i]) = 1.0;
  return m;
}

} // namespace csp
