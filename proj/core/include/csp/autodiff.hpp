#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "csp/matrix.hpp"
#include "csp/permutation.hpp"

namespace csp {

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad; ///< same shape as value after a backward pass
};

/// Trainable matrices with gradient accumulators. Parameters outlive the
/// tapes recorded against them; a tape accumulates into `grad` on backward.
class ParameterStore {
 public:
  std::size_t add(std::string name, Matrix init);

  Parameter& operator[](std::size_t slot) { return params_[slot]; }
  const Parameter& operator[](std::size_t slot) const { return params_[slot]; }

  std::size_t count() const { return params_.size(); }

  /// Total number of scalar entries across all parameters.
  std::size_t scalar_count() const;

  void zero_grads();

 private:
  std::vector<Parameter> params_;
};

/// Minimal reverse-mode tape. Nodes are appended in topological order during
/// the forward pass; backward() walks them in reverse, accumulating matrix
/// gradients and finally flushing parameter gradients into the bound store.
class Tape {
 public:
  using Id = std::size_t;

  Tape() = default;
  explicit Tape(ParameterStore* store) : store_(store) {}

  /// Leaf holding a constant (no gradient flows out of it).
  Id input(Matrix value);

  /// Leaf bound to a parameter slot of the attached store.
  Id param(std::size_t slot);

  Id matmul(Id a, Id b);
  Id add(Id a, Id b);
  Id scale(Id a, double s);
  Id relu(Id a);
  Id transpose(Id a);
  Id softmax_rows(Id a);

  /// Applies a fixed permutation to each column: out[:,c] = perms[c](in[:,c]).
  /// The permutations are constants of the forward pass; gradients are
  /// scattered back through them, never through the comparator that chose
  /// them.
  Id permute_rows_per_column(Id a, std::vector<Permutation> perms);

  /// out[r] = table[rows[r]], scatter-add on backward (embedding lookup).
  Id gather_rows(Id table, std::vector<std::size_t> rows);

  Id mean_rows(Id a);  ///< 1 x C column means
  Id first_row(Id a);  ///< 1 x C slice of row 0
  Id concat_cols(const std::vector<Id>& parts);

  /// Stable -log softmax(logits)[label]; logits must be 1 x K.
  Id softmax_cross_entropy(Id logits, std::size_t label);

  /// Mean of 1x1 scalars (batch loss).
  Id mean_scalars(const std::vector<Id>& scalars);

  const Matrix& value(Id id) const { return nodes_[id].value; }
  const Matrix& grad(Id id) const { return nodes_[id].grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Seeds d(root)/d(root) = 1 and accumulates gradients in reverse order.
  /// Throws Error when nothing was recorded, the root is invalid or not 1x1,
  /// or backward already ran on this tape.
  void backward(Id root);

 private:
  struct Node {
    Matrix value;
    Matrix grad; ///< lazily sized on first contribution
    std::function<void(Tape&)> back;
    int param_slot = -1;
  };

  Id push(Matrix value, std::function<void(Tape&)> back = nullptr, int param_slot = -1);
  void accumulate(Id id, const Matrix& delta);
  bool has_grad(Id id) const { return !nodes_[id].grad.empty(); }
  Matrix& grad_ref(Id id) { return nodes_[id].grad; }

  std::vector<Node> nodes_;
  ParameterStore* store_ = nullptr;
  bool backward_done_ = false;
};

} // namespace csp
