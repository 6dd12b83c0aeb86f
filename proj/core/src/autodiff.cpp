#include "csp/autodiff.hpp"

#include <cmath>

#include "csp/error.hpp"

namespace csp {

std::size_t ParameterStore::add(std::string name, Matrix init) {
  Parameter p;
  p.name = std::move(name);
  p.grad = Matrix(init.rows(), init.cols());
  p.value = std::move(init);
  params_.push_back(std::move(p));
  return params_.size() - 1;
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t total = 0;
  for (const Parameter& p : params_) total += p.value.size();
  return total;
}

void ParameterStore::zero_grads() {
  for (Parameter& p : params_) p.grad = Matrix(p.value.rows(), p.value.cols());
}

Tape::Id Tape::push(Matrix value, std::function<void(Tape&)> back, int param_slot) {
  Node node;
  node.value = std::move(value);
  node.back = std::move(back);
  node.param_slot = param_slot;
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

void Tape::accumulate(Id id, const Matrix& delta) {
  Matrix& g = nodes_[id].grad;
  if (g.empty()) {
    g = delta;
    return;
  }
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += delta.data()[i];
}

Tape::Id Tape::input(Matrix value) { return push(std::move(value)); }

Tape::Id Tape::param(std::size_t slot) {
  if (store_ == nullptr) {
    throw Error("tape has no parameter store attached");
  }
  return push((*store_)[slot].value, nullptr, static_cast<int>(slot));
}

Tape::Id Tape::matmul(Id a, Id b) {
  Matrix out = csp::matmul(value(a), value(b));
  return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
    const Matrix& dout = t.grad(self);
    t.accumulate(a, csp::matmul(dout, csp::transpose(t.value(b))));
    t.accumulate(b, csp::matmul(csp::transpose(t.value(a)), dout));
  });
}

Tape::Id Tape::add(Id a, Id b) {
  Matrix out = csp::add(value(a), value(b));
  return push(std::move(out), [a, b, self = nodes_.size()](Tape& t) {
    t.accumulate(a, t.grad(self));
    t.accumulate(b, t.grad(self));
  });
}

Tape::Id Tape::scale(Id a, double s) {
  Matrix out = csp::scale(value(a), s);
  return push(std::move(out), [a, s, self = nodes_.size()](Tape& t) {
    t.accumulate(a, csp::scale(t.grad(self), s));
  });
}

Tape::Id Tape::relu(Id a) {
  Matrix out = csp::relu(value(a));
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const Matrix& x = t.value(a);
    Matrix dx = t.grad(self);
    for (std::size_t i = 0; i < dx.size(); ++i)
      if (x.data()[i] <= 0.0) dx.data()[i] = 0.0;
    t.accumulate(a, dx);
  });
}

Tape::Id Tape::transpose(Id a) {
  Matrix out = csp::transpose(value(a));
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    t.accumulate(a, csp::transpose(t.grad(self)));
  });
}

Tape::Id Tape::softmax_rows(Id a) {
  const Matrix& x = value(a);
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double row_max = x(i, 0);
    for (std::size_t j = 1; j < x.cols(); ++j) row_max = std::max(row_max, x(i, j));
    double sum = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out(i, j) = std::exp(x(i, j) - row_max);
      sum += out(i, j);
    }
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) /= sum;
  }
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const Matrix& y = t.value(self);
    const Matrix& dy = t.grad(self);
    Matrix dx(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.rows(); ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < y.cols(); ++j) dot += dy(i, j) * y(i, j);
      for (std::size_t j = 0; j < y.cols(); ++j) dx(i, j) = y(i, j) * (dy(i, j) - dot);
    }
    t.accumulate(a, dx);
  });
}

Tape::Id Tape::permute_rows_per_column(Id a, std::vector<Permutation> perms) {
  const Matrix& x = value(a);
  if (perms.size() != x.cols()) {
    throw ShapeError("need one permutation per column: " + std::to_string(perms.size()) +
                     " vs " + std::to_string(x.cols()));
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const Permutation& p = perms[c];
    if (p.size() != x.rows()) {
      throw ShapeError("permutation size " + std::to_string(p.size()) + " vs " +
                       std::to_string(x.rows()) + " rows");
    }
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, c) = x(p[i], c);
  }
  return push(std::move(out),
              [a, perms = std::move(perms), self = nodes_.size()](Tape& t) {
                const Matrix& dout = t.grad(self);
                Matrix dx(dout.rows(), dout.cols());
                for (std::size_t c = 0; c < dout.cols(); ++c) {
                  const Permutation& p = perms[c];
                  for (std::size_t i = 0; i < dout.rows(); ++i) dx(p[i], c) += dout(i, c);
                }
                t.accumulate(a, dx);
              });
}

Tape::Id Tape::gather_rows(Id table, std::vector<std::size_t> rows) {
  const Matrix& t = value(table);
  Matrix out(rows.size(), t.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= t.rows()) {
      throw ShapeError("gather index " + std::to_string(rows[r]) + " out of range for " +
                       t.shape_str());
    }
    for (std::size_t j = 0; j < t.cols(); ++j) out(r, j) = t(rows[r], j);
  }
  return push(std::move(out),
              [table, rows = std::move(rows), self = nodes_.size()](Tape& tp) {
                const Matrix& dout = tp.grad(self);
                const Matrix& tv = tp.value(table);
                Matrix dt(tv.rows(), tv.cols());
                for (std::size_t r = 0; r < rows.size(); ++r)
                  for (std::size_t j = 0; j < dout.cols(); ++j) dt(rows[r], j) += dout(r, j);
                tp.accumulate(table, dt);
              });
}

Tape::Id Tape::mean_rows(Id a) {
  const Matrix& x = value(a);
  Matrix out(1, x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) sum += x(i, j);
    out(0, j) = sum / static_cast<double>(x.rows());
  }
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const Matrix& dout = t.grad(self);
    const Matrix& x = t.value(a);
    const double inv = 1.0 / static_cast<double>(x.rows());
    Matrix dx(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) dx(i, j) = dout(0, j) * inv;
    t.accumulate(a, dx);
  });
}

Tape::Id Tape::first_row(Id a) {
  const Matrix& x = value(a);
  Matrix out(1, x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) out(0, j) = x(0, j);
  return push(std::move(out), [a, self = nodes_.size()](Tape& t) {
    const Matrix& dout = t.grad(self);
    const Matrix& x = t.value(a);
    Matrix dx(x.rows(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) dx(0, j) = dout(0, j);
    t.accumulate(a, dx);
  });
}

Tape::Id Tape::concat_cols(const std::vector<Id>& parts) {
  if (parts.empty()) {
    throw ShapeError("concat_cols needs at least one part");
  }
  const std::size_t rows = value(parts.front()).rows();
  std::size_t cols = 0;
  for (const Id id : parts) {
    if (value(id).rows() != rows) {
      throw ShapeError("concat_cols: inconsistent row counts");
    }
    cols += value(id).cols();
  }
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (const Id id : parts) {
    const Matrix& x = value(id);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) out(i, offset + j) = x(i, j);
    offset += x.cols();
  }
  return push(std::move(out), [parts, self = nodes_.size()](Tape& t) {
    const Matrix& dout = t.grad(self);
    std::size_t offset = 0;
    for (const Id id : parts) {
      const Matrix& x = t.value(id);
      Matrix dx(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) dx(i, j) = dout(i, offset + j);
      t.accumulate(id, dx);
      offset += x.cols();
    }
  });
}

Tape::Id Tape::softmax_cross_entropy(Id logits, std::size_t label) {
  const Matrix& x = value(logits);
  if (x.rows() != 1 || label >= x.cols()) {
    throw ShapeError("softmax_cross_entropy expects 1xK logits and label < K");
  }
  double row_max = x(0, 0);
  for (std::size_t j = 1; j < x.cols(); ++j) row_max = std::max(row_max, x(0, j));
  double sum = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) sum += std::exp(x(0, j) - row_max);
  const double lse = row_max + std::log(sum);
  Matrix out(1, 1);
  out(0, 0) = lse - x(0, label);
  return push(std::move(out), [logits, label, lse, self = nodes_.size()](Tape& t) {
    const double dloss = t.grad(self)(0, 0);
    const Matrix& x = t.value(logits);
    Matrix dx(1, x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double p = std::exp(x(0, j) - lse);
      dx(0, j) = dloss * (p - (j == label ? 1.0 : 0.0));
    }
    t.accumulate(logits, dx);
  });
}

Tape::Id Tape::mean_scalars(const std::vector<Id>& scalars) {
  if (scalars.empty()) {
    throw ShapeError("mean_scalars needs at least one term");
  }
  double sum = 0.0;
  for (const Id id : scalars) {
    if (value(id).rows() != 1 || value(id).cols() != 1) {
      throw ShapeError("mean_scalars expects 1x1 nodes");
    }
    sum += value(id)(0, 0);
  }
  Matrix out(1, 1);
  out(0, 0) = sum / static_cast<double>(scalars.size());
  return push(std::move(out), [scalars, self = nodes_.size()](Tape& t) {
    const double d = t.grad(self)(0, 0) / static_cast<double>(scalars.size());
    Matrix unit(1, 1);
    unit(0, 0) = d;
    for (const Id id : scalars) t.accumulate(id, unit);
  });
}

void Tape::backward(Id root) {
  if (nodes_.empty()) {
    throw Error("backward called before any forward computation was recorded");
  }
  if (root >= nodes_.size()) {
    throw Error("backward root is not a node of this tape");
  }
  if (backward_done_) {
    throw Error("backward already ran on this tape");
  }
  const Matrix& rv = nodes_[root].value;
  if (rv.rows() != 1 || rv.cols() != 1) {
    throw ShapeError("backward root must be a 1x1 scalar, got " + rv.shape_str());
  }
  backward_done_ = true;

  Matrix seed(1, 1);
  seed(0, 0) = 1.0;
  accumulate(root, seed);
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Node& node = nodes_[i];
    if (node.grad.empty()) continue;
    if (node.back) node.back(*this);
    if (node.param_slot >= 0 && store_ != nullptr) {
      Matrix& pg = (*store_)[static_cast<std::size_t>(node.param_slot)].grad;
      for (std::size_t k = 0; k < pg.size(); ++k) pg.data()[k] += node.grad.data()[k];
    }
  }
}

} // namespace csp
