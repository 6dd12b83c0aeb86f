#include "csp/attention.hpp"

#include <cmath>
#include <string>

#include "csp/error.hpp"

namespace csp {

void AttentionParams::validate() const {
  if (wq.size() != wk.size() || wq.size() != wv.size() || wv.empty()) {
    throw ConfigError("attention params need matching nonempty head lists");
  }
  const std::size_t c = model_dim();
  const std::size_t d = head_dim();
  for (std::size_t m = 0; m < heads(); ++m) {
    for (const Matrix* w : {&wq[m], &wk[m], &wv[m]}) {
      if (w->rows() != c || w->cols() != d) {
        throw ConfigError("head " + std::to_string(m) + " projection is " + w->shape_str() +
                          ", expected " + std::to_string(c) + "x" + std::to_string(d));
      }
    }
  }
  if (heads() * d != c) {
    throw ConfigError("heads * head_dim = " + std::to_string(heads() * d) +
                      " must equal model dim " + std::to_string(c));
  }
}

AttentionParams AttentionParams::random(std::size_t model_dim, std::size_t heads,
                                        double sigma, Rng& rng) {
  if (heads == 0 || model_dim % heads != 0) {
    throw ConfigError("head count " + std::to_string(heads) + " must divide model dim " +
                      std::to_string(model_dim));
  }
  const std::size_t d = model_dim / heads;
  AttentionParams p;
  for (std::size_t m = 0; m < heads; ++m) {
    p.wq.push_back(rng.normal_matrix(model_dim, d, sigma));
    p.wk.push_back(rng.normal_matrix(model_dim, d, sigma));
    p.wv.push_back(rng.normal_matrix(model_dim, d, sigma));
  }
  return p;
}

Matrix softmax_attention_map(const Matrix& q, const Matrix& k) {
  if (q.rows() != k.rows() || q.cols() != k.cols()) {
    throw ShapeError("softmax_attention: query " + q.shape_str() + " vs key " + k.shape_str());
  }
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  Matrix logits = matmul(q, transpose(k));
  for (std::size_t i = 0; i < logits.size(); ++i) logits.data()[i] *= inv_sqrt_d;

  for (std::size_t i = 0; i < logits.rows(); ++i) {
    auto row = logits.row(i);
    double row_max = row[0];
    for (const double v : row) row_max = std::max(row_max, v);
    double sum = 0.0;
    for (double& v : row) {
      v = std::exp(v - row_max);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
  return logits;
}

Matrix softmax_attention(const Matrix& v, const Matrix& q, const Matrix& k) {
  if (v.rows() != q.rows()) {
    throw ShapeError("softmax_attention: value " + v.shape_str() + " vs query " + q.shape_str());
  }
  return matmul(softmax_attention_map(q, k), v);
}

Matrix multi_head_attention(const Matrix& x, const AttentionParams& params) {
  params.validate();
  if (x.cols() != params.model_dim()) {
    throw ShapeError("multi_head_attention: input " + x.shape_str() + " vs model dim " +
                     std::to_string(params.model_dim()));
  }
  const std::size_t d = params.head_dim();
  Matrix out(x.rows(), params.model_dim());
  for (std::size_t m = 0; m < params.heads(); ++m) {
    const Matrix head = softmax_attention(matmul(x, params.wv[m]), matmul(x, params.wq[m]),
                                          matmul(x, params.wk[m]));
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < d; ++j) out(i, m * d + j) = head(i, j);
  }
  return out;
}

namespace {

void normalize_rows(Matrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = a.row(i);
    double sum = 0.0;
    for (const double v : row) sum += v;
    for (double& v : row) v /= sum;
  }
}

void normalize_cols(Matrix& a) {
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, j);
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) /= sum;
  }
}

bool margins_near_one(const Matrix& a, double tol) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j);
    if (std::abs(sum - 1.0) > tol) return false;
  }
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, j);
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

} // namespace

Matrix sinkhorn_normalize(const Matrix& a, std::size_t iterations) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ShapeError("sinkhorn_normalize requires a nonempty matrix");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.data()[i] > 0.0)) {
      throw NumericError("sinkhorn_normalize requires strictly positive entries");
    }
  }
  Matrix out = a;
  for (std::size_t t = 0; t < iterations; ++t) {
    normalize_rows(out);
    normalize_cols(out);
  }
  return out;
}

GroupedSinkhornResult grouped_sinkhorn_attention(const Matrix& v, const SinkhornConfig& cfg) {
  const std::size_t n = v.rows();
  const std::size_t c = v.cols();
  if (n == 0 || c == 0) {
    throw ShapeError("grouped_sinkhorn_attention requires a nonempty input");
  }
  if (cfg.groups == 0 || n % cfg.groups != 0) {
    throw ConfigError("group count " + std::to_string(cfg.groups) +
                      " does not divide sequence length " + std::to_string(n));
  }
  if (!(cfg.temperature > 0.0)) {
    throw ConfigError("sinkhorn temperature must be positive");
  }
  const std::size_t group = n / cfg.groups;
  const std::vector<double> reference = v.col(0);

  GroupedSinkhornResult result;
  result.output = Matrix(n, c);
  result.maps.reserve(c);
  result.doubly_stochastic.reserve(c);

  for (std::size_t ch = 0; ch < c; ++ch) {
    const std::vector<double> channel = v.col(ch);
    Matrix map(n, n);
    for (std::size_t g = 0; g < cfg.groups; ++g) {
      const std::size_t base = g * group;
      Matrix kernel(group, group);
      for (std::size_t i = 0; i < group; ++i)
        for (std::size_t j = 0; j < group; ++j)
          kernel(i, j) = std::exp(reference[base + i] * channel[base + j] / cfg.temperature);
      if (!kernel.all_finite()) {
        throw NumericError("sinkhorn kernel overflowed at temperature " +
                           std::to_string(cfg.temperature));
      }
      const Matrix block = sinkhorn_normalize(kernel, cfg.iterations);
      for (std::size_t i = 0; i < group; ++i)
        for (std::size_t j = 0; j < group; ++j) map(base + i, base + j) = block(i, j);
    }
    std::vector<double> out_col(n, 0.0);
    for (std::size_t g = 0; g < cfg.groups; ++g) {
      const std::size_t base = g * group;
      for (std::size_t i = 0; i < group; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < group; ++j) sum += map(base + i, base + j) * channel[base + j];
        out_col[base + i] = sum;
      }
    }
    result.output.set_col(ch, out_col);
    result.doubly_stochastic.push_back(margins_near_one(map, 1e-9));
    result.maps.push_back(std::move(map));
  }
  return result;
}

} // namespace csp
