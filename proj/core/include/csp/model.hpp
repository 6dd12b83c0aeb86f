#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csp/autodiff.hpp"
#include "csp/csp_operator.hpp"
#include "csp/schedule.hpp"
#include "csp/task.hpp"

namespace csp {

enum class ModelKind { CspFormer, MhaFormer };
enum class Pooling { Mean, Cls };

std::string model_name(ModelKind kind);

/// Tiny sequence classifier: token embedding + learned positional table,
/// L blocks of (attention sublayer, feed-forward) with optional skip
/// connections, pooling and a linear classifier.
struct ModelSpec {
  ModelKind kind = ModelKind::CspFormer;
  std::size_t layers = 2;
  std::size_t model_dim = 32; ///< C
  std::size_t heads = 4;      ///< MHA only; heads must divide model_dim
  std::size_t groups = 8;     ///< CSP only; must divide sequence_length
  ShiftSchedule schedule;     ///< CSP only
  Pooling pooling = Pooling::Mean;
  std::size_t classes = 2;
  bool skip_connections = true;
  std::size_t sequence_length = 32;
  std::size_t vocab = 2;
  std::size_t ffn_hidden = 0; ///< 0 means 2 * model_dim

  std::size_t resolved_ffn_hidden() const { return ffn_hidden == 0 ? 2 * model_dim : ffn_hidden; }
  void validate() const;
};

/// Exact trainable-parameter counts per component.
struct ParamBreakdown {
  std::size_t embedding = 0;
  std::size_t positional = 0;
  std::size_t attention = 0; ///< all attention sublayers
  std::size_t ffn = 0;
  std::size_t classifier = 0;

  std::size_t total() const { return embedding + positional + attention + ffn + classifier; }
};

ParamBreakdown param_count(const ModelSpec& spec);

class Model {
 public:
  Model(const ModelSpec& spec, std::uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }

  struct ForwardOptions {
    /// Verify that every CSP sublayer output is column-wise a permutation of
    /// its projected values (exact multiset equality) and throw otherwise.
    bool check_value_conservation = false;
    /// Replay these permutations instead of recomputing them from values
    /// (indexed [sample][layer]).
    const std::vector<std::vector<CspTrace>>* frozen_traces = nullptr;
    /// Record the permutations chosen by this pass.
    std::vector<std::vector<CspTrace>>* capture_traces = nullptr;
  };

  struct ForwardStats {
    Tape::Id loss = 0;
    double loss_value = 0.0;
    double accuracy = 0.0;
    std::vector<std::size_t> predictions;
    Matrix logits; ///< B x classes
  };

  /// Builds the forward graph for a batch on `tape` (which must be bound to
  /// this model's parameter store) and returns the mean cross-entropy loss
  /// node plus batch statistics.
  ForwardStats forward(Tape& tape, const Batch& batch, const ForwardOptions& opts) const;
  ForwardStats forward(Tape& tape, const Batch& batch) const {
    return forward(tape, batch, ForwardOptions{});
  }

 private:
  struct LayerSlots {
    std::size_t csp_w = 0;                  // CspFormer
    std::vector<std::size_t> wq, wk, wv;    // MhaFormer
    std::size_t ffn1 = 0, ffn2 = 0;
  };

  ModelSpec spec_;
  ParameterStore params_;
  std::size_t embedding_slot_ = 0;
  std::size_t positional_slot_ = 0;
  std::vector<LayerSlots> layer_slots_;
  std::size_t classifier_slot_ = 0;
};

} // namespace csp
