#include "csp/model.hpp"

#include <algorithm>
#include <cmath>

#include "csp/error.hpp"
#include "csp/rng.hpp"

namespace csp {

std::string model_name(ModelKind kind) {
  return kind == ModelKind::CspFormer ? "csp-former" : "mha-former";
}

void ModelSpec::validate() const {
  if (model_dim == 0 || layers == 0 || classes < 2 || sequence_length < 2 || vocab < 2) {
    throw ConfigError("model spec has degenerate dimensions");
  }
  if (kind == ModelKind::MhaFormer && (heads == 0 || model_dim % heads != 0)) {
    throw ConfigError("head count " + std::to_string(heads) + " must divide model dim " +
                      std::to_string(model_dim));
  }
  if (kind == ModelKind::CspFormer && (groups == 0 || sequence_length % groups != 0)) {
    throw ConfigError("group count " + std::to_string(groups) +
                      " must divide sequence length " + std::to_string(sequence_length));
  }
}

ParamBreakdown param_count(const ModelSpec& spec) {
  spec.validate();
  const std::size_t c = spec.model_dim;
  ParamBreakdown b;
  b.embedding = spec.vocab * c;
  b.positional = spec.sequence_length * c;
  b.attention = spec.layers * (spec.kind == ModelKind::CspFormer ? c * c : 3 * c * c);
  b.ffn = spec.layers * 2 * c * spec.resolved_ffn_hidden();
  b.classifier = c * spec.classes;
  return b;
}

Model::Model(const ModelSpec& spec, std::uint64_t seed) : spec_(spec) {
  spec_.validate();
  Rng rng(seed);
  const std::size_t c = spec_.model_dim;
  const std::size_t h = spec_.resolved_ffn_hidden();
  const double scale = 0.2 / std::sqrt(static_cast<double>(c));

  embedding_slot_ = params_.add("embedding", rng.normal_matrix(spec_.vocab, c, 1.0));
  positional_slot_ = params_.add("positional",
                                 rng.normal_matrix(spec_.sequence_length, c, 0.1));
  for (std::size_t l = 0; l < spec_.layers; ++l) {
    LayerSlots slots;
    const std::string prefix = "layer" + std::to_string(l) + ".";
    if (spec_.kind == ModelKind::CspFormer) {
      slots.csp_w = params_.add(prefix + "csp_w", rng.normal_matrix(c, c, scale));
    } else {
      const std::size_t d = c / spec_.heads;
      for (std::size_t m = 0; m < spec_.heads; ++m) {
        const std::string head = prefix + "head" + std::to_string(m) + ".";
        slots.wq.push_back(params_.add(head + "wq", rng.normal_matrix(c, d, scale)));
        slots.wk.push_back(params_.add(head + "wk", rng.normal_matrix(c, d, scale)));
        slots.wv.push_back(params_.add(head + "wv", rng.normal_matrix(c, d, scale)));
      }
    }
    slots.ffn1 = params_.add(prefix + "ffn1", rng.normal_matrix(c, h, scale));
    slots.ffn2 = params_.add(prefix + "ffn2", rng.normal_matrix(h, c, scale));
    layer_slots_.push_back(std::move(slots));
  }
  classifier_slot_ = params_.add("classifier", rng.normal_matrix(c, spec_.classes, scale));
}

namespace {

// Exact multiset equality per column; the sublayer may only reorder values.
void check_conservation(const Matrix& values, const Matrix& permuted) {
  for (std::size_t c = 0; c < values.cols(); ++c) {
    std::vector<double> a = values.col(c);
    std::vector<double> b = permuted.col(c);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      throw NumericError("CSP sublayer changed the value multiset in channel " +
                         std::to_string(c));
    }
  }
}

} // namespace

Model::ForwardStats Model::forward(Tape& tape, const Batch& batch,
                                   const ForwardOptions& opts) const {
  const std::size_t batch_size = batch.tokens.size();
  if (batch_size == 0 || batch.labels.size() != batch_size) {
    throw ShapeError("batch needs matching nonempty token and label lists");
  }
  const std::size_t n = spec_.sequence_length;
  const std::size_t c = spec_.model_dim;

  const Tape::Id embedding = tape.param(embedding_slot_);
  const Tape::Id positional = tape.param(positional_slot_);
  const Tape::Id classifier = tape.param(classifier_slot_);

  if (opts.capture_traces != nullptr) {
    opts.capture_traces->assign(batch_size, {});
  }

  ForwardStats stats;
  stats.logits = Matrix(batch_size, spec_.classes);
  std::vector<Tape::Id> losses;
  losses.reserve(batch_size);
  std::size_t correct = 0;

  for (std::size_t s = 0; s < batch_size; ++s) {
    if (batch.tokens[s].size() != n) {
      throw ShapeError("sequence " + std::to_string(s) + " has length " +
                       std::to_string(batch.tokens[s].size()) + ", expected " +
                       std::to_string(n));
    }
    Tape::Id x = tape.add(tape.gather_rows(embedding, batch.tokens[s]), positional);
    if (!batch.jitter.empty()) {
      Matrix noise(n, c);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) noise(i, j) = batch.jitter[s][i];
      x = tape.add(x, tape.input(std::move(noise)));
    }

    for (std::size_t l = 0; l < spec_.layers; ++l) {
      const LayerSlots& slots = layer_slots_[l];
      Tape::Id sublayer = 0;
      if (spec_.kind == ModelKind::CspFormer) {
        const Tape::Id v = tape.matmul(x, tape.param(slots.csp_w));
        CspTrace trace;
        if (opts.frozen_traces != nullptr) {
          trace = (*opts.frozen_traces)[s][l];
        } else {
          CspConfig cfg;
          cfg.groups = spec_.groups;
          cfg.schedule = spec_.schedule;
          if (cfg.schedule.kind == ScheduleKind::PowerLaw) {
            cfg.schedule.layer_index = l;
            cfg.schedule.layer_count = spec_.layers;
          }
          trace = csp_forward(tape.value(v), cfg).trace;
        }
        if (opts.capture_traces != nullptr) {
          (*opts.capture_traces)[s].push_back(trace);
        }
        sublayer = tape.permute_rows_per_column(v, trace.per_channel_total);
        if (opts.check_value_conservation) {
          check_conservation(tape.value(v), tape.value(sublayer));
        }
      } else {
        const std::size_t d = c / spec_.heads;
        const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
        std::vector<Tape::Id> heads;
        heads.reserve(spec_.heads);
        for (std::size_t m = 0; m < spec_.heads; ++m) {
          const Tape::Id q = tape.matmul(x, tape.param(slots.wq[m]));
          const Tape::Id k = tape.matmul(x, tape.param(slots.wk[m]));
          const Tape::Id v = tape.matmul(x, tape.param(slots.wv[m]));
          const Tape::Id logits = tape.scale(tape.matmul(q, tape.transpose(k)), inv_sqrt_d);
          heads.push_back(tape.matmul(tape.softmax_rows(logits), v));
        }
        sublayer = heads.size() == 1 ? heads.front() : tape.concat_cols(heads);
      }
      x = spec_.skip_connections ? tape.add(x, sublayer) : sublayer;

      const Tape::Id hidden = tape.relu(tape.matmul(x, tape.param(slots.ffn1)));
      const Tape::Id ffn_out = tape.matmul(hidden, tape.param(slots.ffn2));
      x = spec_.skip_connections ? tape.add(x, ffn_out) : ffn_out;
    }

    const Tape::Id pooled = spec_.pooling == Pooling::Mean ? tape.mean_rows(x) : tape.first_row(x);
    const Tape::Id logits = tape.matmul(pooled, classifier);
    losses.push_back(tape.softmax_cross_entropy(logits, batch.labels[s]));

    const Matrix& lv = tape.value(logits);
    std::size_t best = 0;
    for (std::size_t j = 1; j < spec_.classes; ++j)
      if (lv(0, j) > lv(0, best)) best = j;
    stats.predictions.push_back(best);
    if (best == batch.labels[s]) ++correct;
    for (std::size_t j = 0; j < spec_.classes; ++j) stats.logits(s, j) = lv(0, j);
  }

  stats.loss = tape.mean_scalars(losses);
  stats.loss_value = tape.value(stats.loss)(0, 0);
  stats.accuracy = static_cast<double>(correct) / static_cast<double>(batch_size);
  return stats;
}

} // namespace csp
