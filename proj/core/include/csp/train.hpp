#pragma once

#include <cstdint>
#include <vector>

#include "csp/model.hpp"
#include "csp/task.hpp"

namespace csp {

struct TrainConfig {
  std::size_t steps = 500;
  double lr = 0.2;
  bool cosine_decay = false;
  std::size_t batch_size = 64;
  std::size_t eval_interval = 50;
  std::size_t eval_batches = 4; ///< fixed held-out batches for accuracy
  std::uint64_t seed = 0;       ///< model init seed
};

struct MetricPoint {
  std::size_t step = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  std::vector<MetricPoint> history;
  double final_loss = 0.0;
  double final_accuracy = 0.0;
};

/// Plain SGD with fixed (optionally cosine-decayed) learning rate and
/// cross-entropy loss; fully deterministic given the seeds in the config and
/// task. Throws NumericError naming the step if the loss diverges.
TrainResult train_model(Model& model, const SyntheticTask& task, const TrainConfig& cfg);

/// Builds the model from the spec and trains it.
TrainResult train(const ModelSpec& spec, const SyntheticTask& task, const TrainConfig& cfg);

} // namespace csp
