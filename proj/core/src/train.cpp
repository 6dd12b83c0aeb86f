#include "csp/train.hpp"

#include <cmath>
#include <string>

#include "csp/error.hpp"

namespace csp {

namespace {

// Batch indices >= this belong to the fixed evaluation stream.
constexpr std::uint64_t kEvalStreamBase = 1ull << 40;

struct EvalStats {
  double loss = 0.0;
  double accuracy = 0.0;
};

// Loss and accuracy on the fixed evaluation stream, so the recorded history
// depends only on the current parameters.
EvalStats evaluate(Model& model, const SyntheticTask& task, const TrainConfig& cfg) {
  std::size_t correct = 0;
  std::size_t total = 0;
  double loss_sum = 0.0;
  for (std::size_t b = 0; b < cfg.eval_batches; ++b) {
    const Batch batch = generate_batch(task, cfg.batch_size, kEvalStreamBase + b);
    Tape tape(&model.params());
    const Model::ForwardStats stats = model.forward(tape, batch);
    for (std::size_t s = 0; s < batch.labels.size(); ++s)
      if (stats.predictions[s] == batch.labels[s]) ++correct;
    total += batch.labels.size();
    loss_sum += stats.loss_value;
  }
  EvalStats out;
  out.loss = loss_sum / static_cast<double>(cfg.eval_batches);
  out.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  return out;
}

} // namespace

TrainResult train_model(Model& model, const SyntheticTask& task, const TrainConfig& cfg) {
  TrainResult result;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const Batch batch = generate_batch(task, cfg.batch_size, step);
    model.params().zero_grads();
    Tape tape(&model.params());
    const Model::ForwardStats stats = model.forward(tape, batch);
    if (!std::isfinite(stats.loss_value)) {
      throw NumericError("training loss diverged at step " + std::to_string(step));
    }
    tape.backward(stats.loss);

    const double lr = cfg.cosine_decay
        ? cfg.lr * 0.5 * (1.0 + std::cos(3.141592653589793 * static_cast<double>(step) /
                                         static_cast<double>(cfg.steps)))
        : cfg.lr;
    for (std::size_t p = 0; p < model.params().count(); ++p) {
      Parameter& param = model.params()[p];
      for (std::size_t i = 0; i < param.value.size(); ++i)
        param.value.data()[i] -= lr * param.grad.data()[i];
    }

    if ((step + 1) % cfg.eval_interval == 0 || step + 1 == cfg.steps) {
      const EvalStats eval = evaluate(model, task, cfg);
      MetricPoint point;
      point.step = step + 1;
      point.loss = eval.loss;
      point.accuracy = eval.accuracy;
      result.history.push_back(point);
    }
  }
  result.final_loss = result.history.empty() ? 0.0 : result.history.back().loss;
  result.final_accuracy = result.history.empty() ? 0.0 : result.history.back().accuracy;
  return result;
}

TrainResult train(const ModelSpec& spec, const SyntheticTask& task, const TrainConfig& cfg) {
  Model model(spec, cfg.seed);
  return train_model(model, task, cfg);
}

} // namespace csp
