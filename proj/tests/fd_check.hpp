#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "csp/model.hpp"
#include "csp/task.hpp"

namespace csp::testutil {

struct FdReport {
  double max_relative_error = 0.0;
  std::size_t probes = 0;
};

/// Central-difference gradient check of a model's batch loss against the
/// tape gradients. Probes `probes` parameter entries spread uniformly across
/// the whole parameter vector. The relative-error denominator is floored at
/// 1e-3, the typical gradient scale, so near-zero gradients are compared
/// absolutely at the same precision.
inline FdReport fd_check_model(Model& model, const Batch& batch, std::size_t probes,
                               double h = 1e-5) {
  const auto loss_of = [&] {
    Tape tape(&model.params());
    return model.forward(tape, batch).loss_value;
  };

  model.params().zero_grads();
  {
    Tape tape(&model.params());
    const Model::ForwardStats stats = model.forward(tape, batch);
    tape.backward(stats.loss);
  }

  const std::size_t total = model.params().scalar_count();
  const std::size_t stride = std::max<std::size_t>(1, total / probes);

  FdReport report;
  std::size_t flat = 0;
  for (std::size_t p = 0; p < model.params().count(); ++p) {
    Parameter& param = model.params()[p];
    for (std::size_t i = 0; i < param.value.size(); ++i, ++flat) {
      if (flat % stride != 0 || report.probes >= probes) continue;
      double& entry = param.value.data()[i];
      const double saved = entry;
      entry = saved + h;
      const double up = loss_of();
      entry = saved - h;
      const double down = loss_of();
      entry = saved;
      const double fd = (up - down) / (2.0 * h);
      const double ad = param.grad.data()[i];
      const double denom = std::max({std::abs(fd), std::abs(ad), 1e-3});
      report.max_relative_error = std::max(report.max_relative_error, std::abs(fd - ad) / denom);
      ++report.probes;
    }
  }
  return report;
}

} // namespace csp::testutil
