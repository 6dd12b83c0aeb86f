#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace csp {

enum class TaskKind { MajorityToken, SortedOrNot, LongRangeMatch };

std::string task_name(TaskKind kind);

/// Synthetic binary sequence-classification tasks used by the training lab.
struct SyntheticTask {
  TaskKind kind = TaskKind::MajorityToken;
  std::size_t sequence_length = 32;
  std::size_t vocab = 2;
  std::size_t classes = 2;
  std::uint64_t generator_seed = 0;
};

/// One batch of token sequences. `jitter` carries per-position tie-breaking
/// noise at 1e-9 scale, added to every channel of the embedded sequence so
/// discrete tokens never produce exact sorting ties.
struct Batch {
  std::vector<std::vector<std::size_t>> tokens; ///< B x N
  std::vector<std::size_t> labels;              ///< B
  std::vector<std::vector<double>> jitter;      ///< B x N
};

/// Deterministic batch generation: the pair (task.generator_seed,
/// batch_index) pins every token. Labels are exactly balanced for even batch
/// sizes and within one sample otherwise, then shuffled.
Batch generate_batch(const SyntheticTask& task, std::size_t batch_size,
                     std::uint64_t batch_index);

} // namespace csp
