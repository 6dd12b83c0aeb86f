#include "csp/task.hpp"

#include <algorithm>

#include "csp/error.hpp"
#include "csp/rng.hpp"

namespace csp {

std::string task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::MajorityToken: return "majority-token";
    case TaskKind::SortedOrNot: return "sorted-or-not";
    case TaskKind::LongRangeMatch: return "long-range-match";
  }
  return "unknown";
}

namespace {

std::vector<std::size_t> make_majority(const SyntheticTask& task, std::size_t label, Rng& rng) {
  const std::size_t n = task.sequence_length;
  // Count of ones strictly on the label's side of n/2; exact ties are never
  // generated.
  const std::size_t half = n / 2;
  std::size_t ones = 0;
  if (label == 1) {
    ones = half + 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n - half - 1)));
  } else {
    ones = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(half > 0 ? half - 1 : 0)));
  }
  std::vector<std::size_t> tokens(n, 0);
  std::fill(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(ones), std::size_t{1});
  // Fisher-Yates with the deterministic stream.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(tokens[i - 1], tokens[j]);
  }
  return tokens;
}

std::vector<std::size_t> make_sorted_or_not(const SyntheticTask& task, std::size_t label,
                                            Rng& rng) {
  const std::size_t n = task.sequence_length;
  std::vector<std::size_t> tokens(n);
  for (auto& t : tokens)
    t = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(task.vocab - 1)));
  if (label == 1) {
    std::sort(tokens.begin(), tokens.end());
    return tokens;
  }
  while (std::is_sorted(tokens.begin(), tokens.end())) {
    for (auto& t : tokens)
      t = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(task.vocab - 1)));
  }
  return tokens;
}

std::vector<std::size_t> make_long_range_match(const SyntheticTask& task, std::size_t label,
                                               Rng& rng) {
  const std::size_t n = task.sequence_length;
  std::vector<std::size_t> tokens(n);
  for (auto& t : tokens)
    t = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(task.vocab - 1)));
  if (label == 1) {
    tokens[n - 1] = tokens[0];
  } else if (tokens[n - 1] == tokens[0]) {
    tokens[n - 1] = (tokens[0] + 1) % task.vocab;
  }
  return tokens;
}

} // namespace

Batch generate_batch(const SyntheticTask& task, std::size_t batch_size,
                     std::uint64_t batch_index) {
  if (task.sequence_length < 2 || task.vocab < 2 || batch_size == 0) {
    throw ConfigError("task needs sequence_length >= 2, vocab >= 2 and a nonempty batch");
  }
  if (task.kind == TaskKind::SortedOrNot && task.vocab < 3) {
    throw ConfigError("sorted-or-not needs vocab >= 3 to keep unsorted sequences likely");
  }
  Rng rng(task.generator_seed + 0x9e3779b97f4a7c15ULL * (batch_index + 1));

  // Exactly balanced label multiset, then a deterministic shuffle.
  std::vector<std::size_t> labels(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) labels[i] = i % 2;
  for (std::size_t i = batch_size; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(labels[i - 1], labels[j]);
  }

  Batch batch;
  batch.labels = labels;
  batch.tokens.reserve(batch_size);
  batch.jitter.reserve(batch_size);
  for (std::size_t s = 0; s < batch_size; ++s) {
    switch (task.kind) {
      case TaskKind::MajorityToken:
        batch.tokens.push_back(make_majority(task, labels[s], rng));
        break;
      case TaskKind::SortedOrNot:
        batch.tokens.push_back(make_sorted_or_not(task, labels[s], rng));
        break;
      case TaskKind::LongRangeMatch:
        batch.tokens.push_back(make_long_range_match(task, labels[s], rng));
        break;
    }
    batch.jitter.push_back(rng.uniform_vector(task.sequence_length, -1e-9, 1e-9));
  }
  return batch;
}

} // namespace csp
