#pragma once

#include <cstddef>
#include <vector>

namespace csp {

enum class ScheduleKind { Linear, PowerLaw, Explicit };

/// Per-channel circular-shift step assignment. Linear spaces steps evenly
/// when the sequence length is comparable to the channel count; PowerLaw
/// spans a long sequence with geometrically growing steps shared across the
/// layers of a model; Explicit supplies raw steps.
struct ShiftSchedule {
  ScheduleKind kind = ScheduleKind::Linear;
  std::vector<std::size_t> steps; ///< Explicit only
  std::size_t layer_index = 0;    ///< PowerLaw: this layer's index l in [0, L)
  std::size_t layer_count = 1;    ///< PowerLaw: model depth L

  static ShiftSchedule linear() { return {}; }

  static ShiftSchedule power_law(std::size_t layer_index = 0, std::size_t layer_count = 1) {
    ShiftSchedule s;
    s.kind = ScheduleKind::PowerLaw;
    s.layer_index = layer_index;
    s.layer_count = layer_count;
    return s;
  }

  static ShiftSchedule explicit_steps(std::vector<std::size_t> steps) {
    ShiftSchedule s;
    s.kind = ScheduleKind::Explicit;
    s.steps = std::move(steps);
    return s;
  }
};

struct ResolvedSchedule {
  std::vector<std::size_t> steps; ///< length C, each in [0, N-1], steps[0] == 0
  std::size_t power_base = 0;     ///< PowerLaw base J; 0 for other kinds
  bool degenerate = false;        ///< PowerLaw collapsed to all-zero steps (J == 1)
};

/// Resolves the per-channel steps for sequence length n and c channels.
/// Channel 0 is the reference and always resolves to step 0.
///
/// Linear:   J_k = (k * ceil(n / c)) mod n.
/// PowerLaw: base J is the largest integer with J^(L*c - 1) <= n; the global
///           channel g = layer_index * c + k gets step (J^g - 1) mod n.
///           Requires L*c >= 2.
/// Explicit: supplied steps reduced modulo n.
ResolvedSchedule resolve_schedule(const ShiftSchedule& schedule, std::size_t n, std::size_t c);

} // namespace csp
