#include "csp/schedule.hpp"

#include <string>

#include "csp/error.hpp"

namespace csp {

namespace {

// Largest integer j >= 1 with j^e <= n, found by integer search (no float
// pow, so the boundary cases are exact).
std::size_t integer_root(std::size_t n, std::size_t e) {
  std::size_t j = 1;
  while (true) {
    const std::size_t next = j + 1;
    std::size_t power = 1;
    bool overflow = false;
    for (std::size_t i = 0; i < e; ++i) {
      if (power > n / next) {
        overflow = true;
        break;
      }
      power *= next;
    }
    if (overflow || power > n) return j;
    j = next;
  }
}

std::size_t mod_pow(std::size_t base, std::size_t exp, std::size_t mod) {
  std::size_t result = 1 % mod;
  std::size_t b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = (result * b) % mod;
    b = (b * b) % mod;
    exp >>= 1;
  }
  return result;
}

} // namespace

ResolvedSchedule resolve_schedule(const ShiftSchedule& schedule, std::size_t n, std::size_t c) {
  if (n == 0 || c == 0) {
    throw ConfigError("resolve_schedule requires n >= 1 and c >= 1");
  }
  ResolvedSchedule out;
  out.steps.resize(c, 0);

  switch (schedule.kind) {
    case ScheduleKind::Linear: {
      const std::size_t stride = (n + c - 1) / c;
      for (std::size_t k = 0; k < c; ++k) out.steps[k] = (k * stride) % n;
      break;
    }
    case ScheduleKind::PowerLaw: {
      const std::size_t total = schedule.layer_count * c;
      if (total < 2) {
        throw ConfigError("power-law schedule requires layer_count * channels >= 2, got " +
                          std::to_string(total));
      }
      if (schedule.layer_index >= schedule.layer_count) {
        throw ConfigError("power-law layer index " + std::to_string(schedule.layer_index) +
                          " out of range for depth " + std::to_string(schedule.layer_count));
      }
      const std::size_t base = integer_root(n, total - 1);
      out.power_base = base;
      out.degenerate = (base == 1);
      for (std::size_t k = 0; k < c; ++k) {
        const std::size_t g = schedule.layer_index * c + k;
        // (J^g - 1) mod n, computed with modular exponentiation.
        out.steps[k] = (mod_pow(base, g, n) + n - 1) % n;
      }
      break;
    }
    case ScheduleKind::Explicit: {
      if (schedule.steps.size() != c) {
        throw ConfigError("explicit schedule has " + std::to_string(schedule.steps.size()) +
                          " steps for " + std::to_string(c) + " channels");
      }
      for (std::size_t k = 0; k < c; ++k) out.steps[k] = schedule.steps[k] % n;
      break;
    }
  }

  // Channel 0 is the reference; its attention map is the identity.
  out.steps[0] = 0;
  return out;
}

} // namespace csp
