#include "csp/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "csp/error.hpp"

namespace csp {

namespace {

constexpr std::size_t kMaxEnumeration = 8;

void require_enumerable(const OtProblem& p) {
  if (p.source.size() != p.target.size() || p.source.empty()) {
    throw ShapeError("OT instance needs equal nonempty source/target lengths");
  }
  if (p.source.size() > kMaxEnumeration) {
    throw ConfigError("brute-force OT is limited to G <= " + std::to_string(kMaxEnumeration) +
                      "; use the sorting path for larger groups");
  }
}

// Best and second-best cost over all G! assignment permutations.
template <typename CostFn>
void enumerate_plans(std::size_t g, const CostFn& cost_of,
                     std::vector<std::size_t>& best_map, double& best, double& second) {
  std::vector<std::size_t> perm(g);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  best = std::numeric_limits<double>::infinity();
  second = best;
  do {
    const double cost = cost_of(perm);
    if (cost < best) {
      second = best;
      best = cost;
      best_map = perm;
    } else if (cost < second) {
      second = cost;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

} // namespace

Matrix OtProblem::cost_matrix() const {
  Matrix d(source.size(), target.size());
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double diff = source[i] - target[j];
      d(i, j) = diff * diff;
    }
  return d;
}

double plan_cost(const OtProblem& p, const Permutation& plan) {
  if (plan.size() != p.source.size()) {
    throw ShapeError("plan size " + std::to_string(plan.size()) + " vs instance size " +
                     std::to_string(p.source.size()));
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const double diff = p.source[i] - p.target[plan[i]];
    cost += diff * diff;
  }
  return cost;
}

OtSolution brute_force_ot(const OtProblem& p) {
  require_enumerable(p);
  const Matrix d = p.cost_matrix();
  const std::size_t g = p.source.size();

  std::vector<std::size_t> best_map;
  double best = 0.0, second = 0.0;
  enumerate_plans(g,
                  [&](const std::vector<std::size_t>& perm) {
                    double cost = 0.0;
                    for (std::size_t i = 0; i < g; ++i) cost += d(i, perm[i]);
                    return cost;
                  },
                  best_map, best, second);

  OtSolution solution;
  solution.plan = Permutation(std::move(best_map));
  solution.cost = best;
  solution.unique = (second - best) > 1e-12 * (1.0 + std::abs(best));
  return solution;
}

bool equivalence_check(const OtProblem& p) {
  require_enumerable(p);
  const OtSolution distance_opt = brute_force_ot(p);

  // Minimizer of <-source target^T, T>: maximize the matched inner product.
  const std::size_t g = p.source.size();
  std::vector<std::size_t> inner_map;
  double inner_best = 0.0, inner_second = 0.0;
  enumerate_plans(g,
                  [&](const std::vector<std::size_t>& perm) {
                    double cost = 0.0;
                    for (std::size_t i = 0; i < g; ++i) cost -= p.source[i] * p.target[perm[i]];
                    return cost;
                  },
                  inner_map, inner_best, inner_second);
  const Permutation inner_plan(std::move(inner_map));

  const Permutation sorting_plan = reference_sort_permutation(p.source, p.target);
  const double tol = 1e-12 * (1.0 + std::abs(distance_opt.cost));

  if (distance_opt.unique) {
    return distance_opt.plan == inner_plan && distance_opt.plan == sorting_plan;
  }
  return plan_cost(p, sorting_plan) <= distance_opt.cost + tol;
}

} // namespace csp
