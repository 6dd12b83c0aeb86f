#pragma once

#include <vector>

#include "csp/matrix.hpp"
#include "csp/permutation.hpp"

namespace csp {

/// A 1-D optimal transport instance between two equal-length vectors under
/// the squared Euclidean cost D[i][j] = (source[i] - target[j])^2.
struct OtProblem {
  std::vector<double> source;
  std::vector<double> target;

  Matrix cost_matrix() const;
};

struct OtSolution {
  Permutation plan; ///< out[i] = target[plan[i]] aligns target to source
  double cost = 0.0;
  bool unique = false; ///< best cost strictly below second best
};

/// Cost <D, T> of a permutation plan: sum_i (source[i] - target[plan[i]])^2.
double plan_cost(const OtProblem& p, const Permutation& plan);

/// Enumerates all G! plans (G <= 8) and returns the minimizer. The uniqueness
/// flag is set iff the runner-up cost exceeds the best by more than
/// 1e-12 * (1 + |best|).
OtSolution brute_force_ot(const OtProblem& p);

/// Three-way agreement: minimizer of <D,T>, minimizer of <-source target^T, T>
/// and the monotone-rearrangement permutation coincide when the optimum is
/// unique; under ties the sorting plan must still attain the optimal cost.
bool equivalence_check(const OtProblem& p);

} // namespace csp
