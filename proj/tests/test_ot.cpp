#include <doctest.h>

#include <algorithm>

#include "csp/error.hpp"
#include "csp/ot.hpp"
#include "test_util.hpp"

using namespace csp;

TEST_CASE("single-element instance") {
  const OtProblem p{{2.0}, {5.0}};
  const OtSolution s = brute_force_ot(p);
  CHECK(s.plan.is_identity());
  CHECK(s.cost == doctest::Approx(9.0));
  CHECK(s.unique);
}

TEST_CASE("two-element instance picks the swap") {
  const OtProblem p{{0.0, 1.0}, {5.0, 2.0}};
  const OtSolution s = brute_force_ot(p);
  // match 1 to 5 and 0 to 2: cost 16 + 4 = 20 vs identity 25 + 1 = 26
  CHECK(s.plan == Permutation({1, 0}));
  CHECK(s.cost == doctest::Approx(20.0));
  CHECK(s.unique);
}

TEST_CASE("duplicate sources make the optimum non-unique") {
  const OtProblem p{{1.0, 1.0}, {0.0, 2.0}};
  const OtSolution s = brute_force_ot(p);
  CHECK_FALSE(s.unique);
}

TEST_CASE("enumeration bound is enforced") {
  OtProblem p;
  p.source.assign(9, 0.0);
  p.target.assign(9, 0.0);
  CHECK_THROWS_AS(brute_force_ot(p), ConfigError);
}

TEST_CASE("cost matrix is the squared Euclidean distance") {
  const OtProblem p{{1.0, -1.0}, {0.0, 3.0}};
  const Matrix d = p.cost_matrix();
  CHECK(d == Matrix::from_rows({{1, 4}, {1, 16}}));
}

TEST_CASE("equivalence holds on a seeded tie-free instance") {
  Rng rng(23);
  OtProblem p;
  p.source = rng.uniform_vector(5, -1.0, 1.0);
  p.target = rng.uniform_vector(5, -1.0, 1.0);
  REQUIRE_FALSE(testutil::has_ties(p.source));
  REQUIRE_FALSE(testutil::has_ties(p.target));
  CHECK(equivalence_check(p));
}

TEST_CASE("sorted source and target agree on the identity plan") {
  const OtProblem p{{-2.0, 0.0, 1.0}, {-1.0, 0.5, 3.0}};
  const OtSolution s = brute_force_ot(p);
  CHECK(s.plan.is_identity());
  CHECK(equivalence_check(p));
}

TEST_CASE("randomized equivalence suite") {
  Rng rng(1000);
  int checked = 0;
  while (checked < 300) {
    const std::size_t g = static_cast<std::size_t>(rng.uniform_int(2, 6));
    OtProblem p;
    p.source = rng.uniform_vector(g, -1.0, 1.0);
    p.target = rng.uniform_vector(g, -1.0, 1.0);
    if (testutil::has_ties(p.source) || testutil::has_ties(p.target)) continue;
    CHECK(equivalence_check(p));
    ++checked;
  }
}

TEST_CASE("inner-product decomposition of the squared cost is exact") {
  Rng rng(2000);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t g = static_cast<std::size_t>(rng.uniform_int(1, 5));
    OtProblem p;
    p.source = rng.uniform_vector(g, -2.0, 2.0);
    p.target = rng.uniform_vector(g, -2.0, 2.0);
    double c0 = 0.0;
    for (const double v : p.source) c0 += v * v;
    for (const double v : p.target) c0 += v * v;

    const Permutation plan = testutil::random_permutation(g, rng);
    double inner = 0.0;
    for (std::size_t i = 0; i < g; ++i) inner += p.source[i] * p.target[plan[i]];
    CHECK(plan_cost(p, plan) == doctest::Approx(c0 - 2.0 * inner).epsilon(1e-12));
  }
}

TEST_CASE("sorting plan cost equals the enumerated minimum") {
  Rng rng(3000);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t g = static_cast<std::size_t>(rng.uniform_int(2, 6));
    OtProblem p;
    p.source = rng.uniform_vector(g, -1.0, 1.0);
    p.target = rng.uniform_vector(g, -1.0, 1.0);
    const OtSolution s = brute_force_ot(p);
    const Permutation sorting = reference_sort_permutation(p.source, p.target);
    CHECK(plan_cost(p, sorting) <= s.cost + 1e-12);
    if (s.unique) {
      // Eq-style identity: the sorting plan's transport cost is the distance
      CHECK(plan_cost(p, sorting) == doctest::Approx(s.cost).epsilon(1e-12));
    }
  }
}
