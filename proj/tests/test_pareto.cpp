#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "moat/pareto.hpp"

using namespace moat;

namespace {

ObjectiveVector vec(std::vector<double> values) { return ObjectiveVector(std::move(values)); }

// Independent pairwise oracle: inline arithmetic, no library calls.
bool oracle_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

std::vector<std::size_t> oracle_non_dominated(const std::vector<ObjectiveVector>& points) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i && oracle_dominates(points[j], points[i])) dominated = true;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

std::vector<ObjectiveVector> random_points(std::mt19937& rng, std::size_t count,
                                           std::size_t dimensions) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<ObjectiveVector> points;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> values;
    for (std::size_t c = 0; c < dimensions; ++c) values.push_back(u01(rng));
    points.emplace_back(std::move(values));
  }
  return points;
}

}  // namespace

TEST_CASE("dominates follows the componentwise definition") {
  CHECK(dominates(vec({2, 2}), vec({1, 1})));
  CHECK_FALSE(dominates(vec({1, 2}), vec({2, 1})));
  CHECK_FALSE(dominates(vec({2, 1}), vec({1, 2})));
  CHECK_FALSE(dominates(vec({1, 1}), vec({1, 1})));
  CHECK(dominates(vec({1, 2}), vec({1, 1})));
  CHECK_THROWS_AS(dominates(vec({1, 2}), vec({1, 1, 0})), std::invalid_argument);
}

TEST_CASE("dominates is irreflexive, asymmetric and transitive") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 400; ++trial) {
    const auto points = random_points(rng, 3, 1 + trial % 4);
    const auto& a = points[0];
    const auto& b = points[1];
    const auto& c = points[2];
    CHECK_FALSE(dominates(a, a));
    CHECK_FALSE((dominates(a, b) && dominates(b, a)));
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
  }
}

TEST_CASE("objective vectors flip minimized components and recover raw views") {
  const ObjectiveVector v({3.0, 4.0}, {Direction::Minimize, Direction::Maximize});
  CHECK(v[0] == -3.0);
  CHECK(v[1] == 4.0);
  CHECK(v.raw() == std::vector{3.0, 4.0});
  CHECK_THROWS_AS(ObjectiveVector({1.0 / 0.0, 0.0}), std::invalid_argument);
  // Minimized objective: smaller raw value dominates after orientation.
  const ObjectiveVector lo({1.0, 4.0}, {Direction::Minimize, Direction::Maximize});
  CHECK(dominates(lo, v));
}

TEST_CASE("constrained dominance applies the three rules") {
  const ConstrainedPoint feasible(vec({1, 1}), {0.0, 0.0});
  const ConstrainedPoint infeasible(vec({5, 5}), {0.3, 0.0});
  CHECK(constrained_dominates(feasible, infeasible));
  CHECK_FALSE(constrained_dominates(infeasible, feasible));

  const ConstrainedPoint worse(vec({2, 2}), {0.0, 0.0});
  CHECK(constrained_dominates(worse, feasible));
  CHECK_FALSE(constrained_dominates(feasible, worse));

  const ConstrainedPoint lightly(vec({0, 0}), {0.1, 0.1});
  const ConstrainedPoint heavily(vec({9, 9}), {0.2, 0.3});
  CHECK(constrained_dominates(lightly, heavily));
  CHECK_FALSE(constrained_dominates(heavily, lightly));

  CHECK_THROWS_AS(ConstrainedPoint(vec({1, 1}), {1.5}), std::invalid_argument);
}

TEST_CASE("non-dominated filter keeps exactly the maximal points") {
  const std::vector points{vec({1, 1}), vec({2, 2})};
  const auto filtered = non_dominated_filter(points);
  REQUIRE(filtered.size() == 1);
  CHECK(filtered.front() == vec({2, 2}));

  const std::vector incomparable{vec({1, 3}), vec({2, 2}), vec({3, 1})};
  CHECK(non_dominated_filter(incomparable).size() == 3);

  const std::vector duplicated{vec({2, 2}), vec({2, 2}), vec({1, 1})};
  CHECK(non_dominated_filter(duplicated).size() == 2);

  CHECK_THROWS_AS(non_dominated_filter(std::vector<ObjectiveVector>{}), std::invalid_argument);
}

TEST_CASE("weak filter keeps points not strictly beaten everywhere") {
  const std::vector pair{vec({1, 1}), vec({2, 2})};
  CHECK(weakly_non_dominated_filter(pair).size() == 1);

  const std::vector edge{vec({2, 2}), vec({2, 3})};
  CHECK(weakly_non_dominated_filter(edge).size() == 2);
}

TEST_CASE("filters and ranks agree with the brute-force oracles") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<std::size_t> size_dist(1, 40);
  std::uniform_int_distribution<std::size_t> dim_dist(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto points = random_points(rng, size_dist(rng), dim_dist(rng));
    const auto expected = oracle_non_dominated(points);
    CHECK(non_dominated_indices(points) == expected);

    const auto weak = weakly_non_dominated_indices(points);
    // superset: every strongly non-dominated index also survives weakly
    for (std::size_t idx : expected) {
      CHECK(std::find(weak.begin(), weak.end(), idx) != weak.end());
    }

    const auto ranks = pareto_rank(points);
    std::vector<std::size_t> rank0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (ranks[i] == 0) rank0.push_back(i);
    }
    CHECK(rank0 == expected);

    // no dominated pair inside the filtered set
    const auto filtered = non_dominated_filter(points);
    for (const auto& a : filtered) {
      for (const auto& b : filtered) CHECK_FALSE((dominates(a, b) && dominates(b, a)));
    }
  }
}

TEST_CASE("ideal vector is the componentwise maximum") {
  const std::vector points{vec({1, 3}), vec({3, 1})};
  CHECK(ideal_vector(points) == vec({3, 3}));
  const std::vector single{vec({0.25, -1})};
  CHECK(ideal_vector(single) == single.front());
  CHECK_THROWS_AS(ideal_vector(std::vector<ObjectiveVector>{}), std::invalid_argument);
}

TEST_CASE("front budget is the exact power") {
  CHECK(front_budget(2, 5) == 5);
  CHECK(front_budget(5, 5) == 625);
  CHECK(front_budget(5, 7) == 2401);
  CHECK_THROWS_AS(front_budget(1, 5), std::invalid_argument);
  CHECK_THROWS_AS(front_budget(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(front_budget(40, 10), std::overflow_error);

  // 7^19 via 128-bit accumulation as the independent check.
  unsigned __int128 expected = 1;
  for (int i = 0; i < 19; ++i) expected *= 7;
  CHECK(front_budget(20, 7) == static_cast<std::uint64_t>(expected));
}

TEST_CASE("pareto_rank peels fronts in order") {
  const std::vector chain{vec({1, 1}), vec({2, 2}), vec({3, 3})};
  CHECK(pareto_rank(chain) == std::vector{2, 1, 0});

  const std::vector incomparable{vec({1, 3}), vec({2, 2}), vec({3, 1})};
  CHECK(pareto_rank(incomparable) == std::vector{0, 0, 0});
}

TEST_CASE("epsilon-route optimality test") {
  const std::vector sample{vec({1, 3}), vec({2, 2}), vec({3, 1})};
  CHECK(verify_pareto_via_epsilon(vec({2, 2}), sample));

  const std::vector with_dominator{vec({1, 1}), vec({2, 2})};
  CHECK_FALSE(verify_pareto_via_epsilon(vec({1, 1}), with_dominator));

  const std::vector singleton{vec({4, 4})};
  CHECK(verify_pareto_via_epsilon(vec({4, 4}), singleton));

  CHECK_THROWS_AS(verify_pareto_via_epsilon(vec({9, 9}), sample), std::invalid_argument);
}

TEST_CASE("epsilon route agrees with non-domination on finite samples") {
  std::mt19937 rng(37);
  std::uniform_int_distribution<std::size_t> size_dist(1, 24);
  std::uniform_int_distribution<std::size_t> dim_dist(2, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto points = random_points(rng, size_dist(rng), dim_dist(rng));
    const auto expected = oracle_non_dominated(points);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const bool optimal = verify_pareto_via_epsilon(points[i], points);
      const bool in_front = std::find(expected.begin(), expected.end(), i) != expected.end();
      CHECK(optimal == in_front);
    }
  }
}

TEST_CASE("feasible constrained points never dominate without objective dominance") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ConstrainedPoint a(vec({u01(rng), u01(rng)}), {0.0});
    const ConstrainedPoint b(vec({u01(rng), u01(rng)}), {0.0});
    if (constrained_dominates(a, b)) CHECK(dominates(a.objectives, b.objectives));
  }
}
