#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "moat/problems.hpp"

using namespace moat;
using namespace moat::problems;

namespace {

Evaluation eval(const ProblemDefinition& p, double a, double b) {
  return p.evaluate(RealDecision{{a, b}});
}

// Best front point of the plain weighted sum over a dense grid on x; DENT's
// front is f2 = h(f1) at r = 1.
double dent_sweep_argmax(double w1, int grid) {
  double best = -1.0;
  double best_x = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double quality = w1 * x + (1.0 - w1) * dent_h(x);
    if (quality > best) {
      best = quality;
      best_x = x;
    }
  }
  return best_x;
}

// Same sweep under the cascade: objective 2 leads with threshold eps2.
double dent_cws_argmax(double w1, double eps2, int grid) {
  double best = -1.0;
  double best_x = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double f2 = dent_h(x);
    double quality = (1.0 - w1) * f2;
    if (f2 >= eps2) quality += w1 * x;
    if (quality > best) {
      best = quality;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

TEST_CASE("arc evaluation") {
  const auto problem = arc();
  CHECK(eval(problem, 0.0, 1.0).objectives == std::vector{1.0, 0.0});
  const auto diagonal = eval(problem, std::numbers::pi / 4.0, 1.0).objectives;
  CHECK(diagonal[0] == Catch::Approx(std::numbers::sqrt2 / 2.0));
  CHECK(diagonal[1] == Catch::Approx(std::numbers::sqrt2 / 2.0));
  CHECK_THROWS_AS(eval(problem, -0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(eval(problem, 0.1, 1.5), std::domain_error);
}

TEST_CASE("dent evaluation") {
  const auto problem = dent();
  CHECK(eval(problem, 0.0, 1.0).objectives[0] == 0.0);
  CHECK(eval(problem, 0.0, 1.0).objectives[1] == Catch::Approx(1.0).margin(1e-15));
  CHECK(eval(problem, 0.5, 1.0).objectives[0] == 0.5);
  CHECK(eval(problem, 0.5, 1.0).objectives[1] == Catch::Approx(0.5).margin(1e-15));
  CHECK_THROWS_AS(eval(problem, 1.1, 0.5), std::domain_error);
}

TEST_CASE("dent boundary height is strictly decreasing") {
  double previous = dent_h(0.0);
  CHECK(previous == Catch::Approx(1.0).margin(1e-15));
  for (int i = 1; i <= 1000; ++i) {
    const double current = dent_h(i / 1000.0);
    CHECK(current < previous);
    previous = current;
  }
  CHECK(dent_h(1.0) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("analytic front endpoints") {
  CHECK(analytic_front(FrontProblem::Arc, 0.0) == ObjectiveVector({1.0, 0.0}));
  const auto arc_end = analytic_front(FrontProblem::Arc, 1.0);
  CHECK(arc_end[0] == Catch::Approx(0.0).margin(1e-15));
  CHECK(arc_end[1] == 1.0);
  const auto dent_end = analytic_front(FrontProblem::Dent, 1.0);
  CHECK(dent_end[0] == 1.0);
  CHECK(dent_end[1] == Catch::Approx(0.0).margin(1e-15));
  CHECK_THROWS_AS(analytic_front(FrontProblem::Arc, 1.5), std::out_of_range);
}

TEST_CASE("analytic front points are non-dominated in dense feasible samples") {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (const auto kind : {FrontProblem::Arc, FrontProblem::Dent}) {
    const auto problem = kind == FrontProblem::Arc ? arc() : dent();
    const auto* box = std::get_if<BoxSpace>(&problem.space);
    std::vector<ObjectiveVector> sample;
    for (int i = 0; i < 10000; ++i) {
      const double a = box->lower[0] + (box->upper[0] - box->lower[0]) * u01(rng);
      const double b = box->lower[1] + (box->upper[1] - box->lower[1]) * u01(rng);
      sample.emplace_back(eval(problem, a, b).objectives);
    }
    for (int t = 0; t <= 20; ++t) {
      const ObjectiveVector front_point = analytic_front(kind, t / 20.0);
      for (const auto& point : sample) CHECK_FALSE(dominates(point, front_point));
    }
  }
}

TEST_CASE("ideal vector of dense front samples approaches (1,1)") {
  std::vector<ObjectiveVector> samples;
  for (int t = 0; t <= 100; ++t) samples.push_back(analytic_front(FrontProblem::Arc, t / 100.0));
  const auto ideal = ideal_vector(samples);
  CHECK(ideal[0] == 1.0);
  CHECK(ideal[1] == 1.0);
}

TEST_CASE("arc weighted-sum optimum sits at the analytic tangency point") {
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> u01(0.05, 0.95);
  for (int trial = 0; trial < 25; ++trial) {
    const double w1 = u01(rng);
    const double w2 = 1.0 - w1;
    // grid search over the angle; the radius is 1 at any optimum
    double best = -1.0;
    double best_angle = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double angle = std::numbers::pi / 2.0 * i / 20000.0;
      const double quality = w1 * std::cos(angle) + w2 * std::sin(angle);
      if (quality > best) {
        best = quality;
        best_angle = angle;
      }
    }
    const double norm = std::hypot(w1, w2);
    const double dx = std::cos(best_angle) - w1 / norm;
    const double dy = std::sin(best_angle) - w2 / norm;
    CHECK(std::hypot(dx, dy) < 1e-3);
  }
}

TEST_CASE("dent weight sweep never lands in the dented stretch") {
  for (int i = 1; i <= 999; ++i) {
    const double w1 = i / 1000.0;
    const double x = dent_sweep_argmax(w1, 2000);
    CHECK_FALSE((x >= 0.1 && x <= 0.4));
    // The attainable set is the left corner plus the convex tail.
    CHECK((x <= 1e-9 || x >= 0.7));
  }
}

TEST_CASE("cascade threshold pins optima to the boundary of the satisfied front") {
  // With objective 2 leading and its threshold placed at h(0.45), the
  // satisfied stretch of the front is x <= 0.45 and stays convex, so every
  // sweep optimum sits at x = 0 or exactly at the boundary 0.45. The plain
  // weighted sum never reaches that boundary region at all.
  const double eps2 = dent_h(0.45);
  bool boundary_seen = false;
  for (int i = 1; i <= 199; ++i) {
    const double w1 = i / 200.0;
    const double x = dent_cws_argmax(w1, eps2, 2000);
    CHECK((x <= 1e-9 || x == Catch::Approx(0.45).margin(1e-9)));
    if (x > 0.4) boundary_seen = true;
  }
  CHECK(boundary_seen);

  // Placing the threshold at h(0.40) moves the reachable boundary to 0.40.
  const double eps2_inner = dent_h(0.40);
  bool inner_boundary_seen = false;
  for (int i = 1; i <= 199; ++i) {
    const double w1 = i / 200.0;
    const double x = dent_cws_argmax(w1, eps2_inner, 2000);
    if (x >= 0.1 && x <= 0.4) inner_boundary_seen = true;
  }
  CHECK(inner_boundary_seen);
}
