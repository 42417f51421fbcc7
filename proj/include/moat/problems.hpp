#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "moat/evolve.hpp"
#include "moat/pareto.hpp"

namespace moat::problems {

namespace detail {

inline void require_in_box(const RealDecision& d, const BoxSpace& box, const char* name) {
  if (d.values.size() != box.lower.size()) {
    throw std::domain_error(std::string(name) + ": decision dimension mismatch");
  }
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (!(d.values[i] >= box.lower[i] && d.values[i] <= box.upper[i])) {
      throw std::domain_error(std::string(name) + ": decision outside the declared box");
    }
  }
}

}  // namespace detail

/// Convex benchmark. Decisions (angle, radius) sweep the closed unit
/// quarter-disc in objective space; the Pareto front is the unit arc r = 1.
inline ProblemDefinition arc() {
  ProblemDefinition p;
  p.name = "arc";
  BoxSpace box{{0.0, 0.0}, {std::numbers::pi / 2.0, 1.0}};
  p.space = box;
  p.objectives = {
      {.name = "f1", .direction = Direction::Maximize, .lower_bound = 0.0, .upper_bound = 1.0, .weight = 0.5},
      {.name = "f2", .direction = Direction::Maximize, .lower_bound = 0.0, .upper_bound = 1.0, .weight = 0.5},
  };
  p.evaluate = [box](const Decision& d) {
    const auto& rd = std::get<RealDecision>(d);
    detail::require_in_box(rd, box, "arc");
    const double angle = rd.values[0];
    const double radius = rd.values[1];
    return Evaluation{{radius * std::cos(angle), radius * std::sin(angle)}, {}};
  };
  return p;
}

/// Boundary height of the DENT feasible region. Strictly decreasing on
/// [0,1] (|0.3 pi cos| < 1), h(0) = 1, h(1) = 0, with a non-convex stretch
/// on x in (0, 0.5) where h'' > 0.
inline double dent_h(double x) {
  return 1.0 - x - 0.15 * std::sin(2.0 * std::numbers::pi * x);
}

/// Non-convex benchmark. f1 = x and f2 = r*h(x); the Pareto front is the
/// graph of h, and its dented stretch is unreachable for the plain weighted
/// sum except at hull-contact points.
inline ProblemDefinition dent() {
  ProblemDefinition p;
  p.name = "dent";
  BoxSpace box{{0.0, 0.0}, {1.0, 1.0}};
  p.space = box;
  p.objectives = {
      {.name = "f1", .direction = Direction::Maximize, .lower_bound = 0.0, .upper_bound = 1.0, .weight = 0.5},
      {.name = "f2", .direction = Direction::Maximize, .lower_bound = 0.0, .upper_bound = 1.0, .weight = 0.5},
  };
  p.evaluate = [box](const Decision& d) {
    const auto& rd = std::get<RealDecision>(d);
    detail::require_in_box(rd, box, "dent");
    const double x = rd.values[0];
    const double r = rd.values[1];
    return Evaluation{{x, r * dent_h(x)}, {}};
  };
  return p;
}

enum class FrontProblem { Arc, Dent };

/// Ground-truth front sample at parameter t in [0,1].
inline ObjectiveVector analytic_front(FrontProblem problem, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::out_of_range("analytic_front: t must lie in [0,1]");
  }
  if (problem == FrontProblem::Arc) {
    const double angle = t * std::numbers::pi / 2.0;
    return ObjectiveVector({std::cos(angle), std::sin(angle)});
  }
  return ObjectiveVector({t, dent_h(t)});
}

}  // namespace moat::problems
