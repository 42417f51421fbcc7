#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "moat/objective.hpp"
#include "moat/pareto.hpp"
#include "moat/rng.hpp"
#include "moat/scalarize.hpp"

namespace moat {

inline constexpr double kStagnationEpsilon = 1e-12;

struct RealDecision {
  std::vector<double> values;
};

/// Combinatorial scheduling decision: one machine per operation plus a
/// global dispatch permutation over all operations.
struct GridDecision {
  std::vector<int> assignment;
  std::vector<std::size_t> priority;
};

using Decision = std::variant<RealDecision, GridDecision>;

struct BoxSpace {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Shape of a grid decision: the admissible machine list per operation.
struct PermutationSpace {
  std::vector<std::vector<int>> admissible;
};

using DecisionSpace = std::variant<BoxSpace, PermutationSpace>;

struct Evaluation {
  std::vector<double> objectives;
  std::vector<double> violations;
};

/// A problem is its decision space, the objective descriptions (direction
/// and estimated bounds; weights/priorities/thresholds are experiment
/// configuration), named violation channels, and a pure evaluation function
/// that must be total on the declared space.
struct ProblemDefinition {
  std::string name;
  DecisionSpace space;
  std::vector<ObjectiveSpec> objectives;
  std::vector<std::string> violation_labels;
  std::function<Evaluation(const Decision&)> evaluate;

  std::size_t objective_count() const { return objectives.size(); }
};

enum class AssessMode { Scalarized, ParetoRank };
enum class StopReason { Stagnation, Budget };

inline const char* to_string(StopReason r) {
  return r == StopReason::Stagnation ? "stagnation" : "budget";
}

struct RunConfig {
  int population_size = 40;
  std::int64_t max_evaluations = 20000;
  int stagnation_window = 50;
  double mutation_rate = 0.25;
  double mutation_scale = 0.08;
  double crossover_rate = 0.9;
  std::uint64_t seed = 1;
  AssessMode mode = AssessMode::Scalarized;
};

inline std::vector<std::string> validate_run_config(const RunConfig& c) {
  std::vector<std::string> violations;
  if (c.population_size < 4) violations.push_back("population_size: must be at least 4");
  if (c.max_evaluations < 1) violations.push_back("max_evaluations: must be positive");
  if (c.stagnation_window < 1) violations.push_back("stagnation_window: must be positive");
  if (!(c.mutation_rate >= 0.0 && c.mutation_rate <= 1.0)) {
    violations.push_back("mutation_rate: must lie in [0,1]");
  }
  if (!std::isfinite(c.mutation_scale) || c.mutation_scale < 0.0) {
    violations.push_back("mutation_scale: must be non-negative");
  }
  if (!(c.crossover_rate >= 0.0 && c.crossover_rate <= 1.0)) {
    violations.push_back("crossover_rate: must lie in [0,1]");
  }
  return violations;
}

struct Individual {
  Decision decision;
  std::vector<double> objectives;  // raw, exactly as produced by evaluate
  std::vector<double> violations;
  Assessment assessment;  // scalarized modes
  int rank = -1;          // pareto-rank mode
};

/// Maps raw objectives plus violations onto an Assessment.
using ScalarAssessor =
    std::function<Assessment(std::span<const double>, std::span<const double>)>;

struct RunResult {
  std::vector<Individual> final_population;
  std::vector<double> best_history;  // one entry per generation
  std::int64_t evaluation_count = 0;
  StopReason stop_reason = StopReason::Budget;
};

inline Decision random_decision(const DecisionSpace& space, Rng& rng) {
  if (const auto* box = std::get_if<BoxSpace>(&space)) {
    RealDecision d;
    d.values.reserve(box->lower.size());
    for (std::size_t i = 0; i < box->lower.size(); ++i) {
      d.values.push_back(rng.uniform(box->lower[i], box->upper[i]));
    }
    return d;
  }
  const auto& perm = std::get<PermutationSpace>(space);
  GridDecision d;
  d.assignment.reserve(perm.admissible.size());
  for (const auto& machines : perm.admissible) {
    d.assignment.push_back(machines[rng.index(machines.size())]);
  }
  d.priority.resize(perm.admissible.size());
  std::iota(d.priority.begin(), d.priority.end(), std::size_t{0});
  for (std::size_t i = d.priority.size(); i > 1; --i) {
    std::swap(d.priority[i - 1], d.priority[rng.index(i)]);
  }
  return d;
}

/// Real encodings: coordinate-wise Gaussian perturbation with probability
/// mutation_rate, scaled by mutation_scale times the box width, clamped to
/// the box. Grid encodings: reassignment and swap moves. The result is
/// always a valid decision for the space.
inline Decision mutate(const Decision& decision, const DecisionSpace& space,
                       const RunConfig& config, Rng& rng) {
  if (const auto* box = std::get_if<BoxSpace>(&space)) {
    RealDecision d = std::get<RealDecision>(decision);
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      if (!rng.chance(config.mutation_rate)) continue;
      const double width = box->upper[i] - box->lower[i];
      d.values[i] = std::clamp(d.values[i] + config.mutation_scale * width * rng.normal(),
                               box->lower[i], box->upper[i]);
    }
    return d;
  }
  const auto& perm = std::get<PermutationSpace>(space);
  GridDecision d = std::get<GridDecision>(decision);
  for (std::size_t op = 0; op < d.assignment.size(); ++op) {
    if (rng.chance(config.mutation_rate)) {
      d.assignment[op] = perm.admissible[op][rng.index(perm.admissible[op].size())];
    }
  }
  for (std::size_t p = 0; p < d.priority.size(); ++p) {
    if (rng.chance(config.mutation_rate)) {
      std::swap(d.priority[p], d.priority[rng.index(d.priority.size())]);
    }
  }
  return d;
}

/// Real encodings: per-coordinate arithmetic blend, clamped to the interval
/// spanned by the parents. Grid encodings: per-operation uniform pick of the
/// assignment and order crossover on the permutation.
inline Decision recombine(const Decision& a, const Decision& b, Rng& rng) {
  if (a.index() != b.index()) {
    throw std::invalid_argument("recombine: encoding mismatch");
  }
  if (const auto* ra = std::get_if<RealDecision>(&a)) {
    const auto& rb = std::get<RealDecision>(b);
    if (ra->values.size() != rb.values.size()) {
      throw std::invalid_argument("recombine: encoding mismatch");
    }
    RealDecision child;
    child.values.reserve(ra->values.size());
    for (std::size_t i = 0; i < ra->values.size(); ++i) {
      const double t = rng.uniform01();
      const double blended = rb.values[i] + t * (ra->values[i] - rb.values[i]);
      child.values.push_back(std::clamp(blended, std::min(ra->values[i], rb.values[i]),
                                        std::max(ra->values[i], rb.values[i])));
    }
    return child;
  }
  const auto& ga = std::get<GridDecision>(a);
  const auto& gb = std::get<GridDecision>(b);
  if (ga.assignment.size() != gb.assignment.size() ||
      ga.priority.size() != gb.priority.size()) {
    throw std::invalid_argument("recombine: encoding mismatch");
  }
  GridDecision child;
  child.assignment.reserve(ga.assignment.size());
  for (std::size_t op = 0; op < ga.assignment.size(); ++op) {
    child.assignment.push_back(rng.chance(0.5) ? ga.assignment[op] : gb.assignment[op]);
  }
  const std::size_t n = ga.priority.size();
  std::size_t c1 = rng.index(n);
  std::size_t c2 = rng.index(n);
  if (c1 > c2) std::swap(c1, c2);
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  child.priority.assign(n, kUnset);
  std::vector<char> used(n, 0);
  for (std::size_t p = c1; p <= c2; ++p) {
    child.priority[p] = ga.priority[p];
    used[ga.priority[p]] = 1;
  }
  std::size_t fill = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (used[gb.priority[q]]) continue;
    while (fill >= c1 && fill <= c2) ++fill;
    child.priority[fill++] = gb.priority[q];
  }
  return child;
}

/// Closed per-objective interval box on the raw objective scale.
struct RegionOfInterest {
  std::vector<std::pair<double, double>> intervals;
};

/// Fraction of individuals whose raw objective vector lies inside the
/// closed box. An empty population has fraction 0.
inline double roi_fraction(std::span<const Individual> population,
                           const RegionOfInterest& region) {
  std::size_t inside = 0;
  for (const auto& ind : population) {
    if (ind.objectives.size() != region.intervals.size()) {
      throw std::invalid_argument("roi_fraction: region dimension mismatch");
    }
    bool in = true;
    for (std::size_t c = 0; c < ind.objectives.size(); ++c) {
      if (ind.objectives[c] < region.intervals[c].first ||
          ind.objectives[c] > region.intervals[c].second) {
        in = false;
        break;
      }
    }
    if (in) ++inside;
  }
  if (population.empty()) return 0.0;
  return static_cast<double>(inside) / static_cast<double>(population.size());
}

namespace detail {

inline double fitness_of(const Individual& ind, AssessMode mode) {
  return mode == AssessMode::Scalarized ? ind.assessment.quality
                                        : -static_cast<double>(ind.rank);
}

inline std::vector<Direction> directions_of(const ProblemDefinition& problem) {
  std::vector<Direction> dirs;
  dirs.reserve(problem.objectives.size());
  for (const auto& s : problem.objectives) dirs.push_back(s.direction);
  return dirs;
}

}  // namespace detail

/// Generational evolutionary search with one-elite survival and binary
/// tournament parent selection. Fully deterministic for a fixed seed. Stops
/// when the best quality has not improved by more than kStagnationEpsilon
/// for stagnation_window generations, or when starting another generation
/// would exceed the evaluation budget.
inline RunResult evolve(const ProblemDefinition& problem, const ScalarAssessor& assessor,
                        const RunConfig& config) {
  if (const auto violations = validate_run_config(config); !violations.empty()) {
    throw std::invalid_argument("evolve: " + violations.front());
  }
  if (config.mode == AssessMode::Scalarized && !assessor) {
    throw std::invalid_argument("evolve: scalarized mode requires an assessor");
  }

  Rng rng(config.seed);
  RunResult result;
  const std::size_t k = problem.objective_count();
  const std::vector<Direction> directions = detail::directions_of(problem);

  auto make_individual = [&](Decision d) {
    Individual ind;
    ind.decision = std::move(d);
    Evaluation ev = problem.evaluate(ind.decision);
    if (ev.objectives.size() != k) {
      throw std::invalid_argument("evolve: objective-count mismatch between problem and evaluate");
    }
    ind.objectives = std::move(ev.objectives);
    ind.violations = std::move(ev.violations);
    if (config.mode == AssessMode::Scalarized) {
      ind.assessment = assessor(ind.objectives, ind.violations);
      if (ind.assessment.normalized_objectives.size() != k) {
        throw std::invalid_argument("evolve: objective-count mismatch between problem and assessor");
      }
    }
    ++result.evaluation_count;
    return ind;
  };

  std::vector<Individual> population;
  population.reserve(static_cast<std::size_t>(config.population_size));
  while (static_cast<int>(population.size()) < config.population_size &&
         result.evaluation_count < config.max_evaluations) {
    population.push_back(make_individual(random_decision(problem.space, rng)));
  }
  if (population.empty()) return result;

  auto assign_ranks = [&](std::vector<Individual>& pop) {
    if (config.mode != AssessMode::ParetoRank) return;
    std::vector<ObjectiveVector> vectors;
    vectors.reserve(pop.size());
    for (const auto& ind : pop) vectors.emplace_back(ind.objectives, directions);
    const auto ranks = pareto_rank(vectors);
    for (std::size_t i = 0; i < pop.size(); ++i) pop[i].rank = ranks[i];
  };
  assign_ranks(population);

  auto best_fitness = [&](const std::vector<Individual>& pop) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& ind : pop) best = std::max(best, detail::fitness_of(ind, config.mode));
    return best;
  };

  // Binary tournament; scalarized ties go to the first pick, rank ties are
  // broken uniformly at random.
  auto tournament = [&]() -> std::size_t {
    const std::size_t i = rng.index(population.size());
    const std::size_t j = rng.index(population.size());
    const double fi = detail::fitness_of(population[i], config.mode);
    const double fj = detail::fitness_of(population[j], config.mode);
    if (fi > fj) return i;
    if (fj > fi) return j;
    if (config.mode == AssessMode::ParetoRank) return rng.chance(0.5) ? i : j;
    return i;
  };

  double best_so_far = best_fitness(population);
  result.best_history.push_back(best_so_far);
  int stagnant = 0;
  result.stop_reason = StopReason::Budget;

  const std::int64_t per_generation = config.population_size - 1;
  while (result.evaluation_count + per_generation <= config.max_evaluations) {
    std::size_t elite = 0;
    if (config.mode == AssessMode::Scalarized) {
      for (std::size_t i = 1; i < population.size(); ++i) {
        if (population[i].assessment.quality > population[elite].assessment.quality) elite = i;
      }
    } else {
      std::vector<std::size_t> front;
      for (std::size_t i = 0; i < population.size(); ++i) {
        if (population[i].rank == 0) front.push_back(i);
      }
      elite = front[rng.index(front.size())];
    }

    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(config.population_size));
    next.push_back(population[elite]);
    while (static_cast<int>(next.size()) < config.population_size) {
      const std::size_t a = tournament();
      const std::size_t b = tournament();
      Decision child = rng.chance(config.crossover_rate)
                           ? recombine(population[a].decision, population[b].decision, rng)
                           : population[a].decision;
      next.push_back(make_individual(mutate(child, problem.space, config, rng)));
    }
    population = std::move(next);
    assign_ranks(population);

    const double generation_best = best_fitness(population);
    result.best_history.push_back(generation_best);
    if (generation_best > best_so_far + kStagnationEpsilon) {
      best_so_far = generation_best;
      stagnant = 0;
    } else {
      best_so_far = std::max(best_so_far, generation_best);
      ++stagnant;
      if (stagnant >= config.stagnation_window) {
        result.stop_reason = StopReason::Stagnation;
        break;
      }
    }
  }

  result.final_population = std::move(population);
  return result;
}

}  // namespace moat
