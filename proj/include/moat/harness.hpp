#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moat/csv.hpp"
#include "moat/errors.hpp"
#include "moat/evolve.hpp"
#include "moat/grid.hpp"
#include "moat/pareto.hpp"
#include "moat/problems.hpp"
#include "moat/scalarize.hpp"

namespace moat {

enum class ExperimentMode { WeightedSum, Cws, EpsilonConstrained, ParetoRank };

inline const char* to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::WeightedSum: return "weighted_sum";
    case ExperimentMode::Cws: return "cws";
    case ExperimentMode::EpsilonConstrained: return "epsilon_constrained";
    default: return "pareto_rank";
  }
}

inline ExperimentMode parse_mode(const std::string& text) {
  if (text == "weighted_sum") return ExperimentMode::WeightedSum;
  if (text == "cws") return ExperimentMode::Cws;
  if (text == "epsilon_constrained") return ExperimentMode::EpsilonConstrained;
  if (text == "pareto_rank") return ExperimentMode::ParetoRank;
  throw ConfigError("mode: unknown mode '" + text + "'");
}

struct EpsilonSettings {
  std::size_t objective_index = 0;
  std::vector<std::optional<double>> lower_bounds;  // maximize orientation
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string problem_kind;  // "arc" | "dent" | "grid"
  std::filesystem::path instance_path;
  ExperimentMode mode = ExperimentMode::WeightedSum;
  std::vector<ObjectiveSpec> objectives;  // empty = problem defaults
  std::vector<PenaltySpec> penalties;
  std::optional<EpsilonSettings> epsilon;
  RunConfig run;
  std::vector<std::uint64_t> seeds = {1};
  std::optional<RegionOfInterest> region_of_interest;
  std::filesystem::path output_dir = "out";
};

// ---------------------------------------------------------------------------
// JSON bindings

inline void to_json(nlohmann::ordered_json& j, const ObjectiveSpec& spec) {
  j = {{"name", spec.name},
       {"direction", to_string(spec.direction)},
       {"lower_bound", spec.lower_bound},
       {"upper_bound", spec.upper_bound},
       {"weight", spec.weight},
       {"priority", spec.priority}};
  if (spec.threshold) j["threshold"] = *spec.threshold;
}

inline void to_json(nlohmann::ordered_json& j, const PenaltySpec& spec) {
  if (spec.kind == PenaltyKind::Linear) {
    j = {{"kind", "linear"}, {"max_violation", spec.parameter}};
  } else {
    j = {{"kind", "exponential"}, {"reference_violation", spec.parameter}};
  }
}

inline void to_json(nlohmann::ordered_json& j, const CwsConfig& config) {
  j = {{"groups", config.groups}};
}

inline CwsConfig cws_config_from_json(const nlohmann::json& j) {
  CwsConfig config;
  try {
    config.groups = j.at("groups").get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cws groups: ") + e.what());
  }
  return config;
}

namespace detail {

template <typename T>
T field(const nlohmann::json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) throw ConfigError(context + key + ": missing required field");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(context + key + ": wrong type");
  }
}

template <typename T>
T field_or(const nlohmann::json& j, const std::string& key, const std::string& context, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(context + key + ": wrong type");
  }
}

}  // namespace detail

inline ObjectiveSpec objective_spec_from_json(const nlohmann::json& j, const std::string& context) {
  ObjectiveSpec spec;
  spec.name = detail::field<std::string>(j, "name", context);
  const std::string direction = detail::field<std::string>(j, "direction", context);
  if (direction == "minimize") {
    spec.direction = Direction::Minimize;
  } else if (direction == "maximize") {
    spec.direction = Direction::Maximize;
  } else {
    throw ConfigError(context + "direction: must be 'minimize' or 'maximize'");
  }
  spec.lower_bound = detail::field<double>(j, "lower_bound", context);
  spec.upper_bound = detail::field<double>(j, "upper_bound", context);
  spec.weight = detail::field<double>(j, "weight", context);
  spec.priority = detail::field_or<int>(j, "priority", context, 1);
  if (j.contains("threshold") && !j.at("threshold").is_null()) {
    spec.threshold = detail::field<double>(j, "threshold", context);
  }
  return spec;
}

inline PenaltySpec penalty_spec_from_json(const nlohmann::json& j, const std::string& context) {
  const std::string kind = detail::field<std::string>(j, "kind", context);
  if (kind == "linear") {
    return PenaltySpec::linear(detail::field<double>(j, "max_violation", context));
  }
  if (kind == "exponential") {
    return PenaltySpec::exponential(detail::field<double>(j, "reference_violation", context));
  }
  throw ConfigError(context + "kind: must be 'linear' or 'exponential'");
}

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig config;
  config.schema_version = detail::field<int>(j, "schema_version", "");
  if (config.schema_version != 1) {
    throw ConfigError("schema_version: unsupported version " +
                      std::to_string(config.schema_version));
  }
  const auto& problem = j.contains("problem") ? j.at("problem") : nlohmann::json();
  if (!problem.is_object()) throw ConfigError("problem: missing required object");
  config.problem_kind = detail::field<std::string>(problem, "kind", "problem.");
  if (problem.contains("instance")) {
    config.instance_path = detail::field<std::string>(problem, "instance", "problem.");
  }
  config.mode = parse_mode(detail::field<std::string>(j, "mode", ""));
  if (j.contains("objectives")) {
    const auto& objectives = j.at("objectives");
    if (!objectives.is_array()) throw ConfigError("objectives: must be an array");
    for (std::size_t i = 0; i < objectives.size(); ++i) {
      config.objectives.push_back(objective_spec_from_json(
          objectives[i], "objectives[" + std::to_string(i) + "]."));
    }
  }
  if (j.contains("penalties")) {
    const auto& penalties = j.at("penalties");
    if (!penalties.is_array()) throw ConfigError("penalties: must be an array");
    for (std::size_t i = 0; i < penalties.size(); ++i) {
      config.penalties.push_back(
          penalty_spec_from_json(penalties[i], "penalties[" + std::to_string(i) + "]."));
    }
  }
  if (j.contains("epsilon") && !j.at("epsilon").is_null()) {
    const auto& eps = j.at("epsilon");
    EpsilonSettings settings;
    settings.objective_index = detail::field<std::size_t>(eps, "objective_index", "epsilon.");
    if (!eps.contains("lower_bounds") || !eps.at("lower_bounds").is_array()) {
      throw ConfigError("epsilon.lower_bounds: missing required array");
    }
    for (const auto& bound : eps.at("lower_bounds")) {
      if (bound.is_null()) {
        settings.lower_bounds.emplace_back(std::nullopt);
      } else if (bound.is_number()) {
        settings.lower_bounds.emplace_back(bound.get<double>());
      } else {
        throw ConfigError("epsilon.lower_bounds: entries must be numbers or null");
      }
    }
    config.epsilon = std::move(settings);
  }
  if (j.contains("run")) {
    const auto& run = j.at("run");
    config.run.population_size = detail::field_or<int>(run, "population_size", "run.", config.run.population_size);
    config.run.max_evaluations = detail::field_or<std::int64_t>(run, "max_evaluations", "run.", config.run.max_evaluations);
    config.run.stagnation_window = detail::field_or<int>(run, "stagnation_window", "run.", config.run.stagnation_window);
    config.run.mutation_rate = detail::field_or<double>(run, "mutation_rate", "run.", config.run.mutation_rate);
    config.run.mutation_scale = detail::field_or<double>(run, "mutation_scale", "run.", config.run.mutation_scale);
    config.run.crossover_rate = detail::field_or<double>(run, "crossover_rate", "run.", config.run.crossover_rate);
  }
  config.seeds = detail::field_or<std::vector<std::uint64_t>>(j, "seeds", "", {1});
  if (j.contains("region_of_interest") && !j.at("region_of_interest").is_null()) {
    RegionOfInterest region;
    for (const auto& entry : j.at("region_of_interest")) {
      if (entry.is_null()) {
        region.intervals.emplace_back(-std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity());
      } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                 entry[1].is_number()) {
        region.intervals.emplace_back(entry[0].get<double>(), entry[1].get<double>());
      } else {
        throw ConfigError("region_of_interest: entries must be [lo, hi] pairs or null");
      }
    }
    config.region_of_interest = std::move(region);
  }
  config.output_dir = detail::field_or<std::string>(j, "output_dir", "", "out");
  return config;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  ExperimentConfig config = parse_experiment_config(j);
  // A relative instance path is resolved against the config file's
  // directory, not the working directory.
  if (!config.instance_path.empty() && config.instance_path.is_relative()) {
    config.instance_path = path.parent_path() / config.instance_path;
  }
  return config;
}

// ---------------------------------------------------------------------------
// Problem selection and assessors

inline ProblemDefinition select_problem(const ExperimentConfig& config) {
  ProblemDefinition problem;
  if (config.problem_kind == "arc") {
    problem = problems::arc();
  } else if (config.problem_kind == "dent") {
    problem = problems::dent();
  } else if (config.problem_kind == "grid") {
    if (config.instance_path.empty()) {
      throw ConfigError("problem.instance: required for the grid problem");
    }
    problem = make_grid_problem(load_grid_instance(config.instance_path));
  } else {
    throw ConfigError("problem.kind: unknown problem '" + config.problem_kind + "'");
  }
  if (!config.objectives.empty()) {
    if (config.objectives.size() != problem.objectives.size()) {
      throw ConfigError("objectives: expected " + std::to_string(problem.objectives.size()) +
                        " entries for problem '" + problem.name + "', got " +
                        std::to_string(config.objectives.size()));
    }
    problem.objectives = config.objectives;
  }
  return problem;
}

/// Validates the experiment against the resolved problem; throws ConfigError
/// with a field-level message on the first failure.
inline void validate_experiment(const ExperimentConfig& config, const ProblemDefinition& problem) {
  const std::size_t k = problem.objective_count();
  for (std::size_t i = 0; i < problem.objectives.size(); ++i) {
    for (const auto& message : validate_spec(problem.objectives[i])) {
      throw ConfigError("objectives[" + std::to_string(i) + "]." + message);
    }
  }
  const bool scalarized = config.mode != ExperimentMode::ParetoRank;
  if (scalarized) {
    double weight_sum = 0.0;
    for (const auto& spec : problem.objectives) weight_sum += spec.weight;
    if (std::abs(weight_sum - 1.0) > kWeightSumTolerance) {
      throw ConfigError("objectives: weights must sum to 1 (got " + format_double(weight_sum) +
                        ")");
    }
  }
  if (config.mode == ExperimentMode::Cws) {
    const CwsConfig groups = cws_config_from_priorities(problem.objectives);
    for (const auto& message : validate_cws(groups, problem.objectives)) {
      throw ConfigError(message);
    }
  }
  if (config.mode == ExperimentMode::EpsilonConstrained) {
    if (!config.epsilon) throw ConfigError("epsilon: required for epsilon_constrained mode");
    if (config.epsilon->objective_index >= k) {
      throw ConfigError("epsilon.objective_index: out of range");
    }
    if (config.epsilon->lower_bounds.size() != k) {
      throw ConfigError("epsilon.lower_bounds: expected " + std::to_string(k) + " entries");
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (i != config.epsilon->objective_index && !config.epsilon->lower_bounds[i]) {
        throw ConfigError("epsilon.lower_bounds[" + std::to_string(i) +
                          "]: required for every objective except the optimized one");
      }
    }
  }
  if (!config.penalties.empty() && config.penalties.size() != problem.violation_labels.size()) {
    throw ConfigError("penalties: expected " + std::to_string(problem.violation_labels.size()) +
                      " entries (one per violation channel) or none");
  }
  for (std::size_t i = 0; i < config.penalties.size(); ++i) {
    for (const auto& message : validate_penalty(config.penalties[i])) {
      throw ConfigError("penalties[" + std::to_string(i) + "]." + message);
    }
  }
  if (const auto violations = validate_run_config(config.run); !violations.empty()) {
    throw ConfigError("run." + violations.front());
  }
  if (config.seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  if (config.region_of_interest && config.region_of_interest->intervals.size() != k) {
    throw ConfigError("region_of_interest: expected " + std::to_string(k) + " intervals");
  }
}

namespace detail {

inline std::vector<double> penalty_factors(std::span<const double> violations,
                                           std::span<const PenaltySpec> penalties) {
  std::vector<double> factors;
  if (penalties.empty()) return factors;
  factors.reserve(violations.size());
  for (std::size_t i = 0; i < violations.size(); ++i) {
    factors.push_back(penalty(violations[i], penalties[i]));
  }
  return factors;
}

}  // namespace detail

/// Builds the scalar assessor for the configured mode. Pareto-rank mode
/// needs none.
inline ScalarAssessor make_assessor(const ExperimentConfig& config,
                                    const ProblemDefinition& problem) {
  const std::vector<ObjectiveSpec> specs = problem.objectives;
  const std::vector<PenaltySpec> penalties = config.penalties;
  switch (config.mode) {
    case ExperimentMode::WeightedSum: {
      std::vector<double> weights;
      for (const auto& spec : specs) weights.push_back(spec.weight);
      return [specs, weights, penalties](std::span<const double> objectives,
                                         std::span<const double> violations) {
        std::vector<double> normalized;
        normalized.reserve(specs.size());
        for (std::size_t i = 0; i < specs.size(); ++i) {
          normalized.push_back(normalize(objectives[i], specs[i]));
        }
        Assessment assessment;
        assessment.raw_quality = weighted_sum(normalized, weights);
        assessment.quality = assessment.raw_quality;
        assessment.active_group_count = 1;
        assessment.normalized_objectives = std::move(normalized);
        return with_penalties(std::move(assessment),
                              detail::penalty_factors(violations, penalties));
      };
    }
    case ExperimentMode::Cws: {
      const CwsConfig groups = cws_config_from_priorities(specs);
      return [specs, groups, penalties](std::span<const double> objectives,
                                        std::span<const double> violations) {
        std::vector<double> normalized;
        normalized.reserve(specs.size());
        for (std::size_t i = 0; i < specs.size(); ++i) {
          normalized.push_back(normalize(objectives[i], specs[i]));
        }
        Assessment assessment = cws(normalized, groups, specs);
        return with_penalties(std::move(assessment),
                              detail::penalty_factors(violations, penalties));
      };
    }
    case ExperimentMode::EpsilonConstrained: {
      const EpsilonSettings eps = *config.epsilon;
      return [specs, eps, penalties](std::span<const double> objectives,
                                     std::span<const double> violations) {
        std::vector<double> oriented(objectives.begin(), objectives.end());
        for (std::size_t i = 0; i < specs.size(); ++i) {
          if (specs[i].direction == Direction::Minimize) oriented[i] = -oriented[i];
        }
        const EpsilonResult r = epsilon_constrained(oriented, eps.objective_index, eps.lower_bounds);
        Assessment assessment;
        std::vector<double> normalized;
        normalized.reserve(specs.size());
        for (std::size_t i = 0; i < specs.size(); ++i) {
          normalized.push_back(normalize(objectives[i], specs[i]));
        }
        assessment.raw_quality = r.feasible ? normalized[eps.objective_index] : 0.0;
        assessment.quality = assessment.raw_quality;
        assessment.active_group_count = 1;
        assessment.normalized_objectives = std::move(normalized);
        return with_penalties(std::move(assessment),
                              detail::penalty_factors(violations, penalties));
      };
    }
    default:
      return {};
  }
}

// ---------------------------------------------------------------------------
// Experiment execution

struct SeedSummary {
  std::uint64_t seed = 0;
  double best_quality = 0.0;
  std::int64_t evaluation_count = 0;
  StopReason stop_reason = StopReason::Budget;
  std::optional<double> roi_fraction;
  std::string front_csv;
  std::string history_csv;
};

struct ExperimentReport {
  std::vector<SeedSummary> per_seed;
  double mean_best = 0.0;
  double min_best = 0.0;
  double max_best = 0.0;
  std::optional<double> mean_roi_fraction;
  std::filesystem::path report_path;
};

inline std::filesystem::path resolve_output_dir(const std::filesystem::path& configured) {
  if (const char* root = std::getenv("MOAT_OUTPUT_ROOT")) {
    return std::filesystem::path(root) / configured;
  }
  return configured;
}

/// Rank-0 members of a population under the problem's directions.
inline std::vector<Individual> non_dominated_subset(std::span<const Individual> population,
                                                    std::span<const ObjectiveSpec> specs) {
  std::vector<Direction> directions;
  for (const auto& spec : specs) directions.push_back(spec.direction);
  std::vector<ObjectiveVector> vectors;
  vectors.reserve(population.size());
  for (const auto& ind : population) vectors.emplace_back(ind.objectives, directions);
  std::vector<Individual> subset;
  for (std::size_t i : non_dominated_indices(vectors)) subset.push_back(population[i]);
  return subset;
}

/// Runs every configured seed, writes one front CSV and one history CSV per
/// seed plus report.json, and returns the aggregate report. Deterministic
/// per seed; reruns produce byte-identical files.
inline ExperimentReport execute(const ExperimentConfig& config) {
  ProblemDefinition problem = select_problem(config);
  validate_experiment(config, problem);
  const ScalarAssessor assessor = make_assessor(config, problem);

  const std::filesystem::path out_dir = resolve_output_dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

  std::vector<Direction> directions;
  for (const auto& spec : problem.objectives) directions.push_back(spec.direction);

  ExperimentReport report;
  for (std::uint64_t seed : config.seeds) {
    RunConfig run = config.run;
    run.seed = seed;
    run.mode = config.mode == ExperimentMode::ParetoRank ? AssessMode::ParetoRank
                                                         : AssessMode::Scalarized;
    const RunResult result = evolve(problem, assessor, run);

    SeedSummary summary;
    summary.seed = seed;
    summary.evaluation_count = result.evaluation_count;
    summary.stop_reason = result.stop_reason;
    summary.best_quality = result.best_history.empty()
                               ? 0.0
                               : *std::max_element(result.best_history.begin(),
                                                   result.best_history.end());

    // Front CSV: raw objectives plus the point's Pareto rank.
    std::vector<ObjectiveVector> vectors;
    vectors.reserve(result.final_population.size());
    for (const auto& ind : result.final_population) {
      vectors.emplace_back(ind.objectives, directions);
    }
    const std::vector<int> ranks =
        result.final_population.empty() ? std::vector<int>{} : pareto_rank(vectors);
    CsvTable front;
    for (const auto& spec : problem.objectives) front.header.push_back(spec.name);
    front.header.push_back("rank");
    for (std::size_t i = 0; i < result.final_population.size(); ++i) {
      auto row = csv_row(result.final_population[i].objectives);
      row.push_back(std::to_string(ranks[i]));
      front.rows.push_back(std::move(row));
    }
    summary.front_csv = "front_seed" + std::to_string(seed) + ".csv";
    write_csv_file(out_dir / summary.front_csv, front);

    CsvTable history;
    history.header = {"generation", "best_quality"};
    for (std::size_t g = 0; g < result.best_history.size(); ++g) {
      history.rows.push_back({std::to_string(g), format_double(result.best_history[g])});
    }
    summary.history_csv = "history_seed" + std::to_string(seed) + ".csv";
    write_csv_file(out_dir / summary.history_csv, history);

    if (config.region_of_interest) {
      const auto subset = non_dominated_subset(result.final_population, problem.objectives);
      summary.roi_fraction = roi_fraction(subset, *config.region_of_interest);
    }
    report.per_seed.push_back(std::move(summary));
  }

  report.min_best = std::numeric_limits<double>::infinity();
  report.max_best = -std::numeric_limits<double>::infinity();
  double best_sum = 0.0;
  double roi_sum = 0.0;
  for (const auto& summary : report.per_seed) {
    best_sum += summary.best_quality;
    report.min_best = std::min(report.min_best, summary.best_quality);
    report.max_best = std::max(report.max_best, summary.best_quality);
    if (summary.roi_fraction) roi_sum += *summary.roi_fraction;
  }
  report.mean_best = best_sum / static_cast<double>(report.per_seed.size());
  if (config.region_of_interest) {
    report.mean_roi_fraction = roi_sum / static_cast<double>(report.per_seed.size());
  }

  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["problem"] = problem.name;
  j["mode"] = to_string(config.mode);
  nlohmann::ordered_json objectives = nlohmann::ordered_json::array();
  for (const auto& spec : problem.objectives) {
    nlohmann::ordered_json js;
    to_json(js, spec);
    objectives.push_back(std::move(js));
  }
  j["objectives"] = std::move(objectives);
  if (config.mode == ExperimentMode::Cws) {
    nlohmann::ordered_json groups;
    to_json(groups, cws_config_from_priorities(problem.objectives));
    j["cws"] = std::move(groups);
  }
  nlohmann::ordered_json aggregate;
  aggregate["mean_best_quality"] = report.mean_best;
  aggregate["min_best_quality"] = report.min_best;
  aggregate["max_best_quality"] = report.max_best;
  if (report.mean_roi_fraction) aggregate["mean_roi_fraction"] = *report.mean_roi_fraction;
  j["aggregate"] = std::move(aggregate);
  nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
  for (const auto& summary : report.per_seed) {
    nlohmann::ordered_json js;
    js["seed"] = summary.seed;
    js["best_quality"] = summary.best_quality;
    js["evaluation_count"] = summary.evaluation_count;
    js["stop_reason"] = to_string(summary.stop_reason);
    if (summary.roi_fraction) js["roi_fraction"] = *summary.roi_fraction;
    js["front_csv"] = summary.front_csv;
    js["history_csv"] = summary.history_csv;
    seeds.push_back(std::move(js));
  }
  j["per_seed"] = std::move(seeds);

  report.report_path = out_dir / "report.json";
  std::ofstream out(report.report_path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + report.report_path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + report.report_path.string() + "'");
  return report;
}

// ---------------------------------------------------------------------------
// Weight sweep (grid-search inner optimizer)

struct SweepRow {
  double w1 = 0.0;
  double w2 = 0.0;
  std::vector<double> best_objectives;  // raw orientation
  double best_quality = 0.0;
};

inline constexpr std::size_t kSweepGridPerAxis = 641;

/// For each interior weight w1 = i/steps, maximizes the configured
/// scalarization over a dense grid on the decision box (not the EA, so the
/// recorded attainable front is free of stochastic noise) and records the
/// best raw objective vector.
inline std::vector<SweepRow> sweep_weights(const ExperimentConfig& config, int steps) {
  if (steps < 2) throw ConfigError("steps: must be at least 2");
  if (config.mode != ExperimentMode::WeightedSum && config.mode != ExperimentMode::Cws) {
    throw ConfigError("mode: sweep-weights needs a weighted_sum or cws configuration");
  }
  ProblemDefinition problem = select_problem(config);
  if (problem.objective_count() != 2) {
    throw ConfigError("objectives: sweep-weights is defined for exactly 2 objectives");
  }
  const auto* box = std::get_if<BoxSpace>(&problem.space);
  if (!box) throw ConfigError("problem: sweep-weights needs a box decision space");
  validate_experiment(config, problem);

  std::vector<ObjectiveSpec> specs = problem.objectives;
  const CwsConfig groups = config.mode == ExperimentMode::Cws
                               ? cws_config_from_priorities(specs)
                               : CwsConfig{{{0, 1}}};

  // Precompute raw and normalized objective vectors over the grid, plus the
  // weight-independent active group count per point.
  const std::size_t n0 = kSweepGridPerAxis;
  const std::size_t n1 = kSweepGridPerAxis;
  const std::size_t total = n0 * n1;
  std::vector<double> raw(total * 2);
  std::vector<double> normalized(total * 2);
  std::vector<int> active(total);
  for (std::size_t i = 0; i < n0; ++i) {
    const double x0 = box->lower[0] + (box->upper[0] - box->lower[0]) *
                                          static_cast<double>(i) / static_cast<double>(n0 - 1);
    for (std::size_t r = 0; r < n1; ++r) {
      const double x1 = box->lower[1] + (box->upper[1] - box->lower[1]) *
                                            static_cast<double>(r) / static_cast<double>(n1 - 1);
      const Evaluation ev = problem.evaluate(RealDecision{{x0, x1}});
      const std::size_t at = (i * n1 + r) * 2;
      raw[at] = ev.objectives[0];
      raw[at + 1] = ev.objectives[1];
      normalized[at] = normalize(ev.objectives[0], specs[0]);
      normalized[at + 1] = normalize(ev.objectives[1], specs[1]);
      active[i * n1 + r] = active_group_count({&normalized[at], 2}, groups, specs);
    }
  }

  std::vector<SweepRow> rows;
  for (int i = 1; i < steps; ++i) {
    const double w1 = static_cast<double>(i) / static_cast<double>(steps);
    specs[0].weight = w1;
    specs[1].weight = 1.0 - w1;
    double best = -1.0;
    std::size_t best_at = 0;
    for (std::size_t p = 0; p < total; ++p) {
      const auto value =
          detail::cws_value({&normalized[p * 2], 2}, groups, specs, active[p]);
      if (value.raw_quality > best) {
        best = value.raw_quality;
        best_at = p;
      }
    }
    SweepRow row;
    row.w1 = w1;
    row.w2 = 1.0 - w1;
    row.best_objectives = {raw[best_at * 2], raw[best_at * 2 + 1]};
    row.best_quality = best;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CsvTable sweep_to_csv(const std::vector<SweepRow>& rows,
                             std::span<const ObjectiveSpec> specs) {
  CsvTable table;
  table.header = {"w1", "w2"};
  for (const auto& spec : specs) table.header.push_back(spec.name);
  table.header.push_back("quality");
  for (const auto& row : rows) {
    std::vector<std::string> cells = {format_double(row.w1), format_double(row.w2)};
    for (double v : row.best_objectives) cells.push_back(format_double(v));
    cells.push_back(format_double(row.best_quality));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Budget table

struct BudgetTable {
  int k_max = 2;
  std::vector<int> s_values;
  // cells[k-2][si]; nullopt marks 64-bit overflow
  std::vector<std::vector<std::optional<std::uint64_t>>> cells;
};

inline BudgetTable budget_table(int k_max, std::span<const int> s_values) {
  if (k_max < 2) throw ConfigError("k-max: must be at least 2");
  if (s_values.empty()) throw ConfigError("s: at least one value is required");
  for (int s : s_values) {
    if (s < 2) throw ConfigError("s: every value must be at least 2");
  }
  BudgetTable table;
  table.k_max = k_max;
  table.s_values.assign(s_values.begin(), s_values.end());
  for (int k = 2; k <= k_max; ++k) {
    std::vector<std::optional<std::uint64_t>> row;
    for (int s : s_values) {
      try {
        row.emplace_back(front_budget(k, s));
      } catch (const std::overflow_error&) {
        row.emplace_back(std::nullopt);
      }
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

inline std::string budget_table_text(const BudgetTable& table) {
  std::ostringstream out;
  out << "k";
  for (int s : table.s_values) out << '\t' << "s=" << s;
  out << '\n';
  for (int k = 2; k <= table.k_max; ++k) {
    out << k;
    for (const auto& cell : table.cells[static_cast<std::size_t>(k - 2)]) {
      out << '\t';
      if (cell) {
        out << *cell;
      } else {
        out << "overflow";
      }
    }
    out << '\n';
  }
  return out.str();
}

inline CsvTable budget_table_csv(const BudgetTable& table) {
  CsvTable csv;
  csv.header.push_back("k");
  for (int s : table.s_values) csv.header.push_back("s" + std::to_string(s));
  for (int k = 2; k <= table.k_max; ++k) {
    std::vector<std::string> row = {std::to_string(k)};
    for (const auto& cell : table.cells[static_cast<std::size_t>(k - 2)]) {
      row.push_back(cell ? std::to_string(*cell) : "overflow");
    }
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

// ---------------------------------------------------------------------------
// Non-dominated filter over an arbitrary points CSV

/// Treats every column as an objective in maximize orientation and keeps the
/// non-dominated rows, preserving the original cell text.
inline CsvTable front_filter_csv(const CsvTable& input) {
  if (input.header.empty()) throw ConfigError("front: csv needs at least one column");
  if (input.rows.empty()) throw ConfigError("front: csv has no data rows");
  std::vector<ObjectiveVector> points;
  points.reserve(input.rows.size());
  for (std::size_t r = 0; r < input.rows.size(); ++r) {
    std::vector<double> values;
    values.reserve(input.rows[r].size());
    for (const auto& cell : input.rows[r]) {
      values.push_back(parse_cell(cell, "front: row " + std::to_string(r + 1)));
    }
    points.emplace_back(std::move(values));
  }
  CsvTable out;
  out.header = input.header;
  for (std::size_t i : non_dominated_indices(points)) out.rows.push_back(input.rows[i]);
  return out;
}

}  // namespace moat
