#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "moat/objective.hpp"

namespace moat {

inline constexpr double kWeightSumTolerance = 1e-9;

/// Priority groups over objective indices, highest priority first.
/// Derived quantities: g = groups.size(), m_j = groups[j].size(), and the
/// total objective count k is the sum of the group sizes.
struct CwsConfig {
  std::vector<std::vector<std::size_t>> groups;

  std::size_t group_count() const { return groups.size(); }
  std::size_t objective_count() const {
    std::size_t k = 0;
    for (const auto& g : groups) k += g.size();
    return k;
  }
};

/// Builds the group structure from the priority fields of the specs: equal
/// priority means same group, smaller priority value means earlier group.
/// Indices within each group come out in ascending order.
inline CwsConfig cws_config_from_priorities(std::span<const ObjectiveSpec> specs) {
  std::vector<int> distinct;
  for (const auto& s : specs) distinct.push_back(s.priority);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  CwsConfig config;
  for (int p : distinct) {
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (specs[i].priority == p) group.push_back(i);
    }
    config.groups.push_back(std::move(group));
  }
  return config;
}

/// Checks the group structure against the specs: the groups must partition
/// the objective indices, every objective outside the last group needs a
/// threshold, objectives in the last group must have none, and the weights
/// must sum to 1 within kWeightSumTolerance.
inline std::vector<std::string> validate_cws(const CwsConfig& config,
                                             std::span<const ObjectiveSpec> specs) {
  std::vector<std::string> violations;
  const std::size_t k = specs.size();
  if (config.groups.empty()) {
    violations.push_back("groups: must contain at least one group");
    return violations;
  }
  std::vector<int> seen(k, 0);
  for (std::size_t j = 0; j < config.groups.size(); ++j) {
    if (config.groups[j].empty()) {
      violations.push_back("groups[" + std::to_string(j) + "]: group must not be empty");
    }
    for (std::size_t idx : config.groups[j]) {
      if (idx >= k) {
        violations.push_back("groups[" + std::to_string(j) + "]: objective index " +
                             std::to_string(idx) + " out of range");
      } else {
        ++seen[idx];
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (seen[i] != 1) {
      violations.push_back("groups: objective " + std::to_string(i) +
                           " must appear in exactly one group");
    }
  }
  const std::size_t last = config.groups.size() - 1;
  for (std::size_t j = 0; j + 1 < config.groups.size(); ++j) {
    for (std::size_t idx : config.groups[j]) {
      if (idx < k && !specs[idx].threshold) {
        violations.push_back("objectives[" + std::to_string(idx) +
                             "].threshold: required for every group but the last");
      }
    }
  }
  for (std::size_t idx : config.groups[last]) {
    if (idx < k && specs[idx].threshold) {
      violations.push_back("objectives[" + std::to_string(idx) +
                           "].threshold: objectives in the last group must have none");
    }
  }
  double weight_sum = 0.0;
  for (const auto& s : specs) weight_sum += s.weight;
  if (std::abs(weight_sum - 1.0) > kWeightSumTolerance) {
    violations.push_back("objectives: weights must sum to 1");
  }
  return violations;
}

/// Result of one scalarized assessment. quality is the penalty-multiplied
/// final value, raw_quality the plain cascaded sum before penalties; the
/// identity quality == raw_quality * product(penalty_factors) always holds.
struct Assessment {
  double quality = 0.0;
  double raw_quality = 0.0;
  int active_group_count = 1;
  std::vector<double> normalized_objectives;
  std::vector<double> penalty_factors;
};

inline double weighted_sum(std::span<const double> normalized,
                           std::span<const double> weights) {
  if (normalized.size() != weights.size()) {
    throw std::invalid_argument("weighted_sum: length mismatch");
  }
  if (normalized.empty()) {
    throw std::invalid_argument("weighted_sum: empty input");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw std::invalid_argument("weighted_sum: every weight must be positive");
    }
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("weighted_sum: weights must sum to 1");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    if (!(normalized[i] >= 0.0 && normalized[i] <= 1.0)) {
      throw std::invalid_argument("weighted_sum: normalized values must lie in [0,1]");
    }
    sum += weights[i] * normalized[i];
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// Largest a such that every group before a is satisfied (all members meet
/// their thresholds on the normalized scale). Group 1 is always active; an
/// unsatisfied group deactivates all later groups.
inline int active_group_count(std::span<const double> normalized, const CwsConfig& config,
                              std::span<const ObjectiveSpec> specs) {
  if (normalized.size() != specs.size()) {
    throw std::invalid_argument("active_group_count: length mismatch");
  }
  if (const auto violations = validate_cws(config, specs); !violations.empty()) {
    throw std::invalid_argument("active_group_count: " + violations.front());
  }
  std::size_t active = 1;
  for (std::size_t j = 0; j + 1 < config.groups.size(); ++j) {
    bool satisfied = true;
    for (std::size_t idx : config.groups[j]) {
      if (!threshold_satisfied(normalized[idx], specs[idx])) {
        satisfied = false;
        break;
      }
    }
    if (!satisfied) break;
    active = j + 2;
  }
  return static_cast<int>(active);
}

namespace detail {

// Cascade arithmetic shared by cws() and bulk scans; assumes validated
// inputs. Sums the globally defined weights over the active prefix only,
// without reweighting.
struct CwsValue {
  double raw_quality = 0.0;
  int active_group_count = 1;
};

inline CwsValue cws_value(std::span<const double> normalized, const CwsConfig& config,
                          std::span<const ObjectiveSpec> specs, int active) {
  double sum = 0.0;
  for (int j = 0; j < active; ++j) {
    for (std::size_t idx : config.groups[static_cast<std::size_t>(j)]) {
      sum += specs[idx].weight * normalized[idx];
    }
  }
  return {std::clamp(sum, 0.0, 1.0), active};
}

}  // namespace detail

/// Cascaded weighted sum without penalties. With a single group this is
/// arithmetically identical to weighted_sum().
inline Assessment cws(std::span<const double> normalized, const CwsConfig& config,
                      std::span<const ObjectiveSpec> specs) {
  const int active = active_group_count(normalized, config, specs);
  for (double n : normalized) {
    if (!(n >= 0.0 && n <= 1.0)) {
      throw std::invalid_argument("cws: normalized values must lie in [0,1]");
    }
  }
  const auto value = detail::cws_value(normalized, config, specs, active);
  Assessment assessment;
  assessment.raw_quality = value.raw_quality;
  assessment.quality = value.raw_quality;
  assessment.active_group_count = value.active_group_count;
  assessment.normalized_objectives.assign(normalized.begin(), normalized.end());
  return assessment;
}

enum class PenaltyKind { Linear, Exponential };

/// Penalty shape: Linear falls to zero at max_violation; Exponential passes
/// through 1/3 at the reference violation d_p and never reaches zero.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::Linear;
  double parameter = 1.0;  // Linear: max_violation, Exponential: reference_violation

  static PenaltySpec linear(double max_violation) {
    return {PenaltyKind::Linear, max_violation};
  }
  static PenaltySpec exponential(double reference_violation) {
    return {PenaltyKind::Exponential, reference_violation};
  }
};

inline std::vector<std::string> validate_penalty(const PenaltySpec& spec) {
  std::vector<std::string> violations;
  if (!std::isfinite(spec.parameter) || spec.parameter <= 0.0) {
    violations.push_back(spec.kind == PenaltyKind::Linear
                             ? "max_violation: must be strictly positive"
                             : "reference_violation: must be strictly positive");
  }
  return violations;
}

/// Turns a non-negative constraint violation into a factor in [0,1]
/// (1 = no violation, 0 = maximal violation).
inline double penalty(double violation, const PenaltySpec& spec) {
  if (!std::isfinite(violation) || violation < 0.0) {
    throw std::invalid_argument("penalty: violation must be a non-negative real");
  }
  if (const auto violations = validate_penalty(spec); !violations.empty()) {
    throw std::invalid_argument("penalty: " + violations.front());
  }
  if (spec.kind == PenaltyKind::Linear) {
    return std::max(0.0, 1.0 - violation / spec.parameter);
  }
  return std::exp(-(std::log(3.0) / spec.parameter) * violation);
}

inline double apply_penalties(double raw_quality, std::span<const double> factors) {
  if (!(raw_quality >= 0.0 && raw_quality <= 1.0)) {
    throw std::invalid_argument("apply_penalties: raw_quality must lie in [0,1]");
  }
  double quality = raw_quality;
  for (double f : factors) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw std::invalid_argument("apply_penalties: factors must lie in [0,1]");
    }
    quality *= f;
  }
  return quality;
}

/// Attaches penalty factors to an assessment, keeping the invariant
/// quality == raw_quality * product(factors).
inline Assessment with_penalties(Assessment base, std::span<const double> factors) {
  base.penalty_factors.assign(factors.begin(), factors.end());
  base.quality = apply_penalties(base.raw_quality, factors);
  return base;
}

struct EpsilonResult {
  bool feasible = false;
  double value = 0.0;
};

/// Single-objective view with the other objectives as constraints: feasible
/// iff every objective other than objective_index clears its lower bound.
/// Inputs are raw values in maximize orientation (sign-flip minimized
/// objectives before calling). The value is reported regardless of
/// feasibility; callers use it only when feasible.
inline EpsilonResult epsilon_constrained(std::span<const double> raw,
                                         std::size_t objective_index,
                                         std::span<const std::optional<double>> lower_bounds) {
  if (objective_index >= raw.size()) {
    throw std::out_of_range("epsilon_constrained: objective index out of range");
  }
  if (lower_bounds.size() != raw.size()) {
    throw std::invalid_argument("epsilon_constrained: bounds length mismatch");
  }
  EpsilonResult result;
  result.feasible = true;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i == objective_index) continue;
    if (!lower_bounds[i]) {
      throw std::invalid_argument("epsilon_constrained: missing lower bound for objective " +
                                  std::to_string(i));
    }
    if (!(raw[i] >= *lower_bounds[i])) result.feasible = false;
  }
  result.value = raw[objective_index];
  return result;
}

}  // namespace moat
