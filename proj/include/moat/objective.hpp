#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace moat {

enum class Direction { Minimize, Maximize };

inline const char* to_string(Direction d) {
  return d == Direction::Minimize ? "minimize" : "maximize";
}

/// Description of a single objective: optimization direction, estimated
/// bounds on the raw scale, weight in (0,1], priority group (1 = highest),
/// and an optional satisfaction threshold expressed as a fraction of the
/// available scale between the bounds.
struct ObjectiveSpec {
  std::string name;
  Direction direction = Direction::Maximize;
  double lower_bound = 0.0;
  double upper_bound = 1.0;
  double weight = 1.0;
  int priority = 1;
  std::optional<double> threshold;
};

/// Reports every violated invariant with the offending field name.
/// An empty result means the spec is usable.
inline std::vector<std::string> validate_spec(const ObjectiveSpec& spec) {
  std::vector<std::string> violations;
  if (!std::isfinite(spec.lower_bound) || !std::isfinite(spec.upper_bound)) {
    violations.push_back("lower_bound/upper_bound: bounds must be finite");
  } else if (!(spec.lower_bound < spec.upper_bound)) {
    violations.push_back(
        "lower_bound/upper_bound: degenerate bounds (lower_bound must be "
        "strictly below upper_bound)");
  }
  if (!std::isfinite(spec.weight) || spec.weight <= 0.0) {
    violations.push_back("weight: weight must be positive");
  } else if (spec.weight > 1.0) {
    violations.push_back("weight: weight must not exceed 1");
  }
  if (spec.priority < 1) {
    violations.push_back("priority: priority must be a positive integer");
  }
  if (spec.threshold) {
    const double t = *spec.threshold;
    if (!std::isfinite(t) || t <= 0.0 || t >= 1.0) {
      violations.push_back("threshold: threshold must lie strictly in (0,1)");
    }
  }
  return violations;
}

inline void require_valid(const ObjectiveSpec& spec) {
  const auto violations = validate_spec(spec);
  if (!violations.empty()) {
    throw std::invalid_argument("objective '" + spec.name + "': " + violations.front());
  }
}

/// Maps a raw objective value onto [0,1], with 1 the best attainable value
/// in the spec's direction. Values outside the estimated bounds are clamped
/// to the bounds first, so optimizer excursions past the estimates stay in
/// range.
inline double normalize(double value, const ObjectiveSpec& spec) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("normalize: value must be finite");
  }
  require_valid(spec);
  const double v = std::clamp(value, spec.lower_bound, spec.upper_bound);
  const double width = spec.upper_bound - spec.lower_bound;
  if (spec.direction == Direction::Minimize) {
    return (spec.upper_bound - v) / width;
  }
  return (v - spec.lower_bound) / width;
}

/// Piecewise-linear replacement for normalize(): the raw interval of
/// interest receives inside_share of the [0,1] output range, and the two
/// outside segments split the remainder in proportion to their raw lengths.
/// Endpoints agree with normalize() at both bounds.
struct TunedNormalization {
  double interest_low = 0.0;
  double interest_high = 1.0;
  double inside_share = 0.5;
};

inline std::vector<std::string> validate_tuning(const ObjectiveSpec& spec,
                                                const TunedNormalization& tuning) {
  std::vector<std::string> violations;
  if (!std::isfinite(tuning.interest_low) || !std::isfinite(tuning.interest_high)) {
    violations.push_back("interest_low/interest_high: interval must be finite");
  } else {
    if (!(tuning.interest_low < tuning.interest_high)) {
      violations.push_back(
          "interest_low/interest_high: interest_low must be strictly below interest_high");
    }
    if (tuning.interest_low < spec.lower_bound || tuning.interest_high > spec.upper_bound) {
      violations.push_back(
          "interest_low/interest_high: interval must lie within the objective bounds");
    }
    if (tuning.interest_low == spec.lower_bound && tuning.interest_high == spec.upper_bound) {
      violations.push_back(
          "interest_low/interest_high: interval must be a proper subinterval of the bounds");
    }
  }
  if (!std::isfinite(tuning.inside_share) || tuning.inside_share <= 0.0 ||
      tuning.inside_share >= 1.0) {
    violations.push_back("inside_share: must lie strictly in (0,1)");
  }
  return violations;
}

inline double tuned_normalize(double value, const ObjectiveSpec& spec,
                              const TunedNormalization& tuning) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("tuned_normalize: value must be finite");
  }
  require_valid(spec);
  if (const auto violations = validate_tuning(spec, tuning); !violations.empty()) {
    throw std::invalid_argument("tuned_normalize: " + violations.front());
  }

  const double lo = spec.lower_bound;
  const double hi = spec.upper_bound;
  const double a = tuning.interest_low;
  const double b = tuning.interest_high;
  const double left_len = a - lo;
  const double right_len = hi - b;
  const double outside = left_len + right_len;
  const double share_left = (1.0 - tuning.inside_share) * (left_len / outside);
  const double share_right = (1.0 - tuning.inside_share) * (right_len / outside);

  // Increasing map anchored at (lo,0), (a,k1), (b,k2), (hi,1).
  const double k1 = share_left;
  const double k2 = 1.0 - share_right;
  const double v = std::clamp(value, lo, hi);
  double up;
  if (v <= a) {
    up = left_len == 0.0 ? 0.0 : k1 * (v - lo) / left_len;
  } else if (v <= b) {
    up = k1 + (k2 - k1) * (v - a) / (b - a);
  } else {
    up = 1.0 - share_right * (hi - v) / right_len;
  }
  return spec.direction == Direction::Maximize ? up : 1.0 - up;
}

/// Raw-scale view of the satisfaction threshold: the value t such that the
/// normalized test normalize(v, spec) >= threshold and the raw test "v lies
/// on the improving side of t (inclusive)" agree.
inline double threshold_to_raw(const ObjectiveSpec& spec) {
  require_valid(spec);
  if (!spec.threshold) {
    throw std::invalid_argument("threshold_to_raw: objective '" + spec.name +
                                "' has no threshold");
  }
  const double width = spec.upper_bound - spec.lower_bound;
  if (spec.direction == Direction::Maximize) {
    return spec.lower_bound + *spec.threshold * width;
  }
  return spec.upper_bound - *spec.threshold * width;
}

/// Satisfaction test on the normalized scale; equality counts as satisfied.
inline bool threshold_satisfied(double normalized_value, const ObjectiveSpec& spec) {
  if (!spec.threshold) {
    throw std::invalid_argument("threshold_satisfied: objective '" + spec.name +
                                "' has no threshold");
  }
  return normalized_value >= *spec.threshold;
}

}  // namespace moat
