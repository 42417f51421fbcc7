#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "moat/objective.hpp"
#include "moat/scalarize.hpp"

namespace moat {

/// Objective values held in maximize orientation. Minimized objectives are
/// sign-flipped once at construction; the directions are kept so the raw
/// view can be recovered.
class ObjectiveVector {
 public:
  explicit ObjectiveVector(std::vector<double> maximized)
      : values_(std::move(maximized)), directions_(values_.size(), Direction::Maximize) {
    check_finite();
  }

  ObjectiveVector(std::vector<double> raw, std::vector<Direction> directions)
      : values_(std::move(raw)), directions_(std::move(directions)) {
    if (values_.size() != directions_.size()) {
      throw std::invalid_argument("ObjectiveVector: direction count mismatch");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (directions_[i] == Direction::Minimize) values_[i] = -values_[i];
    }
    check_finite();
  }

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  std::vector<double> raw() const {
    std::vector<double> out(values_);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (directions_[i] == Direction::Minimize) out[i] = -out[i];
    }
    return out;
  }

  friend bool operator==(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.values_ == b.values_;
  }

 private:
  void check_finite() const {
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("ObjectiveVector: values must be finite");
      }
    }
  }

  std::vector<double> values_;
  std::vector<Direction> directions_;
};

/// a dominates b: at least as good in every component, strictly better in one.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dominates: length mismatch");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

/// A point with per-constraint violations pre-normalized to [0,1];
/// feasible means every violation is exactly zero.
struct ConstrainedPoint {
  ObjectiveVector objectives;
  std::vector<double> violations;

  ConstrainedPoint(ObjectiveVector obj, std::vector<double> viol)
      : objectives(std::move(obj)), violations(std::move(viol)) {
    for (double v : violations) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("ConstrainedPoint: violations must lie in [0,1]");
      }
    }
  }

  bool feasible() const {
    return std::all_of(violations.begin(), violations.end(), [](double v) { return v == 0.0; });
  }
  double violation_sum() const {
    return std::accumulate(violations.begin(), violations.end(), 0.0);
  }
};

/// Constrained dominance: feasible beats infeasible; two feasible points
/// compare by dominance; two infeasible points compare by summed violation.
inline bool constrained_dominates(const ConstrainedPoint& a, const ConstrainedPoint& b) {
  if (a.objectives.size() != b.objectives.size() || a.violations.size() != b.violations.size()) {
    throw std::invalid_argument("constrained_dominates: dimension mismatch");
  }
  const bool a_feasible = a.feasible();
  const bool b_feasible = b.feasible();
  if (a_feasible && !b_feasible) return true;
  if (a_feasible && b_feasible) return dominates(a.objectives, b.objectives);
  if (!a_feasible && !b_feasible) return a.violation_sum() < b.violation_sum();
  return false;
}

namespace detail {

inline void require_uniform(std::span<const ObjectiveVector> points, const char* who) {
  if (points.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty input");
  }
  for (const auto& p : points) {
    if (p.size() != points.front().size()) {
      throw std::invalid_argument(std::string(who) + ": length mismatch");
    }
  }
}

}  // namespace detail

/// Indices of points not dominated by any other point. Duplicates of
/// non-dominated points are all retained.
inline std::vector<std::size_t> non_dominated_indices(std::span<const ObjectiveVector> points) {
  detail::require_uniform(points, "non_dominated_filter");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (j != i && dominates(points[j], points[i])) dominated = true;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

inline std::vector<ObjectiveVector> non_dominated_filter(std::span<const ObjectiveVector> points) {
  std::vector<ObjectiveVector> out;
  for (std::size_t i : non_dominated_indices(points)) out.push_back(points[i]);
  return out;
}

/// Weak variant: a point is removed only if some other point is strictly
/// better in every component. Always a superset of the strong filter.
inline std::vector<std::size_t> weakly_non_dominated_indices(
    std::span<const ObjectiveVector> points) {
  detail::require_uniform(points, "weakly_non_dominated_filter");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool strictly_beaten = false;
    for (std::size_t j = 0; j < points.size() && !strictly_beaten; ++j) {
      if (j == i) continue;
      bool all_strict = true;
      for (std::size_t c = 0; c < points[i].size(); ++c) {
        if (!(points[j][c] > points[i][c])) {
          all_strict = false;
          break;
        }
      }
      strictly_beaten = all_strict;
    }
    if (!strictly_beaten) keep.push_back(i);
  }
  return keep;
}

inline std::vector<ObjectiveVector> weakly_non_dominated_filter(
    std::span<const ObjectiveVector> points) {
  std::vector<ObjectiveVector> out;
  for (std::size_t i : weakly_non_dominated_indices(points)) out.push_back(points[i]);
  return out;
}

/// Componentwise maximum over the set, in maximize orientation.
inline ObjectiveVector ideal_vector(std::span<const ObjectiveVector> points) {
  detail::require_uniform(points, "ideal_vector");
  std::vector<double> best(points.front().values().begin(), points.front().values().end());
  for (const auto& p : points) {
    for (std::size_t c = 0; c < best.size(); ++c) best[c] = std::max(best[c], p[c]);
  }
  return ObjectiveVector(std::move(best));
}

/// Support points needed to grid a (k-1)-dimensional front at s points per
/// axis: s^(k-1), computed exactly in 64-bit integer arithmetic.
inline std::uint64_t front_budget(int objective_count, int points_per_axis) {
  if (objective_count < 2) {
    throw std::invalid_argument("front_budget: need at least 2 objectives");
  }
  if (points_per_axis < 2) {
    throw std::invalid_argument("front_budget: need at least 2 points per axis");
  }
  const auto s = static_cast<std::uint64_t>(points_per_axis);
  std::uint64_t result = 1;
  for (int e = 0; e < objective_count - 1; ++e) {
    if (result > std::numeric_limits<std::uint64_t>::max() / s) {
      throw std::overflow_error("front_budget: result exceeds 64-bit range");
    }
    result *= s;
  }
  return result;
}

/// Iterative peeling: rank 0 is the non-dominated set, rank r the
/// non-dominated set after removing all lower ranks.
inline std::vector<int> pareto_rank(std::span<const ObjectiveVector> points) {
  detail::require_uniform(points, "pareto_rank");
  std::vector<int> rank(points.size(), -1);
  std::size_t remaining = points.size();
  int current = 0;
  while (remaining > 0) {
    std::vector<std::size_t> level;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (rank[i] >= 0) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
        if (j != i && rank[j] < 0 && dominates(points[j], points[i])) dominated = true;
      }
      if (!dominated) level.push_back(i);
    }
    for (std::size_t i : level) rank[i] = current;
    remaining -= level.size();
    ++current;
  }
  return rank;
}

/// Finite-sample form of the epsilon-constrained optimality test: the
/// candidate passes iff no sample point solves any of the k constrained
/// problems strictly better, taking the candidate's own values as lower
/// bounds. Over a finite sample this is equivalent to non-domination.
inline bool verify_pareto_via_epsilon(const ObjectiveVector& candidate,
                                      std::span<const ObjectiveVector> sample) {
  detail::require_uniform(sample, "verify_pareto_via_epsilon");
  if (std::find(sample.begin(), sample.end(), candidate) == sample.end()) {
    throw std::invalid_argument("verify_pareto_via_epsilon: candidate not in sample");
  }
  const std::size_t k = candidate.size();
  std::vector<std::optional<double>> bounds(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      bounds[i] = (i == j) ? std::nullopt : std::optional<double>(candidate[i]);
    }
    for (const auto& q : sample) {
      const EpsilonResult r = epsilon_constrained(q.values(), j, bounds);
      if (r.feasible && r.value > candidate[j]) return false;
    }
  }
  return true;
}

}  // namespace moat
