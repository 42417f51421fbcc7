#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "moat/objective.hpp"

using namespace moat;

namespace {

ObjectiveSpec make_spec(Direction direction, double lo, double hi) {
  ObjectiveSpec spec;
  spec.name = "f";
  spec.direction = direction;
  spec.lower_bound = lo;
  spec.upper_bound = hi;
  spec.weight = 1.0;
  return spec;
}

}  // namespace

TEST_CASE("normalize endpoints and midpoints") {
  CHECK(normalize(10.0, make_spec(Direction::Minimize, 0.0, 10.0)) == 0.0);
  CHECK(normalize(10.0, make_spec(Direction::Maximize, 0.0, 10.0)) == 1.0);
  CHECK(normalize(7.0, make_spec(Direction::Minimize, 2.0, 12.0)) == 0.5);
  CHECK(normalize(0.0, make_spec(Direction::Minimize, 0.0, 10.0)) == 1.0);
  CHECK(normalize(0.0, make_spec(Direction::Maximize, 0.0, 10.0)) == 0.0);
}

TEST_CASE("normalize clamps out-of-bounds raw values") {
  const auto spec = make_spec(Direction::Minimize, 0.0, 10.0);
  CHECK(normalize(15.0, spec) == 0.0);
  CHECK(normalize(-5.0, spec) == 1.0);
}

TEST_CASE("normalize rejects bad input") {
  const auto spec = make_spec(Direction::Minimize, 0.0, 10.0);
  CHECK_THROWS_AS(normalize(std::nan(""), spec), std::invalid_argument);
  auto degenerate = make_spec(Direction::Minimize, 3.0, 3.0);
  CHECK_THROWS_AS(normalize(3.0, degenerate), std::invalid_argument);
}

TEST_CASE("validate_spec reports the offending field") {
  auto spec = make_spec(Direction::Maximize, 0.0, 1.0);
  CHECK(validate_spec(spec).empty());

  spec.weight = 0.0;
  auto violations = validate_spec(spec);
  REQUIRE(violations.size() == 1);
  CHECK(violations.front().find("weight must be positive") != std::string::npos);

  spec = make_spec(Direction::Maximize, 2.0, 2.0);
  violations = validate_spec(spec);
  REQUIRE(violations.size() == 1);
  CHECK(violations.front().find("degenerate bounds") != std::string::npos);

  spec = make_spec(Direction::Maximize, 0.0, 1.0);
  spec.threshold = 1.0;
  violations = validate_spec(spec);
  REQUIRE(violations.size() == 1);
  CHECK(violations.front().find("threshold") != std::string::npos);
}

TEST_CASE("normalize is monotone in the improving direction") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double lo = -10.0 + 20.0 * u01(rng);
    const double hi = lo + 0.1 + 20.0 * u01(rng);
    const auto direction = trial % 2 == 0 ? Direction::Minimize : Direction::Maximize;
    const auto spec = make_spec(direction, lo, hi);
    double a = lo + (hi - lo) * u01(rng);
    double b = lo + (hi - lo) * u01(rng);
    if (a > b) std::swap(a, b);
    if (direction == Direction::Minimize) {
      CHECK(normalize(a, spec) >= normalize(b, spec));
    } else {
      CHECK(normalize(a, spec) <= normalize(b, spec));
    }
    // Endpoints are exactly 0 and 1 in the direction-appropriate order.
    const double at_lower = normalize(lo, spec);
    const double at_upper = normalize(hi, spec);
    if (direction == Direction::Minimize) {
      CHECK(at_lower == 1.0);
      CHECK(at_upper == 0.0);
    } else {
      CHECK(at_lower == 0.0);
      CHECK(at_upper == 1.0);
    }
  }
}

TEST_CASE("threshold_to_raw matches the available-scale reading") {
  auto spec = make_spec(Direction::Maximize, 0.0, 100.0);
  spec.threshold = 0.4;
  CHECK(threshold_to_raw(spec) == Catch::Approx(40.0));

  spec.threshold = 1e-12;
  CHECK(threshold_to_raw(spec) == Catch::Approx(0.0).margin(1e-9));

  // For a minimized objective, satisfied means below 75% of the scale.
  spec = make_spec(Direction::Minimize, 0.0, 100.0);
  spec.threshold = 0.25;
  CHECK(threshold_to_raw(spec) == Catch::Approx(75.0));

  spec.threshold.reset();
  CHECK_THROWS_AS(threshold_to_raw(spec), std::invalid_argument);
}

TEST_CASE("raw and normalized threshold tests agree") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    auto spec = make_spec(trial % 2 == 0 ? Direction::Minimize : Direction::Maximize,
                          -5.0 + 10.0 * u01(rng), 6.0 + 10.0 * u01(rng));
    spec.threshold = 0.05 + 0.9 * u01(rng);
    const double raw_threshold = threshold_to_raw(spec);
    const double v = spec.lower_bound + (spec.upper_bound - spec.lower_bound) * u01(rng);
    // Skip the few-ulp sliver around the boundary where the two formulas can
    // round to different sides.
    if (std::abs(v - raw_threshold) < 1e-9 * (spec.upper_bound - spec.lower_bound)) continue;
    const bool normalized_side = normalize(v, spec) >= *spec.threshold;
    const bool raw_side = spec.direction == Direction::Maximize ? v >= raw_threshold
                                                                : v <= raw_threshold;
    CHECK(normalized_side == raw_side);
  }
}

TEST_CASE("tuned_normalize agrees with normalize at the bounds") {
  auto spec = make_spec(Direction::Minimize, 0.0, 1.0);
  const TunedNormalization tuning{0.2, 0.4, 0.8};
  CHECK(tuned_normalize(0.0, spec, tuning) == 1.0);
  CHECK(tuned_normalize(1.0, spec, tuning) == 0.0);
  spec.direction = Direction::Maximize;
  CHECK(tuned_normalize(0.0, spec, tuning) == 0.0);
  CHECK(tuned_normalize(1.0, spec, tuning) == 1.0);
}

TEST_CASE("tuned_normalize follows the three-segment allocation") {
  // Minimize on [0,1], interest [0.2,0.4], inside share 0.8. The outside
  // lengths are 0.2 and 0.6, so they take 0.05 and 0.15 of the output range:
  // knots (0.2 -> 0.95) and (0.4 -> 0.15).
  const auto spec = make_spec(Direction::Minimize, 0.0, 1.0);
  const TunedNormalization tuning{0.2, 0.4, 0.8};
  CHECK(tuned_normalize(0.2, spec, tuning) == Catch::Approx(0.95).epsilon(1e-12));
  CHECK(tuned_normalize(0.4, spec, tuning) == Catch::Approx(0.15).epsilon(1e-12));
  // Midpoint of the steep segment, from the hand-built two-point form.
  const double expected = 0.95 + (0.3 - 0.2) / (0.4 - 0.2) * (0.15 - 0.95);
  CHECK(tuned_normalize(0.3, spec, tuning) == Catch::Approx(expected).epsilon(1e-12));
  CHECK(expected == Catch::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("tuned_normalize reduces to normalize for the uniform share") {
  const auto spec = make_spec(Direction::Minimize, 2.0, 12.0);
  const TunedNormalization tuning{4.0, 9.0, 0.5};  // (9-4)/(12-2) = 0.5
  for (double v = 2.0; v <= 12.0; v += 0.25) {
    CHECK(tuned_normalize(v, spec, tuning) == Catch::Approx(normalize(v, spec)).margin(1e-12));
  }
}

TEST_CASE("tuned_normalize is monotone over the whole range") {
  const auto spec = make_spec(Direction::Maximize, -1.0, 3.0);
  const TunedNormalization tuning{0.0, 1.0, 0.7};
  double previous = tuned_normalize(-1.0, spec, tuning);
  for (double v = -0.99; v <= 3.0; v += 0.01) {
    const double current = tuned_normalize(v, spec, tuning);
    CHECK(current >= previous - 1e-15);
    previous = current;
  }
}

TEST_CASE("tuned_normalize rejects invalid tuning") {
  const auto spec = make_spec(Direction::Minimize, 0.0, 1.0);
  CHECK_THROWS_AS(tuned_normalize(0.5, spec, TunedNormalization{0.4, 0.2, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(tuned_normalize(0.5, spec, TunedNormalization{-0.1, 0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(tuned_normalize(0.5, spec, TunedNormalization{0.2, 0.4, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(tuned_normalize(0.5, spec, TunedNormalization{0.0, 1.0, 0.5}),
                  std::invalid_argument);
}
