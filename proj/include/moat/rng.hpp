#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace moat {

/// Deterministic random source. All distributions are built directly on the
/// mt19937_64 stream, so identical seeds give identical draws on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0,1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool chance(double p) { return uniform01() < p; }

  /// Uniform index in [0,n); n must be positive.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  /// Standard normal via Box-Muller; always consumes two draws.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    return radius * std::cos(6.28318530717958647692528676655900577 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace moat
