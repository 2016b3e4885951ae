#pragma once

// Shared helpers for the test binaries: random directions/states and
// independent numerical oracles.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "retrobell/spin.hpp"

namespace retrobell::testing {

inline UnitVector3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  for (;;) {
    const double x = n(rng), y = n(rng), z = n(rng);
    if (x * x + y * y + z * z > 1e-6) return UnitVector3(x, y, z);
  }
}

inline TwoQubitState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::array<Complex, 4> a{};
  for (auto& c : a) c = {n(rng), n(rng)};
  return TwoQubitState(a);
}

/// Composite Simpson rule on [lo, hi] with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / intervals;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

inline double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

inline double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

}  // namespace retrobell::testing
