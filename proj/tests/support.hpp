#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "besovlab/spectral.hpp"

namespace testing_support {

using besovlab::spectral::GridFunction;
using besovlab::spectral::GridSpec;
using besovlab::spectral::Point;

inline constexpr double kPi = std::numbers::pi;

// Sum of a few random low modes; periodic and band-limited by construction.
inline GridFunction random_band_limited(const GridSpec& spec, unsigned seed, int max_mode = 6) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  struct Mode {
    int k0, k1;
    double a, phase;
  };
  std::vector<Mode> modes;
  for (int k0 = 0; k0 <= max_mode; ++k0) {
    for (int k1 = (spec.dim() == 2 ? -max_mode : 0); k1 <= (spec.dim() == 2 ? max_mode : 0); ++k1) {
      double a = normal(rng);
      double phase = 2.0 * kPi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      modes.push_back({k0, k1, a, phase});
    }
  }
  const double L = spec.length();
  return GridFunction::sample(spec, [&](const Point& x) {
    double v = 0.0;
    for (const auto& m : modes) v += m.a * std::cos(2.0 * kPi * (m.k0 * x[0] + m.k1 * x[1]) / L + m.phase);
    return v;
  });
}

inline GridFunction gaussian_bump(const GridSpec& spec, double width = 1.0, Point center = {0.0, 0.0}) {
  return GridFunction::sample(spec, [&](const Point& x) {
    double r2 = (x[0] - center[0]) * (x[0] - center[0]);
    if (spec.dim() == 2) r2 += (x[1] - center[1]) * (x[1] - center[1]);
    return std::exp(-r2 / width);
  });
}

inline double sup_diff(const GridFunction& a, const GridFunction& b) { return (a - b).max_abs(); }

}  // namespace testing_support
