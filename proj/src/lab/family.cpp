#include "besovlab/lab/family.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "besovlab/errors.hpp"

namespace besovlab::lab {

namespace {

using spectral::GridFunction;
using spectral::GridSpec;
using spectral::Point;

constexpr double kPi = std::numbers::pi;

double r2(const Point& x, const Point& c, int dim) {
  double d0 = x[0] - c[0];
  double d1 = dim == 2 ? x[1] - c[1] : 0.0;
  return d0 * d0 + d1 * d1;
}

GridFunction bump(const GridSpec& spec, const Point& center, double radius) {
  return GridFunction::sample(spec, [&](const Point& x) {
    double s = r2(x, center, spec.dim()) / (radius * radius);
    return s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0;
  });
}

// One stream per member so that a member does not depend on the family size.
GridFunction band_limited(const GridSpec& spec, std::uint64_t seed, int index, int max_mode) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  struct Mode {
    int k0, k1;
    double amplitude, phase;
  };
  std::vector<Mode> modes;
  const bool two = spec.dim() == 2;
  for (int k0 = 0; k0 <= max_mode; ++k0)
    for (int k1 = two ? -max_mode : 0; k1 <= (two ? max_mode : 0); ++k1) {
      if (k0 == 0 && k1 <= 0) continue;
      const double k2 = double(k0) * k0 + double(k1) * k1;
      const double a = normal(rng) / k2;
      modes.push_back({k0, k1, a, phase(rng)});
    }
  const double w = 2.0 * kPi / spec.length();
  const int n = spec.samples_per_axis();
  auto table = [&](int k) {
    std::vector<std::complex<double>> row(n);
    for (int i = 0; i < n; ++i) row[i] = std::polar(1.0, w * k * spec.centered_coordinate(i));
    return row;
  };
  std::vector<std::vector<std::complex<double>>> axis0, axis1;
  for (int k = 0; k <= max_mode; ++k) axis0.push_back(table(k));
  for (int k = -max_mode; k <= max_mode; ++k) axis1.push_back(table(k));
  // partial[k0][i1] = sum over k1 of the weighted second-axis factor.
  std::vector<std::vector<std::complex<double>>> partial(max_mode + 1, std::vector<std::complex<double>>(n));
  for (const auto& m : modes) {
    const auto weight = std::polar(m.amplitude, m.phase);
    auto& row = partial[m.k0];
    if (!two) {
      row[0] += weight;
      continue;
    }
    const auto& f1 = axis1[m.k1 + max_mode];
    for (int i = 0; i < n; ++i) row[i] += weight * f1[i];
  }
  std::vector<double> values(spec.size());
  for (std::size_t idx = 0; idx < spec.size(); ++idx) {
    auto ij = spec.axis_indices(idx);
    std::complex<double> v = 0.0;
    for (int k0 = 0; k0 <= max_mode; ++k0) v += axis0[k0][ij[0]] * partial[k0][two ? ij[1] : 0];
    values[idx] = v.real();
  }
  return GridFunction(spec, std::move(values));
}

}  // namespace

std::vector<FamilyMember> family_generator(std::uint64_t seed, const GridSpec& spec, int count,
                                           const FamilyOptions& options) {
  require(count >= 1, "count >= 1");
  const int max_mode = options.max_mode > 0 ? options.max_mode : spec.samples_per_axis() / 8;
  require(max_mode < spec.samples_per_axis() / 2, "max_mode < N/2");
  const int dim = spec.dim();
  std::vector<FamilyMember> out;
  auto gaussian = [&](double w, double freq) {
    return GridFunction::sample(spec, [&](const Point& x) {
      return std::exp(-r2(x, {0.0, 0.0}, dim) / w) * std::cos(2.0 * kPi * freq * x[0]);
    });
  };
  auto member = [&](int i) -> FamilyMember {
    switch (i) {
      case 0: return {"gauss_w0.5", gaussian(0.5, 0.0)};
      case 1: return {"gauss_w1", gaussian(1.0, 0.0)};
      case 2: return {"gauss_w2", gaussian(2.0, 0.0)};
      case 3: return {"bump_left", bump(spec, {-2.0, 0.0}, 2.0)};
      case 4: return {"bump_right", bump(spec, {2.5, -1.0}, 1.5)};
      case 5: return {"modulated_f1", gaussian(1.0, 1.0)};
      case 6: return {"modulated_f2", gaussian(1.0, 2.0)};
      default: return {"band_" + std::to_string(i - 7), band_limited(spec, seed, i, max_mode), 0.0, false};
    }
  };
  for (int i = 0; i < count; ++i) {
    FamilyMember m = member(i);
    if (options.mean_zero) m.f = m.f.minus_mean();
    const double norm = spectral::lp_norm(m.f, 1.0);
    if (norm > 0.0) m.f = m.f * (1.0 / norm);
    m.boundary_tail = spectral::boundary_tail(m.f);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace besovlab::lab
