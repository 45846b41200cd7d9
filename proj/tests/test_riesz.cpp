#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <random>

#include "besovlab/errors.hpp"
#include "besovlab/riesz.hpp"
#include "support.hpp"

using namespace besovlab;
using namespace besovlab::riesz;
using testing_support::kPi;
using testing_support::sup_diff;

namespace {

GridFunction mode(const GridSpec& spec, int k0, int k1, bool sine) {
  return GridFunction::sample(spec, [&](const spectral::Point& x) {
    double arg = 2.0 * kPi * (k0 * x[0] + k1 * x[1]) / spec.length();
    return sine ? std::sin(arg) : std::cos(arg);
  });
}

double l1(const GridFunction& g) { return spectral::lp_norm(g, 1.0); }

// Random phases, N(0,1)/k^2 amplitudes.
GridFunction decaying_modes(const GridSpec& spec, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * kPi);
  std::vector<std::pair<double, double>> modes;
  for (int k = 1; k <= 16; ++k) modes.emplace_back(normal(rng) / (k * k), uniform(rng));
  return GridFunction::sample(spec, [&](const spectral::Point& x) {
    double v = 0.0;
    for (int k = 1; k <= 16; ++k) v += modes[k - 1].first * std::cos(2.0 * kPi * k * x[0] / spec.length() + modes[k - 1].second);
    return v;
  });
}

// Multiplier of the truncated kernel c_2 y_j/|y|^3 1_{|y|>eps} relative to the full one.
double truncation_factor_2d(double xi, double eps) {
  auto integrand = [](double u) { return boost::math::cyl_bessel_j(1, u) / u; };
  return 1.0 - boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 2.0 * kPi * xi * eps);
}

}  // namespace

TEST(RieszTransform, SingleModes) {
  auto spec = GridSpec::make(1, 64, 8.0);
  EXPECT_LT(sup_diff(riesz_transform(mode(spec, 1, 0, false), 1), mode(spec, 1, 0, true)), 1e-13);
  EXPECT_LT(sup_diff(riesz_transform(mode(spec, 3, 0, true), 1), mode(spec, 3, 0, false) * -1.0), 1e-13);
  EXPECT_LT(riesz_transform(GridFunction::constant(spec, 3.0), 1).max_abs(), 1e-15);
  // cos(2π(2x+y)/L) -> (2/√5) sin(...) in direction 1 and (1/√5) sin(...) in direction 2.
  auto s2 = GridSpec::make(2, 16, 8.0);
  auto c = mode(s2, 2, 1, false);
  EXPECT_LT(sup_diff(riesz_transform(c, 1), mode(s2, 2, 1, true) * (2.0 / std::sqrt(5.0))), 1e-13);
  EXPECT_LT(sup_diff(riesz_transform(c, 2), mode(s2, 2, 1, true) * (1.0 / std::sqrt(5.0))), 1e-13);
  EXPECT_THROW(riesz_transform(c, 3), PreconditionError);
  EXPECT_THROW(riesz_transform(mode(spec, 1, 0, false), 0), PreconditionError);
}

TEST(RieszTransform, SquaresSumToMinusIdentity) {
  auto spec = GridSpec::make(2, 32, 8.0);
  auto f = testing_support::random_band_limited(spec, 3).minus_mean();
  auto sum = riesz_transform(riesz_transform(f, 1), 1) + riesz_transform(riesz_transform(f, 2), 2);
  EXPECT_LT(sup_diff(sum, f * -1.0), 1e-10);
}

TEST(RieszTransform, SquareRestoresModesWithoutDirection) {
  auto spec = GridSpec::make(2, 16, 8.0);
  for (auto [k0, k1] : {std::pair{0, 2}, std::pair{3, 0}, std::pair{1, -2}}) {
    auto f = mode(spec, k0, k1, false);
    auto twice = riesz_transform(riesz_transform(f, 1), 1);
    double expected = -double(k0 * k0) / (k0 * k0 + k1 * k1);
    EXPECT_LT(sup_diff(twice, f * expected), 1e-13) << k0 << "," << k1;
  }
}

TEST(RieszTransform, CommutesWithDerivatives) {
  auto spec = GridSpec::make(2, 32, 8.0);
  auto f = testing_support::random_band_limited(spec, 11);
  spectral::MultiIndex alpha{{1, 2}, 0};
  auto a = riesz_transform(spectral::partial_derivative(f, alpha), 2);
  auto b = spectral::partial_derivative(riesz_transform(f, 2), alpha);
  EXPECT_LT(sup_diff(a, b), 1e-12 * (1.0 + a.max_abs()));
}

TEST(RieszPvOracle, AgreesWithMultiplier) {
  auto spec = GridSpec::make(1, 512, 16.0);
  for (unsigned seed : {1u, 2u, 3u}) {
    auto f = decaying_modes(spec, seed);
    auto spectral_r = riesz_transform(f, 1);
    auto pv = riesz_pv_oracle(f, 1, 2.0 * spec.step());
    EXPECT_LT(l1(pv - spectral_r) / l1(spectral_r), 0.05) << seed;
  }
}

TEST(RieszPvOracle, MatchesTruncatedSymbolIn2D) {
  auto spec = GridSpec::make(2, 64, 8.0);
  const double eps = 2.0 * spec.step();
  for (auto [k0, k1] : {std::pair{1, 0}, std::pair{1, 1}}) {
    auto f = mode(spec, k0, k1, false);
    const double factor = truncation_factor_2d(std::hypot(k0, k1) / spec.length(), eps);
    auto expected = riesz_transform(f, 1) * factor;
    EXPECT_LT(l1(riesz_pv_oracle(f, 1, eps) - expected) / l1(expected), 0.05);
  }
}

TEST(RieszPvOracle, ParityAndPreconditions) {
  auto spec = GridSpec::make(1, 128, 8.0);
  auto even = testing_support::gaussian_bump(spec, 0.5);
  auto r = riesz_pv_oracle(even, 1, spec.step());
  const int n = spec.samples_per_axis();
  for (int i = 1; i < n / 2; ++i) EXPECT_NEAR(r[i], -r[n - i], 1e-10);
  EXPECT_EQ(riesz_pv_oracle(GridFunction::zeros(spec), 1, spec.step()).max_abs(), 0.0);
  EXPECT_THROW(riesz_pv_oracle(even, 1, 0.5 * spec.step()), PreconditionError);
}

TEST(PoissonIdentities, KernelIdentityAcrossT) {
  auto s1 = GridSpec::make(1, 1024, 16.0);
  auto s2 = GridSpec::make(2, 64, 8.0);
  for (double t : {0.25, 1.0, 4.0}) {
    EXPECT_LT(riesz_kernel_identity(s1, t, 1), 1e-10);
    for (int j : {1, 2}) EXPECT_LT(riesz_kernel_identity(s2, t, j), 1e-10);
    for (int i : {1, 2})
      for (int j : {1, 2}) EXPECT_LT(riesz_hessian_identity(s2, t, i, j), 1e-10);
  }
}

TEST(PoissonIdentities, ParsevalPairing) {
  auto spec = GridSpec::make(1, 64, 8.0);
  auto c = mode(spec, 1, 0, false);
  auto p = parseval_pairing_check(c, c);
  EXPECT_NEAR(p.lhs, 4.0, 1e-12);
  EXPECT_NEAR(p.rhs, 4.0, 1e-12);
  auto s2 = GridSpec::make(2, 32, 8.0);
  auto f = testing_support::random_band_limited(s2, 1).minus_mean();
  auto g = testing_support::random_band_limited(s2, 2).minus_mean();
  EXPECT_LT(parseval_pairing_check(f, g).relative_error, 1e-10);
  auto shifted = parseval_pairing_check(f + GridFunction::constant(s2, 1.0), g + GridFunction::constant(s2, 2.0));
  EXPECT_NEAR(shifted.lhs - shifted.rhs, shifted.mean_contribution, 1e-9);
}

TEST(PoissonIdentities, Decomposition) {
  auto s1 = GridSpec::make(1, 64, 8.0);
  auto single = poisson_decomposition_check(mode(s1, 2, 0, false), 0.5);
  EXPECT_LT(single.residual, 1e-12);
  EXPECT_NEAR(single.literal_relative, 2.0, 1e-10);
  auto s2 = GridSpec::make(2, 32, 8.0);
  auto f = testing_support::random_band_limited(s2, 4).minus_mean();
  for (double t : {0.25, 1.0, 4.0}) EXPECT_LT(poisson_decomposition_check(f, t).residual, 1e-10);
  EXPECT_THROW(poisson_decomposition_check(f + GridFunction::constant(s2, 1.0), 1.0), PreconditionError);
}

TEST(RieszBesov, RatioRowsAndDilation) {
  auto spec = GridSpec::make(1, 512, 32.0);
  EXPECT_TRUE(riesz_besov_ratio(GridFunction::zeros(spec), 1).flagged);
  auto f = testing_support::gaussian_bump(spec, 1.0);
  auto row = riesz_besov_ratio(f, 1, "gauss");
  EXPECT_FALSE(row.flagged);
  EXPECT_GT(row.ratio, 0.1);
  EXPECT_LT(row.ratio, 10.0);
  auto dilated = riesz_besov_ratio(spectral::dilate(f, 2.0), 1);
  EXPECT_NEAR(dilated.ratio / row.ratio, 1.0, 0.05);
  auto fine = riesz_besov_ratio(spectral::resample(f, 1024), 1);
  EXPECT_NEAR(fine.ratio / row.ratio, 1.0, 0.2);
}
