#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "besovlab/besov.hpp"
#include "besovlab/errors.hpp"
#include "support.hpp"

using namespace besovlab;
using namespace besovlab::besov;
using spectral::lp_norm;
using testing_support::kPi;

namespace {

GridFunction integer_noise(const GridSpec& spec, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-50, 50);
  std::vector<double> v(spec.size());
  for (auto& x : v) x = dist(rng);
  return GridFunction(spec, v);
}

// Continuous seminorm of cos(2πx/L) on the torus by adaptive quadrature:
// ‖Δ_h^k cos‖_p = |2 sin(ωh/2)|^k ‖cos‖_p.
double single_mode_seminorm(double L, double s, double p, double q, int k) {
  const double omega = 2.0 * kPi / L;
  double cos_norm = 0.0;
  if (p == 1.0) cos_norm = 2.0 * L / kPi;
  else if (p == 2.0) cos_norm = std::sqrt(L / 2.0);
  auto integrand = [&](double h) {
    return std::pow(std::abs(2.0 * std::sin(0.5 * omega * h)), k * q) * std::pow(cos_norm, q) / std::pow(h, 1.0 + s * q);
  };
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, L / 2.0, 20, 1e-12, &err);
  return std::pow(2.0 * v, 1.0 / q);
}

GridFunction cosine(const GridSpec& spec) {
  return GridFunction::sample(spec, [&](const Point& x) { return std::cos(2.0 * kPi * x[0] / spec.length()); });
}

}  // namespace

TEST(Difference, SecondDifferenceOfQuadratic) {
  auto spec = GridSpec::make(1, 8, 8.0);
  std::vector<double> v(8);
  for (int i = 0; i < 8; ++i) v[i] = i * i;
  auto d = difference(GridFunction(spec, v), {{1, 0}, 2});
  for (int i = 0; i < 6; ++i) EXPECT_EQ(d[i], 2.0);
}

TEST(Difference, ConstantAndZeroStep) {
  auto spec = GridSpec::make(2, 16, 4.0);
  auto d = difference(GridFunction::constant(spec, 3.0), {{2, -1}, 1});
  EXPECT_EQ(d.max_abs(), 0.0);
  EXPECT_THROW(difference(GridFunction::constant(spec, 1.0), {{0, 0}, 1}), PreconditionError);
  EXPECT_THROW(difference(GridFunction::constant(spec, 1.0), {{1, 0}, 5}), PreconditionError);
}

TEST(Difference, IteratedEqualsBinomial) {
  for (int dim : {1, 2}) {
    auto spec = GridSpec::make(dim, 16, 16.0);
    for (unsigned seed = 0; seed < 5; ++seed) {
      auto f = integer_noise(spec, seed);
      auto real = testing_support::random_band_limited(spec, seed, 5);
      for (int k = 1; k <= 4; ++k) {
        DifferenceSpec d{{3, dim == 2 ? -2 : 0}, k};
        auto a = difference(f, d);
        auto b = binomial_difference(f, d);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
        EXPECT_LT((difference(real, d) - binomial_difference(real, d)).max_abs(), 1e-14 * std::pow(2.0, k) * real.max_abs());
      }
    }
  }
}

TEST(Difference, SpectralSymbolPerMode) {
  auto spec = GridSpec::make(2, 16, 16.0);
  auto f = testing_support::random_band_limited(spec, 4, 6);
  DifferenceSpec d{{2, 1}, 2};
  auto lhs = spectral::forward_transform(difference(f, d));
  auto F = spectral::forward_transform(f);
  for (std::size_t i = 0; i < F.size(); ++i) {
    auto xi = spec.frequency(i);
    double phase = 2.0 * kPi * (xi[0] * 2.0 + xi[1] * 1.0) * spec.step();
    auto sym = std::pow(std::exp(spectral::Complex(0.0, phase)) - 1.0, 2);
    EXPECT_LT(std::abs(lhs[i] - sym * F[i]), 1e-12);
  }
}

TEST(Difference, SecondDifferenceSymbolIsQuadraticNearZero) {
  for (double theta : {1e-2, 1e-3, 1e-4}) {
    auto sym = std::pow(std::exp(spectral::Complex(0.0, theta)) - 1.0, 2);
    EXPECT_NEAR(std::abs(sym) / (theta * theta), 1.0, theta);
  }
}

TEST(BesovParams, DerivedOrders) {
  EXPECT_EQ(BesovParams::make(0.5, 1, 1).difference_order(), 1);
  EXPECT_EQ(BesovParams::make(1.0, 1, 1).difference_order(), 2);
  EXPECT_EQ(BesovParams::make(1.0, 1, 1).derivative_order(), 0);
  EXPECT_EQ(BesovParams::make(1.5, 1, 1).derivative_order(), 1);
  EXPECT_EQ(BesovParams::make(1.5, 1, 1).difference_order(), 1);
  EXPECT_EQ(BesovParams::make(2.0, 1, 1).derivative_order(), 1);
  EXPECT_EQ(BesovParams::make(2.0, 1, 1).difference_order(), 2);
  EXPECT_THROW(BesovParams::make(0.0, 1, 1), PreconditionError);
  EXPECT_THROW(BesovParams::make(1.0, 0.5, 1), PreconditionError);
}

TEST(Seminorm, ZeroHomogeneityTriangle) {
  auto spec = GridSpec::make(1, 256, 16.0);
  auto bp = BesovParams::make(0.5, 1.0, 1.0);
  EXPECT_EQ(besov_seminorm(GridFunction::zeros(spec), bp).value, 0.0);
  auto f = testing_support::gaussian_bump(spec);
  auto g = testing_support::random_band_limited(spec, 2, 8);
  for (auto params : {bp, BesovParams::make(1.0, 1.0, 1.0), BesovParams::make(1.5, 2.0, 2.0)}) {
    double nf = besov_seminorm(f, params).value;
    double ng = besov_seminorm(g, params).value;
    EXPECT_NEAR(besov_seminorm(f * 3.0, params).value, 3.0 * nf, 1e-12 * nf);
    EXPECT_NEAR(besov_seminorm(f * -3.0, params).value, 3.0 * nf, 1e-12 * nf);
    EXPECT_LE(besov_seminorm(f + g, params).value, nf + ng + 1e-10);
  }
}

TEST(Seminorm, ShellsSumToIntegral) {
  auto spec = GridSpec::make(2, 32, 16.0);
  auto r = besov_seminorm(testing_support::gaussian_bump(spec), BesovParams::make(0.5, 2.0, 2.0));
  double total = 0.0;
  for (const auto& sh : r.shells) total += sh.contribution;
  EXPECT_NEAR(total, r.integral, 1e-14 * r.integral);
  EXPECT_NEAR(r.value, std::sqrt(r.integral), 1e-14);
  EXPECT_EQ(r.cutoff_high, 8.0);
}

TEST(Seminorm, SingleModeMatchesContinuousIntegral) {
  struct Case {
    double s, p, q;
    int k;
  };
  for (auto c : {Case{0.5, 1, 1, 1}, Case{1.0, 1, 1, 2}, Case{0.5, 2, 2, 1}, Case{0.75, 1, 2, 1}}) {
    auto spec = GridSpec::make(1, 512, 16.0);
    double lattice = besov_seminorm(cosine(spec), BesovParams::make(c.s, c.p, c.q)).value;
    double exact = single_mode_seminorm(16.0, c.s, c.p, c.q, c.k);
    EXPECT_NEAR(lattice / exact, 1.0, 2e-3) << "s=" << c.s << " p=" << c.p << " q=" << c.q;
  }
}

TEST(Seminorm, HigherSmoothnessUsesDerivatives) {
  // For s in (1,2): |f|_{B^{s}} = |f'|_{B^{s-1}} by definition.
  auto spec = GridSpec::make(1, 256, 16.0);
  auto f = testing_support::gaussian_bump(spec, 0.7);
  auto df = spectral::partial_derivative(f, spectral::MultiIndex{{1, 0}, 0});
  EXPECT_NEAR(besov_seminorm(f, BesovParams::make(1.5, 1, 1)).value,
              besov_seminorm(df, BesovParams::make(0.5, 1, 1)).value, 1e-13);
  EXPECT_NEAR(besov_seminorm(f, BesovParams::make(2.0, 1, 1)).value,
              besov_seminorm(df, BesovParams::make(1.0, 1, 1)).value, 1e-13);
}

TEST(Seminorm, GaussianSelfConvergence) {
  auto coarse = testing_support::gaussian_bump(GridSpec::make(1, 1024, 16.0));
  auto fine = testing_support::gaussian_bump(GridSpec::make(1, 2048, 16.0));
  auto bp = BesovParams::make(1.0, 1.0, 1.0);
  double a = besov_seminorm(coarse, bp).value;
  double b = besov_seminorm(fine, bp).value;
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_NEAR(a / b, 1.0, 0.02);
}

TEST(Seminorm, DilationScaling) {
  auto spec = GridSpec::make(1, 1024, 16.0);
  auto f = testing_support::gaussian_bump(spec);
  for (auto bp : {BesovParams::make(0.5, 1, 1), BesovParams::make(1.0, 2, 2), BesovParams::make(1.5, 1, 1)}) {
    double base = besov_seminorm(f, bp).value;
    for (double lambda : {0.5, 2.0}) {
      double scaled = besov_seminorm(spectral::dilate(f, lambda), bp).value;
      EXPECT_NEAR(scaled / (std::pow(lambda, bp.s - 1.0 / bp.p) * base), 1.0, 0.03) << "s=" << bp.s << " lambda=" << lambda;
    }
  }
}

TEST(Seminorm, TwoDimensionalGaussianRefines) {
  auto bp = BesovParams::make(1.0, 1.0, 1.0);
  double a = besov_seminorm(testing_support::gaussian_bump(GridSpec::make(2, 64, 16.0)), bp).value;
  double b = besov_seminorm(testing_support::gaussian_bump(GridSpec::make(2, 128, 16.0)), bp).value;
  EXPECT_NEAR(a / b, 1.0, 0.02);
}

TEST(Seminorm, QInfinityIsSupOverOffsets) {
  auto spec = GridSpec::make(1, 128, 16.0);
  auto f = testing_support::gaussian_bump(spec);
  auto r = besov_seminorm(f, BesovParams::make(0.5, 1.0, std::numeric_limits<double>::infinity()));
  double expected = zygmund_seminorm(f, 0.5, 1, 1.0);
  EXPECT_DOUBLE_EQ(r.value, expected);
}

TEST(SupForm, ZeroAndEquivalence) {
  EXPECT_EQ(besov_sup_seminorm_111(GridFunction::zeros(GridSpec::make(1, 64, 16.0))), 0.0);
  auto bp = BesovParams::make(1.0, 1.0, 1.0);
  for (unsigned seed = 0; seed < 3; ++seed) {
    double ratio[2];
    for (int level = 0; level < 2; ++level) {
      auto spec = GridSpec::make(1, level == 0 ? 512 : 1024, 16.0);
      auto f = seed == 0 ? testing_support::gaussian_bump(spec) : testing_support::random_band_limited(spec, seed, 4);
      ratio[level] = besov_sup_seminorm_111(f) / besov_seminorm(f, bp).value;
    }
    EXPECT_GT(ratio[0], 0.1);
    EXPECT_LT(ratio[0], 10.0);
    EXPECT_NEAR(ratio[1] / ratio[0], 1.0, 0.1);
  }
}

TEST(Zygmund, ZeroHomogeneityAndSingleMode) {
  auto spec = GridSpec::make(1, 1024, 16.0);
  EXPECT_EQ(zygmund_seminorm(GridFunction::zeros(spec), 0.5, 1), 0.0);
  auto f = testing_support::gaussian_bump(spec);
  EXPECT_NEAR(zygmund_seminorm(f * -2.0, 0.5, 1), 2.0 * zygmund_seminorm(f, 0.5, 1), 1e-13);
  // sup_h 2|sin(ωh/2)| / h^{1/2}, maximized on a fine h grid.
  const double omega = 2.0 * kPi / 16.0;
  double best = 0.0;
  for (int i = 1; i <= 200000; ++i) {
    double h = 8.0 * i / 200000.0;
    best = std::max(best, 2.0 * std::abs(std::sin(0.5 * omega * h)) / std::sqrt(h));
  }
  EXPECT_NEAR(zygmund_seminorm(cosine(spec), 0.5, 1) / best, 1.0, 1e-4);
  EXPECT_THROW(zygmund_seminorm(f, 0.0, 1), PreconditionError);
}

TEST(Indicator, SamplesMassAndBoundedVariation) {
  auto spec = GridSpec::make(1, 256, 16.0);
  auto chi = indicator_counterexample(spec);
  EXPECT_EQ(chi[spec.flat_index(static_cast<int>(0.5 / spec.step()), 0)], 1.0);
  EXPECT_EQ(chi[spec.flat_index(static_cast<int>(1.5 / spec.step()), 0)], 0.0);
  EXPECT_NEAR(lp_norm(chi, 1.0), 1.0, spec.cell_volume());
  for (int j = 1; j <= 8; ++j) {
    double h = j * spec.step();
    EXPECT_LE(lp_norm(difference(chi, {{j, 0}, 1}), 1.0) / h, 2.0 + 1e-12);
  }
  auto chi2 = indicator_counterexample(GridSpec::make(2, 64, 16.0));
  EXPECT_NEAR(lp_norm(chi2, 1.0), 1.0, 1e-12);
  EXPECT_THROW(indicator_counterexample(GridSpec::make(1, 64, 2.0)), PreconditionError);
}

TEST(Divergence, IndicatorGrowsLogarithmically) {
  auto spec = GridSpec::make(1, 4096, 16.0);
  std::vector<double> floors{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  auto study = divergence_study(indicator_counterexample(spec), BesovParams::make(1, 1, 1), floors);
  EXPECT_GT(study.slope, 0.0);
  EXPECT_GE(study.r2, 0.99);
  // For |h| = j dx <= 1/2 the two jumps give ‖Δ_h^2 χ‖_1 = 4|h|, so each lattice
  // pair ±h adds 8/j. Lowering the floor adds the harmonic block exactly.
  std::vector<double> x, y;
  for (double fl : floors) {
    const int j_floor = static_cast<int>(std::lround(fl / spec.step()));
    double tail = 0.0;
    for (int j = j_floor; j < 8; ++j) tail += 8.0 / j;
    x.push_back(std::log(1.0 / fl));
    y.push_back(tail);
  }
  for (std::size_t i = 1; i < floors.size(); ++i)
    EXPECT_NEAR(study.values[i] - study.values[0], y[i] - y[0], 1e-9);
  EXPECT_NEAR(study.slope, fit_line(x, y).slope, 1e-9);
}

TEST(Divergence, SmoothControlConverges) {
  auto spec = GridSpec::make(1, 4096, 16.0);
  std::vector<double> floors{1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  auto study = divergence_study(testing_support::gaussian_bump(spec), BesovParams::make(1, 1, 1), floors);
  EXPECT_LE(std::abs(study.slope), 0.05 * study.values.back());
}

TEST(Divergence, RejectsFloorsBelowGridStep) {
  auto spec = GridSpec::make(1, 64, 16.0);
  EXPECT_THROW(divergence_study(testing_support::gaussian_bump(spec), BesovParams::make(1, 1, 1), {0.5, 0.1}),
               PreconditionError);
  EXPECT_THROW(divergence_study(testing_support::gaussian_bump(spec), BesovParams::make(1, 1, 1), {0.5, 1.0}),
               PreconditionError);
}

TEST(HigherCounterexample, SupportDerivativeAndDivergence) {
  auto spec = GridSpec::make(1, 8192, 16.0);
  auto psi = higher_counterexample_psi(spec, 2);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    double x = spec.centered_point(i)[0];
    if (x <= 0.0) EXPECT_EQ(psi[i], 0.0);
  }
  auto d = normal_difference_quotient(psi, 1);
  for (std::size_t i = 0; i < d.size(); ++i) {
    double x = spec.centered_point(i)[0];
    if (x > 2.0 * spec.step() && x < 1.0 - 2.0 * spec.step()) EXPECT_NEAR(d[i], 1.0, 1e-12);
  }
  std::vector<double> floors{1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
  auto study = divergence_study(d, BesovParams::make(1, 1, 1), floors);
  EXPECT_GT(study.slope, 0.0);
  EXPECT_GE(study.r2, 0.99);
}

TEST(HigherCounterexample, TwoDimensionsAndThirdOrder) {
  auto spec = GridSpec::make(2, 64, 8.0);
  auto psi = higher_counterexample_psi(spec, 3);
  auto d2 = normal_difference_quotient(psi, 2);
  // Inside the unit square the second normal quotient recovers χφ² = 1.
  std::size_t idx = spec.flat_index(static_cast<int>(0.5 / spec.step()), static_cast<int>(0.5 / spec.step()));
  EXPECT_NEAR(d2[idx], 1.0, 1e-12);
  EXPECT_THROW(higher_counterexample_psi(spec, 4), PreconditionError);
}

TEST(Embedding, FundamentalTheoremInequality) {
  auto spec = GridSpec::make(1, 1024, 16.0);
  auto zero = ftc_embedding_check(GridFunction::zeros(spec));
  EXPECT_EQ(zero.violations, 0);
  EXPECT_EQ(zero.seminorm, 0.0);
  for (auto f : {testing_support::gaussian_bump(spec), testing_support::gaussian_bump(spec, 0.5, {1.0, 0.0})}) {
    auto r = ftc_embedding_check(f);
    EXPECT_EQ(r.violations, 0);
    EXPECT_LE(r.max_ratio, 1.0);
    EXPECT_GT(r.max_ratio, 0.99);
    EXPECT_LE(r.large_h_part, r.large_h_bound);
    EXPECT_GT(r.constant, 0.0);
  }
  auto r2 = ftc_embedding_check(testing_support::gaussian_bump(GridSpec::make(2, 64, 16.0)));
  EXPECT_EQ(r2.violations, 0);
}
