#include <gtest/gtest.h>

#include <cmath>

#include "besovlab/profiles.hpp"

using namespace besovlab::profiles;

TEST(Jet, ArithmeticMatchesKnownSeries) {
  // exp(x) at 0: all derivatives 1.
  auto e = exp(Jet::variable(0.0));
  for (int k = 0; k <= kJetOrder; ++k) EXPECT_NEAR(e.derivative(k), 1.0, 1e-14);
  // 1/x at 2: (-1)^k k! / 2^{k+1}.
  auto r = reciprocal(Jet::variable(2.0));
  double fact = 1.0;
  for (int k = 0; k <= kJetOrder; ++k) {
    if (k > 0) fact *= k;
    EXPECT_NEAR(r.derivative(k), (k % 2 ? -1.0 : 1.0) * fact / std::pow(2.0, k + 1), 1e-14);
  }
  // (x^2) * (1/x) = x.
  auto x = Jet::variable(1.7);
  auto y = (x * x) / x;
  EXPECT_NEAR(y.derivative(0), 1.7, 1e-14);
  EXPECT_NEAR(y.derivative(1), 1.0, 1e-14);
  for (int k = 2; k <= kJetOrder; ++k) EXPECT_NEAR(y.derivative(k), 0.0, 1e-12);
}

TEST(Cutoff, ShapeAndPlateaus) {
  CutoffProfile psi;
  EXPECT_EQ(psi.value(0.0), 1.0);
  EXPECT_EQ(psi.value(1.0), 1.0);
  EXPECT_EQ(psi.value(2.0), 0.0);
  EXPECT_EQ(psi.value(5.0), 0.0);
  for (int k = 1; k <= 4; ++k) {
    EXPECT_EQ(psi.derivative(0.5, k), 0.0);
    EXPECT_EQ(psi.derivative(2.5, k), 0.0);
  }
  double prev = 1.0;
  for (int i = 0; i <= 400; ++i) {
    double t = 0.005 * i;
    double v = psi.value(t);
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
  }
  EXPECT_NEAR(psi.value(1.5), 0.5, 1e-14);
}

TEST(Cutoff, DerivativesMatchFiniteDifferences) {
  CutoffProfile psi;
  for (double t : {1.1, 1.37, 1.5, 1.81}) {
    for (int k = 1; k <= 4; ++k) {
      const double h = 1e-4;
      double fd = (psi.derivative(t + h, k - 1) - psi.derivative(t - h, k - 1)) / (2.0 * h);
      double exact = psi.derivative(t, k);
      EXPECT_NEAR(exact, fd, 1e-5 * (1.0 + std::abs(exact))) << "t=" << t << " k=" << k;
    }
  }
}

TEST(Cutoff, RisingComplementAndBump) {
  for (double t : {0.0, 0.9, 1.3, 1.9, 3.0}) EXPECT_NEAR(rising_cutoff(t).value() + CutoffProfile().value(t), 1.0, 1e-15);
  EXPECT_EQ(unit_bump(0.0), 1.0);
  EXPECT_EQ(unit_bump(0.5), 1.0);
  EXPECT_EQ(unit_bump(1.0), 1.0);
  EXPECT_EQ(unit_bump(-0.5), 0.0);
  EXPECT_EQ(unit_bump(1.5), 0.0);
  EXPECT_GT(unit_bump(-0.25), 0.0);
  EXPECT_LT(unit_bump(-0.25), 1.0);
}
