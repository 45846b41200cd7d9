#include "besovlab/profiles.hpp"

namespace besovlab::profiles {

namespace {

constexpr std::array<double, kJetOrder + 1> kFactorial{1.0, 1.0, 2.0, 6.0, 24.0};

}  // namespace

double Jet::derivative(int k) const { return c[k] * kFactorial[k]; }

Jet Jet::operator+(const Jet& o) const {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = c[k] + o.c[k];
  return r;
}

Jet Jet::operator-(const Jet& o) const {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = c[k] - o.c[k];
  return r;
}

Jet Jet::operator*(const Jet& o) const {
  Jet r;
  for (int i = 0; i <= kJetOrder; ++i)
    for (int j = 0; i + j <= kJetOrder; ++j) r.c[i + j] += c[i] * o.c[j];
  return r;
}

Jet Jet::operator*(double a) const {
  Jet r = *this;
  for (double& v : r.c) v *= a;
  return r;
}

Jet reciprocal(const Jet& x) {
  // r * x = 1, solved order by order.
  Jet r;
  r.c[0] = 1.0 / x.c[0];
  for (int k = 1; k <= kJetOrder; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += x.c[j] * r.c[k - j];
    r.c[k] = -s / x.c[0];
  }
  return r;
}

Jet Jet::operator/(const Jet& o) const { return *this * reciprocal(o); }

Jet exp(const Jet& x) {
  // r' = x' r in coefficient form: k r_k = sum_j j x_j r_{k-j}.
  Jet r;
  r.c[0] = std::exp(x.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * x.c[j] * r.c[k - j];
    r.c[k] = s / k;
  }
  return r;
}

Jet smooth_ramp(const Jet& s) {
  if (s.value() <= 0.0) return Jet{};
  return exp(reciprocal(s) * -1.0);
}

Jet smooth_step(const Jet& s) {
  if (s.value() <= 0.0) return Jet{};
  if (s.value() >= 1.0) return Jet::constant(1.0);
  Jet a = smooth_ramp(s);
  Jet b = smooth_ramp(Jet::constant(1.0) - s);
  return a / (a + b);
}

Jet CutoffProfile::jet(double t) const {
  return Jet::constant(1.0) - smooth_step(Jet::variable(t) - Jet::constant(1.0));
}

Jet rising_cutoff(double t) { return smooth_step(Jet::variable(t) - Jet::constant(1.0)); }

double unit_bump(double x) {
  double up = smooth_step(Jet::constant(2.0 * (x + 0.5))).value();
  double down = smooth_step(Jet::constant(2.0 * (1.5 - x))).value();
  return up * down;
}

}  // namespace besovlab::profiles
