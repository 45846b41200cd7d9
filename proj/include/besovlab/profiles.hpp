#pragma once

// Smooth cutoff profiles built from exp(-1/s), with derivatives to order 4
// carried by truncated Taylor arithmetic.

#include <array>
#include <cmath>

namespace besovlab::profiles {

inline constexpr int kJetOrder = 4;

/// Taylor coefficients c_k = f^{(k)}(s0)/k!, k = 0..4.
struct Jet {
  std::array<double, kJetOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    j.c[1] = 1.0;
    return j;
  }
  double value() const { return c[0]; }
  /// k-th derivative.
  double derivative(int k) const;

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator/(const Jet& o) const;
  Jet operator*(double a) const;
};

Jet exp(const Jet& x);
Jet reciprocal(const Jet& x);

/// exp(-1/s) for s > 0, 0 otherwise.
Jet smooth_ramp(const Jet& s);
/// 0 for s <= 0, 1 for s >= 1, smooth and increasing in between.
Jet smooth_step(const Jet& s);

enum class CutoffName { Psi, Phi };

/// ψ: nonincreasing, 1 on [0,1], 0 on [2,∞). φ is pinned to ψ, so φ(0)=1 and
/// all its derivatives vanish at 0.
class CutoffProfile {
 public:
  explicit CutoffProfile(CutoffName name = CutoffName::Psi) : name_(name) {}
  CutoffName name() const { return name_; }
  Jet jet(double t) const;
  double value(double t) const { return jet(t).value(); }
  double derivative(double t, int k) const { return jet(t).derivative(k); }
  /// Support is contained in [0, support_end()].
  double support_end() const { return 2.0; }

 private:
  CutoffName name_;
};

/// 1 - ψ: 0 on [0,1], 1 on [2,∞).
Jet rising_cutoff(double t);

/// 1 on [0,1], 0 outside (-1/2, 3/2).
double unit_bump(double x);

}  // namespace besovlab::profiles
