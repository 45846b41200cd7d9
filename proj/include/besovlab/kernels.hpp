#pragma once

// Gauss-Weierstrass kernel W_t(x) = exp(-|x|^2/4t^2)/(4 pi t^2)^{n/2} and
// Poisson kernel P_t(x) = c_n t/(|x|^2+t^2)^{(n+1)/2}, their derivatives in
// space and in t, and their Fourier multipliers.

#include <array>
#include <map>
#include <vector>

#include "besovlab/spectral.hpp"

namespace besovlab::kernels {

using spectral::Complex;
using spectral::Frequency;
using spectral::GridFunction;
using spectral::GridSpec;
using spectral::MultiIndex;
using spectral::Point;

enum class KernelKind { GaussWeierstrass, Poisson };

const char* kernel_name(KernelKind kind);

struct KernelDerivative {
  KernelKind kind = KernelKind::GaussWeierstrass;
  MultiIndex alpha{};
  double t = 1.0;
};

/// Gamma((n+1)/2) / pi^{(n+1)/2}.
double poisson_constant(int dim);

/// Exponents (x1, x2, u) with u = 1/t.
using Monomial = std::array<int, 3>;

/// ∂^beta ∂_t^l W_t(x) = (4 pi)^{-n/2} P(x, 1/t) exp(-|x|^2/(4 t^2)).
class GaussianPolynomial {
 public:
  static GaussianPolynomial for_derivative(const MultiIndex& alpha, int dim);

  const std::map<Monomial, double>& terms() const { return terms_; }
  int dim() const { return dim_; }
  int max_x_degree(int axis) const;
  /// Full analytic value on R^n (no periodization).
  double evaluate(const Point& x, double t) const;

 private:
  void differentiate_x(int axis);
  void differentiate_t();
  int dim_ = 1;
  std::map<Monomial, double> terms_;
};

/// Coefficients q_j of the Gaussian t-derivative factor
/// ∂_t^l e^{-4 pi^2 t^2 s} = (sum_j q_j t^j) e^{-4 pi^2 t^2 s} at s = |xi|^2.
std::vector<double> gaussian_time_coefficients(int l, double s);

/// Multiplier of ∂^beta ∂_t^l of the kernel at frequency xi.
Complex kernel_multiplier(const KernelDerivative& kd, const Frequency& xi);
spectral::Symbol kernel_symbol(const KernelDerivative& kd);

/// Samples of the periodized kernel derivative. Gaussian derivatives use the
/// analytic polynomial form with explicit image sums; Poisson values and
/// space derivatives up to order 2 use periodized closed forms; the remaining
/// Poisson derivatives are synthesized from the multiplier.
GridFunction kernel_values(const KernelDerivative& kd, const GridSpec& spec);

/// Periodized kernel obtained by inverting its multiplier on the grid.
GridFunction kernel_values_spectral(const KernelDerivative& kd, const GridSpec& spec);

double gaussian_value(const MultiIndex& alpha, int dim, double t, const Point& x);
double poisson_value(int dim, double t, const Point& x);
/// ∂_i ∂_j P_t(x) on R^n, axes counted from 0.
double poisson_hessian_value(int i, int j, int dim, double t, const Point& x);

/// sup |∂_t W_t - 2 t ΔW_t| / sup |∂_t W_t| with the left side sampled
/// analytically and the right side synthesized from multipliers.
double heat_identity_residual(double t, const GridSpec& spec);

/// max over grid frequencies of |W^_t - (W^_{t/sqrt2})^2|.
double semigroup_residual(double t, const GridSpec& spec);
/// sup |W_t - W_{t/sqrt2} * W_{t/sqrt2}| / sup |W_t|, with both factors
/// sampled analytically and convolved on the grid.
double semigroup_spatial_residual(double t, const GridSpec& spec);
/// Same for ∂^3 W_t/∂x_i ∂x_j^2 = ∂_i W_{t/sqrt2} * ∂_j^2 W_{t/sqrt2}.
double semigroup_third_derivative_residual(double t, int i, int j, const GridSpec& spec);

struct HeatIntegral {
  double value = 0.0;       // quadrature over (0, T]
  double tail_bound = 0.0;  // bound on the omitted part over (T, inf)
  double error_estimate = 0.0;
  double cutoff = 0.0;      // the T actually used
};

/// ∫_0^T t^b |∂^alpha W_t(x)| dt on R^n plus a bound for the tail, for
/// n + |alpha| - b - 1 > 0 and x != 0. T <= 0 selects T = 1e9 |x|.
HeatIntegral heat_time_integral(const MultiIndex& alpha, int dim, double b, const Point& x,
                                double T = 0.0);

/// ‖∂^beta W_t‖_{L^1(R^n)}.
double kernel_l1_decay(const MultiIndex& alpha, int dim, double t);

}  // namespace besovlab::kernels
