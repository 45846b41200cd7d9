#include "besovlab/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "besovlab/errors.hpp"
#include "besovlab/parallel.hpp"

namespace besovlab::kernels {

namespace {

constexpr double kPi = std::numbers::pi;
// Gaussian images are summed until exp(-r^2/4t^2) has exponent beyond this.
constexpr double kImageExponent = 60.0;
constexpr int kPoissonImages = 20;

void check_kernel_derivative(const KernelDerivative& kd, int dim) {
  require(std::isfinite(kd.t) && kd.t > 0.0, "t > 0");
  spectral::check_multi_index(kd.alpha, dim);
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Per-axis image sums S_a(x) = sum_m (x + mL)^a exp(-(x + mL)^2 u^2 / 4).
std::vector<std::vector<double>> gaussian_image_sums(const GridSpec& spec, double t, int max_degree) {
  const int n = spec.samples_per_axis();
  const double L = spec.length();
  const double u = 1.0 / t;
  const int images =
      static_cast<int>(std::ceil((0.5 * L + 2.0 * std::sqrt(kImageExponent) * t) / L)) + 1;
  std::vector<std::vector<double>> sums(max_degree + 1, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    double x0 = spec.centered_coordinate(i);
    for (int m = -images; m <= images; ++m) {
      double x = x0 + m * L;
      double e = std::exp(-0.25 * x * x * u * u);
      if (e == 0.0) continue;
      double xp = 1.0;
      for (int a = 0; a <= max_degree; ++a) {
        sums[a][i] += xp * e;
        xp *= x;
      }
    }
  }
  return sums;
}

GridFunction gaussian_values(const KernelDerivative& kd, const GridSpec& spec) {
  const int dim = spec.dim();
  auto poly = GaussianPolynomial::for_derivative(kd.alpha, dim);
  int max_degree = std::max(poly.max_x_degree(0), poly.max_x_degree(1));
  auto sums = gaussian_image_sums(spec, kd.t, max_degree);
  const double u = 1.0 / kd.t;
  const double norm = std::pow(4.0 * kPi, -0.5 * dim);
  std::vector<std::pair<Monomial, double>> terms;
  for (const auto& [mono, c] : poly.terms()) terms.push_back({mono, c * ipow(u, mono[2]) * norm});
  std::vector<double> values(spec.size(), 0.0);
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    auto ij = spec.axis_indices(idx);
    double v = 0.0;
    for (const auto& [mono, c] : terms) {
      double s = c * sums[mono[0]][ij[0]];
      if (dim == 2) s *= sums[mono[1]][ij[1]];
      v += s;
    }
    values[idx] = v;
  }
  return GridFunction(spec, std::move(values));
}

// Periodized one-dimensional Poisson kernel and its first two x-derivatives:
// sum_m P_t(x + mL) = sinh(a) / (L (cosh(a) - cos(bx))), a = 2 pi t/L, b = 2 pi/L.
double poisson_periodic_1d(int order, double t, double x, double L) {
  const double a = 2.0 * kPi * t / L;
  const double b = 2.0 * kPi / L;
  if (a > 300.0) return order == 0 ? 1.0 / L : 0.0;
  // Work with D / cosh(a) to stay finite for large a.
  double ch = std::cosh(a);
  double sh_over_ch = std::tanh(a);
  double sa = std::sinh(0.5 * a);
  double sb = std::sin(0.5 * b * x);
  double d = 2.0 * (sa * sa + sb * sb) / ch;  // D / cosh(a)
  switch (order) {
    case 0:
      return sh_over_ch / (L * d);
    case 1:
      return -sh_over_ch / ch * b * std::sin(b * x) / (L * d * d);
    default: {
      double s = std::sin(b * x);
      double c = std::cos(b * x);
      return sh_over_ch * b * b / L *
             (2.0 * s * s / (ch * ch * d * d * d) - c / (ch * d * d));
    }
  }
}

GridFunction poisson_closed_form_values(const KernelDerivative& kd, const GridSpec& spec) {
  const double t = kd.t;
  const double L = spec.length();
  const auto& beta = kd.alpha.beta;
  std::vector<double> values(spec.size(), 0.0);
  if (spec.dim() == 1) {
    for (std::size_t idx = 0; idx < values.size(); ++idx)
      values[idx] = poisson_periodic_1d(beta[0], t, spec.centered_point(idx)[0], L);
    return GridFunction(spec, std::move(values));
  }
  // Two dimensions: explicit images plus the continuum limit of the far field,
  // computed over the complement of the square of half-side R = (M + 1/2) L.
  const int order = kd.alpha.space_order();
  const double c2 = poisson_constant(2);
  const double R = (kPoissonImages + 0.5) * L;
  double far = 0.0;
  int ai = -1, aj = -1;
  if (order == 0) {
    far = c2 * t * 4.0 * std::sqrt(2.0) / (L * L * R);
  } else if (order == 2) {
    ai = beta[0] > 0 ? 0 : 1;
    aj = beta[1] > 0 ? 1 : 0;
    if (ai == aj) far = c2 * t * 5.0 * std::sqrt(2.0) / (L * L * R * R * R);
  } else {
    ai = beta[0] > 0 ? 0 : 1;
  }
  parallel::for_each_index(values.size(), [&](std::size_t idx) {
    Point x0 = spec.centered_point(idx);
    double v = 0.0;
    for (int m0 = -kPoissonImages; m0 <= kPoissonImages; ++m0) {
      for (int m1 = -kPoissonImages; m1 <= kPoissonImages; ++m1) {
        const double y0 = x0[0] + m0 * L, y1 = x0[1] + m1 * L;
        const double r2 = y0 * y0 + y1 * y1 + t * t;
        const double inv = 1.0 / r2;
        const double r3 = inv * std::sqrt(inv);
        if (order == 0) {
          v += r3;
        } else if (order == 1) {
          v += -3.0 * (ai == 0 ? y0 : y1) * r3 * inv;
        } else {
          const double yi = ai == 0 ? y0 : y1, yj = aj == 0 ? y0 : y1;
          v += 15.0 * yi * yj * r3 * inv * inv - (ai == aj ? 3.0 * r3 * inv : 0.0);
        }
      }
    }
    v *= c2 * t;
    values[idx] = v + far;
  });
  return GridFunction(spec, std::move(values));
}

// Grid of points where a scalar function changes sign, refined by bisection.
std::vector<double> sign_changes(const std::function<double(double)>& g, double lo, double hi,
                                 int samples, bool logarithmic) {
  std::vector<double> roots;
  auto node = [&](int k) {
    double s = static_cast<double>(k) / samples;
    return logarithmic ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s;
  };
  double prev_x = node(0);
  double prev = g(prev_x);
  for (int k = 1; k <= samples; ++k) {
    double x = node(k);
    double v = g(x);
    if ((prev < 0.0 && v > 0.0) || (prev > 0.0 && v < 0.0)) {
      boost::math::tools::eps_tolerance<double> tol(50);
      std::uintmax_t iters = 200;
      auto [a, b] = boost::math::tools::bisect(g, prev_x, x, tol, iters);
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev = v;
  }
  return roots;
}

double integrate_abs(const std::function<double(double)>& g, std::vector<double> breaks,
                     double* error) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double s) { return std::abs(g(s)); }, breaks[k], breaks[k + 1], 12, 1e-13, &err);
    if (error != nullptr) *error += err;
  }
  return total;
}

// ∫_R |d^k/dx^k W_t(x)| dx in one dimension.
double gaussian_l1_1d(int k, double t) {
  if (k == 0) return 1.0;
  auto poly = GaussianPolynomial::for_derivative(MultiIndex{{k, 0}, 0}, 1);
  auto g = [&](double x) { return poly.evaluate({x, 0.0}, t); };
  const double reach = 2.0 * std::sqrt(kImageExponent + 10.0) * t;
  std::vector<double> breaks = sign_changes(g, -reach, reach, 4096, false);
  breaks.push_back(-reach);
  breaks.push_back(reach);
  breaks.push_back(0.0);
  return integrate_abs(g, breaks, nullptr);
}

double gaussian_sup_1d(int k) {
  auto poly = GaussianPolynomial::for_derivative(MultiIndex{{k, 0}, 0}, 1);
  double best = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    double x = -20.0 + 40.0 * i / 4000.0;
    best = std::max(best, std::abs(poly.evaluate({x, 0.0}, 1.0)));
  }
  // Sampling at spacing 1e-2 under-reads a smooth maximum by O(1e-4);
  // inflate to keep the result an upper bound.
  return best * 1.01;
}

}  // namespace

const char* kernel_name(KernelKind kind) {
  return kind == KernelKind::GaussWeierstrass ? "gauss" : "poisson";
}

double poisson_constant(int dim) {
  return std::tgamma(0.5 * (dim + 1)) / std::pow(kPi, 0.5 * (dim + 1));
}

GaussianPolynomial GaussianPolynomial::for_derivative(const MultiIndex& alpha, int dim) {
  spectral::check_multi_index(alpha, dim);
  GaussianPolynomial p;
  p.dim_ = dim;
  p.terms_[{0, 0, dim}] = 1.0;
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 0; k < alpha.beta[axis]; ++k) p.differentiate_x(axis);
  for (int k = 0; k < alpha.l; ++k) p.differentiate_t();
  return p;
}

void GaussianPolynomial::differentiate_x(int axis) {
  std::map<Monomial, double> next;
  for (const auto& [mono, c] : terms_) {
    if (mono[axis] > 0) {
      Monomial d = mono;
      d[axis] -= 1;
      next[d] += c * mono[axis];
    }
    Monomial g = mono;
    g[axis] += 1;
    g[2] += 2;
    next[g] += -0.5 * c;
  }
  terms_.clear();
  for (const auto& [mono, c] : next)
    if (c != 0.0) terms_[mono] = c;
}

void GaussianPolynomial::differentiate_t() {
  std::map<Monomial, double> next;
  for (const auto& [mono, c] : terms_) {
    if (mono[2] > 0) {
      Monomial d = mono;
      d[2] += 1;
      next[d] += -c * mono[2];
    }
    for (int axis = 0; axis < dim_; ++axis) {
      Monomial g = mono;
      g[axis] += 2;
      g[2] += 3;
      next[g] += 0.5 * c;
    }
  }
  terms_.clear();
  for (const auto& [mono, c] : next)
    if (c != 0.0) terms_[mono] = c;
}

int GaussianPolynomial::max_x_degree(int axis) const {
  int d = 0;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono[axis]);
  return d;
}

double GaussianPolynomial::evaluate(const Point& x, double t) const {
  const double u = 1.0 / t;
  double r2 = x[0] * x[0] + (dim_ == 2 ? x[1] * x[1] : 0.0);
  double s = 0.0;
  for (const auto& [mono, c] : terms_)
    s += c * ipow(x[0], mono[0]) * ipow(x[1], mono[1]) * ipow(u, mono[2]);
  return s * std::pow(4.0 * kPi, -0.5 * dim_) * std::exp(-0.25 * r2 * u * u);
}

std::vector<double> gaussian_time_coefficients(int l, double s) {
  // q_{l+1}(t) = q_l'(t) - 8 pi^2 s t q_l(t), q_0 = 1; stored as {t power: coeff}.
  std::vector<double> q{1.0};
  for (int k = 0; k < l; ++k) {
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t j = 1; j < q.size(); ++j) next[j - 1] += q[j] * static_cast<double>(j);
    for (std::size_t j = 0; j < q.size(); ++j) next[j + 1] += -8.0 * kPi * kPi * s * q[j];
    q = std::move(next);
  }
  return q;
}

Complex kernel_multiplier(const KernelDerivative& kd, const Frequency& xi) {
  const double s = xi[0] * xi[0] + xi[1] * xi[1];
  const double t = kd.t;
  Complex base;
  if (kd.kind == KernelKind::GaussWeierstrass) {
    auto q = gaussian_time_coefficients(kd.alpha.l, s);
    double poly = 0.0;
    for (std::size_t j = q.size(); j-- > 0;) poly = poly * t + q[j];
    base = poly * std::exp(-4.0 * kPi * kPi * t * t * s);
  } else {
    double r = std::sqrt(s);
    base = ipow(-2.0 * kPi * r, kd.alpha.l) * std::exp(-2.0 * kPi * t * r);
  }
  return spectral::derivative_symbol(kd.alpha.beta, xi) * base;
}

spectral::Symbol kernel_symbol(const KernelDerivative& kd) {
  return [kd](const Frequency& xi) { return kernel_multiplier(kd, xi); };
}

GridFunction kernel_values_spectral(const KernelDerivative& kd, const GridSpec& spec) {
  check_kernel_derivative(kd, spec.dim());
  spectral::SpectralFunction ones(spec, std::vector<Complex>(spec.size(), Complex(1.0, 0.0)));
  return spectral::inverse_transform(spectral::apply_multiplier(ones, kernel_symbol(kd)));
}

GridFunction kernel_values(const KernelDerivative& kd, const GridSpec& spec) {
  check_kernel_derivative(kd, spec.dim());
  if (kd.kind == KernelKind::GaussWeierstrass) return gaussian_values(kd, spec);
  if (kd.alpha.l == 0 && kd.alpha.space_order() <= 2) return poisson_closed_form_values(kd, spec);
  return kernel_values_spectral(kd, spec);
}

double gaussian_value(const MultiIndex& alpha, int dim, double t, const Point& x) {
  require(t > 0.0, "t > 0");
  return GaussianPolynomial::for_derivative(alpha, dim).evaluate(x, t);
}

double poisson_value(int dim, double t, const Point& x) {
  require(t > 0.0, "t > 0");
  double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
  return poisson_constant(dim) * t * std::pow(r2 + t * t, -0.5 * (dim + 1));
}

double poisson_hessian_value(int i, int j, int dim, double t, const Point& x) {
  require(t > 0.0, "t > 0");
  require(i >= 0 && j >= 0 && i < dim && j < dim, "axis out of range");
  double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0) + t * t;
  double p = 0.5 * (dim + 1);
  // ∂_i ∂_j (r2)^{-p} = 4p(p+1) x_i x_j r2^{-p-2} - 2p δ_ij r2^{-p-1}
  double v = 4.0 * p * (p + 1.0) * x[i] * x[j] * std::pow(r2, -p - 2.0);
  if (i == j) v -= 2.0 * p * std::pow(r2, -p - 1.0);
  return poisson_constant(dim) * t * v;
}

double heat_identity_residual(double t, const GridSpec& spec) {
  require(t > 0.0, "t > 0");
  auto lhs = kernel_values({KernelKind::GaussWeierstrass, MultiIndex{{0, 0}, 1}, t}, spec);
  KernelDerivative base{KernelKind::GaussWeierstrass, MultiIndex{}, t};
  spectral::SpectralFunction ones(spec, std::vector<Complex>(spec.size(), Complex(1.0, 0.0)));
  auto rhs = spectral::inverse_transform(spectral::apply_multiplier(ones, [&](const Frequency& xi) {
    double s = xi[0] * xi[0] + xi[1] * xi[1];
    return 2.0 * t * (-4.0 * kPi * kPi * s) * kernel_multiplier(base, xi);
  }));
  return (lhs - rhs).max_abs() / lhs.max_abs();
}

double semigroup_residual(double t, const GridSpec& spec) {
  require(t > 0.0, "t > 0");
  KernelDerivative full{KernelKind::GaussWeierstrass, MultiIndex{}, t};
  KernelDerivative half{KernelKind::GaussWeierstrass, MultiIndex{}, t / std::sqrt(2.0)};
  double worst = 0.0;
  for (std::size_t idx = 0; idx < spec.size(); ++idx) {
    auto xi = spec.frequency(idx);
    Complex h = kernel_multiplier(half, xi);
    worst = std::max(worst, std::abs(kernel_multiplier(full, xi) - h * h));
  }
  return worst;
}

double semigroup_spatial_residual(double t, const GridSpec& spec) {
  require(t > 0.0, "t > 0");
  auto whole = kernel_values({KernelKind::GaussWeierstrass, MultiIndex{}, t}, spec);
  auto half = kernel_values({KernelKind::GaussWeierstrass, MultiIndex{}, t / std::sqrt(2.0)}, spec);
  auto conv = spectral::circular_convolution(half, half);
  return (whole - conv).max_abs() / whole.max_abs();
}

double semigroup_third_derivative_residual(double t, int i, int j, const GridSpec& spec) {
  require(t > 0.0, "t > 0");
  require(i >= 0 && j >= 0 && i < spec.dim() && j < spec.dim(), "axis out of range");
  MultiIndex third{};
  third.beta[i] += 1;
  third.beta[j] += 2;
  MultiIndex first{};
  first.beta[i] = 1;
  MultiIndex second{};
  second.beta[j] = 2;
  const double h = t / std::sqrt(2.0);
  auto lhs = kernel_values({KernelKind::GaussWeierstrass, third, t}, spec);
  auto a = kernel_values({KernelKind::GaussWeierstrass, first, h}, spec);
  auto b = kernel_values({KernelKind::GaussWeierstrass, second, h}, spec);
  auto rhs = spectral::circular_convolution(a, b);
  return (lhs - rhs).max_abs() / lhs.max_abs();
}

HeatIntegral heat_time_integral(const MultiIndex& alpha, int dim, double b, const Point& x,
                                double T) {
  spectral::check_multi_index(alpha, dim);
  require(alpha.l == 0, "heat_time_integral takes space derivatives only");
  const double kappa = dim + alpha.space_order() - b - 1.0;
  require(kappa > 0.0, "n + |alpha| - b - 1 > 0");
  const double r = std::sqrt(x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0));
  require(r > 0.0, "x != 0");
  if (T <= 0.0) T = 1e9 * r;
  require(std::isfinite(T), "T must be finite");

  auto poly = GaussianPolynomial::for_derivative(alpha, dim);
  auto g = [&](double t) { return std::pow(t, b) * poly.evaluate(x, t); };

  HeatIntegral out;
  out.cutoff = T;
  // Below r/40 the Gaussian factor is below exp(-400).
  const double lo = std::min(r / 40.0, T);
  std::vector<double> breaks = sign_changes(g, lo, T, 4096, true);
  breaks.push_back(lo);
  breaks.push_back(T);
  if (r < T) breaks.push_back(r);
  for (double s = lo; s < T; s *= 2.0) breaks.push_back(s);
  out.value = integrate_abs(g, breaks, &out.error_estimate);
  out.error_estimate += std::abs(g(lo)) * lo;

  double sup = 1.0;
  for (int axis = 0; axis < dim; ++axis) sup *= gaussian_sup_1d(alpha.beta[axis]);
  out.tail_bound = sup * std::pow(T, -kappa) / kappa;
  return out;
}

double kernel_l1_decay(const MultiIndex& alpha, int dim, double t) {
  spectral::check_multi_index(alpha, dim);
  require(alpha.l == 0, "kernel_l1_decay takes space derivatives only");
  require(t > 0.0, "t > 0");
  double v = gaussian_l1_1d(alpha.beta[0], t);
  if (dim == 2) v *= gaussian_l1_1d(alpha.beta[1], t);
  return v;
}

}  // namespace besovlab::kernels
