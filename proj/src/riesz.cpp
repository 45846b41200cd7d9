#include "besovlab/riesz.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "besovlab/besov.hpp"
#include "besovlab/errors.hpp"
#include "besovlab/kernels.hpp"

namespace besovlab::riesz {

namespace {

using kernels::KernelDerivative;
using kernels::KernelKind;
using spectral::MultiIndex;

constexpr int kImages1 = 40;
constexpr int kImages2 = 16;

GridFunction reflect(const GridFunction& f) {
  const auto& spec = f.spec();
  const int n = spec.samples_per_axis();
  std::vector<double> out(spec.size());
  for (std::size_t idx = 0; idx < spec.size(); ++idx) {
    auto ij = spec.axis_indices(idx);
    int r0 = (n - ij[0]) % n;
    int r1 = spec.dim() == 2 ? (n - ij[1]) % n : 0;
    out[spec.flat_index(r0, r1)] = f[idx];
  }
  return GridFunction(spec, std::move(out));
}

GridFunction poisson(const GridSpec& spec, double t, MultiIndex alpha) {
  return kernels::kernel_values_spectral(KernelDerivative{KernelKind::Poisson, alpha, t}, spec);
}

MultiIndex unit(int axis, int l = 0) {
  MultiIndex a{{0, 0}, l};
  a.beta[axis] = 1;
  return a;
}

void require_mean_zero(const GridFunction& f) {
  const double scale = std::max(1.0, spectral::lp_norm(f, 1.0) / f.spec().volume());
  require(std::abs(f.mean()) <= 1e-12 * scale, "f must be mean-zero");
}

}  // namespace

RieszIndex RieszIndex::make(int j, int dim) {
  require(j >= 1 && j <= dim, "1 <= j <= n");
  return RieszIndex{j};
}

Complex riesz_symbol(int j, const Frequency& xi) {
  const double r = std::hypot(xi[0], xi[1]);
  if (r == 0.0) return Complex(0.0, 0.0);
  return Complex(0.0, -xi[j - 1] / r);
}

GridFunction riesz_transform(const GridFunction& f, int j) {
  RieszIndex::make(j, f.spec().dim());
  auto F = spectral::forward_transform(f);
  return spectral::inverse_transform(
      spectral::apply_multiplier(F, [j](const Frequency& xi) { return riesz_symbol(j, xi); }));
}

GridFunction riesz_pv_oracle(const GridFunction& f, int j, double epsilon) {
  const auto& spec = f.spec();
  const int dim = spec.dim();
  const int axis = RieszIndex::make(j, dim).axis();
  require(epsilon >= spec.step(), "epsilon must be at least the grid step");
  const double L = spec.length();
  const double c = kernels::poisson_constant(dim);
  const int images = dim == 1 ? kImages1 : kImages2;
  const double far_radius = (images + 0.5) * L;
  // Σ over image cells outside the box of ∂_j(z_j/|z|^{n+1}) ~ linear in y.
  const double far = dim == 1 ? -2.0 / (far_radius * L) : -2.0 * std::numbers::sqrt2 / (far_radius * L * L);
  const int m1 = dim == 2 ? images : 0;
  auto kernel = GridFunction::sample(spec, [&](const spectral::Point& y) {
    const double r0 = std::hypot(y[0], dim == 2 ? y[1] : 0.0);
    if (r0 < epsilon * (1.0 - 1e-12)) return 0.0;
    double s = 0.0;
    for (int a = -images; a <= images; ++a)
      for (int b = -m1; b <= m1; ++b) {
        const double z0 = y[0] + a * L;
        const double z1 = dim == 2 ? y[1] + b * L : 0.0;
        const double r = std::hypot(z0, z1);
        s += (axis == 0 ? z0 : z1) / std::pow(r, dim + 1);
      }
    return c * (s + far * y[axis]);
  });
  return spectral::circular_convolution(kernel, f);
}

double riesz_kernel_identity(const GridSpec& spec, double t, int j) {
  require(t > 0.0, "t > 0");
  const int axis = RieszIndex::make(j, spec.dim()).axis();
  auto lhs = riesz_transform(poisson(spec, t, MultiIndex{{0, 0}, 1}), j);
  return (lhs - poisson(spec, t, unit(axis))).max_abs();
}

double riesz_hessian_identity(const GridSpec& spec, double t, int i, int j) {
  require(t > 0.0, "t > 0");
  const int ai = RieszIndex::make(i, spec.dim()).axis();
  const int aj = RieszIndex::make(j, spec.dim()).axis();
  auto lhs = riesz_transform(poisson(spec, t, unit(aj, 1)), i);
  // ∂_i applied to ∂_j P_t, so both sides drop the same Nyquist modes.
  auto rhs = spectral::partial_derivative(poisson(spec, t, unit(aj)), unit(ai));
  return (lhs - rhs).max_abs();
}

PairingCheck parseval_pairing_check(const GridFunction& f, const GridFunction& g) {
  require(f.spec() == g.spec(), "grid functions live on different grids");
  PairingCheck out;
  out.lhs = f.times(g).integral();
  for (int j = 1; j <= f.spec().dim(); ++j) out.rhs += riesz_transform(f, j).times(riesz_transform(g, j)).integral();
  out.mean_contribution = f.mean() * g.mean() * f.spec().volume();
  const double scale = std::max(std::abs(out.lhs), std::numeric_limits<double>::min());
  out.relative_error = std::abs(out.lhs - out.rhs) / scale;
  return out;
}

DecompositionCheck poisson_decomposition_check(const GridFunction& f, double t) {
  require(t > 0.0, "t > 0");
  require_mean_zero(f);
  const auto& spec = f.spec();
  auto u = extension::extend(f, KernelKind::Poisson, t);
  auto kernel = poisson(spec, t, MultiIndex{});
  auto paired = GridFunction::zeros(spec);
  auto literal = GridFunction::zeros(spec);
  for (int i = 1; i <= spec.dim(); ++i) {
    auto rk = riesz_transform(kernel, i);
    auto rf = riesz_transform(f, i);
    paired += spectral::circular_convolution(reflect(rk), rf);
    literal += spectral::circular_convolution(rk, rf);
  }
  DecompositionCheck out;
  out.residual = (u - paired).max_abs();
  const double scale = u.max_abs();
  out.relative = scale > 0.0 ? out.residual / scale : out.residual;
  out.literal_relative = scale > 0.0 ? (u - literal).max_abs() / scale : 0.0;
  return out;
}

extension::RatioRow riesz_besov_ratio(const GridFunction& f, int j, const std::string& function_id) {
  RieszIndex::make(j, f.spec().dim());
  const auto bp = besov::BesovParams::make(1.0, 1.0, 1.0);
  extension::RatioRow row;
  row.experiment = "riesz";
  row.function_id = function_id;
  row.lhs = besov::besov_seminorm(riesz_transform(f, j), bp).value;
  row.rhs = besov::besov_seminorm(f, bp).value;
  row.flagged = !(row.rhs > 0.0);
  row.ratio = row.flagged ? std::numeric_limits<double>::quiet_NaN() : row.lhs / row.rhs;
  row.boundary_tail = spectral::boundary_tail(f);
  return row;
}

}  // namespace besovlab::riesz
