#include "besovlab/extension.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "besovlab/besov.hpp"
#include "besovlab/errors.hpp"
#include "besovlab/parallel.hpp"

namespace besovlab::extension {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kCacheBytes = std::size_t{64} << 20;

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// |(2 pi i xi)^beta|.
double derivative_modulus(const std::array<int, 2>& beta, const spectral::Frequency& xi) {
  return std::pow(2.0 * kPi * std::abs(xi[0]), beta[0]) * std::pow(2.0 * kPi * std::abs(xi[1]), beta[1]);
}

// ∫_T^∞ t^c exp(-gamma t^r) dt.
double decay_integral(double c, double gamma, double r, double T) {
  const double x = gamma * std::pow(T, r);
  if (x > 800.0) return 0.0;
  const double A = (c + 1.0) / r;
  return std::pow(gamma, -A) * boost::math::tgamma(A, x) / r;
}

// One term c t^power exp(-gamma t^r) of a per-mode bound on |g(x, t)|.
struct DecayTerm {
  double coeff;
  double power;
  double gamma;
};

GridFunction reflect(const GridFunction& f) {
  const auto& spec = f.spec();
  std::vector<double> out(f.size());
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    auto ax = spec.axis_indices(idx);
    out[idx] = f[spec.flat_index(-ax[0], -ax[1])];
  }
  return GridFunction(spec, std::move(out));
}

}  // namespace

TQuadrature TQuadrature::make(double a, double t_min, double t_max, double rho) {
  require(a > -1.0, "a > -1");
  require(t_min > 0.0, "t_min > 0");
  require(t_max > t_min, "t_max > t_min");
  require(rho > 1.0, "rho > 1");
  TQuadrature q;
  q.a_ = a;
  q.t_min_ = t_min;
  q.t_max_ = t_max;
  q.rho_ = rho;
  const auto cells = static_cast<std::size_t>(std::ceil(std::log(t_max / t_min) / std::log(rho) - 1e-12));
  for (std::size_t k = 0; k <= cells; ++k) q.nodes_.push_back(std::min(t_min * std::pow(rho, k), t_max));
  q.nodes_.back() = t_max;
  for (std::size_t k = 0; k < cells; ++k) {
    double lo = std::pow(q.nodes_[k], a + 1.0), hi = std::pow(q.nodes_[k + 1], a + 1.0);
    q.weights_.push_back((hi - lo) / (a + 1.0));
  }
  return q;
}

TQuadrature TQuadrature::defaults(double a, double L) {
  require(a > -1.0, "a > -1");
  const double t_min = a >= 0.0 ? 1e-3 : std::pow(1e-3, 1.0 / (a + 1.0));
  return make(a, t_min, 2.0 * L, 1.05);
}

double TQuadrature::midpoint(std::size_t k) const { return std::sqrt(nodes_[k] * nodes_[k + 1]); }

double TQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

WeightParams WeightParams::make(int m, double a, double p) {
  require(m >= 0, "m >= 0");
  require(a > -1.0, "a > -1");
  require(p >= 1.0 && std::isfinite(p), "1 <= p < inf");
  return WeightParams{m, a, p};
}

double HalfSpaceField::head_sup(const MultiIndex& alpha, double p, double t_min) const {
  return spectral::lp_norm(derivative(alpha, t_min), p);
}

double HalfSpaceField::tail_integral(const MultiIndex&, double, double, double t_max) const {
  require(t_max >= support_end(), "t_max must cover the t-support of the field");
  return 0.0;
}

ExtensionField::ExtensionField(GridFunction source, KernelKind kind)
    : source_(std::move(source)), kind_(kind), spectrum_(spectral::forward_transform(source_)) {}

GridFunction ExtensionField::derivative(const MultiIndex& alpha, double t) const {
  require(t > 0.0, "t > 0");
  spectral::check_multi_index(alpha, spec().dim());
  const bool plain = alpha == MultiIndex{};
  if (plain) {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
  }
  auto out = spectral::inverse_transform(
      spectral::apply_multiplier(spectrum_, kernels::kernel_symbol({kind_, alpha, t})));
  if (plain) {
    std::lock_guard lock(mutex_);
    if (cache_.size() * spec().size() * sizeof(double) >= kCacheBytes) cache_.clear();
    cache_.emplace(t, out);
  }
  return out;
}

double ExtensionField::head_sup(const MultiIndex& alpha, double p, double t_min) const {
  spectral::check_multi_index(alpha, spec().dim());
  const kernels::KernelDerivative at_zero{kind_, alpha, 0.0};
  auto g0 = spectral::inverse_transform(spectral::apply_multiplier(
      spectrum_, [&](const spectral::Frequency& xi) { return kernels::kernel_multiplier(at_zero, xi); }));
  double drift = 0.0;
  for (std::size_t i = 0; i < spectrum_.size(); ++i) {
    const auto xi = spec().frequency(i);
    const double s = xi[0] * xi[0] + xi[1] * xi[1];
    double d = 0.0;
    if (kind_ == KernelKind::GaussWeierstrass) {
      auto q = kernels::gaussian_time_coefficients(alpha.l, s);
      for (std::size_t j = 1; j < q.size(); ++j) d += std::abs(q[j]) * std::pow(t_min, j);
      d += std::abs(q[0]) * std::min(1.0, 4.0 * kPi * kPi * t_min * t_min * s);
    } else {
      const double r = std::sqrt(s);
      d = std::pow(2.0 * kPi * r, alpha.l) * std::min(1.0, 2.0 * kPi * t_min * r);
    }
    drift += std::abs(spectrum_[i]) * derivative_modulus(alpha.beta, xi) * d;
  }
  const double volume = spec().volume();
  return spectral::lp_norm(g0, p) + std::pow(volume, 1.0 / p) * drift / volume;
}

double ExtensionField::tail_integral(const MultiIndex& alpha, double a, double p, double t_max) const {
  spectral::check_multi_index(alpha, spec().dim());
  const double volume = spec().volume();
  const bool gauss = kind_ == KernelKind::GaussWeierstrass;
  std::vector<DecayTerm> terms;
  for (std::size_t i = 0; i < spectrum_.size(); ++i) {
    const double amp = std::abs(spectrum_[i]);
    if (amp == 0.0) continue;
    const auto xi = spec().frequency(i);
    const double s = xi[0] * xi[0] + xi[1] * xi[1];
    const double dm = derivative_modulus(alpha.beta, xi) * amp / volume;
    if (dm == 0.0) continue;
    if (gauss) {
      auto q = kernels::gaussian_time_coefficients(alpha.l, s);
      for (std::size_t j = 0; j < q.size(); ++j)
        if (q[j] != 0.0) terms.push_back({dm * std::abs(q[j]), static_cast<double>(j), 4.0 * kPi * kPi * s});
    } else {
      const double r = std::sqrt(s);
      const double c = dm * std::pow(2.0 * kPi * r, alpha.l);
      if (c != 0.0) terms.push_back({c, 0.0, 2.0 * kPi * r});
    }
  }
  const double r = gauss ? 2.0 : 1.0;
  double total = 0.0;
  for (const auto& term : terms) {
    if (term.gamma == 0.0) return std::numeric_limits<double>::infinity();
    if (p == 1.0)
      total += term.coeff * decay_integral(a + term.power, term.gamma, r, t_max);
    else
      total += std::pow(term.coeff, p) * decay_integral(a + p * term.power, p * term.gamma, r, t_max);
  }
  // (Σ_terms)^p <= J^{p-1} Σ term^p, and ‖g‖_p^p <= volume sup|g|^p.
  if (p != 1.0) total *= std::pow(static_cast<double>(terms.size()), p - 1.0);
  return volume * total;
}

GridFunction extend(const GridFunction& f, KernelKind kind, double t) {
  return extension_derivative(f, kind, MultiIndex{}, t);
}

GridFunction extension_derivative(const GridFunction& f, KernelKind kind, const MultiIndex& alpha, double t) {
  require(t > 0.0, "t > 0");
  spectral::check_multi_index(alpha, f.spec().dim());
  return spectral::inverse_transform(
      spectral::apply_multiplier(spectral::forward_transform(f), kernels::kernel_symbol({kind, alpha, t})));
}

std::vector<TensorEntry> gradient_entries(int order, int dim) {
  require(order >= 0 && order <= spectral::kMaxDerivativeOrder, "order must lie in [0, 4]");
  require(dim == 1 || dim == 2, "dim must be 1 or 2");
  std::vector<TensorEntry> out;
  for (int l = 0; l <= order; ++l) {
    const int space = order - l;
    if (dim == 1) {
      out.push_back({MultiIndex{{space, 0}, l}, factorial(order) / (factorial(space) * factorial(l))});
      continue;
    }
    for (int b0 = space; b0 >= 0; --b0) {
      const int b1 = space - b0;
      out.push_back({MultiIndex{{b0, b1}, l}, factorial(order) / (factorial(b0) * factorial(b1) * factorial(l))});
    }
  }
  return out;
}

GridFunction tensor_norm(const HalfSpaceField& field, const std::vector<TensorEntry>& entries, double t) {
  std::vector<double> acc(field.spec().size(), 0.0);
  for (const auto& e : entries) {
    auto g = field.derivative(e.alpha, t);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += e.multiplicity * g[i] * g[i];
  }
  for (double& v : acc) v = std::sqrt(v);
  return GridFunction(field.spec(), std::move(acc));
}

GridFunction gradient_tensor_norm(const GridFunction& f, KernelKind kind, int order, double t) {
  ExtensionField field(f, kind);
  return tensor_norm(field, gradient_entries(order, f.spec().dim()), t);
}

double WeightedIntegral::value() const { return std::pow(total(), 1.0 / p); }

WeightedIntegral weighted_integral(const HalfSpaceField& field, const std::vector<TensorEntry>& entries,
                                   double p, const TQuadrature& tq, double tolerance) {
  require(p >= 1.0 && std::isfinite(p), "1 <= p < inf");
  require(!entries.empty(), "no tensor entries");
  const double cellvol = field.spec().cell_volume();
  std::vector<double> slots(tq.cells(), 0.0);
  parallel::for_each_index(tq.cells(), [&](std::size_t k) {
    auto g = tensor_norm(field, entries, tq.midpoint(k));
    double s = 0.0;
    for (double v : g.values()) s += p == 1.0 ? std::abs(v) : std::pow(std::abs(v), p);
    slots[k] = tq.weights()[k] * s * cellvol;
  });
  WeightedIntegral out;
  out.p = p;
  for (double v : slots) out.interior += v;

  const double a = tq.a();
  double head_sup = 0.0;
  double tail = 0.0;
  for (const auto& e : entries) {
    head_sup += std::sqrt(e.multiplicity) * field.head_sup(e.alpha, p, tq.t_min());
    const double ti = field.tail_integral(e.alpha, a, p, tq.t_max());
    tail += std::pow(e.multiplicity, 0.5 * p) * ti;
  }
  if (p != 1.0) tail *= std::pow(static_cast<double>(entries.size()), p - 1.0);
  out.head_bound = std::pow(head_sup, p) * std::pow(tq.t_min(), a + 1.0) / (a + 1.0);
  out.tail_bound = tail;

  const double bounds = out.head_bound + out.tail_bound;
  if (bounds > 0.0 && !(bounds <= tolerance * out.interior)) {
    std::ostringstream msg;
    msg << "t-quadrature head/tail bounds (" << out.head_bound << ", " << out.tail_bound
        << ") exceed " << tolerance << " of the interior sum " << out.interior;
    throw ResolutionError(msg.str());
  }
  return out;
}

WeightedIntegral weighted_seminorm(const GridFunction& f, KernelKind kind, const WeightParams& wp,
                                   const TQuadrature& tq) {
  require(std::abs(tq.a() - wp.a) <= 1e-15 * (1.0 + std::abs(wp.a)), "quadrature weight must match a");
  require(wp.m + 1 <= spectral::kMaxDerivativeOrder, "m + 1 <= 4");
  ExtensionField field(f, kind);
  return weighted_integral(field, gradient_entries(wp.m + 1, f.spec().dim()), wp.p, tq);
}

std::vector<double> trace_limit(const GridFunction& f, KernelKind kind, const std::vector<double>& ts) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    require(ts[i] > 0.0, "t > 0");
    if (i > 0) require(ts[i] < ts[i - 1], "t_sequence must decrease");
  }
  ExtensionField field(f, kind);
  std::vector<double> out;
  for (double t : ts) out.push_back(spectral::lp_norm(field.value(t) - f, 1.0));
  return out;
}

double RatioReport::constant() const {
  double c = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows)
    if (!r.flagged && !(r.ratio <= c)) c = r.ratio;
  return c;
}

namespace {

RatioRow make_row(const std::string& experiment, const std::string& id, const WeightParams& wp,
                  KernelKind kind, double lhs, double rhs, const WeightedIntegral& wi, const GridFunction& f) {
  RatioRow row;
  row.experiment = experiment;
  row.function_id = id;
  row.m = wp.m;
  row.a = wp.a;
  row.p = wp.p;
  row.kind = kind;
  row.lhs = lhs;
  row.rhs = rhs;
  row.flagged = !(rhs > 0.0);
  row.ratio = row.flagged ? std::numeric_limits<double>::quiet_NaN() : lhs / rhs;
  row.head_bound = wi.head_bound;
  row.tail_bound = wi.tail_bound;
  row.boundary_tail = spectral::boundary_tail(f);
  return row;
}

}  // namespace

RatioRow main_estimate_ratio(const GridFunction& f, const WeightParams& wp, KernelKind kind,
                             const std::string& function_id) {
  auto checked = WeightParams::make(wp.m, wp.a, wp.p);
  return main_estimate_ratio(f, checked, kind, TQuadrature::defaults(checked.a, f.spec().length()), function_id);
}

RatioRow main_estimate_ratio(const GridFunction& f, const WeightParams& wp, KernelKind kind,
                             const TQuadrature& tq, const std::string& function_id) {
  auto checked = WeightParams::make(wp.m, wp.a, wp.p);
  require(checked.p == 1.0, "p = 1");
  require(checked.a < checked.m, "a < m");
  auto wi = weighted_seminorm(f, kind, checked, tq);
  double rhs = besov::besov_seminorm(f, besov::BesovParams::make(checked.m - checked.a, 1.0, 1.0)).value;
  return make_row("main_estimate", function_id, checked, kind, wi.value(), rhs, wi, f);
}

RatioRow p_estimate_ratio(const GridFunction& f, const WeightParams& wp, KernelKind kind,
                          const std::string& function_id) {
  return p_estimate_ratio(f, wp, kind, TQuadrature::defaults(wp.a, f.spec().length()), function_id);
}

RatioRow p_estimate_ratio(const GridFunction& f, const WeightParams& wp, KernelKind kind, const TQuadrature& tq,
                          const std::string& function_id) {
  auto checked = WeightParams::make(wp.m, wp.a, wp.p);
  require(checked.a < checked.p * (checked.m + 1) - 1.0, "a < p(m+1) - 1");
  require(std::abs(tq.a() - checked.a) <= 1e-15 * (1.0 + std::abs(checked.a)), "quadrature weight must match a");
  auto wi = weighted_seminorm(f, kind, checked, tq);
  const double s = checked.m + 1 - (checked.a + 1.0) / checked.p;
  double rhs = besov::besov_seminorm(f, besov::BesovParams::make(s, checked.p, checked.p)).integral;
  return make_row("p_estimate", function_id, checked, kind, wi.total(), rhs, wi, f);
}

CrossTerm cross_term_check(const GridFunction& f, int i) {
  return cross_term_check(f, i, TQuadrature::defaults(0.0, f.spec().length()));
}

CrossTerm cross_term_check(const GridFunction& f, int i, const TQuadrature& tq) {
  const int dim = f.spec().dim();
  require(i >= 0 && i < dim, "axis out of range");
  require(tq.a() == 0.0, "cross-term check uses a = 0");
  ExtensionField field(f, KernelKind::Poisson);
  MultiIndex mixed{{0, 0}, 1};
  mixed.beta[i] = 1;
  CrossTerm out;
  out.lhs = weighted_integral(field, {{mixed, 1.0}}, 1.0, tq).total();
  for (int j = 0; j < dim; ++j) {
    MultiIndex space{{0, 0}, 0};
    space.beta[i] += 1;
    space.beta[j] += 1;
    out.rhs = std::max(out.rhs, weighted_integral(field, {{space, 1.0}}, 1.0, tq).total());
  }
  out.flagged = !(out.rhs > 0.0);
  out.ratio = out.flagged ? std::numeric_limits<double>::quiet_NaN() : out.lhs / out.rhs;
  return out;
}

namespace {

struct AnsatzSides {
  GridFunction lhs;
  GridFunction rhs;
};

AnsatzSides ansatz_sides(const GridFunction& f, KernelKind kind, int i, int j, double t) {
  const auto& spec = f.spec();
  const int dim = spec.dim();
  require(i >= 0 && i < dim && j >= 0 && j < dim, "axis out of range");
  require(t > 0.0, "t > 0");
  MultiIndex alpha{{0, 0}, 0};
  alpha.beta[i] += 1;
  alpha.beta[j] += 1;
  GridFunction kernel = GridFunction::zeros(spec);
  if (kind == KernelKind::GaussWeierstrass) {
    kernel = kernels::kernel_values({kind, alpha, t}, spec);
  } else {
    auto unit = kernels::kernel_values({kind, alpha, 1.0},
                                       GridSpec::make(dim, spec.samples_per_axis(), spec.length() / t));
    kernel = GridFunction(spec, std::vector<double>(unit.values().begin(), unit.values().end())) *
             std::pow(t, -dim - 2.0);
  }
  // ½ Σ_h K(h) [f(x+h) + f(x-h)] = ½ (K̃ * f + K * f).
  auto pair_sum = (spectral::circular_convolution(kernel, f) + spectral::circular_convolution(reflect(kernel), f)) * 0.5;
  auto rhs = pair_sum - f * kernel.integral();
  return {extension_derivative(f, kind, alpha, t), rhs};
}

}  // namespace

double uspenskii_ansatz_residual(const GridFunction& f, KernelKind kind, int i, int j, double t) {
  auto sides = ansatz_sides(f, kind, i, j, t);
  const double scale = sides.lhs.max_abs();
  const double diff = (sides.lhs - sides.rhs).max_abs();
  return scale > 0.0 ? diff / scale : diff;
}

double uspenskii_ansatz_difference(const GridFunction& f, KernelKind kind, int i, int j, double t) {
  auto sides = ansatz_sides(f, kind, i, j, t);
  return (sides.lhs - sides.rhs).max_abs();
}

}  // namespace besovlab::extension
