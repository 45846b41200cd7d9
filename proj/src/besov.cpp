#include "besovlab/besov.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "besovlab/errors.hpp"
#include "besovlab/parallel.hpp"
#include "besovlab/profiles.hpp"

namespace besovlab::besov {

namespace {

using spectral::Complex;
using spectral::Frequency;
using spectral::MultiIndex;

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDifferenceOrder = 4;

struct LatticeOffset {
  std::array<int, 2> steps{0, 0};
  double radius = 0.0;
  double multiplicity = 1.0;  // 2 when -h is a distinct lattice vector
};

// Nonzero lattice vectors with |h| <= L/2, one per ±h pair, sorted by radius
// with a lexicographic tiebreak.
std::vector<LatticeOffset> lattice_offsets(const GridSpec& spec) {
  const int n = spec.samples_per_axis();
  const int half = n / 2;
  const double dx = spec.step();
  std::vector<LatticeOffset> out;
  if (spec.dim() == 1) {
    for (int j = 1; j <= half; ++j)
      out.push_back({{j == half ? -half : j, 0}, j * dx, j == half ? 1.0 : 2.0});
    return out;
  }
  for (int j0 = -half; j0 < half; ++j0) {
    for (int j1 = -half; j1 < half; ++j1) {
      long r2 = static_cast<long>(j0) * j0 + static_cast<long>(j1) * j1;
      if (r2 == 0 || r2 > static_cast<long>(half) * half) continue;
      bool self_paired = (j0 == -half && j1 == 0) || (j0 == 0 && j1 == -half);
      bool canonical = j0 > 0 || (j0 == 0 && j1 > 0);
      if (!canonical && !self_paired) continue;
      out.push_back({{j0, j1}, std::sqrt(static_cast<double>(r2)) * dx, self_paired ? 1.0 : 2.0});
    }
  }
  std::sort(out.begin(), out.end(), [](const LatticeOffset& a, const LatticeOffset& b) {
    long ra = static_cast<long>(a.steps[0]) * a.steps[0] + static_cast<long>(a.steps[1]) * a.steps[1];
    long rb = static_cast<long>(b.steps[0]) * b.steps[0] + static_cast<long>(b.steps[1]) * b.steps[1];
    if (ra != rb) return ra < rb;
    return a.steps < b.steps;
  });
  return out;
}

void check_difference(const GridSpec& spec, const DifferenceSpec& d) {
  require(d.steps[0] != 0 || d.steps[1] != 0, "h != 0");
  require(spec.dim() == 2 || d.steps[1] == 0, "h must be one-dimensional on a 1-d grid");
  require(d.order >= 1 && d.order <= kMaxDifferenceOrder, "difference order must lie in [1, 4]");
}

std::vector<double> binomial_row(int k) {
  std::vector<double> c(k + 1);
  for (int i = 0; i <= k; ++i) {
    double b = 1.0;
    for (int j = 1; j <= i; ++j) b = b * (k - i + j) / j;
    c[i] = ((k - i) % 2 == 0 ? 1.0 : -1.0) * b;
  }
  return c;
}

GridFunction shifted(const GridFunction& f, const std::array<int, 2>& steps) {
  const auto& spec = f.spec();
  std::vector<double> out(f.size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    auto ij = spec.axis_indices(idx);
    out[idx] = f[spec.flat_index(ij[0] + steps[0], ij[1] + steps[1])];
  }
  return GridFunction(spec, std::move(out));
}

double power_sum(double v, double p) {
  if (p == 1.0) return std::abs(v);
  if (p == 2.0) return v * v;
  return std::pow(std::abs(v), p);
}

// ‖Δ_h^k g‖_p without materializing the difference.
double difference_norm(const GridFunction& g, const std::array<int, 2>& steps, int k, double p) {
  const auto& spec = g.spec();
  const int n = spec.samples_per_axis();
  auto coeff = binomial_row(k);
  auto values = g.values();
  double acc = 0.0;
  if (spec.dim() == 1) {
    const int s = ((steps[0] % n) + n) % n;
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (int j = 0; j <= k; ++j) v += coeff[j] * values[(i + j * s) % n];
      if (std::isinf(p)) acc = std::max(acc, std::abs(v));
      else acc += power_sum(v, p);
    }
  } else {
    const int s0 = ((steps[0] % n) + n) % n;
    const int s1 = ((steps[1] % n) + n) % n;
    for (int i0 = 0; i0 < n; ++i0) {
      for (int i1 = 0; i1 < n; ++i1) {
        double v = 0.0;
        for (int j = 0; j <= k; ++j)
          v += coeff[j] * values[static_cast<std::size_t>((i0 + j * s0) % n) * n + (i1 + j * s1) % n];
        if (std::isinf(p)) acc = std::max(acc, std::abs(v));
        else acc += power_sum(v, p);
      }
    }
  }
  if (std::isinf(p)) return acc;
  acc *= spec.cell_volume();
  if (p == 1.0) return acc;
  if (p == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / p);
}

std::vector<MultiIndex> derivatives_of_order(int order, int dim) {
  std::vector<MultiIndex> out;
  if (dim == 1) {
    out.push_back(MultiIndex{{order, 0}, 0});
    return out;
  }
  for (int i = 0; i <= order; ++i) out.push_back(MultiIndex{{order - i, i}, 0});
  return out;
}

// ‖∂_θ^k g‖_p along direction (cos θ, sin θ).
double directional_norm(const spectral::SpectralFunction& G, double theta, int k, double p) {
  const Complex two_pi_i(0.0, 2.0 * kPi);
  const double c = std::cos(theta), s = std::sin(theta);
  auto d = spectral::inverse_transform(spectral::apply_multiplier(G, [&](const Frequency& xi) {
    Complex base = two_pi_i * (xi[0] * c + xi[1] * s);
    Complex r = 1.0;
    for (int j = 0; j < k; ++j) r *= base;
    return r;
  }));
  return spectral::lp_norm(d, p);
}

// ∫_{|h| in origin cell} ‖Δ_h^k g‖_p^q / |h|^{n+sq} dh from Δ_h^k g ≈ |h|^k ∂_θ^k g.
double origin_cell(const GridFunction& g, int k, double s, double p, double q) {
  const auto& spec = g.spec();
  const double e = k * q - s * q;
  const double half = 0.5 * spec.step();
  if (spec.dim() == 1) {
    auto d = spectral::partial_derivative(g, MultiIndex{{k, 0}, 0});
    return 2.0 * std::pow(spectral::lp_norm(d, p), q) * std::pow(half, e) / e;
  }
  auto G = spectral::forward_transform(g);
  // The integrand is π-periodic in θ; R(θ) has kinks at multiples of π/4.
  double total = 0.0;
  for (int octant = 0; octant < 4; ++octant) {
    double a = octant * kPi / 4.0;
    total += boost::math::quadrature::gauss<double, 8>::integrate(
        [&](double theta) {
          double r = half / std::max(std::abs(std::cos(theta)), std::abs(std::sin(theta)));
          return std::pow(directional_norm(G, theta, k, p), q) * std::pow(r, e) / e;
        },
        a, a + kPi / 4.0);
  }
  return 2.0 * total;
}

struct LatticeTerms {
  std::vector<LatticeOffset> offsets;
  std::vector<double> contributions;  // weighted, in offset order
  double origin = 0.0;
};

LatticeTerms lattice_terms(const GridFunction& f, const BesovParams& bp, bool with_origin) {
  const auto& spec = f.spec();
  const int ell = bp.derivative_order();
  const int k = bp.difference_order();
  const double s = bp.reduced_smoothness();
  std::vector<GridFunction> parts;
  if (ell == 0) {
    parts.push_back(f);
  } else {
    require(ell <= spectral::kMaxDerivativeOrder, "derivative order exceeds 4");
    for (const auto& alpha : derivatives_of_order(ell, spec.dim()))
      parts.push_back(spectral::partial_derivative(f, alpha));
  }
  LatticeTerms out;
  out.offsets = lattice_offsets(spec);
  out.contributions.assign(out.offsets.size(), 0.0);
  const double exponent = spec.dim() + s * bp.q;
  parallel::for_each_index(out.offsets.size(), [&](std::size_t i) {
    const auto& o = out.offsets[i];
    double acc = 0.0;
    for (const auto& g : parts) acc += std::pow(difference_norm(g, o.steps, k, bp.p), bp.q);
    out.contributions[i] = o.multiplicity * spec.cell_volume() * acc / std::pow(o.radius, exponent);
  });
  if (with_origin)
    for (const auto& g : parts) out.origin += origin_cell(g, k, s, bp.p, bp.q);
  return out;
}

double sup_over_lattice(const GridFunction& f, const BesovParams& bp) {
  const auto& spec = f.spec();
  const int ell = bp.derivative_order();
  const int k = bp.difference_order();
  const double s = bp.reduced_smoothness();
  std::vector<GridFunction> parts;
  if (ell == 0) parts.push_back(f);
  else
    for (const auto& alpha : derivatives_of_order(ell, spec.dim()))
      parts.push_back(spectral::partial_derivative(f, alpha));
  auto offsets = lattice_offsets(spec);
  double total = 0.0;
  for (const auto& g : parts) {
    std::vector<double> ratio(offsets.size());
    parallel::for_each_index(offsets.size(), [&](std::size_t i) {
      ratio[i] = difference_norm(g, offsets[i].steps, k, bp.p) / std::pow(offsets[i].radius, s);
    });
    total += *std::max_element(ratio.begin(), ratio.end());
  }
  return total;
}

}  // namespace

GridFunction difference(const GridFunction& f, const DifferenceSpec& d) {
  check_difference(f.spec(), d);
  GridFunction g = f;
  for (int i = 0; i < d.order; ++i) g = shifted(g, d.steps) - g;
  return g;
}

GridFunction binomial_difference(const GridFunction& f, const DifferenceSpec& d) {
  check_difference(f.spec(), d);
  auto coeff = binomial_row(d.order);
  std::vector<double> out(f.size(), 0.0);
  for (int i = d.order; i >= 0; --i) {
    auto s = shifted(f, {d.steps[0] * i, d.steps[1] * i});
    for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] += coeff[i] * s[idx];
  }
  return GridFunction(f.spec(), std::move(out));
}

BesovParams BesovParams::make(double s, double p, double q) {
  require(std::isfinite(s) && s > 0.0, "s > 0");
  require(p >= 1.0 && std::isfinite(p), "1 <= p < inf");
  require(q >= 1.0, "q >= 1");
  BesovParams bp;
  bp.s = s;
  bp.p = p;
  bp.q = q;
  return bp;
}

int BesovParams::derivative_order() const {
  if (s <= 1.0) return 0;
  return static_cast<int>(std::ceil(s)) - 1;
}

int BesovParams::difference_order() const {
  return static_cast<int>(std::floor(reduced_smoothness())) + 1;
}

SeminormReport besov_seminorm(const GridFunction& f, const BesovParams& bp, const BesovOptions& options) {
  auto checked = BesovParams::make(bp.s, bp.p, bp.q);
  const auto& spec = f.spec();
  SeminormReport report;
  report.cutoff_high = 0.5 * spec.length();
  if (std::isinf(checked.q)) {
    report.value = sup_over_lattice(f, checked);
    report.integral = report.value;
    report.cutoff_low = spec.step();
    return report;
  }
  const bool with_origin = options.origin == OriginCell::Include && options.floor <= 0.0;
  auto terms = lattice_terms(f, checked, with_origin);
  const double dx = spec.step();
  report.cutoff_low = with_origin ? 0.0 : std::max(dx, options.floor);
  if (with_origin) {
    report.origin_correction = terms.origin;
    report.shells.push_back({0.0, 0.5 * dx, terms.origin});
  }
  const double tolerance = 1e-9 * dx;
  for (std::size_t i = 0; i < terms.offsets.size(); ++i) {
    double r = terms.offsets[i].radius;
    if (r + tolerance < options.floor) continue;
    int shell = static_cast<int>(std::floor(std::log2(r / dx) + 1e-12));
    double lo = dx * std::ldexp(1.0, shell);
    if (report.shells.empty() || report.shells.back().r_min != lo)
      report.shells.push_back({lo, 2.0 * lo, 0.0});
    report.shells.back().contribution += terms.contributions[i];
  }
  for (const auto& sh : report.shells) report.integral += sh.contribution;
  report.value = std::pow(report.integral, 1.0 / checked.q);
  return report;
}

double besov_sup_seminorm_111(const GridFunction& f, OriginCell origin) {
  const auto& spec = f.spec();
  auto offsets = lattice_offsets(spec);
  std::vector<double> norms(offsets.size());
  parallel::for_each_index(offsets.size(), [&](std::size_t i) {
    norms[i] = difference_norm(f, offsets[i].steps, 2, 1.0);
  });
  // Running maximum at each distinct radius.
  std::vector<double> radii, sups;
  double running = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    running = std::max(running, norms[i]);
    if (!radii.empty() && std::abs(offsets[i].radius - radii.back()) < 1e-12 * spec.step()) {
      sups.back() = running;
    } else {
      radii.push_back(offsets[i].radius);
      sups.push_back(running);
    }
  }
  double total = 0.0;
  if (origin == OriginCell::Include) {
    // On (0, r_1): sup_{|h|<=r} ‖Δ_h^2 f‖_1 ≈ r^2 max_θ ‖∂_θ^2 f‖_1.
    double m = 0.0;
    if (spec.dim() == 1) {
      m = spectral::lp_norm(spectral::partial_derivative(f, MultiIndex{{2, 0}, 0}), 1.0);
    } else {
      auto F = spectral::forward_transform(f);
      for (int a = 0; a < 64; ++a) m = std::max(m, directional_norm(F, kPi * a / 64.0, 2, 1.0));
    }
    total += m * radii.front();
  }
  // S(r) interpolated linearly between consecutive radii: ∫ (a + b r)/r^2 dr.
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    double r0 = radii[i], r1 = radii[i + 1];
    double b = (sups[i + 1] - sups[i]) / (r1 - r0);
    double a = sups[i] - b * r0;
    total += a * (1.0 / r0 - 1.0 / r1) + b * std::log(r1 / r0);
  }
  double r_end = 0.5 * spec.length();
  if (radii.back() < r_end) total += sups.back() * (1.0 / radii.back() - 1.0 / r_end);
  return total;
}

double zygmund_seminorm(const GridFunction& f, double s, int k, double p) {
  require(std::isfinite(s) && s > 0.0, "s > 0");
  require(k >= 1 && k <= kMaxDifferenceOrder, "difference order must lie in [1, 4]");
  require(p >= 1.0, "p >= 1");
  auto offsets = lattice_offsets(f.spec());
  std::vector<double> ratio(offsets.size());
  parallel::for_each_index(offsets.size(), [&](std::size_t i) {
    ratio[i] = difference_norm(f, offsets[i].steps, k, p) / std::pow(offsets[i].radius, s);
  });
  return *std::max_element(ratio.begin(), ratio.end());
}

GridFunction indicator_counterexample(const GridSpec& spec) {
  require(spec.length() > 2.0, "L > 2");
  return GridFunction::sample(spec, [&](const Point& x) {
    for (int axis = 0; axis < spec.dim(); ++axis)
      if (x[axis] < 0.0 || x[axis] >= 1.0) return 0.0;
    return 1.0;
  });
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "a fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

DivergenceStudy divergence_study(const GridFunction& f, const BesovParams& bp,
                                 const std::vector<double>& floors) {
  auto checked = BesovParams::make(bp.s, bp.p, bp.q);
  require(std::isfinite(checked.q), "q < inf");
  require(floors.size() >= 2, "at least two floors");
  const double dx = f.spec().step();
  for (std::size_t i = 0; i < floors.size(); ++i) {
    require(floors[i] >= dx * (1.0 - 1e-12), "floor below grid step");
    if (i > 0) require(floors[i] < floors[i - 1], "floors must decrease");
  }
  auto terms = lattice_terms(f, checked, false);
  DivergenceStudy study;
  study.floors = floors;
  std::vector<double> x;
  for (double fl : floors) {
    double total = 0.0;
    for (std::size_t i = 0; i < terms.offsets.size(); ++i)
      if (terms.offsets[i].radius + 1e-9 * dx >= fl) total += terms.contributions[i];
    study.values.push_back(std::pow(total, 1.0 / checked.q));
    x.push_back(std::log(1.0 / fl));
  }
  auto fit = fit_line(x, study.values);
  study.slope = fit.slope;
  study.intercept = fit.intercept;
  study.r2 = fit.r2;
  return study;
}

GridFunction higher_counterexample_psi(const GridSpec& spec, int k) {
  require(k >= 2 && k <= 3, "k must be 2 or 3");
  require(spec.length() >= 4.0, "the bump support [-1/2, 3/2]^n and the base point -1 must fit in the torus");
  const int n = spec.samples_per_axis();
  const int axis = spec.dim() - 1;
  const double dx = spec.step();
  auto phi = [&](const Point& x) {
    double v = 1.0;
    for (int a = 0; a < spec.dim(); ++a) v *= profiles::unit_bump(x[a]);
    return v;
  };
  auto bump = GridFunction::sample(spec, phi);
  auto integrand = GridFunction::sample(spec, [&](const Point& x) { return x[axis] > 0.0 ? phi(x) : 0.0; });
  std::vector<double> current(integrand.values().begin(), integrand.values().end());
  // Left Riemann sums along the last axis, starting from the node at -1.
  const int start = static_cast<int>(std::lround(-1.0 / dx));
  auto line_index = [&](int other, int i) {
    return spec.dim() == 1 ? spec.flat_index(i, 0) : spec.flat_index(other, i);
  };
  const int lines = spec.dim() == 1 ? 1 : n;
  for (int pass = 0; pass < k - 1; ++pass) {
    std::vector<double> next(current.size(), 0.0);
    for (int other = 0; other < lines; ++other) {
      double acc = 0.0;
      for (int i = start; i < start + n; ++i) {
        std::size_t idx = line_index(other, i);
        next[idx] = acc;
        acc += current[idx] * dx;
      }
    }
    current = std::move(next);
  }
  std::vector<double> out(current.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bump[i] * current[i];
  return GridFunction(spec, std::move(out));
}

GridFunction normal_difference_quotient(const GridFunction& f, int order) {
  require(order >= 0 && order <= kMaxDifferenceOrder, "order must lie in [0, 4]");
  const auto& spec = f.spec();
  std::array<int, 2> steps{0, 0};
  steps[spec.dim() - 1] = 1;
  GridFunction g = f;
  for (int i = 0; i < order; ++i) g = (shifted(g, steps) - g) * (1.0 / spec.step());
  return g;
}

FtcEmbedding ftc_embedding_check(const GridFunction& f) {
  const auto& spec = f.spec();
  FtcEmbedding out;
  // ‖∇²f‖_1 on a 4x finer grid: |∇²f| has kinks that the base grid resolves poorly.
  const int fine_n = 4 * spec.samples_per_axis();
  auto fine = spectral::resample(f, fine_n);
  std::vector<double> frob(fine.size(), 0.0);
  for (const auto& alpha : derivatives_of_order(2, spec.dim())) {
    auto d = spectral::partial_derivative(fine, alpha);
    double mult = (alpha.beta[0] == 1 && alpha.beta[1] == 1) ? 2.0 : 1.0;
    for (std::size_t i = 0; i < frob.size(); ++i) frob[i] += mult * d[i] * d[i];
  }
  for (double& v : frob) v = std::sqrt(v);
  out.hessian_l1 = spectral::lp_norm(GridFunction(fine.spec(), std::move(frob)), 1.0);
  out.f_l1 = spectral::lp_norm(f, 1.0);

  auto offsets = lattice_offsets(spec);
  out.rows.resize(offsets.size());
  parallel::for_each_index(offsets.size(), [&](std::size_t i) {
    FtcRow row;
    row.steps = offsets[i].steps;
    row.h = offsets[i].radius;
    row.lhs = difference_norm(f, offsets[i].steps, 2, 1.0);
    row.rhs = row.h * row.h * out.hessian_l1;
    out.rows[i] = row;
  });
  for (const auto& row : out.rows) {
    if (row.lhs > row.rhs) ++out.violations;
    if (row.rhs > 0.0) out.max_ratio = std::max(out.max_ratio, row.lhs / row.rhs);
  }

  auto bp = BesovParams::make(1.0, 1.0, 1.0);
  auto terms = lattice_terms(f, bp, true);
  double total = terms.origin;
  for (std::size_t i = 0; i < terms.offsets.size(); ++i) {
    total += terms.contributions[i];
    if (terms.offsets[i].radius >= 1.0) out.large_h_part += terms.contributions[i];
  }
  out.seminorm = total;
  double denom = out.hessian_l1 + out.f_l1;
  out.constant = denom > 0.0 ? out.seminorm / denom : 0.0;
  const double r_end = 0.5 * spec.length();
  double measure = spec.dim() == 1 ? 2.0 * (1.0 - 1.0 / r_end) : 2.0 * kPi * (1.0 - 1.0 / r_end);
  out.large_h_bound = 4.0 * out.f_l1 * measure;
  return out;
}

}  // namespace besovlab::besov
