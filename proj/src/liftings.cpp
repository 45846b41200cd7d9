#include "besovlab/liftings.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "besovlab/besov.hpp"
#include "besovlab/errors.hpp"
#include "besovlab/parallel.hpp"

namespace besovlab::liftings {

namespace {

using extension::ExtensionField;
using extension::TensorEntry;
using extension::WeightedIntegral;
using kernels::KernelKind;

constexpr double kLoose = std::numeric_limits<double>::infinity();

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

double monomial_derivative(double t, int d, int k) {
  if (k > d) return 0.0;
  return std::pow(t, d - k) / factorial(d - k);
}

const profiles::CutoffProfile& psi() {
  static const profiles::CutoffProfile profile(profiles::CutoffName::Psi);
  return profile;
}

double default_t_min(double a) { return a >= 0.0 ? 1e-3 : std::pow(1e-3, 1.0 / (a + 1.0)); }

std::vector<TensorEntry> order_entries(int order, int dim) {
  if (order == 0) return {TensorEntry{MultiIndex{}, 1.0}};
  return extension::gradient_entries(order, dim);
}

// ∫ t^a weight(t) ‖∂^alpha F(t)‖_1 dt over the quadrature cells (midpoint rule).
double weighted_entry_l1(const HalfSpaceField& field, const MultiIndex& alpha,
                         const std::function<double(double)>& weight, const TQuadrature& tq) {
  std::vector<double> slots(tq.cells(), 0.0);
  parallel::for_each_index(tq.cells(), [&](std::size_t k) {
    const double t = tq.midpoint(k);
    const double w = weight(t);
    if (w == 0.0) return;
    slots[k] = tq.weights()[k] * std::abs(w) * spectral::lp_norm(field.derivative(alpha, t), 1.0);
  });
  double s = 0.0;
  for (double v : slots) s += v;
  return s;
}

double single_entry(const HalfSpaceField& field, const MultiIndex& alpha, const TQuadrature& tq) {
  return extension::weighted_integral(field, {TensorEntry{alpha, 1.0}}, 1.0, tq, kLoose).total();
}

}  // namespace

TimeProfile TimeProfile::cutoff(double scale) {
  require(scale > 0.0, "scale > 0");
  TimeProfile p;
  p.derivative = [scale](double t, int k) { return std::pow(scale, k) * psi().derivative(scale * t, k); };
  p.head_sup = [scale](double t_min, int k) {
    require(scale * t_min <= 1.0, "t_min must lie on the plateau of the cutoff");
    return k == 0 ? 1.0 : 0.0;
  };
  p.support_end = psi().support_end() / scale;
  return p;
}

TimeProfile TimeProfile::monomial(int d) {
  require(d >= 0, "degree >= 0");
  TimeProfile p;
  p.derivative = [d](double t, int k) { return monomial_derivative(t, d, k); };
  p.head_sup = [d](double t_min, int k) { return monomial_derivative(t_min, d, k); };
  p.monomial_degree = d;
  return p;
}

TimeProfile TimeProfile::monomial_cutoff(int d, double scale) {
  require(d >= 0, "degree >= 0");
  require(scale > 0.0, "scale > 0");
  TimeProfile p;
  p.derivative = [d, scale](double t, int k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) {
      double mono = monomial_derivative(t, d, k - i);
      if (mono == 0.0) continue;
      s += binomial(k, i) * mono * std::pow(scale, i) * psi().derivative(scale * t, i);
    }
    return s;
  };
  p.head_sup = [d, scale](double t_min, int k) {
    require(scale * t_min <= 1.0, "t_min must lie on the plateau of the cutoff");
    return monomial_derivative(t_min, d, k);
  };
  p.support_end = psi().support_end() / scale;
  return p;
}

ProductField::ProductField(TimeProfile profile, FieldPtr base) : profile_(std::move(profile)), base_(std::move(base)) {
  require(base_ != nullptr, "missing base field");
}

GridFunction ProductField::derivative(const MultiIndex& alpha, double t) const {
  spectral::check_multi_index(alpha, spec().dim());
  GridFunction out = GridFunction::zeros(spec());
  for (int i = 0; i <= alpha.l; ++i) {
    const double tau = profile_.derivative(t, i);
    if (tau == 0.0) continue;
    out += base_->derivative(MultiIndex{alpha.beta, alpha.l - i}, t) * (binomial(alpha.l, i) * tau);
  }
  return out;
}

double ProductField::head_sup(const MultiIndex& alpha, double p, double t_min) const {
  double s = 0.0;
  for (int i = 0; i <= alpha.l; ++i) {
    const double tau = profile_.head_sup(t_min, i);
    if (tau == 0.0) continue;
    s += binomial(alpha.l, i) * tau * base_->head_sup(MultiIndex{alpha.beta, alpha.l - i}, p, t_min);
  }
  return s;
}

double ProductField::tail_integral(const MultiIndex& alpha, double a, double p, double t_max) const {
  if (t_max >= support_end()) return 0.0;
  const int d = profile_.monomial_degree;
  require(d >= 0, "t_max must cover the t-support of the field");
  double s = 0.0;
  int terms = 0;
  for (int i = 0; i <= std::min(alpha.l, d); ++i) {
    const double c = binomial(alpha.l, i) / factorial(d - i);
    const MultiIndex inner{alpha.beta, alpha.l - i};
    if (p == 1.0)
      s += c * base_->tail_integral(inner, a + (d - i), 1.0, t_max);
    else
      s += std::pow(c, p) * base_->tail_integral(inner, a + p * (d - i), p, t_max);
    ++terms;
  }
  if (p != 1.0) s *= std::pow(static_cast<double>(terms), p - 1.0);
  return s;
}

double ProductField::support_end() const { return std::min(profile_.support_end, base_->support_end()); }

GridFunction BoundaryDataField::derivative(const MultiIndex& alpha, double) const {
  spectral::check_multi_index(alpha, spec().dim());
  if (alpha.l > 0) return GridFunction::zeros(spec());
  if (alpha.space_order() == 0) return g_;
  return spectral::partial_derivative(g_, alpha);
}

double BoundaryDataField::head_sup(const MultiIndex& alpha, double p, double t_min) const {
  if (alpha.l > 0) return 0.0;
  return spectral::lp_norm(derivative(alpha, t_min), p);
}

SumField::SumField(std::vector<FieldPtr> terms) : terms_(std::move(terms)) {
  require(!terms_.empty(), "empty sum");
  for (const auto& t : terms_) require(t && t->spec() == terms_.front()->spec(), "inconsistent grids");
}

GridFunction SumField::derivative(const MultiIndex& alpha, double t) const {
  GridFunction out = terms_.front()->derivative(alpha, t);
  for (std::size_t i = 1; i < terms_.size(); ++i) out += terms_[i]->derivative(alpha, t);
  return out;
}

double SumField::head_sup(const MultiIndex& alpha, double p, double t_min) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t->head_sup(alpha, p, t_min);
  return s;
}

double SumField::tail_integral(const MultiIndex& alpha, double a, double p, double t_max) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t->tail_integral(alpha, a, p, t_max);
  if (p != 1.0) s *= std::pow(static_cast<double>(terms_.size()), p - 1.0);
  return s;
}

double SumField::support_end() const {
  double s = 0.0;
  for (const auto& t : terms_) s = std::max(s, t->support_end());
  return s;
}

GridFunction normal_derivative_trace(const HalfSpaceField& field, int j, double t_min) {
  require(j >= 0 && j <= spectral::kMaxDerivativeOrder, "trace order must lie in [0, 4]");
  require(t_min > 0.0, "t_min > 0");
  if (j == 0) return field.value(t_min);
  const double h = t_min / 4.0;
  GridFunction out = GridFunction::zeros(field.spec());
  for (int i = 0; i <= j; ++i) {
    const double sign = (j - i) % 2 == 0 ? 1.0 : -1.0;
    out += field.value(t_min + (i - 0.5 * j) * h) * (sign * binomial(j, i));
  }
  return out * std::pow(h, -j);
}

double LiftingResult::norm() const {
  double s = lp_term;
  for (double v : seminorms) s += v;
  return s;
}

double LiftingResult::trace_error(int j) const {
  const auto& declared = declared_traces.at(j);
  auto measured = normal_derivative_trace(*field, j, quadrature.t_min());
  const double diff = spectral::lp_norm(measured - declared, 1.0);
  const double scale = spectral::lp_norm(declared, 1.0);
  return scale > 0.0 ? diff / scale : diff;
}

double LiftingResult::max_trace_error() const {
  double e = 0.0;
  for (const auto& [j, g] : declared_traces) e = std::max(e, trace_error(j));
  return e;
}

void assemble_norm(LiftingResult& result) {
  require(result.field != nullptr, "missing field");
  const int dim = result.field->spec().dim();
  result.seminorms.assign(result.m + 1, std::numeric_limits<double>::quiet_NaN());
  result.head_bound = result.tail_bound = 0.0;
  for (int order = 0; order <= result.m + 1; ++order) {
    auto wi = extension::weighted_integral(*result.field, order_entries(order, dim), result.p, result.quadrature);
    result.head_bound += wi.head_bound;
    result.tail_bound += wi.tail_bound;
    if (order == 0)
      result.lp_term = wi.value();
    else
      result.seminorms[order - 1] = wi.value();
  }
}

CutoffExtension cutoff_extension(const GridFunction& f, int m, double a) {
  require(a > -1.0, "a > -1");
  require(m >= 0 && m + 1 <= spectral::kMaxDerivativeOrder, "m + 1 <= 4");
  require(a <= m, "a <= m");
  CutoffExtension out;
  auto u = std::make_shared<ExtensionField>(f, KernelKind::GaussWeierstrass);
  auto& lift = out.lifting;
  lift.field = std::make_shared<ProductField>(TimeProfile::cutoff(1.0), u);
  lift.m = m;
  lift.a = a;
  lift.quadrature = TQuadrature::make(a, default_t_min(a), psi().support_end(), 1.02);
  lift.declared_traces.emplace(0, f);
  assemble_norm(lift);
  out.trace_error = spectral::lp_norm(lift.field->value(lift.quadrature.t_min()) - f, 1.0);
  out.l1_bound = std::pow(2.0, a + 1.0) / (a + 1.0) * spectral::lp_norm(f, 1.0);
  out.besov_norm = spectral::lp_norm(f, 1.0);
  if (m - a > 0.0) out.besov_norm += besov::besov_seminorm(f, besov::BesovParams::make(m - a, 1.0, 1.0)).value;
  out.remark_lhs = a == 0.0 ? lift.lp_term + lift.seminorms[m] : std::numeric_limits<double>::quiet_NaN();
  out.constant = out.besov_norm > 0.0 ? lift.norm() / out.besov_norm : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double profile_moment(int i, double e) {
  require(i >= 0 && i <= profiles::kJetOrder, "profile derivative order must lie in [0, 4]");
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto integrand = [&](double r) { return std::pow(r, e) * std::abs(psi().derivative(r, i)); };
  double s = GK::integrate(integrand, 1.0, 2.0, 20, 1e-13);
  if (i == 0) s += 1.0 / (e + 1.0);
  return s;
}

DecayFit fit_decay(const std::vector<double>& params, const std::vector<double>& values) {
  require(params.size() == values.size() && params.size() >= 2, "need at least two points");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < params.size(); ++i) {
    require(params[i] > 0.0 && values[i] > 0.0, "log fit needs positive data");
    x.push_back(std::log(params[i]));
    y.push_back(std::log(values[i]));
  }
  auto fit = besov::fit_line(x, y);
  return DecayFit{fit.slope, fit.intercept, fit.r2};
}

namespace {

// Quadrature scaled with 1/l so that profile constructions are sampled at the same r = l t.
TQuadrature profile_quadrature(double a, double l) { return TQuadrature::make(a, 1e-4 / l, 2.0 / l, 1.02); }

}  // namespace

MironescuLift mironescu_lift(const GridFunction& f, int m, double l) {
  require(l >= 1.0, "l >= 1");
  require(m >= 0 && m + 1 <= spectral::kMaxDerivativeOrder, "m + 1 <= 4");
  MironescuLift out;
  out.l = l;
  auto& lift = out.lifting;
  lift.field = std::make_shared<ProductField>(TimeProfile::cutoff(l), std::make_shared<BoundaryDataField>(f));
  lift.m = m;
  lift.a = m;
  lift.quadrature = profile_quadrature(m, l);
  lift.declared_traces.emplace(0, f);
  assemble_norm(lift);

  const int dim = f.spec().dim();
  for (const auto& e : extension::gradient_entries(m + 1, dim)) {
    const double v = single_entry(*lift.field, e.alpha, lift.quadrature);
    if (e.alpha.space_order() == 0)
      out.beta0_part = v;
    else
      out.beta_part += v;
  }
  for (int b = 1; b <= m + 1; ++b)
    for (const auto& e : extension::gradient_entries(b, dim)) {
      if (e.alpha.l != 0) continue;
      const double norm = spectral::lp_norm(spectral::partial_derivative(f, e.alpha), 1.0);
      for (int i = 0; i <= m + 1 - b; ++i) out.beta_part_bound += std::pow(l, -(m - i + 1.0)) * norm * profile_moment(i, m);
    }
  out.beta0_formula = spectral::lp_norm(f, 1.0) * profile_moment(m + 1, m);
  return out;
}

DecayStudy mironescu_decay(const GridFunction& f, int m, const std::vector<double>& ls) {
  DecayStudy study;
  std::vector<double> beta, beta0;
  for (double l : ls) {
    auto r = mironescu_lift(f, m, l);
    study.rows.push_back({"mironescu", l, "beta>=1", r.beta_part});
    study.rows.push_back({"mironescu", l, "beta=0", r.beta0_part});
    beta.push_back(r.beta_part);
    beta0.push_back(r.beta0_part);
  }
  study.fits["beta>=1"] = fit_decay(ls, beta);
  study.fits["beta=0"] = fit_decay(ls, beta0);
  return study;
}

NormalTraceLift normal_trace_lift(const GridFunction& g, int m, int k, double l) {
  require(k >= 0, "k >= 0");
  require(k < m, "k < m");
  require(m + 1 <= spectral::kMaxDerivativeOrder, "m + 1 <= 4");
  require(l >= 1.0, "l >= 1");
  const int r = m - k;
  NormalTraceLift out;
  out.l = l;
  auto& lift = out.lifting;
  lift.field = std::make_shared<ProductField>(TimeProfile::monomial_cutoff(r, l), std::make_shared<BoundaryDataField>(g));
  lift.m = m;
  lift.a = k;
  lift.quadrature = profile_quadrature(k, l);
  for (int j = 0; j < r; ++j) lift.declared_traces.emplace(j, GridFunction::zeros(g.spec()));
  lift.declared_traces.emplace(r, g);
  assemble_norm(lift);

  const int dim = g.spec().dim();
  for (const auto& e : extension::gradient_entries(m + 1, dim)) {
    const double v = single_entry(*lift.field, e.alpha, lift.quadrature);
    const int b = e.alpha.space_order();
    if (b == 0)
      out.beta0_part = v;
    else
      out.buckets[b] += v;
  }
  for (int b = 1; b <= m + 1; ++b)
    for (const auto& e : extension::gradient_entries(b, dim)) {
      if (e.alpha.l != 0) continue;
      const double norm = spectral::lp_norm(spectral::partial_derivative(g, e.alpha), 1.0);
      for (int i = 0; i <= m + 1 - b; ++i) {
        const int e_pow = k + std::max(b - k - 1 + i, 0);
        out.bucket_bounds[b] += std::pow(l, i - e_pow - 1.0) * norm * profile_moment(i, e_pow);
      }
    }
  for (int i = 1; i <= m + 1; ++i) {
    const int e_pow = k + std::max(i - 1 - k, 0);
    out.beta0_bound += std::pow(l, i - e_pow - 1.0) * profile_moment(i, e_pow);
  }
  out.beta0_bound *= spectral::lp_norm(g, 1.0);
  return out;
}

DecayStudy normal_trace_decay(const GridFunction& g, int m, int k, const std::vector<double>& ls) {
  DecayStudy study;
  std::map<std::string, std::vector<double>> series;
  for (double l : ls) {
    auto r = normal_trace_lift(g, m, k, l);
    for (const auto& [b, v] : r.buckets) {
      const std::string name = "|beta|=" + std::to_string(b);
      study.rows.push_back({"normal_trace", l, name, v});
      series[name].push_back(v);
    }
    study.rows.push_back({"normal_trace", l, "beta=0", r.beta0_part});
    series["beta=0"].push_back(r.beta0_part);
  }
  for (const auto& [name, values] : series) study.fits[name] = fit_decay(ls, values);
  return study;
}

MomentLift moment_lift(const GridFunction& f_j, int j, int m, double a) {
  require(j >= 0, "j >= 0");
  require(a > -1.0, "a > -1");
  require(m + 1 <= spectral::kMaxDerivativeOrder, "m + 1 <= 4");
  require(m - a - j > 0.0, "m - a - j > 0");
  MomentLift out;
  auto& lift = out.lifting;
  auto u = std::make_shared<ExtensionField>(f_j, KernelKind::GaussWeierstrass);
  lift.field = j == 0 ? FieldPtr(u) : std::make_shared<ProductField>(TimeProfile::monomial(j), u);
  lift.m = m;
  lift.a = a;
  lift.quadrature = TQuadrature::defaults(a, f_j.spec().length());
  for (int i = 0; i < j; ++i) lift.declared_traces.emplace(i, GridFunction::zeros(f_j.spec()));
  lift.declared_traces.emplace(j, f_j);
  auto wi = extension::weighted_integral(*lift.field, extension::gradient_entries(m + 1, f_j.spec().dim()), 1.0,
                                         lift.quadrature);
  lift.seminorms.assign(m + 1, std::numeric_limits<double>::quiet_NaN());
  lift.seminorms[m] = wi.value();
  lift.head_bound = wi.head_bound;
  lift.tail_bound = wi.tail_bound;
  out.seminorm = wi.value();
  out.besov = besov::besov_seminorm(f_j, besov::BesovParams::make(m - a - j, 1.0, 1.0)).value;
  out.ratio = out.besov > 0.0 ? out.seminorm / out.besov : std::numeric_limits<double>::quiet_NaN();
  return out;
}

CompositeLift composite_lift(const std::vector<GridFunction>& data, int m, double a) {
  require(!data.empty(), "missing data");
  require(a > -1.0, "a > -1");
  require(m >= 1 && m + 1 <= spectral::kMaxDerivativeOrder, "1 <= m and m + 1 <= 4");
  require(a < m, "a < m");
  for (const auto& f : data) require(f.spec() == data.front().spec(), "inconsistent grids");
  const bool integer_a = a == std::floor(a) && a >= 0.0;
  const std::size_t count = integer_a ? static_cast<std::size_t>(m - a) + 1 : static_cast<std::size_t>(std::floor(m - a)) + 1;
  require(data.size() <= count, "more data than prescribed traces");
  const bool normal_datum = integer_a && data.size() == count;

  CompositeLift out;
  const double t_min = default_t_min(a);
  std::vector<FieldPtr> terms{std::make_shared<ExtensionField>(data[0], KernelKind::GaussWeierstrass)};
  out.corrected_data.push_back(data[0]);
  for (std::size_t j = 1; j < data.size(); ++j) {
    SumField current(terms);
    auto measured = current.derivative(MultiIndex{{0, 0}, static_cast<int>(j)}, t_min);
    auto g = data[j] - measured;
    out.corrected_data.push_back(g);
    if (normal_datum && j + 1 == count)
      terms.push_back(std::make_shared<ProductField>(TimeProfile::monomial_cutoff(static_cast<int>(j), 1.0),
                                                     std::make_shared<BoundaryDataField>(g)));
    else
      terms.push_back(std::make_shared<ProductField>(TimeProfile::monomial(static_cast<int>(j)),
                                                     std::make_shared<ExtensionField>(g, KernelKind::GaussWeierstrass)));
  }
  auto& lift = out.lifting;
  lift.field = std::make_shared<ProductField>(TimeProfile::cutoff(1.0), std::make_shared<SumField>(terms));
  lift.m = m;
  lift.a = a;
  lift.quadrature = TQuadrature::make(a, t_min, psi().support_end(), 1.02);
  for (std::size_t j = 0; j < data.size(); ++j) lift.declared_traces.emplace(static_cast<int>(j), data[j]);
  assemble_norm(lift);

  for (std::size_t j = 0; j < data.size(); ++j) {
    if (normal_datum && j + 1 == count)
      out.data_norm += spectral::lp_norm(data[j], 1.0);
    else
      out.data_norm += besov::besov_seminorm(data[j], besov::BesovParams::make(m - a - j, 1.0, 1.0)).value;
  }
  out.constant = out.data_norm > 0.0 ? lift.norm() / out.data_norm : std::numeric_limits<double>::quiet_NaN();
  return out;
}

namespace {

GrisvardRow grisvard_row(const LiftingResult& source, double a, double j, double reference) {
  require(j >= 1.0, "j >= 1");
  const int m = source.m;
  const int dim = source.field->spec().dim();
  GrisvardRow row;
  row.j = j;
  ProductField distance(TimeProfile::cutoff(j), source.field);
  auto tq = profile_quadrature(a, j);
  row.distance =
      extension::weighted_integral(distance, extension::gradient_entries(m + 1, dim), 1.0, tq, kLoose).total();
  row.relative = reference > 0.0 ? row.distance / reference : std::numeric_limits<double>::quiet_NaN();

  row.buckets.assign(m + 2, 0.0);
  auto transition = TQuadrature::make(a, 1.0 / j, 2.0 / j, 1.01);
  for (const auto& e : extension::gradient_entries(m + 1, dim)) {
    for (int i = 0; i <= e.alpha.l; ++i) {
      const MultiIndex inner{e.alpha.beta, e.alpha.l - i};
      const double c = binomial(e.alpha.l, i) * std::pow(j, i);
      auto weight = [&](double t) { return psi().derivative(j * t, i); };
      double v = weighted_entry_l1(*source.field, inner, weight, i == 0 ? tq : transition);
      if (i == 0) {
        const double head = source.field->head_sup(inner, 1.0, tq.t_min());
        v += head * std::pow(tq.t_min(), a + 1.0) / (a + 1.0);
      }
      row.buckets[i] += c * v;
    }
  }
  return row;
}

double grisvard_reference(const LiftingResult& source, double a) {
  const int dim = source.field->spec().dim();
  auto tq = TQuadrature::make(a, 1e-4, std::max(2.0, std::min(source.field->support_end(), 1e6)), 1.02);
  return extension::weighted_integral(*source.field, extension::gradient_entries(source.m + 1, dim), 1.0, tq)
      .total();
}

}  // namespace

GrisvardRow grisvard_approximation(const LiftingResult& source, double a, double j) {
  require(a > source.m, "a > m");
  return grisvard_row(source, a, j, grisvard_reference(source, a));
}

GrisvardStudy grisvard_study(const LiftingResult& source, double a, const std::vector<double>& js) {
  require(a > source.m, "a > m");
  GrisvardStudy study;
  study.reference = grisvard_reference(source, a);
  for (double j : js) study.rows.push_back(grisvard_row(source, a, j, study.reference));
  for (int i = 0; i <= source.m + 1; ++i) {
    std::vector<double> values;
    for (const auto& r : study.rows) values.push_back(r.buckets[i]);
    bool positive = std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
    if (positive) study.bucket_fits[i] = fit_decay(js, values);
  }
  return study;
}

}  // namespace besovlab::liftings
