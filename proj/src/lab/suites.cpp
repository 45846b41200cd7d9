#include "besovlab/lab/suites.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include "besovlab/besov.hpp"
#include "besovlab/errors.hpp"
#include "besovlab/extension.hpp"
#include "besovlab/kernels.hpp"
#include "besovlab/lab/family.hpp"
#include "besovlab/liftings.hpp"
#include "besovlab/parallel.hpp"
#include "besovlab/riesz.hpp"

namespace besovlab::lab {

namespace {

using extension::RatioRow;
using extension::TQuadrature;
using extension::WeightParams;
using kernels::KernelKind;
using spectral::GridFunction;
using spectral::GridSpec;
using spectral::MultiIndex;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

Report make_report(const std::string& suite, const ExperimentConfig& config) {
  Report r;
  r.suite = suite;
  r.config_hash = config.hash();
  r.seed = config.seed;
  return r;
}

// A residual over tolerance is a hard failure.
void identity(Report& report, const std::string& check, const GridSpec& spec, double t, double value,
              double tolerance, const std::string& detail = "") {
  const bool pass = value <= tolerance;
  Row row("identity");
  row.set("check", check).set("detail", detail).set("n", spec.dim()).set("N", spec.samples_per_axis());
  row.set("L", spec.length()).set("t", t).set("value", value).set("tolerance", tolerance).set("pass", pass);
  report.add(std::move(row));
  if (!pass) report.failures.push_back(check + (detail.empty() ? "" : " " + detail) + " exceeds tolerance");
}

FamilyOptions family_options(const ExperimentConfig& c, const GridSpec& base, bool mean_zero) {
  return FamilyOptions{c.max_mode > 0 ? c.max_mode : base.samples_per_axis() / 8, mean_zero};
}

GridSpec base_spec(const ExperimentConfig& c) { return GridSpec::make(c.dim, c.samples, c.length); }

std::vector<FamilyMember> family(const ExperimentConfig& c, const GridSpec& spec, const GridSpec& base,
                                 bool mean_zero = false) {
  return family_generator(c.seed, spec, c.family_count, family_options(c, base, mean_zero));
}

// An automatic t_min is divided by `shrink` when the head bound is unresolved.
TQuadrature quadrature(const ExperimentConfig& c, double a, double L, double shrink = 1.0) {
  auto d = TQuadrature::defaults(a, L);
  return TQuadrature::make(a, c.t_min > 0.0 ? c.t_min : d.t_min() / shrink, c.t_max > 0.0 ? c.t_max : d.t_max(),
                           c.rho);
}

template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& body) {
  std::vector<std::optional<T>> slots(n);
  parallel::for_each_index(n, [&](std::size_t i) { slots[i] = body(i); });
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string fmt(double v) { return format_value(Value(std::in_place_type<double>, v)); }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, double* r2 = nullptr) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  auto fit = besov::fit_line(lx, ly);
  if (r2) *r2 = fit.r2;
  return fit.slope;
}

Row ratio_row(const RatioRow& r, const std::string& variant, const GridSpec& spec) {
  Row row(r.experiment);
  row.set("function_id", r.function_id).set("variant", variant).set("m", r.m).set("a", r.a).set("p", r.p);
  row.set("kind", kernels::kernel_name(r.kind)).set("n", spec.dim()).set("N", spec.samples_per_axis());
  row.set("L", spec.length()).set("lhs", r.lhs).set("rhs", r.rhs).set("ratio", r.ratio).set("flagged", r.flagged);
  row.set("head_bound", r.head_bound).set("tail_bound", r.tail_bound).set("boundary_tail", r.boundary_tail);
  return row;
}

RatioRow unresolved(const std::string& experiment, const std::string& id, int m, double a, double p,
                    KernelKind kind) {
  RatioRow r;
  r.experiment = experiment;
  r.function_id = id;
  r.m = m;
  r.a = a;
  r.p = p;
  r.kind = kind;
  r.lhs = r.rhs = r.ratio = kNaN;
  r.flagged = true;
  return r;
}

using RatioFn = std::function<RatioRow(const GridFunction&, const std::string&, double shrink)>;

struct Attempt {
  RatioRow row;
  double shrink = 1.0;
};

// With an automatic t_min, retry at t_min/8, /64, /512 before flagging the row.
Attempt resolve(const ExperimentConfig& c, const RatioFn& compute, const GridFunction& f, const std::string& id,
                const std::string& experiment) {
  const int attempts = c.t_min > 0.0 ? 1 : 4;
  double shrink = 1.0;
  for (int level = 0; level < attempts; ++level, shrink *= 8.0) {
    try {
      return {compute(f, id, shrink), shrink};
    } catch (const ResolutionError&) {
    }
  }
  return {unresolved(experiment, id, 0, kNaN, kNaN, KernelKind::GaussWeierstrass), shrink / 8.0};
}

// Family sweep with dilated and refined variants, then one summary row.
void ratio_sweep(Report& report, const ExperimentConfig& c, const std::string& experiment, Row summary,
                 const RatioFn& compute, bool dilate, bool mean_zero = false) {
  const GridSpec base = base_spec(c);
  const auto members = family(c, base, base, mean_zero);
  const auto refined = family(c, base.refined(), base, mean_zero);
  struct Variant {
    std::string name;
    double lambda;
    GridSpec spec;
  };
  std::vector<Variant> variants{{"base", 1.0, base}};
  if (dilate)
    for (double lambda : c.dilations)
      variants.push_back({"dilate_" + fmt(lambda), lambda,
                          GridSpec::make(base.dim(), base.samples_per_axis(), base.length() / lambda)});
  variants.push_back({"refined", 1.0, base.refined()});

  const std::size_t n = members.size();
  auto rows = parallel_map<Attempt>(n * variants.size(), [&](std::size_t k) {
    const auto& v = variants[k / n];
    const std::size_t i = k % n;
    GridFunction f = v.name == "refined" ? refined[i].f
                     : v.name == "base"  ? members[i].f
                                         : spectral::dilate(members[i].f, v.lambda);
    return resolve(c, compute, f, members[i].id, experiment);
  });

  double max_ratio = 0.0, reference = kNaN, dilation_drift = 0.0, refinement_drift = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& v = variants[k / n];
    const std::size_t i = k % n;
    const auto& row = rows[k].row;
    report.add(ratio_row(row, v.name, v.spec).set("t_min_shrink", rows[k].shrink));
    finite = finite && !row.flagged && std::isfinite(row.ratio);
    const double r0 = rows[i].row.ratio;
    if (k < n) {
      if (std::isfinite(r0)) max_ratio = std::max(max_ratio, r0);
      if (members[i].id == "gauss_w1") reference = r0;
      continue;
    }
    double drift = std::abs(row.ratio / r0 - 1.0);
    if (!std::isfinite(drift)) drift = kInf;
    double& target = v.name == "refined" ? refinement_drift : dilation_drift;
    target = std::max(target, drift);
  }
  summary.set("members", static_cast<int>(n)).set("all_finite", finite).set("max_ratio", max_ratio);
  summary.set("reference_ratio", reference).set("max_over_reference", max_ratio / reference);
  if (dilate) summary.set("dilation_drift", dilation_drift);
  summary.set("refinement_drift", refinement_drift);
  report.add(std::move(summary));
}

GridFunction mode(const GridSpec& spec, int k) {
  return GridFunction::sample(spec, [&](const spectral::Point& x) {
    return std::cos(2.0 * std::numbers::pi * k * x[0] / spec.length());
  });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "lemma-integrals", "trace-ratios", "lift",
                                              "riesz",      "counterexample",  "embedding",    "report"};
  return names;
}

Report run_suite(const std::string& name, const ExperimentConfig& config) {
  if (name == "identities") return identities_suite(config);
  if (name == "lemma-integrals") return lemma_integrals_suite(config);
  if (name == "trace-ratios") return trace_ratios_suite(config);
  if (name == "lift") return lift_suite(config);
  if (name == "riesz") return riesz_suite(config);
  if (name == "counterexample") return counterexample_suite(config);
  if (name == "embedding") return embedding_suite(config);
  if (name == "report") {
    auto all = make_report("report", config);
    for (const auto& s : suite_names())
      if (s != "report") all.append(run_suite(s, config));
    return all;
  }
  throw ConfigError("unknown suite " + name);
}

Report identities_suite(const ExperimentConfig& c) {
  auto report = make_report("identities", c);
  for (int dim : {1, 2}) {
    const auto spec = GridSpec::make(dim, dim == 1 ? c.identity_samples_1d : c.identity_samples_2d, c.length);
    auto members = family_generator(c.seed, spec, 9, family_options(c, spec, true));
    const auto& f = members[7].f;
    const auto& g = members[8].f;
    for (double t : c.identity_times) {
      identity(report, "heat_identity", spec, t, kernels::heat_identity_residual(t, spec), 1e-8);
      identity(report, "semigroup_spectral", spec, t, kernels::semigroup_residual(t, spec), 1e-12);
      identity(report, "semigroup_spatial", spec, t, kernels::semigroup_spatial_residual(t, spec), 1e-10);
      for (int j = 1; j <= dim; ++j)
        identity(report, "riesz_kernel", spec, t, riesz::riesz_kernel_identity(spec, t, j), 1e-10,
                 "j=" + std::to_string(j));
      for (int i = 1; i <= dim; ++i)
        for (int j = 1; j <= dim; ++j)
          identity(report, "riesz_hessian", spec, t, riesz::riesz_hessian_identity(spec, t, i, j), 1e-10,
                   "i=" + std::to_string(i) + " j=" + std::to_string(j));
      identity(report, "poisson_decomposition", spec, t, riesz::poisson_decomposition_check(f, t).relative, 1e-10);
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
          const std::string d = "i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1);
          identity(report, "uspenskii_gauss", spec, t,
                   extension::uspenskii_ansatz_residual(f, KernelKind::GaussWeierstrass, i, j, t), 1e-6, d);
          identity(report, "uspenskii_poisson", spec, t,
                   extension::uspenskii_ansatz_residual(f, KernelKind::Poisson, i, j, t), 1e-5, d);
        }
    }
    identity(report, "parseval_pairing", spec, 0.0, riesz::parseval_pairing_check(f, g).relative_error, 1e-10);
  }
  return report;
}

Report lemma_integrals_suite(const ExperimentConfig& c) {
  auto report = make_report("lemma-integrals", c);
  const double oracle = 0.5 / std::sqrt(std::numbers::pi);
  auto first = kernels::heat_time_integral(MultiIndex{{1, 0}, 0}, 1, 0.0, {1.0, 0.0});
  Row row("heat_integral_oracle");
  row.set("n", 1).set("alpha", "(1)").set("b", 0.0).set("x", 1.0).set("value", first.value);
  row.set("tail_bound", first.tail_bound).set("oracle", oracle).set("error", std::abs(first.value - oracle));
  row.set("tolerance", 1e-6).set("pass", std::abs(first.value - oracle) <= 1e-6);
  if (std::abs(first.value - oracle) > 1e-6) report.failures.push_back("heat integral oracle");
  report.add(std::move(row));

  struct Case {
    int dim;
    MultiIndex alpha;
    double b;
    std::string label;
  };
  const std::vector<Case> cases{{1, {{1, 0}, 0}, 0.0, "(1)"},
                                {1, {{2, 0}, 0}, 1.0, "(2)"},
                                {1, {{3, 0}, 0}, 1.5, "(3)"},
                                {2, {{1, 0}, 0}, 0.0, "(1,0)"},
                                {2, {{1, 1}, 0}, 0.5, "(1,1)"}};
  for (const auto& cs : cases) {
    const double power = cs.dim + cs.alpha.order() - cs.b - 1.0;
    std::vector<double> products;
    for (double x : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      spectral::Point p{x, 0.0};
      if (cs.dim == 2) p = {x * 0.6, x * 0.8};
      auto r = kernels::heat_time_integral(cs.alpha, cs.dim, cs.b, p);
      products.push_back(r.value * std::pow(x, power));
      Row s("heat_integral_scaling");
      s.set("n", cs.dim).set("alpha", cs.label).set("b", cs.b).set("x", x).set("value", r.value);
      s.set("tail_bound", r.tail_bound).set("product", products.back());
      report.add(std::move(s));
    }
    double lo = *std::min_element(products.begin(), products.end());
    double hi = *std::max_element(products.begin(), products.end());
    const double spread = (hi - lo) / std::abs(products[2]);
    Row s("heat_integral_scaling_summary");
    s.set("n", cs.dim).set("alpha", cs.label).set("b", cs.b).set("spread", spread).set("tolerance", 1e-6);
    s.set("pass", spread <= 1e-6);
    if (spread > 1e-6) report.failures.push_back("heat integral scaling " + cs.label);
    report.add(std::move(s));
  }

  bool rejected = false;
  std::string message;
  try {
    kernels::heat_time_integral(MultiIndex{}, 1, 0.0, {1.0, 0.0});
  } catch (const PreconditionError& e) {
    rejected = true;
    message = e.what();
  }
  Row rej("heat_integral_rejection");
  rej.set("n", 1).set("alpha", "(0)").set("b", 0.0).set("rejected", rejected).set("message", message);
  if (!rejected) report.failures.push_back("heat integral hypothesis not enforced");
  report.add(std::move(rej));
  return report;
}

Report trace_ratios_suite(const ExperimentConfig& c) {
  auto report = make_report("trace-ratios", c);
  for (const auto& wc : c.trace_cases) {
    Row s("main_estimate_summary");
    s.set("m", wc.m).set("a", wc.a).set("kind", kernels::kernel_name(c.kind));
    ratio_sweep(report, c, "main_estimate", s, [&](const GridFunction& f, const std::string& id, double shrink) {
      auto wp = WeightParams::make(wc.m, wc.a, 1.0);
      return extension::main_estimate_ratio(f, wp, c.kind, quadrature(c, wc.a, f.spec().length(), shrink), id);
    }, true);
  }
  for (const auto& wc : c.p_cases) {
    Row s("p_estimate_summary");
    s.set("m", wc.m).set("a", wc.a).set("p", c.p).set("kind", kernels::kernel_name(c.kind));
    ratio_sweep(report, c, "p_estimate", s, [&](const GridFunction& f, const std::string& id, double shrink) {
      return extension::p_estimate_ratio(f, WeightParams::make(wc.m, wc.a, c.p), c.kind,
                                         quadrature(c, wc.a, f.spec().length(), shrink), id);
    }, true);
  }

  // Trace recovery: rates for a single mode, final error over the family.
  const GridSpec base = base_spec(c);
  for (auto kind : {KernelKind::GaussWeierstrass, KernelKind::Poisson}) {
    auto errors = extension::trace_limit(mode(base, 1), kind, c.trace_times);
    const double norm = spectral::lp_norm(mode(base, 1), 1.0);
    for (std::size_t i = 0; i < errors.size(); ++i) {
      Row r("trace_limit");
      r.set("kind", kernels::kernel_name(kind)).set("function_id", "mode_1").set("t", c.trace_times[i]);
      r.set("error", errors[i]).set("relative", errors[i] / norm);
      report.add(std::move(r));
    }
    double r2 = 0.0;
    const double rate = fit_slope(c.trace_times, errors, &r2);
    Row fit("trace_limit_rate");
    fit.set("kind", kernels::kernel_name(kind)).set("rate", rate).set("r2", r2);
    report.add(std::move(fit));

    const auto members = family(c, base, base);
    const double t_final = *std::min_element(c.trace_times.begin(), c.trace_times.end());
    auto finals = parallel_map<double>(members.size(), [&](std::size_t i) {
      return extension::trace_limit(members[i].f, kind, {t_final}).front() / spectral::lp_norm(members[i].f, 1.0);
    });
    double worst = 0.0, worst_band = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      Row r("trace_final");
      r.set("kind", kernels::kernel_name(kind)).set("function_id", members[i].id).set("t", t_final);
      r.set("relative", finals[i]).set("boundary_tail", members[i].boundary_tail);
      report.add(std::move(r));
      worst = std::max(worst, finals[i]);
      if (!members[i].localized) worst_band = std::max(worst_band, finals[i]);
    }
    Row s("trace_final_summary");
    s.set("kind", kernels::kernel_name(kind)).set("t", t_final).set("max_relative", worst);
    s.set("max_relative_band", worst_band);
    report.add(std::move(s));
  }

  // Cross term with the Poisson extension.
  auto single = extension::cross_term_check(mode(GridSpec::make(1, c.samples, c.length), 1), 0);
  Row cross("cross_term_single");
  cross.set("lhs", single.lhs).set("rhs", single.rhs).set("ratio", single.ratio).set("flagged", single.flagged);
  report.add(std::move(cross));
  Row s("cross_term_summary");
  ratio_sweep(report, c, "cross_term", s, [&](const GridFunction& f, const std::string& id, double shrink) {
    auto ct = extension::cross_term_check(f, 0, quadrature(c, 0.0, f.spec().length(), shrink));
    RatioRow r;
    r.experiment = "cross_term";
    r.function_id = id;
    r.kind = KernelKind::Poisson;
    r.lhs = ct.lhs;
    r.rhs = ct.rhs;
    r.ratio = ct.ratio;
    r.flagged = ct.flagged;
    r.boundary_tail = spectral::boundary_tail(f);
    return r;
  }, false);
  return report;
}

Report lift_suite(const ExperimentConfig& c) {
  auto report = make_report("lift", c);
  const auto spec = GridSpec::make(1, c.samples, c.length);
  const auto members = family_generator(c.seed, spec, 7, family_options(c, spec, false));
  const auto& f = members[1].f;

  // Composite lifting with the maximal set of data.
  std::vector<GridFunction> data{members[1].f, members[0].f, members[5].f};
  const bool integer_a = c.lift_a == std::floor(c.lift_a);
  const std::size_t count = integer_a ? static_cast<std::size_t>(c.lift_m - c.lift_a) + 1
                                      : static_cast<std::size_t>(std::floor(c.lift_m - c.lift_a)) + 1;
  while (data.size() < count) data.push_back(members[data.size() + 3].f);
  while (data.size() > count) data.pop_back();
  auto comp = liftings::composite_lift(data, c.lift_m, c.lift_a);
  for (std::size_t j = 0; j < data.size(); ++j) {
    Row r("composite_trace");
    r.set("m", c.lift_m).set("a", c.lift_a).set("order", static_cast<int>(j));
    r.set("relative_error", comp.lifting.trace_error(static_cast<int>(j)));
    report.add(std::move(r));
  }
  Row cs("composite_summary");
  cs.set("m", c.lift_m).set("a", c.lift_a).set("norm", comp.lifting.norm()).set("data_norm", comp.data_norm);
  cs.set("constant", comp.constant).set("max_trace_error", comp.lifting.max_trace_error());
  cs.set("head_bound", comp.lifting.head_bound).set("tail_bound", comp.lifting.tail_bound);
  report.add(std::move(cs));

  auto add_study = [&](const std::string& construction, int m, double a, const liftings::DecayStudy& study) {
    for (const auto& row : study.rows) {
      Row r("decay");
      r.set("construction", construction).set("m", m).set("a", a).set("param", row.param);
      r.set("bucket", row.bucket).set("value", row.value);
      report.add(std::move(r));
    }
    for (const auto& [bucket, fit] : study.fits) {
      Row r("decay_fit");
      r.set("construction", construction).set("m", m).set("a", a).set("bucket", bucket);
      r.set("slope", fit.slope).set("r2", fit.r2);
      report.add(std::move(r));
    }
  };
  add_study("mironescu", c.mironescu_m, c.mironescu_m, liftings::mironescu_decay(f, c.mironescu_m, c.lift_ls));
  for (const auto& nc : c.normal_cases) {
    const int k = static_cast<int>(nc.a);
    add_study("normal_trace", nc.m, k, liftings::normal_trace_decay(f, nc.m, k, c.lift_ls));
  }

  const double a = c.grisvard_m + 1.0;
  auto source = liftings::cutoff_extension(f, c.grisvard_m, 0.0).lifting;
  auto study = liftings::grisvard_study(source, a, c.grisvard_js);
  for (const auto& row : study.rows) {
    Row r("grisvard");
    r.set("m", c.grisvard_m).set("a", a).set("j", row.j).set("distance", row.distance);
    r.set("relative", row.relative);
    for (std::size_t i = 0; i < row.buckets.size(); ++i) r.set("bucket_" + std::to_string(i), row.buckets[i]);
    report.add(std::move(r));
  }
  for (const auto& [i, fit] : study.bucket_fits) {
    Row r("decay_fit");
    r.set("construction", "grisvard").set("m", c.grisvard_m).set("a", a).set("bucket", "i=" + std::to_string(i));
    r.set("slope", fit.slope).set("r2", fit.r2);
    report.add(std::move(r));
  }
  return report;
}

Report riesz_suite(const ExperimentConfig& c) {
  auto report = make_report("riesz", c);
  for (int j = 1; j <= c.dim; ++j) {
    Row s("riesz_summary");
    s.set("j", j);
    ratio_sweep(report, c, "riesz", s, [&](const GridFunction& f, const std::string& id, double) {
      return riesz::riesz_besov_ratio(f, j, id);
    }, false, true);
  }

  const auto pv_spec = GridSpec::make(1, c.pv_samples, c.length);
  const auto members = family_generator(c.seed, pv_spec, std::max(c.family_count, 8), family_options(c, pv_spec, true));
  const double eps = c.pv_epsilon_steps * pv_spec.step();
  auto errors = parallel_map<double>(members.size(), [&](std::size_t i) {
    auto spectral_r = riesz::riesz_transform(members[i].f, 1);
    auto pv = riesz::riesz_pv_oracle(members[i].f, 1, eps);
    return spectral::lp_norm(pv - spectral_r, 1.0) / spectral::lp_norm(spectral_r, 1.0);
  });
  double worst_band = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    Row r("riesz_pv");
    r.set("function_id", members[i].id).set("band_limited", !members[i].localized).set("N", c.pv_samples);
    r.set("epsilon", eps).set("relative_l1", errors[i]);
    report.add(std::move(r));
    if (!members[i].localized) worst_band = std::max(worst_band, errors[i]);
  }
  Row s("riesz_pv_summary");
  s.set("N", c.pv_samples).set("epsilon", eps).set("max_relative_band", worst_band);
  report.add(std::move(s));
  return report;
}

Report counterexample_suite(const ExperimentConfig& c) {
  auto report = make_report("counterexample", c);
  const auto bp = besov::BesovParams::make(1.0, 1.0, 1.0);
  auto add = [&](const std::string& function_id, const std::string& role, const besov::DivergenceStudy& st) {
    for (std::size_t i = 0; i < st.floors.size(); ++i) {
      Row r("divergence");
      r.set("function_id", function_id).set("floor", st.floors[i]).set("log_inverse_floor", std::log(1.0 / st.floors[i]));
      r.set("value", st.values[i]);
      report.add(std::move(r));
    }
    Row r("divergence_fit");
    r.set("function_id", function_id).set("role", role).set("slope", st.slope).set("r2", st.r2);
    r.set("final_value", st.values.back()).set("relative_slope", std::abs(st.slope) / st.values.back());
    r.set("floors", static_cast<int>(st.floors.size()));
    report.add(std::move(r));
  };
  const auto ind_spec = GridSpec::make(1, c.indicator_samples, c.length);
  add("indicator", "counterexample",
      besov::divergence_study(besov::indicator_counterexample(ind_spec), bp, c.indicator_floors));
  auto controls = family_generator(c.seed, ind_spec, 5, family_options(c, base_spec(c), false));
  auto studies = parallel_map<besov::DivergenceStudy>(controls.size(), [&](std::size_t i) {
    return besov::divergence_study(controls[i].f, bp, c.indicator_floors);
  });
  for (std::size_t i = 0; i < controls.size(); ++i) add(controls[i].id, "control", studies[i]);

  const auto psi_spec = GridSpec::make(1, c.psi_samples, c.length);
  auto d = besov::normal_difference_quotient(besov::higher_counterexample_psi(psi_spec, 2), 1);
  add("psi_k2_normal_derivative", "counterexample", besov::divergence_study(d, bp, c.psi_floors));
  return report;
}

Report embedding_suite(const ExperimentConfig& c) {
  auto report = make_report("embedding", c);
  const auto base = GridSpec::make(1, c.samples, c.length);
  const auto members = family(c, base, base);
  const auto refined = family(c, base.refined(), base);
  auto ftc = parallel_map<besov::FtcEmbedding>(members.size(),
                                               [&](std::size_t i) { return besov::ftc_embedding_check(members[i].f); });
  int violations = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    Row r("ftc_embedding");
    r.set("function_id", members[i].id).set("steps", static_cast<int>(ftc[i].rows.size()));
    r.set("violations", ftc[i].violations).set("max_ratio", ftc[i].max_ratio).set("seminorm", ftc[i].seminorm);
    r.set("hessian_l1", ftc[i].hessian_l1).set("constant", ftc[i].constant);
    r.set("large_h_part", ftc[i].large_h_part).set("large_h_bound", ftc[i].large_h_bound);
    report.add(std::move(r));
    violations += ftc[i].violations;
  }
  auto zyg = [](const GridFunction& f) {
    auto df = spectral::partial_derivative(f, MultiIndex{{1, 0}, 0});
    return besov::zygmund_seminorm(f, 0.5, 1) / spectral::lp_norm(df, 2.0);
  };
  auto ratios = parallel_map<std::pair<double, double>>(members.size(), [&](std::size_t i) {
    return std::pair{zyg(members[i].f), zyg(refined[i].f)};
  });
  double max_ratio = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    Row r("zygmund_growth");
    r.set("function_id", members[i].id).set("s", 0.5).set("ratio", ratios[i].first);
    r.set("ratio_refined", ratios[i].second).set("drift", std::abs(ratios[i].second / ratios[i].first - 1.0));
    report.add(std::move(r));
    max_ratio = std::max(max_ratio, ratios[i].first);
    drift = std::max(drift, std::abs(ratios[i].second / ratios[i].first - 1.0));
  }
  Row s("embedding_summary");
  s.set("members", static_cast<int>(members.size())).set("ftc_violations", violations);
  s.set("zygmund_max_ratio", max_ratio).set("zygmund_refinement_drift", drift);
  report.add(std::move(s));
  return report;
}

}  // namespace besovlab::lab
