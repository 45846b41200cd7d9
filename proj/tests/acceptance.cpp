// Runs the lab suites on the default configuration and prints one PASS/FAIL
// line per acceptance criterion. Every gate is recomputed here from raw rows;
// suite summaries are not trusted.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "besovlab/lab/config.hpp"
#include "besovlab/lab/suites.hpp"
#include "besovlab/parallel.hpp"

using besovlab::lab::ExperimentConfig;
using besovlab::lab::Report;
using besovlab::lab::Row;

namespace {

struct Fit {
  double slope = 0.0;
  double r2 = 0.0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Fit f;
  f.slope = sxy / sxx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

Fit log_log(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (double v : x) lx.push_back(std::log(v));
  for (double v : y) ly.push_back(std::log(v));
  return least_squares(lx, ly);
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

std::map<std::string, Report> g_reports;
std::map<std::string, double> g_seconds;

const Report& suite(const std::string& name) { return g_reports.at(name); }

std::vector<const Row*> rows(const std::string& suite_name, const std::string& experiment) {
  return suite(suite_name).select(experiment);
}

// Drift of every non-base variant against the base ratio of the same member.
struct Stability {
  bool finite = true;
  double max_ratio = 0.0;
  double reference = std::nan("");
  std::map<std::string, double> drift;  // variant prefix -> max drift
};

Stability stability(const std::vector<const Row*>& all, const std::function<bool(const Row&)>& keep) {
  Stability s;
  std::map<std::string, double> base;
  for (const Row* r : all)
    if (keep(*r) && r->text("variant") == "base") {
      base[r->text("function_id")] = r->number("ratio");
      if (r->text("function_id") == "gauss_w1") s.reference = r->number("ratio");
    }
  for (const Row* r : all) {
    if (!keep(*r)) continue;
    const double ratio = r->number("ratio");
    if (r->flag("flagged") || !std::isfinite(ratio)) s.finite = false;
    const std::string variant = r->text("variant");
    if (variant == "base") {
      s.max_ratio = std::max(s.max_ratio, ratio);
      continue;
    }
    const std::string group = variant.rfind("dilate", 0) == 0 ? "dilate" : variant;
    double d = std::abs(ratio / base.at(r->text("function_id")) - 1.0);
    if (!std::isfinite(d)) d = INFINITY;
    s.drift[group] = std::max(s.drift[group], d);
  }
  return s;
}

void stability_gates(Verdict& v, const Stability& s, const std::string& label, bool dilation) {
  v.require(s.finite, label + ": non-finite ratio");
  v.require(std::isfinite(s.reference) && s.max_ratio <= 2.0 * s.reference, label + ": max ratio vs reference");
  if (dilation) v.require(s.drift.count("dilate") && s.drift.at("dilate") <= 0.10, label + ": dilation drift");
  v.require(s.drift.count("refined") && s.drift.at("refined") <= 0.10, label + ": refinement drift");
  v.detail << " " << label << " max/ref=" << s.max_ratio / s.reference;
  if (dilation && s.drift.count("dilate")) v.detail << " dil=" << s.drift.at("dilate");
  if (s.drift.count("refined")) v.detail << " ref=" << s.drift.at("refined");
}

bool near(double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(y)); }

// 1. Exact identities.
Verdict criterion_identities() {
  const std::map<std::string, double> tolerance{
      {"heat_identity", 1e-8},          {"semigroup_spectral", 1e-12}, {"semigroup_spatial", 1e-10},
      {"riesz_kernel", 1e-10},          {"riesz_hessian", 1e-10},      {"parseval_pairing", 1e-10},
      {"poisson_decomposition", 1e-10}, {"uspenskii_gauss", 1e-6},     {"uspenskii_poisson", 1e-5}};
  Verdict v;
  std::set<std::string> seen;
  double worst = 0.0;
  for (const Row* r : rows("identities", "identity")) {
    const std::string check = r->text("check");
    seen.insert(check + "/n=" + r->text("n"));
    const double value = r->number("value");
    const double tol = tolerance.at(check);
    worst = std::max(worst, value / tol);
    v.require(value <= tol, check + " " + r->text("detail") + " t=" + r->text("t") + " n=" + r->text("n"));
  }
  v.require(seen.size() == 2 * tolerance.size(), "missing identity checks");
  v.require(g_seconds.at("identities") < 60.0, "runtime");
  v.detail << " worst value/tolerance=" << worst << " runtime=" << g_seconds.at("identities") << "s";
  return v;
}

// 2. Heat-integral lemma.
Verdict criterion_lemma() {
  Verdict v;
  const double oracle = 0.5 / std::sqrt(std::numbers::pi);
  auto o = rows("lemma-integrals", "heat_integral_oracle");
  v.require(o.size() == 1 && std::abs(o[0]->number("value") - oracle) <= 1e-6, "oracle 1/(2 sqrt pi)");
  std::map<std::string, std::vector<double>> products;
  for (const Row* r : rows("lemma-integrals", "heat_integral_scaling")) {
    const double n = r->number("n");
    const std::string alpha = r->text("alpha");
    int order = 0;
    for (char ch : alpha)
      if (std::isdigit(static_cast<unsigned char>(ch))) order += ch - '0';
    const double x = r->number("x");
    products[r->text("n") + alpha + r->text("b")].push_back(r->number("value") *
                                                             std::pow(x, n + order - r->number("b") - 1.0));
  }
  double spread = 0.0;
  for (const auto& [key, p] : products) {
    v.require(p.size() >= 5, "too few x for " + key);
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    spread = std::max(spread, (*hi - *lo) / std::abs(*hi));
  }
  v.require(!products.empty() && spread <= 1e-6, "scaling spread");
  auto rej = rows("lemma-integrals", "heat_integral_rejection");
  v.require(rej.size() == 1 && rej[0]->flag("rejected"), "hypothesis violation accepted");
  v.detail << " value=" << (o.empty() ? NAN : o[0]->number("value")) << " spread=" << spread;
  return v;
}

// 3. Weighted trace estimate, p = 1.
Verdict criterion_main_estimate() {
  Verdict v;
  const auto all = rows("trace-ratios", "main_estimate");
  for (auto [m, a] : std::vector<std::pair<int, double>>{{1, 0.0}, {2, 0.0}, {2, 0.5}, {1, -0.5}}) {
    auto members = [&](const Row& r) {
      return r.number("m") == m && near(r.number("a"), a) && r.number("n") == 1;
    };
    std::ostringstream label;
    label << "(" << m << "," << a << ")";
    std::set<std::string> ids;
    for (const Row* r : all)
      if (members(*r)) ids.insert(r->text("function_id"));
    v.require(ids.size() == 10, label.str() + ": family size");
    stability_gates(v, stability(all, members), label.str(), true);
  }
  v.require(g_seconds.at("trace-ratios") < 600.0, "runtime");
  v.detail << " runtime=" << g_seconds.at("trace-ratios") << "s";
  return v;
}

// 4. Weighted trace estimate, p = 2.
Verdict criterion_p_estimate() {
  Verdict v;
  auto members = [](const Row& r) {
    return r.number("m") == 0 && near(r.number("a"), 0.0) && r.number("p") == 2.0 && r.number("n") == 1;
  };
  stability_gates(v, stability(rows("trace-ratios", "p_estimate"), members), "(0,0,p=2)", true);
  return v;
}

// 5. Trace recovery rates and final error.
Verdict criterion_trace_recovery() {
  Verdict v;
  for (auto [kind, rate] : std::vector<std::pair<std::string, double>>{{"gauss", 2.0}, {"poisson", 1.0}}) {
    std::vector<double> t, e;
    for (const Row* r : rows("trace-ratios", "trace_limit"))
      if (r->text("kind") == kind) {
        t.push_back(r->number("t"));
        e.push_back(r->number("relative"));
      }
    const auto fit = log_log(t, e);
    v.require(t.size() >= 4 && std::abs(fit.slope - rate) <= 0.1, kind + " rate");
    v.detail << " " << kind << " rate=" << fit.slope;
  }
  double worst = 0.0;
  int count = 0;
  for (const Row* r : rows("trace-ratios", "trace_final"))
    if (r->text("kind") == "gauss" && r->text("function_id").rfind("band_", 0) == 0 &&
        std::abs(r->number("t") - std::ldexp(1.0, -10)) < 1e-15) {
      worst = std::max(worst, r->number("relative"));
      ++count;
    }
  v.require(count > 0 && worst < 1e-3, "final error at t=2^-10");
  v.detail << " band final=" << worst;
  return v;
}

// 6. Divergence of the truncated B^{1,1} seminorm.
Verdict criterion_counterexample() {
  Verdict v;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const Row* r : rows("counterexample", "divergence"))
    series[r->text("function_id")].emplace_back(r->number("log_inverse_floor"), r->number("value"));
  std::map<std::string, std::string> role;
  for (const Row* r : rows("counterexample", "divergence_fit")) role[r->text("function_id")] = r->text("role");
  int controls = 0;
  for (const auto& [id, pts] : series) {
    std::vector<double> x, y;
    for (auto [a, b] : pts) {
      x.push_back(a);
      y.push_back(b);
    }
    const auto fit = least_squares(x, y);
    const double final_value = y[std::max_element(x.begin(), x.end()) - x.begin()];
    if (id == "indicator" || id.rfind("psi", 0) == 0) {
      v.require(x.size() >= 4 && fit.slope > 0.0 && fit.r2 >= 0.99, id + " divergence");
      v.detail << " " << id << " slope=" << fit.slope << " r2=" << fit.r2;
    } else if (role[id] == "control") {
      ++controls;
      v.require(std::abs(fit.slope) <= 0.05 * final_value, id + " control slope");
    }
  }
  v.require(series.count("indicator") && series.count("psi_k2_normal_derivative") && controls > 0, "missing series");
  return v;
}

// 7. Liftings.
Verdict criterion_liftings() {
  Verdict v;
  auto traces = rows("lift", "composite_trace");
  std::set<int> orders;
  double worst = 0.0;
  for (const Row* r : traces)
    if (r->number("m") == 2 && near(r->number("a"), 0.0)) {
      orders.insert(static_cast<int>(r->number("order")));
      worst = std::max(worst, r->number("relative_error"));
    }
  v.require(orders == std::set<int>{0, 1, 2} && worst <= 1e-2, "composite traces");
  v.detail << " composite=" << worst;

  auto decay_fit = [&](const std::string& construction, double m, double a, const std::string& bucket) {
    std::vector<double> l, value;
    for (const Row* r : rows("lift", "decay"))
      if (r->text("construction") == construction && r->number("m") == m && near(r->number("a"), a) &&
          r->text("bucket") == bucket) {
        l.push_back(r->number("param"));
        value.push_back(r->number("value"));
      }
    return std::pair{l.size(), log_log(l, value)};
  };
  for (const Row* r : rows("lift", "decay_fit"))
    if (r->text("construction") == "mironescu" && r->text("bucket") == "beta>=1") {
      auto [count, fit] = decay_fit("mironescu", r->number("m"), r->number("a"), "beta>=1");
      v.require(count >= 4 && std::abs(fit.slope + 1.0) <= 0.1, "mironescu slope");
      v.detail << " mironescu=" << fit.slope;
    }
  int normal = 0;
  for (const Row* r : rows("lift", "decay_fit"))
    if (r->text("construction") == "normal_trace" && r->text("bucket").rfind("|beta|=", 0) == 0) {
      const int b = std::stoi(r->text("bucket").substr(7));
      auto [count, fit] = decay_fit("normal_trace", r->number("m"), r->number("a"), r->text("bucket"));
      v.require(count >= 4 && std::abs(fit.slope + b) <= 0.1, "normal_trace " + r->text("bucket"));
      ++normal;
    }
  v.require(normal > 0, "no normal-trace buckets");

  std::vector<double> j, bucket1, relative;
  for (const Row* r : rows("lift", "grisvard")) {
    v.require(r->number("a") == r->number("m") + 1, "grisvard weight");
    j.push_back(r->number("j"));
    bucket1.push_back(r->number("bucket_1"));
    relative.push_back(r->number("relative"));
  }
  const auto fit = log_log(j, bucket1);
  v.require(j.size() >= 4 && std::abs(fit.slope + 1.0) <= 0.15, "grisvard i=1 slope");
  const auto last = std::max_element(j.begin(), j.end()) - j.begin();
  v.require(!j.empty() && j[last] == 64 && relative[last] < 0.01, "grisvard distance at j=64");
  v.detail << " grisvard slope=" << fit.slope << " relative(64)=" << (j.empty() ? NAN : relative[last]);
  return v;
}

// 8. Embedding checks.
Verdict criterion_embedding() {
  Verdict v;
  int violations = 0;
  auto ftc = rows("embedding", "ftc_embedding");
  for (const Row* r : ftc) violations += static_cast<int>(r->number("violations"));
  v.require(!ftc.empty() && violations == 0, "ftc violations");
  double drift = 0.0, worst = 0.0;
  auto zyg = rows("embedding", "zygmund_growth");
  for (const Row* r : zyg) {
    const double a = r->number("ratio"), b = r->number("ratio_refined");
    v.require(std::isfinite(a) && std::isfinite(b), "zygmund ratio finite");
    worst = std::max(worst, a);
    drift = std::max(drift, std::abs(b / a - 1.0));
  }
  v.require(!zyg.empty() && drift <= 0.10, "zygmund refinement drift");
  v.detail << " zygmund max=" << worst << " drift=" << drift;
  return v;
}

// 9. Cross term.
Verdict criterion_cross_term() {
  Verdict v;
  auto single = rows("trace-ratios", "cross_term_single");
  v.require(single.size() == 1 && std::abs(single[0]->number("ratio") - 1.0) <= 1e-8, "single mode ratio");
  const auto s = stability(rows("trace-ratios", "cross_term"), [](const Row&) { return true; });
  v.require(s.finite && s.max_ratio > 0.0, "family ratios");
  v.require(s.drift.count("refined") && s.drift.at("refined") <= 0.10, "refinement drift");
  v.detail << " single=" << (single.empty() ? NAN : single[0]->number("ratio")) << " max=" << s.max_ratio;
  if (s.drift.count("refined")) v.detail << " ref=" << s.drift.at("refined");
  return v;
}

// 10. Riesz transforms.
Verdict criterion_riesz() {
  Verdict v;
  const auto s = stability(rows("riesz", "riesz"), [](const Row&) { return true; });
  v.require(s.finite && s.max_ratio > 0.0, "family ratios");
  v.require(s.drift.count("refined") && s.drift.at("refined") <= 0.20, "refinement drift");
  double worst = 0.0;
  int count = 0;
  for (const Row* r : rows("riesz", "riesz_pv"))
    if (r->flag("band_limited") && r->number("N") == 512) {
      const double step = 16.0 / 512.0;
      v.require(std::abs(r->number("epsilon") - 2.0 * step) < 1e-15, "epsilon = 2 steps");
      worst = std::max(worst, r->number("relative_l1"));
      ++count;
    }
  v.require(count > 0 && worst <= 0.05, "PV agreement");
  v.detail << " max=" << s.max_ratio << " pv=" << worst;
  if (s.drift.count("refined")) v.detail << " ref=" << s.drift.at("refined");
  return v;
}

// 11. Thread-count independence of the JSON payload.
Verdict criterion_determinism(const ExperimentConfig& config) {
  Verdict v;
  besovlab::parallel::set_thread_count(4);
  for (const auto& [name, report] : g_reports) {
    const auto again = besovlab::lab::run_suite(name, config);
    v.require(again.payload_json() == report.payload_json(), name + " payload differs");
  }
  besovlab::parallel::set_thread_count(1);
  v.detail << " suites=" << g_reports.size() << " threads 1 vs 4";
  return v;
}

}  // namespace

int main() {
  ExperimentConfig config;
  config.validate();
  besovlab::parallel::set_thread_count(1);
  for (const auto& name : besovlab::lab::suite_names()) {
    if (name == "report") continue;
    const auto start = std::chrono::steady_clock::now();
    g_reports.emplace(name, besovlab::lab::run_suite(name, config));
    g_seconds[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"exact identities", criterion_identities},
      {"heat integral lemma", criterion_lemma},
      {"weighted trace estimate p=1", criterion_main_estimate},
      {"weighted trace estimate p=2", criterion_p_estimate},
      {"trace recovery", criterion_trace_recovery},
      {"counterexamples", criterion_counterexample},
      {"liftings", criterion_liftings},
      {"embedding checks", criterion_embedding},
      {"cross term", criterion_cross_term},
      {"riesz boundedness", criterion_riesz},
      {"determinism", [&] { return criterion_determinism(config); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " exception: " << e.what();
    }
    if (!v.pass) ++failed;
    std::printf("%s %2zu %s:%s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.str().c_str());
  }
  return failed == 0 ? 0 : 1;
}
