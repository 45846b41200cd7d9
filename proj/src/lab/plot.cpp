#include "besovlab/lab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "besovlab/besov.hpp"
#include "besovlab/errors.hpp"

namespace besovlab::lab {

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;
  double map(double v, double p0, double p1) const {
    double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
    return p0 + t * (p1 - p0);
  }
  std::string tick_label(double u) const { return num(log ? std::pow(10.0, u) : u); }
};

Axis make_axis(const std::vector<double>& values, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && v <= 0.0)) continue;
    double u = log ? std::log10(v) : v;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = 0.05 * (hi - lo);
  a.lo = lo - pad;
  a.hi = hi + pad;
  return a;
}

std::string frame(const std::string& title, const std::string& x_label, const std::string& y_label, const Axis& ax,
                  const Axis& ay) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
                  "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) + "</text>\n";
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) + "\" height=\"" + num(y0 - y1) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double u = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    double px = x0 + (x1 - x0) * i / 4.0;
    s += "<text x=\"" + num(px) + "\" y=\"" + num(y0 + 16) + "\" text-anchor=\"middle\">" + ax.tick_label(u) + "</text>\n";
    double v = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    double py = y0 + (y1 - y0) * i / 4.0;
    s += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" + ay.tick_label(v) + "</text>\n";
  }
  s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
       escape(x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num((y0 + y1) / 2) + ")\">" + escape(y_label) + "</text>\n";
  return s;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y, bool log_x, bool log_y) {
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((log_x && x[i] <= 0.0) || (log_y && y[i] <= 0.0) || !std::isfinite(y[i])) continue;
    fx.push_back(log_x ? std::log(x[i]) : x[i]);
    fy.push_back(log_y ? std::log(y[i]) : y[i]);
  }
  if (fx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return besov::fit_line(fx, fy).slope;
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
  std::vector<double> xs, ys;
  for (const auto& s : plot.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  auto ax = make_axis(xs, plot.log_x);
  auto ay = make_axis(ys, plot.log_y);
  std::string svg = frame(plot.title, plot.x_label, plot.y_label, ax, ay);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = kColors[k % 8];
    std::string path;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0.0) || (plot.log_x && s.x[i] <= 0.0)) continue;
      double px = ax.map(s.x[i], x0, x1), py = ay.map(s.y[i], y0, y1);
      path += (path.empty() ? "M" : " L") + num(px) + " " + num(py);
      svg += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    if (!path.empty())
      svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    const double slope = fitted_slope(s.x, s.y, plot.log_x, plot.log_y);
    svg += "<text x=\"" + num(x1 - 8) + "\" y=\"" + num(y1 + 16 + 14 * k) + "\" text-anchor=\"end\" fill=\"" + color +
           "\">" + escape(s.label) + " (slope " + num(slope) + ")</text>\n";
  }
  for (std::size_t i = 0; i < plot.notes.size(); ++i)
    svg += "<text x=\"" + num(x0 + 8) + "\" y=\"" + num(y1 + 16 + 14 * i) + "\">" + escape(plot.notes[i]) + "</text>\n";
  return svg + "</svg>\n";
}

std::string render_histogram(const std::string& title, const std::string& x_label, const std::vector<double>& values,
                             int bins) {
  std::vector<double> finite;
  for (double v : values)
    if (std::isfinite(v)) finite.push_back(v);
  require(!finite.empty(), "empty selection");
  auto ax = make_axis(finite, false);
  std::vector<int> counts(bins, 0);
  for (double v : finite) {
    int b = static_cast<int>((v - ax.lo) / (ax.hi - ax.lo) * bins);
    counts[std::clamp(b, 0, bins - 1)]++;
  }
  Axis ay;
  ay.lo = 0.0;
  ay.hi = *std::max_element(counts.begin(), counts.end()) * 1.1;
  std::string svg = frame(title, x_label, "count", ax, ay);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double w = (x1 - x0) / bins;
  for (int b = 0; b < bins; ++b) {
    double top = ay.map(counts[b], y0, y1);
    svg += "<rect x=\"" + num(x0 + b * w + 1) + "\" y=\"" + num(top) + "\" width=\"" + num(w - 2) + "\" height=\"" +
           num(y0 - top) + "\" fill=\"#1f77b4\"/>\n";
  }
  svg += "<text x=\"" + num(x0 + 8) + "\" y=\"" + num(y1 + 16) + "\">max " +
         num(*std::max_element(finite.begin(), finite.end())) + ", n = " + std::to_string(finite.size()) + "</text>\n";
  return svg + "</svg>\n";
}

const std::vector<std::string>& plot_selectors() {
  static const std::vector<std::string> s{"divergence", "trace-limit", "ratio-histogram", "decay"};
  return s;
}

std::vector<std::pair<std::string, std::string>> plot(const Report& report, const std::string& selector) {
  std::vector<std::pair<std::string, std::string>> out;
  if (selector == "divergence") {
    LinePlot p{"Truncated B^{1,1} seminorm", "log(1/floor)", "value", false, false, {}, {}};
    std::map<std::string, Series> by_id;
    std::vector<std::string> order;
    for (const Row* r : report.select("divergence")) {
      auto id = r->text("function_id");
      if (!by_id.count(id)) order.push_back(id), by_id[id].label = id;
      by_id[id].x.push_back(r->number("log_inverse_floor"));
      by_id[id].y.push_back(r->number("value"));
    }
    for (const auto& id : order) p.series.push_back(by_id[id]);
    if (!p.series.empty()) out.emplace_back("divergence.svg", render_svg(p));
  } else if (selector == "trace-limit") {
    LinePlot p{"Trace recovery ||K_t*f - f||_1", "t", "L1 error", true, true, {}, {}};
    std::map<std::string, Series> by_kind;
    std::vector<std::string> order;
    for (const Row* r : report.select("trace_limit")) {
      auto k = r->text("kind");
      if (!by_kind.count(k)) order.push_back(k), by_kind[k].label = k;
      by_kind[k].x.push_back(r->number("t"));
      by_kind[k].y.push_back(r->number("error"));
    }
    for (const auto& k : order) p.series.push_back(by_kind[k]);
    if (!p.series.empty()) out.emplace_back("trace_limit.svg", render_svg(p));
  } else if (selector == "ratio-histogram") {
    std::map<std::string, std::vector<double>> groups;
    std::vector<std::string> order;
    for (const auto& r : report.rows) {
      const auto& e = r.experiment();
      if (!(e == "main_estimate" || e == "p_estimate" || e == "cross_term" || e == "riesz")) continue;
      if (r.text("variant") != "base") continue;
      std::string key = e;
      if (r.has("m") && e != "riesz" && e != "cross_term") key += "_m" + r.text("m") + "_a" + r.text("a");
      if (!groups.count(key)) order.push_back(key);
      groups[key].push_back(r.number("ratio"));
    }
    for (const auto& k : order) out.emplace_back("ratios_" + k + ".svg", render_histogram(k + " ratios", "ratio", groups[k]));
  } else if (selector == "decay") {
    std::map<std::string, LinePlot> plots;
    std::map<std::string, std::map<std::string, Series>> series;
    std::vector<std::string> order;
    for (const Row* r : report.select("decay")) {
      const auto name = r->text("construction") + "_m" + r->text("m") + "_a" + r->text("a");
      if (!plots.count(name)) {
        order.push_back(name);
        plots[name] = LinePlot{name + " buckets", "l", "value", true, true, {}, {}};
      }
      auto& s = series[name][r->text("bucket")];
      s.label = r->text("bucket");
      s.x.push_back(r->number("param"));
      s.y.push_back(r->number("value"));
    }
    for (const Row* r : report.select("grisvard")) {
      const std::string name = "grisvard_m" + r->text("m") + "_a" + r->text("a");
      if (!plots.count(name)) {
        order.push_back(name);
        plots[name] = LinePlot{name + " buckets", "j", "value", true, true, {}, {}};
      }
      for (const auto& [k, v] : r->fields()) {
        if (k.rfind("bucket_", 0) != 0 && k != "distance") continue;
        auto& s = series[name][k];
        s.label = k;
        s.x.push_back(r->number("j"));
        s.y.push_back(r->number(k));
      }
    }
    for (const auto& name : order) {
      auto p = plots[name];
      for (auto& [label, s] : series[name]) p.series.push_back(s);
      out.emplace_back("decay_" + name + ".svg", render_svg(p));
    }
  } else {
    throw PreconditionError("unknown plot selector " + selector);
  }
  require(!out.empty(), "empty selection");
  return out;
}

}  // namespace besovlab::lab
