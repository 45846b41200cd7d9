#include "besovlab/lab/config.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "besovlab/errors.hpp"
#include "besovlab/extension.hpp"
#include "besovlab/spectral.hpp"

namespace besovlab::lab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ConfigError(key + ": not a number: '" + text + "'");
  return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
  Int v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": not an integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(key + ": expected true or false");
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string fmt_cases(const std::vector<WeightCase>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i].m) + ":" + fmt(v[i].a);
  return s;
}

std::vector<WeightCase> parse_cases(const std::string& key, const std::string& text) {
  std::vector<WeightCase> out;
  for (const auto& item : split(text, ',')) {
    auto parts = split(item, ':');
    if (parts.size() != 2) throw ConfigError(key + ": expected m:a pairs");
    out.push_back({to_int<int>(key, parts[0]), to_double(key, parts[1])});
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string& key, const std::string&)> set;
  bool hashed = true;
};

#define BL_DOUBLE(member) \
  Field { [](const ExperimentConfig& c) { return fmt(c.member); }, \
          [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = to_double(k, v); } }
#define BL_INT(member, type) \
  Field { [](const ExperimentConfig& c) { return std::to_string(c.member); }, \
          [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = to_int<type>(k, v); } }
#define BL_BOOL(member) \
  Field { [](const ExperimentConfig& c) { return std::string(c.member ? "true" : "false"); }, \
          [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = to_bool(k, v); } }
#define BL_LIST(member) \
  Field { [](const ExperimentConfig& c) { return fmt_list(c.member); }, \
          [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = parse_list(k, v); } }
#define BL_CASES(member) \
  Field { [](const ExperimentConfig& c) { return fmt_cases(c.member); }, \
          [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = parse_cases(k, v); } }

const std::map<std::string, Field>& table() {
  static const std::map<std::string, Field> fields = [] {
    std::map<std::string, Field> t;
    t["grid.n"] = BL_INT(dim, int);
    t["grid.N"] = BL_INT(samples, int);
    t["grid.L"] = BL_DOUBLE(length);
    t["tq.rho"] = BL_DOUBLE(rho);
    t["tq.t_min"] = BL_DOUBLE(t_min);
    t["tq.t_max"] = BL_DOUBLE(t_max);
    t["family.count"] = BL_INT(family_count, int);
    t["family.seed"] = BL_INT(seed, std::uint64_t);
    t["family.max_mode"] = BL_INT(max_mode, int);
    t["family.mean_zero"] = BL_BOOL(mean_zero);
    t["trace.cases"] = BL_CASES(trace_cases);
    t["trace.kind"] = Field{
        [](const ExperimentConfig& c) { return std::string(kernels::kernel_name(c.kind)); },
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          if (v == "gauss")
            c.kind = kernels::KernelKind::GaussWeierstrass;
          else if (v == "poisson")
            c.kind = kernels::KernelKind::Poisson;
          else
            throw ConfigError(k + ": expected gauss or poisson");
        }};
    t["trace.p_cases"] = BL_CASES(p_cases);
    t["trace.p"] = BL_DOUBLE(p);
    t["trace.dilations"] = BL_LIST(dilations);
    t["trace.times"] = BL_LIST(trace_times);
    t["identities.N1"] = BL_INT(identity_samples_1d, int);
    t["identities.N2"] = BL_INT(identity_samples_2d, int);
    t["identities.times"] = BL_LIST(identity_times);
    t["lift.m"] = BL_INT(lift_m, int);
    t["lift.mironescu_m"] = BL_INT(mironescu_m, int);
    t["lift.a"] = BL_DOUBLE(lift_a);
    t["lift.l"] = BL_LIST(lift_ls);
    t["lift.normal_cases"] = BL_CASES(normal_cases);
    t["lift.grisvard_m"] = BL_INT(grisvard_m, int);
    t["lift.grisvard_j"] = BL_LIST(grisvard_js);
    t["counterexample.indicator_N"] = BL_INT(indicator_samples, int);
    t["counterexample.indicator_floors"] = BL_LIST(indicator_floors);
    t["counterexample.psi_N"] = BL_INT(psi_samples, int);
    t["counterexample.psi_floors"] = BL_LIST(psi_floors);
    t["riesz.pv_epsilon_steps"] = BL_DOUBLE(pv_epsilon_steps);
    t["riesz.pv_N"] = BL_INT(pv_samples, int);
    Field out_dir{[](const ExperimentConfig& c) { return c.out_dir; },
                  [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }, false};
    t["output.dir"] = out_dir;
    auto csv = BL_BOOL(write_csv);
    auto json = BL_BOOL(write_json);
    auto plots = BL_BOOL(write_plots);
    csv.hashed = json.hashed = plots.hashed = false;
    t["output.csv"] = csv;
    t["output.json"] = json;
    t["output.plots"] = plots;
    return t;
  }();
  return fields;
}

#undef BL_DOUBLE
#undef BL_INT
#undef BL_BOOL
#undef BL_LIST
#undef BL_CASES

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_floors(const std::vector<double>& floors, const std::string& key) {
  check(floors.size() >= 2, key + ": at least two floors");
  for (double f : floors) check(f > 0.0, key + ": floors > 0");
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig config;
  std::stringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key=value");
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const auto& t = table();
  auto it = t.find(key);
  if (it == t.end()) throw ConfigError("unknown key " + key);
  it->second.set(*this, key, value);
}

void ExperimentConfig::validate() const {
  try {
    spectral::GridSpec::make(dim, samples, length);
    spectral::GridSpec::make(1, identity_samples_1d, length);
    spectral::GridSpec::make(2, identity_samples_2d, length);
    spectral::GridSpec::make(1, indicator_samples, length);
    spectral::GridSpec::make(1, psi_samples, length);
    spectral::GridSpec::make(1, pv_samples, length);
    for (const auto& c : trace_cases) {
      auto wp = extension::WeightParams::make(c.m, c.a, 1.0);
      require(wp.a < wp.m, "a < m");
    }
    for (const auto& c : p_cases) {
      auto wp = extension::WeightParams::make(c.m, c.a, p);
      require(wp.a < wp.p * (wp.m + 1) - 1.0, "a < p(m+1) - 1");
    }
    require(lift_a > -1.0, "a > -1");
    require(lift_m >= 1 && lift_m <= 3, "1 <= lift.m <= 3");
    require(lift_a < lift_m, "a < m");
    for (const auto& c : normal_cases) {
      require(c.a == std::floor(c.a) && c.a >= 0.0, "normal-trace k must be a nonnegative integer");
      require(c.a < c.m && c.m <= 3, "k < m <= 3");
    }
    require(mironescu_m >= 0 && mironescu_m <= 3, "0 <= mironescu m <= 3");
    require(grisvard_m >= 0 && grisvard_m <= 2, "0 <= grisvard m <= 2");
    for (double l : lift_ls) require(l >= 1.0, "l >= 1");
    for (double j : grisvard_js) require(j >= 1.0, "j >= 1");
    require(lift_ls.size() >= 2 && grisvard_js.size() >= 2, "sweeps need at least two points");
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  check(rho > 1.0, "tq.rho > 1");
  check(t_min >= 0.0 && t_max >= 0.0, "tq.t_min and tq.t_max >= 0");
  check(t_min == 0.0 || t_max == 0.0 || t_min < t_max, "tq.t_min < tq.t_max");
  check(family_count >= 1, "family.count >= 1");
  check(max_mode >= 0 && max_mode <= samples / 2 - 1, "0 <= family.max_mode < N/2");
  check(p >= 1.0, "p >= 1");
  for (double d : dilations) {
    int exponent = 0;
    check(d > 0.0 && std::frexp(d, &exponent) == 0.5, "dilations must be powers of two");
  }
  for (double t : trace_times) check(t > 0.0, "trace times > 0");
  check(trace_times.size() >= 2, "trace.times: at least two times");
  for (double t : identity_times) check(t > 0.0, "identity times > 0");
  check_floors(indicator_floors, "counterexample.indicator_floors");
  check_floors(psi_floors, "counterexample.psi_floors");
  check(pv_epsilon_steps >= 1.0, "epsilon must be at least the grid step");
}

std::string ExperimentConfig::canonical() const {
  std::string s;
  for (const auto& [key, field] : table())
    if (field.hashed) s += key + "=" + field.get(*this) + "\n";
  return s;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> ExperimentConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [key, field] : table()) out.push_back(key);
  return out;
}

}  // namespace besovlab::lab
