#include "besovlab/lab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace besovlab::lab {

namespace {

using json = nlohmann::ordered_json;

json to_json(const Value& v) {
  return std::visit([](const auto& x) -> json {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(x)) return nullptr;
    }
    return x;
  }, v);
}

json build(const Report& r) {
  json root;
  root["metadata"] = {{"suite", r.suite},
                      {"config_hash", r.config_hash},
                      {"seed", r.seed},
                      {"version", BESOVLAB_VERSION},
                      {"failures", r.failures}};
  json rows = json::array();
  for (const auto& row : r.rows) {
    json o = json::object();
    for (const auto& [k, v] : row.fields()) o[k] = to_json(v);
    rows.push_back(std::move(o));
  }
  root["rows"] = std::move(rows);
  return root;
}

}  // namespace

Row::Row(std::string experiment) { fields_.emplace_back("experiment", Value(std::move(experiment))); }

Row& Row::set(const std::string& key, Value value) {
  for (auto& [k, v] : fields_)
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  fields_.emplace_back(key, std::move(value));
  return *this;
}

const std::string& Row::experiment() const { return std::get<std::string>(fields_.front().second); }

bool Row::has(const std::string& key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return true;
  return false;
}

const Value& Row::at(const std::string& key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return v;
  throw std::out_of_range("row " + experiment() + " has no field " + key);
}

double Row::number(const std::string& key) const {
  const auto& v = at(key);
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (auto b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
  throw std::out_of_range("field " + key + " is not numeric");
}

std::string Row::text(const std::string& key) const { return format_value(at(key)); }

bool Row::flag(const std::string& key) const { return number(key) != 0.0; }

void Report::append(const Report& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

std::vector<const Row*> Report::select(const std::string& experiment) const {
  std::vector<const Row*> out;
  for (const auto& r : rows)
    if (r.experiment() == experiment) out.push_back(&r);
  return out;
}

std::string Report::payload_json() const { return build(*this).dump(1); }

std::string Report::json(const std::string& timestamp, int threads) const {
  auto root = build(*this);
  root["metadata"]["run"] = {{"timestamp", timestamp}, {"threads", threads}};
  return root.dump(1) + "\n";
}

std::string format_value(const Value& v) {
  return std::visit([](const auto& x) -> std::string {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, double>) {
      if (std::isnan(x)) return "nan";
      if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
      return std::string(buf, ptr);
    } else if constexpr (std::is_same_v<T, bool>) {
      return x ? "true" : "false";
    } else if constexpr (std::is_same_v<T, std::string>) {
      return x;
    } else {
      return std::to_string(x);
    }
  }, v);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::pair<std::string, std::string>> Report::csv() const {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> headers;
  std::map<std::string, std::vector<const Row*>> groups;
  for (const auto& r : rows) {
    const auto& e = r.experiment();
    if (!groups.count(e)) order.push_back(e);
    groups[e].push_back(&r);
    auto& h = headers[e];
    for (const auto& [k, v] : r.fields())
      if (std::find(h.begin(), h.end(), k) == h.end()) h.push_back(k);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : order) {
    const auto& h = headers[e];
    std::string doc;
    for (std::size_t i = 0; i < h.size(); ++i) doc += (i ? "," : "") + csv_escape(h[i]);
    doc += "\r\n";
    for (const Row* r : groups[e]) {
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (i) doc += ",";
        if (r->has(h[i])) doc += csv_escape(r->text(h[i]));
      }
      doc += "\r\n";
    }
    out.emplace_back(e, std::move(doc));
  }
  return out;
}

}  // namespace besovlab::lab
