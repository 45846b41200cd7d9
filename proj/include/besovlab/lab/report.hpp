#pragma once

// Report rows, CSV (RFC 4180) and JSON serialization.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace besovlab::lab {

using Value = std::variant<std::int64_t, double, std::string, bool>;

/// Ordered fields; the first is always "experiment".
class Row {
 public:
  explicit Row(std::string experiment);

  Row& set(const std::string& key, Value value);
  Row& set(const std::string& key, int value) { return set(key, Value(std::in_place_type<std::int64_t>, value)); }
  Row& set(const std::string& key, std::size_t value) {
    return set(key, Value(std::in_place_type<std::int64_t>, static_cast<std::int64_t>(value)));
  }
  Row& set(const std::string& key, double value) { return set(key, Value(std::in_place_type<double>, value)); }
  Row& set(const std::string& key, bool value) { return set(key, Value(std::in_place_type<bool>, value)); }
  Row& set(const std::string& key, std::string value) {
    return set(key, Value(std::in_place_type<std::string>, std::move(value)));
  }
  Row& set(const std::string& key, const char* value) { return set(key, Value(std::string(value))); }

  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }
  const std::string& experiment() const;
  bool has(const std::string& key) const;
  /// Numeric field (bools as 0/1); throws std::out_of_range when missing.
  double number(const std::string& key) const;
  std::string text(const std::string& key) const;
  bool flag(const std::string& key) const;

 private:
  const Value& at(const std::string& key) const;
  std::vector<std::pair<std::string, Value>> fields_;
};

struct Report {
  std::string suite;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<Row> rows;
  /// Hard invariant failures (identity residuals over tolerance).
  std::vector<std::string> failures;

  void add(Row row) { rows.push_back(std::move(row)); }
  void append(const Report& other);
  std::vector<const Row*> select(const std::string& experiment) const;

  /// {metadata, rows} without the run section; byte-identical for equal
  /// (config, seed).
  std::string payload_json() const;
  /// The payload plus metadata.run {timestamp, threads}.
  std::string json(const std::string& timestamp, int threads) const;
  /// One CSV document per experiment id, header from the union of keys in
  /// first-seen order.
  std::vector<std::pair<std::string, std::string>> csv() const;
};

std::string csv_escape(const std::string& field);
std::string format_value(const Value& v);

}  // namespace besovlab::lab
