#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qoz {

/// Minimal TOML subset for run configs: [table] headers, key = value with
/// strings, integers, floats, booleans and flat arrays of those, and #
/// comments. Keys are flattened to "table.key". Unsupported constructs
/// (dotted keys, inline tables, multiline strings, dates) raise an error
/// with the line number.
class TomlTable {
 public:
  using Value = std::variant<std::string, std::int64_t, double, bool,
                             std::vector<double>, std::vector<std::string>>;

  static TomlTable parse(const std::string& text);
  static TomlTable parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, std::optional<std::string> fallback = {}) const;
  std::int64_t get_int(const std::string& key, std::optional<std::int64_t> fallback = {}) const;
  double get_double(const std::string& key, std::optional<double> fallback = {}) const;
  bool get_bool(const std::string& key, std::optional<bool> fallback = {}) const;
  std::vector<double> get_double_array(const std::string& key) const;
  std::vector<std::string> get_string_array(const std::string& key) const;

  void set(const std::string& key, Value v) { values_[key] = std::move(v); }
  const std::map<std::string, Value>& entries() const { return values_; }

  /// Render back to TOML text (sorted keys, 17-digit floats); the manifest
  /// format.
  std::string serialize() const;

 private:
  std::map<std::string, Value> values_;
};

}  // namespace qoz
