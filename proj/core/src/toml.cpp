#include "qoz/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qoz/csv.hpp"

namespace qoz {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("toml: line " + std::to_string(line) + ": " + what);
}

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// remove a trailing comment that is not inside a string
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

bool parse_number(const std::string& tok, std::int64_t& iv, double& dv, bool& is_int) {
  std::string t;
  for (char c : tok)
    if (c != '_') t += c;
  const char* b = t.data();
  const char* e = b + t.size();
  auto ir = std::from_chars(b, e, iv);
  if (ir.ec == std::errc() && ir.ptr == e) {
    is_int = true;
    return true;
  }
  auto dr = std::from_chars(b, e, dv);
  if (dr.ec == std::errc() && dr.ptr == e) {
    is_int = false;
    return true;
  }
  return false;
}

TomlTable::Value parse_scalar(const std::string& tok, int line) {
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
    return tok.substr(1, tok.size() - 2);
  if (tok == "true") return true;
  if (tok == "false") return false;
  std::int64_t iv;
  double dv;
  bool is_int;
  if (parse_number(tok, iv, dv, is_int)) {
    if (is_int) return iv;
    return dv;
  }
  fail(line, "cannot parse value '" + tok + "'");
}

std::vector<std::string> split_array_items(const std::string& body, int line) {
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (char c : body) {
    if (c == '"') in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  const std::string last = strip(cur);
  if (!last.empty()) items.push_back(last);
  if (in_str) fail(line, "unterminated string in array");
  return items;
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text) {
  TomlTable table;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::string s = strip(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed table header");
      section = strip(s.substr(1, s.size() - 2));
      if (section.empty()) fail(line, "empty table name");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    std::string key = strip(s.substr(0, eq));
    const std::string val = strip(s.substr(eq + 1));
    if (key.empty() || val.empty()) fail(line, "empty key or value");
    if (key.find('.') != std::string::npos)
      fail(line, "dotted keys are not supported");
    if (!section.empty()) key = section + "." + key;

    if (val.front() == '[') {
      if (val.back() != ']') fail(line, "arrays must close on the same line");
      const std::vector<std::string> items =
          split_array_items(val.substr(1, val.size() - 2), line);
      bool all_numbers = true;
      for (const std::string& it : items)
        if (!it.empty() && it.front() == '"') all_numbers = false;
      if (all_numbers) {
        std::vector<double> arr;
        for (const std::string& it : items) {
          const Value v = parse_scalar(it, line);
          if (std::holds_alternative<double>(v))
            arr.push_back(std::get<double>(v));
          else if (std::holds_alternative<std::int64_t>(v))
            arr.push_back(static_cast<double>(std::get<std::int64_t>(v)));
          else
            fail(line, "mixed array types");
        }
        table.values_[key] = std::move(arr);
      } else {
        std::vector<std::string> arr;
        for (const std::string& it : items) {
          const Value v = parse_scalar(it, line);
          if (!std::holds_alternative<std::string>(v)) fail(line, "mixed array types");
          arr.push_back(std::get<std::string>(v));
        }
        table.values_[key] = std::move(arr);
      }
    } else {
      table.values_[key] = parse_scalar(val, line);
    }
  }
  return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("toml: cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse(buf.str());
}

namespace {
[[noreturn]] void missing(const std::string& key) {
  throw std::runtime_error("config: missing key '" + key + "'");
}
}  // namespace

std::string TomlTable::get_string(const std::string& key,
                                  std::optional<std::string> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    missing(key);
  }
  if (!std::holds_alternative<std::string>(it->second))
    throw std::runtime_error("config: '" + key + "' is not a string");
  return std::get<std::string>(it->second);
}

std::int64_t TomlTable::get_int(const std::string& key,
                                std::optional<std::int64_t> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    missing(key);
  }
  if (!std::holds_alternative<std::int64_t>(it->second))
    throw std::runtime_error("config: '" + key + "' is not an integer");
  return std::get<std::int64_t>(it->second);
}

double TomlTable::get_double(const std::string& key, std::optional<double> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    missing(key);
  }
  if (std::holds_alternative<double>(it->second)) return std::get<double>(it->second);
  if (std::holds_alternative<std::int64_t>(it->second))
    return static_cast<double>(std::get<std::int64_t>(it->second));
  throw std::runtime_error("config: '" + key + "' is not a number");
}

bool TomlTable::get_bool(const std::string& key, std::optional<bool> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    missing(key);
  }
  if (!std::holds_alternative<bool>(it->second))
    throw std::runtime_error("config: '" + key + "' is not a boolean");
  return std::get<bool>(it->second);
}

std::vector<double> TomlTable::get_double_array(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) missing(key);
  if (!std::holds_alternative<std::vector<double>>(it->second))
    throw std::runtime_error("config: '" + key + "' is not a number array");
  return std::get<std::vector<double>>(it->second);
}

std::vector<std::string> TomlTable::get_string_array(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) missing(key);
  if (!std::holds_alternative<std::vector<std::string>>(it->second))
    throw std::runtime_error("config: '" + key + "' is not a string array");
  return std::get<std::vector<std::string>>(it->second);
}

std::string TomlTable::serialize() const {
  // group flattened keys back under their [section] so the output reparses
  std::map<std::string, std::map<std::string, const Value*>> sections;
  for (const auto& [key, value] : values_) {
    const std::size_t dot = key.rfind('.');
    if (dot == std::string::npos)
      sections[""][key] = &value;
    else
      sections[key.substr(0, dot)][key.substr(dot + 1)] = &value;
  }

  std::ostringstream os;
  for (const auto& [section, entries] : sections) {
    if (!section.empty()) os << '[' << section << "]\n";
    for (const auto& [key, vp] : entries) {
      const Value& value = *vp;
      os << key << " = ";
      if (std::holds_alternative<std::string>(value))
        os << '"' << std::get<std::string>(value) << '"';
      else if (std::holds_alternative<std::int64_t>(value))
        os << std::get<std::int64_t>(value);
      else if (std::holds_alternative<double>(value))
        os << fmt17(std::get<double>(value));
      else if (std::holds_alternative<bool>(value))
        os << (std::get<bool>(value) ? "true" : "false");
      else if (std::holds_alternative<std::vector<double>>(value)) {
        os << '[';
        const auto& arr = std::get<std::vector<double>>(value);
        for (std::size_t i = 0; i < arr.size(); ++i)
          os << (i ? ", " : "") << fmt17(arr[i]);
        os << ']';
      } else {
        os << '[';
        const auto& arr = std::get<std::vector<std::string>>(value);
        for (std::size_t i = 0; i < arr.size(); ++i)
          os << (i ? ", " : "") << '"' << arr[i] << '"';
        os << ']';
      }
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace qoz
