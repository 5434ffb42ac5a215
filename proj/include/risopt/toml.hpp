// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "risopt/errors.hpp"

// Minimal TOML reader/writer covering the config schema: named tables,
// bare keys, strings, booleans, integers, floats (incl. inf/nan), and
// single-line arrays of scalars. Not a general TOML implementation.
namespace risopt::toml {

struct Value {
  enum class Kind { kBool, kInt, kFloat, kString, kArray };
  Kind kind = Kind::kString;
  bool boolean = false;
  long long integer = 0;
  double number = 0.0;
  std::string text;
  std::vector<Value> array;

  static Value of_bool(bool v) { Value x; x.kind = Kind::kBool; x.boolean = v; return x; }
  static Value of_int(long long v) { Value x; x.kind = Kind::kInt; x.integer = v; return x; }
  static Value of_float(double v) { Value x; x.kind = Kind::kFloat; x.number = v; return x; }
  static Value of_string(std::string v) { Value x; x.kind = Kind::kString; x.text = std::move(v); return x; }
  static Value of_array(std::vector<Value> v) { Value x; x.kind = Kind::kArray; x.array = std::move(v); return x; }

  bool as_bool(const std::string& key) const {
    if (kind != Kind::kBool) throw ConfigError("config key '" + key + "' must be a boolean");
    return boolean;
  }
  long long as_int(const std::string& key) const {
    if (kind != Kind::kInt) throw ConfigError("config key '" + key + "' must be an integer");
    return integer;
  }
  double as_double(const std::string& key) const {
    if (kind == Kind::kFloat) return number;
    if (kind == Kind::kInt) return static_cast<double>(integer);
    throw ConfigError("config key '" + key + "' must be a number");
  }
  const std::string& as_string(const std::string& key) const {
    if (kind != Kind::kString) throw ConfigError("config key '" + key + "' must be a string");
    return text;
  }
  std::vector<double> as_double_array(const std::string& key) const {
    if (kind != Kind::kArray) throw ConfigError("config key '" + key + "' must be an array");
    std::vector<double> out;
    out.reserve(array.size());
    for (const Value& v : array) out.push_back(v.as_double(key));
    return out;
  }
};

/// Flat document: dotted path ("optimizer.mu_init") -> value.
using Table = std::map<std::string, Value>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool valid_key(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

inline Value parse_scalar(std::string_view raw, int line_no);

inline Value parse_value(std::string_view raw, int line_no) {
  raw = trim(raw);
  if (raw.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing value");
  if (raw.front() == '[') {
    if (raw.back() != ']') {
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated array");
    }
    std::vector<Value> items;
    std::string_view body = raw.substr(1, raw.size() - 2);
    size_t pos = 0;
    while (pos < body.size()) {
      size_t end = pos;
      bool in_string = false;
      while (end < body.size() && (in_string || body[end] != ',')) {
        if (body[end] == '"') in_string = !in_string;
        ++end;
      }
      std::string_view item = trim(body.substr(pos, end - pos));
      if (!item.empty()) items.push_back(parse_scalar(item, line_no));
      pos = end + 1;
    }
    return Value::of_array(std::move(items));
  }
  return parse_scalar(raw, line_no);
}

inline Value parse_scalar(std::string_view raw, int line_no) {
  raw = trim(raw);
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    std::string out;
    for (size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        ++i;
        out.push_back(raw[i] == 'n' ? '\n' : raw[i]);
      } else {
        out.push_back(raw[i]);
      }
    }
    return Value::of_string(std::move(out));
  }
  if (raw == "true") return Value::of_bool(true);
  if (raw == "false") return Value::of_bool(false);
  if (raw == "inf" || raw == "+inf") return Value::of_float(std::numeric_limits<double>::infinity());
  if (raw == "-inf") return Value::of_float(-std::numeric_limits<double>::infinity());
  if (raw == "nan") return Value::of_float(std::numeric_limits<double>::quiet_NaN());

  const std::string text(raw);
  bool integral = !text.empty();
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) continue;
    if ((c == '+' || c == '-') && i == 0) continue;
    integral = false;
    break;
  }
  char* end = nullptr;
  if (integral) {
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end && *end == '\0') return Value::of_int(v);
  }
  const double v = std::strtod(text.c_str(), &end);
  if (end && *end == '\0' && end != text.c_str()) return Value::of_float(v);
  throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value '" + text + "'");
}

inline std::string strip_comment(std::string_view line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

}  // namespace detail

inline Table parse(std::string_view text) {
  Table table;
  std::string prefix;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view raw_line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string no_comment = detail::strip_comment(raw_line);
    const std::string_view line = detail::trim(no_comment);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed table header");
      }
      const std::string_view name = detail::trim(line.substr(1, line.size() - 2));
      if (!detail::valid_key(name)) {
        throw ConfigError("line " + std::to_string(line_no) + ": invalid table name");
      }
      prefix = std::string(name) + ".";
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = detail::trim(line.substr(0, eq));
    if (!detail::valid_key(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": invalid key '" + std::string(key) + "'");
    }
    const std::string full_key = prefix + std::string(key);
    if (table.count(full_key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + full_key + "'");
    }
    table[full_key] = detail::parse_value(line.substr(eq + 1), line_no);
  }
  return table;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string emit_value(const Value& v) {
  switch (v.kind) {
    case Value::Kind::kBool:
      return v.boolean ? "true" : "false";
    case Value::Kind::kInt:
      return std::to_string(v.integer);
    case Value::Kind::kFloat: {
      if (std::isnan(v.number)) return "nan";
      if (std::isinf(v.number)) return v.number > 0 ? "inf" : "-inf";
      return format_double(v.number);
    }
    case Value::Kind::kString: {
      std::string out = "\"";
      for (char c : v.text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('"');
      return out;
    }
    case Value::Kind::kArray: {
      std::string out = "[";
      for (size_t i = 0; i < v.array.size(); ++i) {
        if (i) out += ", ";
        out += emit_value(v.array[i]);
      }
      out.push_back(']');
      return out;
    }
  }
  return {};
}

inline const Value* find(const Table& table, const std::string& key) {
  const auto it = table.find(key);
  return it == table.end() ? nullptr : &it->second;
}

}  // namespace risopt::toml
