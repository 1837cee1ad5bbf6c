#pragma once

// Internal helpers for the line-oriented JSON file formats: strict field
// access with line-numbered errors, plus shared canonical orderings.

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <tuple>

#include "tpl/geometry.hpp"

namespace tpl {

[[noreturn]] inline void fail_line(int lineno, const std::string& what) {
  throw std::invalid_argument("line " + std::to_string(lineno) + ": " + what);
}

inline nlohmann::ordered_json parse_json_line(const std::string& line,
                                              int lineno) {
  try {
    return nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail_line(lineno, std::string("invalid JSON: ") + e.what());
  }
}

inline const nlohmann::ordered_json& get_field(
    const nlohmann::ordered_json& j, const std::string& key, int lineno) {
  if (!j.is_object() || !j.contains(key)) {
    fail_line(lineno, "missing field: " + key);
  }
  return j.at(key);
}

inline long long get_int(const nlohmann::ordered_json& j,
                         const std::string& key, int lineno) {
  const auto& f = get_field(j, key, lineno);
  if (!f.is_number_integer()) {
    fail_line(lineno, "field must be an integer: " + key);
  }
  return f.get<long long>();
}

inline std::string get_str(const nlohmann::ordered_json& j,
                           const std::string& key, int lineno) {
  const auto& f = get_field(j, key, lineno);
  if (!f.is_string()) {
    fail_line(lineno, "field must be a string: " + key);
  }
  return f.get<std::string>();
}

inline const nlohmann::ordered_json& get_array(
    const nlohmann::ordered_json& j, const std::string& key, int lineno) {
  const auto& f = get_field(j, key, lineno);
  if (!f.is_array()) {
    fail_line(lineno, "field must be an array: " + key);
  }
  return f;
}

inline bool rect_order_less(const Rect& a, const Rect& b) {
  return std::tie(a.layer, a.x_lo, a.y_lo, a.x_hi, a.y_hi) <
         std::tie(b.layer, b.x_lo, b.y_lo, b.x_hi, b.y_hi);
}

}  // namespace tpl
