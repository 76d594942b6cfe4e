#pragma once

// Field accessors that report the offending path on schema violations.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "blockprof/errors.hpp"

namespace blockprof::detail {

using Json = nlohmann::ordered_json;

inline std::string join_path(std::string_view parent, std::string_view key) {
  if (parent.empty()) return std::string(key);
  return std::string(parent) + "." + std::string(key);
}

inline std::string index_path(std::string_view parent, std::size_t i) {
  return std::string(parent) + "[" + std::to_string(i) + "]";
}

inline const Json& require(const Json& obj, std::string_view key, std::string_view path) {
  if (!obj.is_object()) throw ParseError(std::string(path.empty() ? "<root>" : path) + ": expected an object");
  auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ParseError(join_path(path, key) + ": missing required field");
  return *it;
}

inline const Json* optional_field(const Json& obj, std::string_view key) {
  auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

inline int as_int(const Json& value, std::string_view path) {
  if (!value.is_number_integer()) throw ParseError(std::string(path) + ": expected an integer");
  return value.get<int>();
}

inline double as_number(const Json& value, std::string_view path) {
  if (!value.is_number()) throw ParseError(std::string(path) + ": expected a number");
  return value.get<double>();
}

inline std::string as_string(const Json& value, std::string_view path) {
  if (!value.is_string()) throw ParseError(std::string(path) + ": expected a string");
  return value.get<std::string>();
}

inline const Json& as_array(const Json& value, std::string_view path) {
  if (!value.is_array()) throw ParseError(std::string(path) + ": expected a list");
  return value;
}

inline int get_int(const Json& obj, std::string_view key, std::string_view path) {
  return as_int(require(obj, key, path), join_path(path, key));
}

inline int get_int_or(const Json& obj, std::string_view key, std::string_view path, int fallback) {
  const Json* v = optional_field(obj, key);
  return v ? as_int(*v, join_path(path, key)) : fallback;
}

inline double get_number_or(const Json& obj, std::string_view key, std::string_view path, double fallback) {
  const Json* v = optional_field(obj, key);
  return v ? as_number(*v, join_path(path, key)) : fallback;
}

inline std::string get_string(const Json& obj, std::string_view key, std::string_view path) {
  return as_string(require(obj, key, path), join_path(path, key));
}

inline std::vector<int> get_int_list(const Json& obj, std::string_view key, std::string_view path) {
  const auto field = join_path(path, key);
  const Json& arr = as_array(require(obj, key, path), field);
  std::vector<int> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_int(arr[i], index_path(field, i)));
  return out;
}

inline std::vector<double> get_number_list(const Json& arr, std::string_view path) {
  as_array(arr, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_number(arr[i], index_path(path, i)));
  return out;
}

inline Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace blockprof::detail
