#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "midlayer/rational.hpp"

namespace midlayer {

/// Minimal JSON value with deterministic serialization: object keys emitted
/// in sorted order, doubles with 17 significant digits, rationals as "p/q"
/// strings. Reports must be byte-identical run to run.
class Json {
public:
  using Array = std::vector<Json>;
  using Object = std::map<std::string, Json>;  // sorted keys by construction

  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(static_cast<int64_t>(i)) {}
  Json(int64_t i) : v_(i) {}
  Json(uint64_t u) : v_(u) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(const Rat& r) : v_(r.str()) {}
  Json(Array a) : v_(std::move(a)) {}
  Json(Object o) : v_(std::move(o)) {}

  static Json array() { return Json(Array{}); }
  static Json object() { return Json(Object{}); }

  Json& operator[](const std::string& key) { return std::get<Object>(v_)[key]; }
  void push_back(Json j) { std::get<Array>(v_).push_back(std::move(j)); }

  bool is_object() const { return std::holds_alternative<Object>(v_); }

  std::string dump(int indent = 0) const;

private:
  std::variant<std::nullptr_t, bool, int64_t, uint64_t, double, std::string, Array, Object> v_;
  void write(std::string& out, int indent, int depth) const;
};

/// %.17g with exact round-trip; "inf"/"nan" are serialized as strings.
std::string format_double17(double d);

/// One CSV cell, quoted when needed.
std::string csv_escape(const std::string& s);

}  // namespace midlayer
