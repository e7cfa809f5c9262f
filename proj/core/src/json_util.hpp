#pragma once

// Internal JSON helpers shared by the file formats. Not installed.

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "panda/error.hpp"

namespace panda::detail {

using json = nlohmann::json;

// Strict object reader: every key must be consumed before finish(), so
// unknown keys are rejected.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string context) : object_(object), context_(std::move(context)) {
    if (!object_.is_object()) throw ParseError(context_ + ": expected a JSON object");
  }

  const json& required(std::string_view key) {
    auto it = object_.find(std::string(key));
    if (it == object_.end()) {
      throw ParseError(context_ + ": missing required field '" + std::string(key) + "'");
    }
    seen_.insert(std::string(key));
    return *it;
  }

  const json* optional(std::string_view key) {
    auto it = object_.find(std::string(key));
    if (it == object_.end() || it->is_null()) {
      if (it != object_.end()) seen_.insert(std::string(key));
      return nullptr;
    }
    seen_.insert(std::string(key));
    return &*it;
  }

  double number(std::string_view key) { return as_number(required(key), field(key)); }
  int integer(std::string_view key) { return as_int(required(key), field(key)); }
  std::string string(std::string_view key) { return as_string(required(key), field(key)); }
  bool boolean(std::string_view key) {
    const json& v = required(key);
    if (!v.is_boolean()) throw ParseError(field(key) + ": expected a boolean");
    return v.get<bool>();
  }

  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (seen_.count(it.key()) == 0) {
        throw ParseError(context_ + ": unknown key '" + it.key() + "'");
      }
    }
  }

  std::string field(std::string_view key) const { return context_ + "." + std::string(key); }
  const std::string& context() const { return context_; }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(where + ": expected a finite number");
    return d;
  }

  static int as_int(const json& v, const std::string& where) {
    if (v.is_number_integer()) {
      auto i = v.get<long long>();
      if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
        throw ParseError(where + ": integer out of range");
      }
      return static_cast<int>(i);
    }
    if (v.is_number_float()) {
      double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 2e9) return static_cast<int>(d);
    }
    throw ParseError(where + ": expected an integer");
  }

  static std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError(where + ": expected a string");
    return v.get<std::string>();
  }

 private:
  const json& object_;
  std::string context_;
  std::set<std::string> seen_;
};

// Parses a model payload; malformed text is a corrupt payload.
inline json parse_model_payload(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw CorruptPayloadError(std::string("corrupt model payload: ") + e.what());
  }
}

// Checks the "format" tag of a model document.
inline void expect_format(const json& doc, std::string_view expected) {
  if (!doc.is_object()) throw CorruptPayloadError("corrupt model payload: expected an object");
  auto it = doc.find("format");
  if (it == doc.end() || !it->is_string()) {
    throw CorruptPayloadError("corrupt model payload: missing format tag");
  }
  if (it->get<std::string>() != expected) {
    throw VersionMismatchError("model format '" + it->get<std::string>() + "' does not match '" +
                               std::string(expected) + "'");
  }
}

// Runs `fn`, converting JSON access errors into corrupt-payload errors.
template <typename Fn>
auto guard_payload(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ModelError&) {
    throw;
  } catch (const Error& e) {
    throw CorruptPayloadError(std::string("corrupt model payload: ") + e.what());
  } catch (const json::exception& e) {
    throw CorruptPayloadError(std::string("corrupt model payload: ") + e.what());
  }
}

}  // namespace panda::detail
