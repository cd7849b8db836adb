#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "respoly/errors.hpp"
#include "respoly/realset.hpp"

namespace respoly::io {

/// Formats a double with 17 significant digits, enough to round-trip.
/// Non-finite values become quoted strings so the output stays valid JSON.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Minimal streaming JSON writer with deterministic output: keys appear in
/// call order and numbers go through format_double.
class JsonWriter {
 public:
  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(const std::string& k) {
    separate();
    append_string(k);
    out_ += ':';
    have_key_ = true;
    return *this;
  }

  JsonWriter& value(double v) { return raw(format_double(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(long v) { return raw(std::to_string(v)); }
  JsonWriter& value(std::size_t v) { return raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(const std::string& v) {
    separate();
    append_string(v);
    return *this;
  }
  JsonWriter& null() { return raw("null"); }

  const std::string& str() const { return out_; }

 private:
  JsonWriter& open(char c) {
    separate();
    out_ += c;
    need_comma_.push_back(false);
    return *this;
  }
  JsonWriter& close(char c) {
    out_ += c;
    need_comma_.pop_back();
    if (!need_comma_.empty()) need_comma_.back() = true;
    return *this;
  }
  JsonWriter& raw(const std::string& s) {
    separate();
    out_ += s;
    return *this;
  }
  void separate() {
    if (have_key_) {
      have_key_ = false;
      return;
    }
    if (!need_comma_.empty()) {
      if (need_comma_.back()) out_ += ',';
      need_comma_.back() = true;
    }
  }
  void append_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> need_comma_;
  bool have_key_{false};
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A set with an optional normalization point, as read from JSON input.
struct ProblemSpec {
  RealSet set;
  std::optional<double> x0;
};

/// Accepts either {"intervals": [[a, b], ...], "x0": v} or a bare interval
/// array. The x0 member is optional.
inline ProblemSpec parse_problem(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("invalid JSON: ") + e.what());
  }
  const nlohmann::json* arr = nullptr;
  ProblemSpec spec;
  if (doc.is_array()) {
    arr = &doc;
  } else if (doc.is_object()) {
    if (!doc.contains("intervals"))
      throw InvalidInput("set object needs an \"intervals\" member");
    arr = &doc.at("intervals");
    if (doc.contains("x0")) {
      if (!doc.at("x0").is_number())
        throw InvalidInput("\"x0\" must be a number");
      spec.x0 = doc.at("x0").get<double>();
    }
  } else {
    throw InvalidInput("set must be a JSON array or object");
  }
  if (!arr->is_array() || arr->empty())
    throw InvalidInput("\"intervals\" must be a non-empty array");
  std::vector<Interval> raw;
  for (const auto& item : *arr) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
        !item[1].is_number())
      throw InvalidInput("each interval must be a pair [lo, hi]");
    raw.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  spec.set = validate_set(std::move(raw));
  return spec;
}

/// Loads a problem from an inline JSON string or, when the argument does not
/// look like JSON, from the file at that path.
inline ProblemSpec load_problem(const std::string& arg) {
  const std::size_t first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos &&
      (arg[first] == '{' || arg[first] == '['))
    return parse_problem(arg);
  return parse_problem(read_file(arg));
}

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

inline LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("RESPOLY_LOG");
    if (env == nullptr) return LogLevel::off;
    const std::string s(env);
    if (s == "debug") return LogLevel::debug;
    if (s == "info") return LogLevel::info;
    if (s == "warn") return LogLevel::warn;
    if (s == "error") return LogLevel::error;
    return LogLevel::off;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  if (level < log_threshold()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::fprintf(stderr, "[respoly:%s] %s\n",
               names[static_cast<int>(level)], msg.c_str());
}

}  // namespace respoly::io
