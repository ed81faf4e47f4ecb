// Flat, typed key = value configuration with [section] headers.
//
//   # comment
//   [kernel]
//   family = "exponential"
//   l_s = inf
//   [sweep]
//   values = [64, 128, 256]
//
// Values are numbers (inf allowed), booleans, double-quoted strings, or
// one-level arrays of those. Keys are addressed as "section.key".
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace aoi2d {

struct ConfigValue {
  enum class Type { Number, Bool, String, Array };
  Type type = Type::Number;
  double number = 0.0;
  bool boolean = false;
  std::string string;
  std::vector<ConfigValue> array;
  int line = 0;
  int column = 0;
};

class Config {
public:
  /// Throws ConfigError "<source>:<line>:<col>: message" on syntax errors.
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const ConfigValue* find(const std::string& key) const;

  double number(const std::string& key, double fallback) const;
  double number(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> strings(const std::string& key) const;

  void set(const std::string& key, ConfigValue v) { values_[key] = std::move(v); }
  void set_number(const std::string& key, double v);

  /// Throws ConfigError for the first key not in `allowed`.
  void check_known(const std::set<std::string>& allowed) const;

  /// "<source>:<line>:<col>" of a key, or the source alone.
  std::string where(const std::string& key) const;

  const std::map<std::string, ConfigValue>& values() const { return values_; }

private:
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

  std::map<std::string, ConfigValue> values_;
  std::string source_;
};

}  // namespace aoi2d
