#include "aoi2d/config.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "aoi2d/constants.hpp"
#include "aoi2d/error.hpp"

namespace aoi2d {

namespace {

class Parser {
public:
  Parser(const std::string& text, const std::string& source) : text_(text), source_(source) {}

  std::map<std::string, ConfigValue> run() {
    std::map<std::string, ConfigValue> out;
    std::string section;
    while (!eof()) {
      skip_blank();
      if (eof()) break;
      if (peek() == '\n') {
        advance();
        continue;
      }
      if (peek() == '#') {
        skip_comment();
        continue;
      }
      if (peek() == '[') {
        advance();
        skip_spaces();
        section = identifier("section name");
        skip_spaces();
        expect(']');
        end_of_line();
        continue;
      }
      const int kl = line_, kc = col_;
      const std::string key = identifier("key");
      skip_spaces();
      expect('=');
      skip_spaces();
      ConfigValue v = value(true);
      end_of_line();
      const std::string path = section.empty() ? key : section + "." + key;
      if (out.count(path)) error(kl, kc, "duplicate key '" + path + "'");
      out[path] = std::move(v);
    }
    return out;
  }

private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  void skip_blank() { skip_spaces(); }
  void skip_comment() {
    while (!eof() && peek() != '\n') advance();
  }
  void end_of_line() {
    skip_spaces();
    if (peek() == '#') skip_comment();
    if (!eof() && peek() != '\n') error(line_, col_, std::string("unexpected '") + peek() + "'");
  }
  void expect(char c) {
    if (peek() != c) error(line_, col_, std::string("expected '") + c + "'");
    advance();
  }

  [[noreturn]] void error(int line, int col, const std::string& msg) const {
    std::ostringstream os;
    os << source_ << ':' << line << ':' << col << ": " << msg;
    throw ConfigError(os.str());
  }

  std::string identifier(const char* what) {
    std::string s;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      s += peek(), advance();
    if (s.empty()) error(line_, col_, std::string("expected ") + what);
    return s;
  }

  ConfigValue value(bool allow_array) {
    ConfigValue v;
    v.line = line_;
    v.column = col_;
    const char c = peek();
    if (c == '"') {
      advance();
      v.type = ConfigValue::Type::String;
      while (!eof() && peek() != '"' && peek() != '\n') {
        if (peek() == '\\') {
          advance();
          if (eof()) break;
        }
        v.string += peek();
        advance();
      }
      if (peek() != '"') error(v.line, v.column, "unterminated string");
      advance();
      return v;
    }
    if (c == '[') {
      if (!allow_array) error(line_, col_, "nested arrays are not supported");
      advance();
      v.type = ConfigValue::Type::Array;
      while (true) {
        skip_array_space();
        if (peek() == ']') {
          advance();
          return v;
        }
        v.array.push_back(value(false));
        skip_array_space();
        if (peek() == ',') {
          advance();
          continue;
        }
        if (peek() == ']') {
          advance();
          return v;
        }
        error(line_, col_, "expected ',' or ']' in array");
      }
    }
    std::string word;
    while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' &&
           peek() != ']' && peek() != '#')
      word += peek(), advance();
    if (word.empty()) error(v.line, v.column, "expected a value");
    if (word == "true" || word == "false") {
      v.type = ConfigValue::Type::Bool;
      v.boolean = word == "true";
      return v;
    }
    if (word == "inf" || word == "+inf") {
      v.number = kInf;
      return v;
    }
    try {
      std::size_t used = 0;
      v.number = std::stod(word, &used);
      if (used != word.size()) throw std::invalid_argument(word);
    } catch (const std::exception&) {
      error(v.line, v.column, "not a number, boolean or quoted string: '" + word + "'");
    }
    return v;
  }

  void skip_array_space() {
    while (!eof()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (peek() == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  const std::string& source_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const char* type_name(ConfigValue::Type t) {
  switch (t) {
    case ConfigValue::Type::Number: return "number";
    case ConfigValue::Type::Bool: return "boolean";
    case ConfigValue::Type::String: return "string";
    case ConfigValue::Type::Array: return "array";
  }
  return "?";
}

nlohmann::json value_to_json(const ConfigValue& v) {
  switch (v.type) {
    case ConfigValue::Type::Number:
      if (std::isinf(v.number)) return v.number > 0 ? "inf" : "-inf";
      return v.number;
    case ConfigValue::Type::Bool: return v.boolean;
    case ConfigValue::Type::String: return v.string;
    case ConfigValue::Type::Array: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& e : v.array) a.push_back(value_to_json(e));
      return a;
    }
  }
  return nullptr;
}

ConfigValue value_from_json(const nlohmann::json& j, const std::string& key) {
  ConfigValue v;
  if (j.is_number()) {
    v.number = j.get<double>();
  } else if (j.is_boolean()) {
    v.type = ConfigValue::Type::Bool;
    v.boolean = j.get<bool>();
  } else if (j.is_string()) {
    const std::string s = j.get<std::string>();
    // Infinity is stored as a string because JSON has no literal for it.
    if (s == "inf" || s == "-inf") {
      v.number = s == "inf" ? kInf : -kInf;
    } else {
      v.type = ConfigValue::Type::String;
      v.string = s;
    }
  } else if (j.is_array()) {
    v.type = ConfigValue::Type::Array;
    for (const auto& e : j) v.array.push_back(value_from_json(e, key));
  } else {
    throw ConfigError("unsupported JSON value", key);
  }
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  c.values_ = Parser(text, source).run();
  return c;
}

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  Config c;
  c.source_ = "<manifest>";
  for (const auto& [section, body] : j.items()) {
    if (body.is_object()) {
      for (const auto& [key, v] : body.items())
        c.values_[section + "." + key] = value_from_json(v, section + "." + key);
    } else {
      c.values_[section] = value_from_json(body, section);
    }
  }
  return c;
}

nlohmann::json Config::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [path, v] : values_) {
    const auto dot = path.find('.');
    if (dot == std::string::npos) {
      j[path] = value_to_json(v);
    } else {
      j[path.substr(0, dot)][path.substr(dot + 1)] = value_to_json(v);
    }
  }
  return j;
}

const ConfigValue* Config::find(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::string Config::where(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v || v->line == 0) return source_;
  return source_ + ":" + std::to_string(v->line) + ":" + std::to_string(v->column);
}

void Config::fail(const std::string& key, const std::string& msg) const {
  throw ConfigError(where(key) + ": " + msg, key);
}

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

double Config::number(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) fail(key, "missing required key");
  if (v->type == ConfigValue::Type::String && (v->string == "inf" || v->string == "+inf")) return kInf;
  if (v->type != ConfigValue::Type::Number)
    fail(key, std::string("expected a number, got a ") + type_name(v->type));
  return v->number;
}

long Config::integer(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const double x = number(key);
  if (!std::isfinite(x) || std::floor(x) != x) fail(key, "expected an integer");
  return static_cast<long>(x);
}

bool Config::boolean(const std::string& key, bool fallback) const {
  const ConfigValue* v = find(key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::Bool)
    fail(key, std::string("expected a boolean, got a ") + type_name(v->type));
  return v->boolean;
}

std::string Config::string(const std::string& key, const std::string& fallback) const {
  const ConfigValue* v = find(key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::String)
    fail(key, std::string("expected a string, got a ") + type_name(v->type));
  return v->string;
}

std::vector<double> Config::numbers(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) fail(key, "missing required key");
  if (v->type == ConfigValue::Type::Number) return {v->number};
  if (v->type != ConfigValue::Type::Array) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v->array) {
    if (e.type == ConfigValue::Type::String && e.string == "inf") {
      out.push_back(kInf);
      continue;
    }
    if (e.type != ConfigValue::Type::Number) fail(key, "expected an array of numbers");
    out.push_back(e.number);
  }
  return out;
}

std::vector<std::string> Config::strings(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) return {};
  if (v->type == ConfigValue::Type::String) return {v->string};
  if (v->type != ConfigValue::Type::Array) fail(key, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v->array) {
    if (e.type != ConfigValue::Type::String) fail(key, "expected an array of strings");
    out.push_back(e.string);
  }
  return out;
}

void Config::set_number(const std::string& key, double v) {
  ConfigValue c;
  c.number = v;
  values_[key] = c;
}

void Config::check_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, v] : values_)
    if (!allowed.count(key)) fail(key, "unknown key '" + key + "'");
}

}  // namespace aoi2d
