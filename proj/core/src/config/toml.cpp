#include "awopt/config/toml.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "awopt/errors.hpp"

namespace awopt::config {

using nlohmann::json;

namespace {

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Parser {
 public:
  explicit Parser(const std::string& text) : src_(text) {}

  json parse_document() {
    json root = json::object();
    json* table = &root;
    skip_blank();
    while (!eof()) {
      if (peek() == '[') {
        table = parse_table_header(root);
      } else {
        parse_keyval(*table);
      }
      expect_line_end();
      skip_blank();
    }
    return root;
  }

  json parse_single_value() {
    skip_spaces();
    json v = parse_value();
    skip_spaces();
    if (!eof()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError("toml:" + std::to_string(line_) + ": " + message);
  }

  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  char take() {
    const char c = src_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) take();
  }

  void skip_comment() {
    if (!eof() && peek() == '#') {
      while (!eof() && peek() != '\n') take();
    }
  }

  // Whitespace, comments and newlines between statements.
  void skip_blank() {
    while (!eof()) {
      skip_spaces();
      skip_comment();
      if (!eof() && peek() == '\n') {
        take();
        continue;
      }
      break;
    }
  }

  void expect_line_end() {
    skip_spaces();
    skip_comment();
    if (eof()) return;
    if (peek() != '\n') fail("expected end of line");
    take();
  }

  std::string parse_key() {
    skip_spaces();
    if (eof()) fail("expected a key");
    if (peek() == '"' || peek() == '\'') return parse_string();
    std::string key;
    while (!eof() && is_bare_key_char(peek())) key.push_back(take());
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::vector<std::string> parse_dotted_key() {
    std::vector<std::string> parts{parse_key()};
    skip_spaces();
    while (!eof() && peek() == '.') {
      take();
      parts.push_back(parse_key());
      skip_spaces();
    }
    return parts;
  }

  json* descend(json& root, const std::vector<std::string>& parts, bool final_is_table) {
    json* node = &root;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const bool last = i + 1 == parts.size();
      if (last && !final_is_table) return node;
      json& child = (*node)[parts[i]];
      if (child.is_null()) child = json::object();
      if (!child.is_object()) fail("key '" + parts[i] + "' is not a table");
      node = &child;
    }
    return node;
  }

  json* parse_table_header(json& root) {
    take();  // '['
    if (!eof() && peek() == '[') fail("arrays of tables are not supported");
    const std::vector<std::string> parts = parse_dotted_key();
    skip_spaces();
    if (eof() || take() != ']') fail("expected ']' in table header");
    std::string path;
    for (const auto& p : parts) path += (path.empty() ? "" : ".") + p;
    if (defined_tables_.count(path)) fail("table [" + path + "] defined twice");
    defined_tables_.insert(path);
    return descend(root, parts, true);
  }

  void parse_keyval(json& table) {
    const std::vector<std::string> parts = parse_dotted_key();
    skip_spaces();
    if (eof() || take() != '=') fail("expected '=' after key");
    skip_spaces();
    json value = parse_value();
    json* parent = descend(table, parts, false);
    const std::string& leaf = parts.back();
    if (parent->contains(leaf)) fail("duplicate key '" + leaf + "'");
    (*parent)[leaf] = std::move(value);
  }

  json parse_value() {
    skip_spaces();
    if (eof()) fail("expected a value");
    const char c = peek();
    if (c == '"' || c == '\'') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    return parse_scalar();
  }

  std::string parse_string() {
    const char quote = take();
    std::string out;
    while (true) {
      if (eof()) fail("unterminated string");
      char c = take();
      if (c == quote) break;
      if (c == '\n') fail("newline in string");
      if (quote == '"' && c == '\\') {
        if (eof()) fail("unterminated escape");
        const char esc = take();
        switch (esc) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unsupported escape \\") + esc);
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  json parse_array() {
    take();  // '['
    json arr = json::array();
    while (true) {
      skip_blank();
      if (eof()) fail("unterminated array");
      if (peek() == ']') {
        take();
        break;
      }
      arr.push_back(parse_value());
      skip_blank();
      if (eof()) fail("unterminated array");
      if (peek() == ',') {
        take();
        continue;
      }
      if (peek() == ']') {
        take();
        break;
      }
      fail("expected ',' or ']' in array");
    }
    return arr;
  }

  json parse_inline_table() {
    take();  // '{'
    json obj = json::object();
    skip_spaces();
    if (!eof() && peek() == '}') {
      take();
      return obj;
    }
    while (true) {
      skip_blank();
      const std::string key = parse_key();
      skip_spaces();
      if (eof() || take() != '=') fail("expected '=' in inline table");
      skip_spaces();
      if (obj.contains(key)) fail("duplicate key '" + key + "'");
      obj[key] = parse_value();
      skip_blank();
      if (eof()) fail("unterminated inline table");
      if (peek() == ',') {
        take();
        continue;
      }
      if (peek() == '}') {
        take();
        break;
      }
      fail("expected ',' or '}' in inline table");
    }
    return obj;
  }

  json parse_scalar() {
    std::string token;
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == ',' || c == ']' || c == '}' ||
          c == '#') {
        break;
      }
      token.push_back(take());
    }
    if (token == "true") return true;
    if (token == "false") return false;
    if (token.empty()) fail("expected a value");

    std::string digits;
    for (char c : token) {
      if (c != '_') digits.push_back(c);
    }
    const bool is_float = digits.find_first_of(".eE") != std::string::npos ||
                          digits.find("inf") != std::string::npos ||
                          digits.find("nan") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(digits, &used);
        if (used != digits.size()) throw std::invalid_argument(digits);
        return v;
      }
      const long long v = std::stoll(digits, &used);
      if (used != digits.size()) throw std::invalid_argument(digits);
      return v;
    } catch (const std::exception&) {
      fail("invalid value '" + token + "'");
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::set<std::string> defined_tables_;
};

bool needs_quoting(const std::string& key) {
  if (key.empty()) return true;
  for (char c : key) {
    if (!is_bare_key_char(c)) return true;
  }
  return false;
}

std::string emit_key(const std::string& key) {
  if (!needs_quoting(key)) return key;
  std::string out = "\"";
  for (char c : key) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string emit_value(const json& v);

std::string emit_number(const json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  const double d = v.get<double>();
  std::ostringstream ss;
  ss.precision(17);
  ss << d;
  std::string s = ss.str();
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string emit_value(const json& v) {
  if (v.is_string()) {
    std::string out = "\"";
    for (char c : v.get<std::string>()) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
      }
    }
    return out + "\"";
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return emit_number(v);
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ", ";
      out += emit_value(v[i]);
    }
    return out + "]";
  }
  if (v.is_object()) {
    std::string out = "{";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ", ";
      first = false;
      out += emit_key(it.key()) + " = " + emit_value(it.value());
    }
    return out + "}";
  }
  throw ConfigError("toml_emit: unsupported value type");
}

void emit_table(const json& table, const std::string& path, std::string& out) {
  std::vector<std::pair<std::string, const json*>> scalars;
  std::vector<std::pair<std::string, const json*>> subtables;
  for (auto it = table.begin(); it != table.end(); ++it) {
    if (it.value().is_object()) {
      subtables.emplace_back(it.key(), &it.value());
    } else {
      scalars.emplace_back(it.key(), &it.value());
    }
  }
  if (!path.empty() && (!scalars.empty() || subtables.empty())) {
    out += "[" + path + "]\n";
  }
  for (const auto& [key, value] : scalars) {
    out += emit_key(key) + " = " + emit_value(*value) + "\n";
  }
  if (!scalars.empty() || path.empty()) out += "\n";
  for (const auto& [key, value] : subtables) {
    emit_table(*value, path.empty() ? key : path + "." + key, out);
  }
}

}  // namespace

json toml_parse(const std::string& text) { return Parser(text).parse_document(); }

json toml_parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return toml_parse(buffer.str());
}

std::string toml_emit(const json& root) {
  if (!root.is_object()) throw ConfigError("toml_emit: root must be a table");
  std::string out;
  emit_table(root, "", out);
  return out;
}

json toml_value_or_string(const std::string& text) {
  try {
    return Parser(text).parse_single_value();
  } catch (const ConfigError&) {
    return json(text);
  }
}

}  // namespace awopt::config
