#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace awopt::config {

// TOML subset used by the experiment config files: table headers, dotted
// keys, basic/literal strings, integers, floats, booleans, arrays and inline
// tables. Parses into a JSON object tree; throws ConfigError with a line
// reference on malformed input.
nlohmann::json toml_parse(const std::string& text);
nlohmann::json toml_parse_file(const std::string& path);

// Emits the JSON object tree back as TOML (scalar keys first, then nested
// tables as [dotted.sections]).
std::string toml_emit(const nlohmann::json& root);

// Parses a single TOML scalar/array value, e.g. an --override payload.
// Unquoted text that is not a valid value is returned as a plain string.
nlohmann::json toml_value_or_string(const std::string& text);

}  // namespace awopt::config
