#pragma once

#include <optional>

#include <nlohmann/json.hpp>

#include "awopt/experiment/experiment.hpp"

namespace awopt::config {

// A config file describes one experiment plus the seed list to sweep.
struct RunSpec {
  experiment::ExperimentConfig base;
  std::vector<std::uint64_t> seeds = {0};
  // Present when the file carried an [env.action_spec] section; bounds and
  // cardinalities must match the env, loss weights are taken from here.
  std::optional<action::ActionSpec> action_spec;
};

// Fully-resolved default config tree for an algorithm preset.
nlohmann::json default_config_json(const std::string& algorithm);

// Typed view of a config tree. Unknown keys and out-of-range values raise
// ConfigError naming the offending field path.
RunSpec run_spec_from_json(const nlohmann::json& root);

// Resolved round-trip form (sorted keys, all fields explicit).
nlohmann::json run_spec_to_json(const RunSpec& spec);

// Applies "dotted.path=value" to the config tree. Keys without a section
// prefix address the agent table.
void apply_override_to_json(nlohmann::json& root, const std::string& assignment);

// FNV-1a over the canonical dump; stable under key reordering.
std::uint64_t canonical_hash(const nlohmann::json& value);
std::string canonical_hash_hex(const nlohmann::json& value);

nlohmann::json action_spec_to_json(const action::ActionSpec& spec);
action::ActionSpec action_spec_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace awopt::config
