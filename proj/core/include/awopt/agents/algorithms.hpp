#pragma once

#include <map>
#include <string>

#include "awopt/agents/agent.hpp"

namespace awopt::agents {

// Preset configurations for the three base algorithms and their named
// single-feature variants:
//   qt_opt   critic-only training, CEM exploration, max_q targets,
//            unbalanced batches, auxiliary actor
//   awac     actor+critic, actor-only exploration, expectation targets
//   aw_opt   positive filtering, balanced batches, episode-level hybrid
//            exploration, max_q targets with actor candidate injection
// Named variants: awac_p, awac_p_elrs, awac_p_elrs_maxq,
//   awac_p_elrs_maxq_actor_mean, aw_opt_no_positive_filtering,
//   aw_opt_no_actor_candidate, aw_opt_no_hybrid_exploration.
// Overrides are flat key=value pairs applied on top of the preset; a
// ConfigError is thrown for unknown keys, bad values or contradictory
// combinations.
AgentConfig make_algorithm(const std::string& name,
                           const std::map<std::string, std::string>& overrides = {});

bool is_known_algorithm(const std::string& name);

// Applies one override to an agent config. Keys match the config file's
// agent-section fields.
void apply_agent_override(AgentConfig& config, const std::string& key,
                          const std::string& value);

}  // namespace awopt::agents
