#include "awopt/agents/algorithms.hpp"

#include <charconv>

#include "awopt/errors.hpp"

namespace awopt::agents {
namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("override " + key + ": expected a number, got '" + value + "'");
  }
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("override " + key + ": expected a non-negative integer, got '" +
                      value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("override " + key + ": expected true/false, got '" + value + "'");
}

AgentConfig base_qt_opt() {
  AgentConfig c;
  c.algorithm = "qt_opt";
  c.target_strategy = TargetStrategy::kMaxQ;
  c.exploration = ExplorationStrategy::kCriticOnly;
  c.positive_filtering = false;
  c.balanced_critic_batches = false;
  c.aux_actor = true;
  return c;
}

AgentConfig base_awac() {
  AgentConfig c;
  c.algorithm = "awac";
  c.target_strategy = TargetStrategy::kAwacExpectation;
  c.exploration = ExplorationStrategy::kActorOnly;
  c.positive_filtering = false;
  c.balanced_critic_batches = false;
  return c;
}

AgentConfig base_aw_opt() {
  AgentConfig c;
  c.algorithm = "aw_opt";
  c.target_strategy = TargetStrategy::kMaxQActorCandidate;
  c.exploration = ExplorationStrategy::kEpisodeSwitch;
  c.p_critic = 0.8;
  c.positive_filtering = true;
  c.balanced_critic_batches = true;
  return c;
}

}  // namespace

bool is_known_algorithm(const std::string& name) {
  static const char* kNames[] = {
      "qt_opt", "awac", "aw_opt",
      "awac_p", "awac_p_elrs", "awac_p_elrs_maxq", "awac_p_elrs_maxq_actor_mean",
      "aw_opt_no_positive_filtering", "aw_opt_no_actor_candidate",
      "aw_opt_no_hybrid_exploration"};
  for (const char* n : kNames) {
    if (name == n) return true;
  }
  return false;
}

void apply_agent_override(AgentConfig& config, const std::string& key,
                          const std::string& value) {
  if (key == "gamma") config.gamma = parse_double(key, value);
  else if (key == "tau") config.tau = parse_double(key, value);
  else if (key == "lambda") config.lambda = parse_double(key, value);
  else if (key == "adv_clip") config.adv_clip = parse_double(key, value);
  else if (key == "n_adv_samples") config.n_adv_samples = parse_u32(key, value);
  else if (key == "target_strategy") config.target_strategy = target_strategy_from_string(value);
  else if (key == "positive_filtering") config.positive_filtering = parse_bool(key, value);
  else if (key == "balanced_critic_batches") config.balanced_critic_batches = parse_bool(key, value);
  else if (key == "actor_filter") {
    if (value == "episode") config.actor_filter = replay::ActorFilter::kEpisode;
    else if (value == "final_step") config.actor_filter = replay::ActorFilter::kFinalStep;
    else throw ConfigError("override actor_filter: expected episode|final_step");
  }
  else if (key == "exploration") config.exploration = exploration_from_string(value);
  else if (key == "p_critic") config.p_critic = parse_double(key, value);
  else if (key == "aux_actor") config.aux_actor = parse_bool(key, value);
  else if (key == "optimizer") config.optimizer = value;
  else if (key == "actor_lr") config.actor_lr = parse_double(key, value);
  else if (key == "critic_lr") config.critic_lr = parse_double(key, value);
  else if (key == "batch_size") config.batch_size = parse_u32(key, value);
  else if (key == "hidden") {
    std::vector<std::size_t> dims;
    std::size_t start = 0;
    while (start <= value.size()) {
      const std::size_t comma = value.find(',', start);
      const std::string part = value.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) dims.push_back(parse_u32(key, part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (dims.empty()) throw ConfigError("override hidden: expected comma-separated widths");
    config.hidden = dims;
  }
  else throw ConfigError("unknown agent override '" + key + "'");
}

AgentConfig make_algorithm(const std::string& name,
                           const std::map<std::string, std::string>& overrides) {
  AgentConfig config;
  if (name == "qt_opt") {
    config = base_qt_opt();
  } else if (name == "awac") {
    config = base_awac();
  } else if (name == "awac_p") {
    config = base_awac();
    config.positive_filtering = true;
    config.balanced_critic_batches = true;
  } else if (name == "awac_p_elrs") {
    config = base_awac();
    config.positive_filtering = true;
    config.balanced_critic_batches = true;
    config.exploration = ExplorationStrategy::kEpisodeSwitch;
  } else if (name == "awac_p_elrs_maxq") {
    config = base_awac();
    config.positive_filtering = true;
    config.balanced_critic_batches = true;
    config.exploration = ExplorationStrategy::kEpisodeSwitch;
    config.target_strategy = TargetStrategy::kMaxQ;
  } else if (name == "awac_p_elrs_maxq_actor_mean") {
    config = base_awac();
    config.positive_filtering = true;
    config.balanced_critic_batches = true;
    config.exploration = ExplorationStrategy::kEpisodeSwitch;
    config.target_strategy = TargetStrategy::kMaxQActorMean;
  } else if (name == "aw_opt") {
    config = base_aw_opt();
  } else if (name == "aw_opt_no_positive_filtering") {
    config = base_aw_opt();
    config.positive_filtering = false;
  } else if (name == "aw_opt_no_actor_candidate") {
    config = base_aw_opt();
    config.target_strategy = TargetStrategy::kMaxQ;
  } else if (name == "aw_opt_no_hybrid_exploration") {
    config = base_aw_opt();
    config.exploration = ExplorationStrategy::kActorOnly;
  } else {
    throw ConfigError("unknown algorithm '" + name + "'");
  }

  for (const auto& [key, value] : overrides) {
    apply_agent_override(config, key, value);
  }
  config.validate();
  return config;
}

}  // namespace awopt::agents
