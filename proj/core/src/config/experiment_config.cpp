#include "awopt/config/experiment_config.hpp"

#include <cstdio>
#include <set>

#include "awopt/config/toml.hpp"
#include "awopt/errors.hpp"

namespace awopt::config {

using nlohmann::json;

namespace {

// Tracks consumed keys so unknown fields can be reported with their path.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected a table");
  }

  bool has(const char* key) const { return obj_.contains(key); }

  double number(const char* key, double fallback) {
    mark(key);
    if (!obj_.contains(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const char* key, std::int64_t fallback) {
    mark(key);
    if (!obj_.contains(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      throw ConfigError(field(key) + ": expected an integer");
    }
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) {
    const std::int64_t v = integer(key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw ConfigError(field(key) + ": expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
  }

  bool boolean(const char* key, bool fallback) {
    mark(key);
    if (!obj_.contains(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true/false");
    return v.get<bool>();
  }

  std::string str(const char* key, const std::string& fallback) {
    mark(key);
    if (!obj_.contains(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }

  const json* array(const char* key) {
    mark(key);
    if (!obj_.contains(key)) return nullptr;
    const json& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError(field(key) + ": expected an array");
    return &v;
  }

  const json* child(const char* key) {
    mark(key);
    if (!obj_.contains(key)) return nullptr;
    const json& v = obj_.at(key);
    if (!v.is_object()) throw ConfigError(field(key) + ": expected a table");
    return &v;
  }

  std::string field(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(path_ + "." + it.key() + ": unknown field");
      }
    }
  }

 private:
  void mark(const char* key) { seen_.insert(key); }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

json empty_object() { return json::object(); }

}  // namespace

json action_spec_to_json(const action::ActionSpec& spec) {
  json j;
  j["continuous"] = json::array();
  for (const auto& c : spec.continuous) {
    j["continuous"].push_back(
        {{"name", c.name}, {"low", c.lower}, {"high", c.upper}, {"weight", c.loss_weight}});
  }
  j["discrete"] = json::array();
  for (const auto& d : spec.discrete) {
    j["discrete"].push_back(
        {{"name", d.name}, {"cardinality", d.cardinality}, {"weight", d.loss_weight}});
  }
  return j;
}

action::ActionSpec action_spec_from_json(const json& j, const std::string& path) {
  Section section(j, path);
  action::ActionSpec spec;
  if (const json* cont = section.array("continuous")) {
    for (std::size_t i = 0; i < cont->size(); ++i) {
      Section item((*cont)[i], path + ".continuous[" + std::to_string(i) + "]");
      action::ContinuousSubaction c;
      c.name = item.str("name", "");
      c.lower = item.number("low", 0.0);
      c.upper = item.number("high", 1.0);
      c.loss_weight = item.number("weight", 1.0);
      item.finish();
      spec.continuous.push_back(std::move(c));
    }
  }
  if (const json* disc = section.array("discrete")) {
    for (std::size_t i = 0; i < disc->size(); ++i) {
      Section item((*disc)[i], path + ".discrete[" + std::to_string(i) + "]");
      action::DiscreteSubaction d;
      d.name = item.str("name", "");
      d.cardinality = static_cast<std::uint32_t>(item.unsigned_integer("cardinality", 2));
      d.loss_weight = item.number("weight", 1.0);
      item.finish();
      spec.discrete.push_back(std::move(d));
    }
  }
  section.finish();
  spec.validate();
  return spec;
}

json default_config_json(const std::string& algorithm) {
  experiment::ExperimentConfig base;
  base.agent = agents::make_algorithm(algorithm);
  // Out of the box: scripted positive demos on the nav task.
  base.datagen.enabled = true;
  base.datagen.policy = "scripted";
  base.datagen.episodes = 100;
  base.datagen.noise = 0.25;
  base.datagen.keep = "positives";
  base.datagen.seed = 1234;

  RunSpec spec;
  spec.base = base;
  spec.seeds = {0};
  return run_spec_to_json(spec);
}

RunSpec run_spec_from_json(const json& root) {
  Section top(root, "config");
  RunSpec spec;
  experiment::ExperimentConfig& cfg = spec.base;

  if (const json* env = top.child("env")) {
    Section s(*env, "env");
    cfg.env_name = s.str("name", cfg.env_name);
    if (cfg.env_name == "nav") {
      cfg.nav.horizon = static_cast<std::uint32_t>(s.unsigned_integer("horizon", cfg.nav.horizon));
      cfg.nav.success_radius = s.number("success_radius", cfg.nav.success_radius);
      cfg.nav.obstacles_min = static_cast<std::uint32_t>(s.unsigned_integer("obstacles_min", cfg.nav.obstacles_min));
      cfg.nav.obstacles_max = static_cast<std::uint32_t>(s.unsigned_integer("obstacles_max", cfg.nav.obstacles_max));
      if (cfg.nav.obstacles_min > cfg.nav.obstacles_max) {
        throw ConfigError("env.obstacles_min: must be <= env.obstacles_max");
      }
    } else {
      cfg.reach.horizon = static_cast<std::uint32_t>(s.unsigned_integer("horizon", cfg.reach.horizon));
      cfg.reach.success_radius = s.number("success_radius", cfg.reach.success_radius);
      s.unsigned_integer("obstacles_min", 0);
      s.unsigned_integer("obstacles_max", 0);
    }
    if (const json* action_spec = s.child("action_spec")) {
      spec.action_spec = action_spec_from_json(*action_spec, "env.action_spec");
    }
    s.finish();
  }

  if (const json* agent = top.child("agent")) {
    Section s(*agent, "agent");
    const std::string algorithm = s.str("algorithm", "aw_opt");
    if (!agents::is_known_algorithm(algorithm)) {
      throw ConfigError("agent.algorithm: unknown algorithm '" + algorithm + "'");
    }
    agents::AgentConfig a = agents::make_algorithm(algorithm);
    a.gamma = s.number("gamma", a.gamma);
    a.tau = s.number("tau", a.tau);
    a.lambda = s.number("lambda", a.lambda);
    a.adv_clip = s.number("adv_clip", a.adv_clip);
    a.n_adv_samples = static_cast<std::uint32_t>(s.unsigned_integer("n_adv_samples", a.n_adv_samples));
    if (s.has("target_strategy")) {
      a.target_strategy = agents::target_strategy_from_string(s.str("target_strategy", ""));
    }
    a.positive_filtering = s.boolean("positive_filtering", a.positive_filtering);
    a.balanced_critic_batches = s.boolean("balanced_critic_batches", a.balanced_critic_batches);
    if (s.has("actor_filter")) {
      const std::string f = s.str("actor_filter", "episode");
      if (f == "episode") a.actor_filter = replay::ActorFilter::kEpisode;
      else if (f == "final_step") a.actor_filter = replay::ActorFilter::kFinalStep;
      else throw ConfigError("agent.actor_filter: expected episode|final_step");
    }
    if (s.has("exploration")) {
      a.exploration = agents::exploration_from_string(s.str("exploration", ""));
    }
    a.p_critic = s.number("p_critic", a.p_critic);
    a.aux_actor = s.boolean("aux_actor", a.aux_actor);
    if (const json* hidden = s.array("hidden")) {
      a.hidden.clear();
      for (std::size_t i = 0; i < hidden->size(); ++i) {
        const json& v = (*hidden)[i];
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
          throw ConfigError("agent.hidden[" + std::to_string(i) + "]: expected a positive integer");
        }
        a.hidden.push_back(v.get<std::size_t>());
      }
      if (a.hidden.empty()) throw ConfigError("agent.hidden: must not be empty");
    }
    a.optimizer = s.str("optimizer", a.optimizer);
    a.actor_lr = s.number("actor_lr", a.actor_lr);
    a.critic_lr = s.number("critic_lr", a.critic_lr);
    a.batch_size = static_cast<std::uint32_t>(s.unsigned_integer("batch_size", a.batch_size));
    s.finish();
    cfg.agent = a;
  }

  if (const json* cem = top.child("cem")) {
    Section s(*cem, "cem");
    cfg.cem.iterations = static_cast<std::uint32_t>(s.unsigned_integer("iterations", cfg.cem.iterations));
    cfg.cem.population = static_cast<std::uint32_t>(s.unsigned_integer("population", cfg.cem.population));
    cfg.cem.elite_count = static_cast<std::uint32_t>(s.unsigned_integer("elite_count", cfg.cem.elite_count));
    if (const json* stds = s.array("initial_std")) {
      cfg.cem.initial_std.clear();
      for (const json& v : *stds) {
        if (!v.is_number()) throw ConfigError("cem.initial_std: expected numbers");
        cfg.cem.initial_std.push_back(v.get<double>());
      }
    }
    s.finish();
  }

  if (const json* data = top.child("data")) {
    Section s(*data, "data");
    cfg.dataset_path = s.str("path", "");
    if (const json* gen = s.child("generate")) {
      Section g(*gen, "data.generate");
      cfg.datagen.enabled = true;
      cfg.datagen.policy = g.str("policy", cfg.datagen.policy);
      cfg.datagen.episodes = static_cast<std::uint32_t>(g.unsigned_integer("episodes", cfg.datagen.episodes));
      cfg.datagen.noise = g.number("noise", cfg.datagen.noise);
      cfg.datagen.keep = g.str("keep", cfg.datagen.keep);
      cfg.datagen.seed = g.unsigned_integer("seed", cfg.datagen.seed);
      g.finish();
    }
    s.finish();
    if (!cfg.dataset_path.empty() && cfg.datagen.enabled) {
      throw ConfigError("data: specify either data.path or data.generate, not both");
    }
  }

  if (const json* exp = top.child("experiment")) {
    Section s(*exp, "experiment");
    cfg.pretrain_steps = static_cast<std::uint32_t>(s.unsigned_integer("pretrain_steps", cfg.pretrain_steps));
    cfg.online_episodes = static_cast<std::uint32_t>(s.unsigned_integer("online_episodes", cfg.online_episodes));
    cfg.online_transition_budget =
        s.unsigned_integer("online_transition_budget", cfg.online_transition_budget);
    cfg.gradient_steps_per_episode = static_cast<std::uint32_t>(
        s.unsigned_integer("gradient_steps_per_episode", cfg.gradient_steps_per_episode));
    cfg.episodes_per_iteration = static_cast<std::uint32_t>(
        s.unsigned_integer("episodes_per_iteration", cfg.episodes_per_iteration));
    cfg.collect_workers = static_cast<std::uint32_t>(s.unsigned_integer("collect_workers", cfg.collect_workers));
    cfg.eval_every_steps = static_cast<std::uint32_t>(s.unsigned_integer("eval_every_steps", cfg.eval_every_steps));
    cfg.eval_every_episodes = static_cast<std::uint32_t>(
        s.unsigned_integer("eval_every_episodes", cfg.eval_every_episodes));
    cfg.eval_episodes = static_cast<std::uint32_t>(s.unsigned_integer("eval_episodes", cfg.eval_episodes));
    cfg.report_threshold = s.number("report_threshold", cfg.report_threshold);
    cfg.replay_capacity = s.unsigned_integer("replay_capacity", cfg.replay_capacity);
    cfg.out_dir = s.str("out_dir", cfg.out_dir);
    cfg.record_timing = s.boolean("record_timing", cfg.record_timing);
    cfg.write_episodes = s.boolean("write_episodes", cfg.write_episodes);
    if (const json* seeds = s.array("seeds")) {
      spec.seeds.clear();
      for (const json& v : *seeds) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
          throw ConfigError("experiment.seeds: expected non-negative integers");
        }
        spec.seeds.push_back(v.get<std::uint64_t>());
      }
      if (spec.seeds.empty()) throw ConfigError("experiment.seeds: must not be empty");
    }
    s.finish();
  }

  top.finish();
  cfg.seed = spec.seeds.front();
  cfg.validate();
  return spec;
}

json run_spec_to_json(const RunSpec& spec) {
  const experiment::ExperimentConfig& cfg = spec.base;
  json root = empty_object();

  json env = empty_object();
  env["name"] = cfg.env_name;
  if (cfg.env_name == "nav") {
    env["horizon"] = cfg.nav.horizon;
    env["success_radius"] = cfg.nav.success_radius;
    env["obstacles_min"] = cfg.nav.obstacles_min;
    env["obstacles_max"] = cfg.nav.obstacles_max;
  } else {
    env["horizon"] = cfg.reach.horizon;
    env["success_radius"] = cfg.reach.success_radius;
  }
  if (spec.action_spec) {
    env["action_spec"] = action_spec_to_json(*spec.action_spec);
  }
  root["env"] = env;

  const agents::AgentConfig& a = cfg.agent;
  json agent = empty_object();
  agent["algorithm"] = a.algorithm;
  agent["gamma"] = a.gamma;
  agent["tau"] = a.tau;
  agent["lambda"] = a.lambda;
  agent["adv_clip"] = a.adv_clip;
  agent["n_adv_samples"] = a.n_adv_samples;
  agent["target_strategy"] = agents::to_string(a.target_strategy);
  agent["positive_filtering"] = a.positive_filtering;
  agent["balanced_critic_batches"] = a.balanced_critic_batches;
  agent["actor_filter"] =
      a.actor_filter == replay::ActorFilter::kEpisode ? "episode" : "final_step";
  agent["exploration"] = agents::to_string(a.exploration);
  agent["p_critic"] = a.p_critic;
  agent["aux_actor"] = a.aux_actor;
  agent["hidden"] = a.hidden;
  agent["optimizer"] = a.optimizer;
  agent["actor_lr"] = a.actor_lr;
  agent["critic_lr"] = a.critic_lr;
  agent["batch_size"] = a.batch_size;
  root["agent"] = agent;

  json cem = empty_object();
  cem["iterations"] = cfg.cem.iterations;
  cem["population"] = cfg.cem.population;
  cem["elite_count"] = cfg.cem.elite_count;
  cem["initial_std"] = cfg.cem.initial_std;
  root["cem"] = cem;

  json data = empty_object();
  if (!cfg.dataset_path.empty()) data["path"] = cfg.dataset_path;
  if (cfg.datagen.enabled) {
    data["generate"] = {{"policy", cfg.datagen.policy},
                        {"episodes", cfg.datagen.episodes},
                        {"noise", cfg.datagen.noise},
                        {"keep", cfg.datagen.keep},
                        {"seed", cfg.datagen.seed}};
  }
  root["data"] = data;

  json exp = empty_object();
  exp["pretrain_steps"] = cfg.pretrain_steps;
  exp["online_episodes"] = cfg.online_episodes;
  exp["online_transition_budget"] = cfg.online_transition_budget;
  exp["gradient_steps_per_episode"] = cfg.gradient_steps_per_episode;
  exp["episodes_per_iteration"] = cfg.episodes_per_iteration;
  exp["collect_workers"] = cfg.collect_workers;
  exp["eval_every_steps"] = cfg.eval_every_steps;
  exp["eval_every_episodes"] = cfg.eval_every_episodes;
  exp["eval_episodes"] = cfg.eval_episodes;
  exp["report_threshold"] = cfg.report_threshold;
  exp["replay_capacity"] = cfg.replay_capacity;
  exp["seeds"] = spec.seeds;
  if (!cfg.out_dir.empty()) exp["out_dir"] = cfg.out_dir;
  exp["record_timing"] = cfg.record_timing;
  exp["write_episodes"] = cfg.write_episodes;
  root["experiment"] = exp;

  return root;
}

void apply_override_to_json(json& root, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  if (path.find('.') == std::string::npos) {
    path = "agent." + path;  // bare keys address the agent table
  }

  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string part =
        path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override '" + assignment + "': empty path segment");
    if (dot == std::string::npos) {
      (*node)[part] = toml_value_or_string(value);
      break;
    }
    json& child = (*node)[part];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) {
      throw ConfigError("override '" + assignment + "': " + part + " is not a table");
    }
    node = &child;
    start = dot + 1;
  }
}

std::uint64_t canonical_hash(const json& value) {
  const std::string dump = value.dump();
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

std::string canonical_hash_hex(const json& value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(canonical_hash(value)));
  return std::string(buf);
}

}  // namespace awopt::config
