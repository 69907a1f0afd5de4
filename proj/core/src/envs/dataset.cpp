#include "awopt/envs/dataset.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "awopt/errors.hpp"

namespace awopt::envs {

using nlohmann::json;

KeepMode keep_mode_from_string(const std::string& s) {
  if (s == "all") return KeepMode::kAll;
  if (s == "positives" || s == "positives_only") return KeepMode::kPositivesOnly;
  if (s == "negatives" || s == "negatives_only") return KeepMode::kNegativesOnly;
  throw ConfigError("unknown keep mode '" + s + "'");
}

std::string to_string(BehaviorTag tag) {
  switch (tag) {
    case BehaviorTag::kDemo: return "demo";
    case BehaviorTag::kScripted: return "scripted";
    case BehaviorTag::kActor: return "actor";
    case BehaviorTag::kCem: return "cem";
    case BehaviorTag::kRandom: return "random";
  }
  return "scripted";
}

BehaviorTag behavior_tag_from_string(const std::string& s) {
  if (s == "demo") return BehaviorTag::kDemo;
  if (s == "scripted") return BehaviorTag::kScripted;
  if (s == "actor") return BehaviorTag::kActor;
  if (s == "cem") return BehaviorTag::kCem;
  if (s == "random") return BehaviorTag::kRandom;
  throw ConfigError("unknown behavior tag '" + s + "'");
}

Episode rollout_episode(Env& env, const Policy& policy, BehaviorTag tag,
                        std::uint64_t episode_id, Rng& rng) {
  Episode episode;
  episode.behavior_tag = tag;
  episode.id = episode_id;

  std::vector<double> obs = env.reset(rng);
  bool done = false;
  while (!done) {
    Transition t;
    t.observation = obs;
    t.action = policy(obs, rng);
    Env::StepResult step = env.step(t.action);
    t.reward = step.reward;
    t.done = step.done;
    t.next_observation = step.observation;
    t.episode_id = episode_id;
    t.behavior_tag = tag;
    done = step.done;
    obs = step.observation;
    episode.transitions.push_back(std::move(t));
  }
  episode.success = episode.transitions.back().reward == 1.0;
  for (Transition& t : episode.transitions) t.episode_success = episode.success;
  return episode;
}

std::vector<Episode> generate_dataset(Env& env, const Policy& policy,
                                      std::size_t episodes, KeepMode keep,
                                      BehaviorTag tag, Rng& rng) {
  if (episodes < 1) throw UsageError("generate_dataset: episodes must be >= 1");
  std::vector<Episode> collected;
  const std::size_t max_attempts = episodes * 100;
  std::size_t attempts = 0;
  std::uint64_t next_id = 0;
  while (collected.size() < episodes && attempts < max_attempts) {
    ++attempts;
    Episode ep = rollout_episode(env, policy, tag, next_id, rng);
    const bool matches = keep == KeepMode::kAll ||
                         (keep == KeepMode::kPositivesOnly && ep.success) ||
                         (keep == KeepMode::kNegativesOnly && !ep.success);
    if (!matches) continue;
    ep.id = next_id++;
    for (Transition& t : ep.transitions) t.episode_id = ep.id;
    collected.push_back(std::move(ep));
  }
  if (collected.empty()) {
    throw DataGenerationError("generate_dataset: no matching episodes after " +
                              std::to_string(attempts) + " rollouts");
  }
  return collected;
}

void save_episodes_jsonl(const std::vector<Episode>& episodes, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw UsageError("save_episodes_jsonl: cannot open " + path);
  for (const Episode& ep : episodes) {
    for (const Transition& t : ep.transitions) {
      json line = {
          {"observation", t.observation},
          {"action", {{"continuous", t.action.continuous}, {"discrete", t.action.discrete}}},
          {"reward", t.reward},
          {"done", t.done},
          {"episode_id", ep.id},
          {"behavior_tag", to_string(ep.behavior_tag)},
      };
      out << line.dump() << '\n';
    }
  }
  if (!out) throw UsageError("save_episodes_jsonl: write failed for " + path);
}

std::vector<Episode> load_episodes_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("load_episodes_jsonl: cannot open " + path);

  std::vector<Episode> episodes;
  Episode current;
  bool have_current = false;

  auto finish_episode = [&]() {
    if (!have_current) return;
    if (current.transitions.empty() || !current.transitions.back().done) {
      throw UsageError("load_episodes_jsonl: episode " + std::to_string(current.id) +
                       " does not end with done=true");
    }
    current.success = current.transitions.back().reward == 1.0;
    for (std::size_t i = 0; i < current.transitions.size(); ++i) {
      Transition& t = current.transitions[i];
      t.episode_success = current.success;
      if (i + 1 < current.transitions.size()) {
        if (t.reward != 0.0) {
          throw UsageError("load_episodes_jsonl: non-final reward in episode " +
                           std::to_string(current.id));
        }
        t.next_observation = current.transitions[i + 1].observation;
      }
    }
    episodes.push_back(std::move(current));
    current = Episode{};
    have_current = false;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw UsageError("load_episodes_jsonl: " + path + ":" + std::to_string(line_no) +
                       ": " + e.what());
    }
    const std::uint64_t id = j.at("episode_id").get<std::uint64_t>();
    if (have_current && id != current.id) finish_episode();
    if (!have_current) {
      current.id = id;
      current.behavior_tag = behavior_tag_from_string(j.at("behavior_tag").get<std::string>());
      have_current = true;
    }
    Transition t;
    t.observation = j.at("observation").get<std::vector<double>>();
    t.action.continuous = j.at("action").at("continuous").get<std::vector<double>>();
    t.action.discrete = j.at("action").at("discrete").get<std::vector<std::uint32_t>>();
    t.reward = j.at("reward").get<double>();
    t.done = j.at("done").get<bool>();
    t.episode_id = id;
    t.behavior_tag = current.behavior_tag;
    current.transitions.push_back(std::move(t));
  }
  finish_episode();
  return episodes;
}

}  // namespace awopt::envs
