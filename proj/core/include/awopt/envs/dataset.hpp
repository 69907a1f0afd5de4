#pragma once

#include <string>
#include <vector>

#include "awopt/envs/scripted.hpp"

namespace awopt::envs {

enum class KeepMode : std::uint8_t { kAll = 0, kPositivesOnly = 1, kNegativesOnly = 2 };

KeepMode keep_mode_from_string(const std::string& s);

// Roll out the policy for one full episode.
Episode rollout_episode(Env& env, const Policy& policy, BehaviorTag tag,
                        std::uint64_t episode_id, Rng& rng);

// Roll out until `episodes` episodes matching the keep filter are collected.
// Attempts are capped at 100x the request; if the cap is hit with nothing
// collected a DataGenerationError is thrown, otherwise the partial set is
// returned.
std::vector<Episode> generate_dataset(Env& env, const Policy& policy,
                                      std::size_t episodes, KeepMode keep,
                                      BehaviorTag tag, Rng& rng);

// One transition per line: observation, action, reward, done, episode id,
// behavior tag. next observations are reconstructed on load from consecutive
// lines of the same episode.
void save_episodes_jsonl(const std::vector<Episode>& episodes, const std::string& path);
std::vector<Episode> load_episodes_jsonl(const std::string& path);

}  // namespace awopt::envs
