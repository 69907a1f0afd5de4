#pragma once

#include <string>

#include "awopt/agents/networks.hpp"
#include "awopt/cem.hpp"
#include "awopt/optimizer.hpp"
#include "awopt/replay.hpp"

namespace awopt::agents {

// How the action of the Bellman backup is chosen.
enum class TargetStrategy : std::uint8_t {
  kAwacExpectation = 0,   // expectation of Q under actor samples
  kMaxQ = 1,              // CEM maximization of the target critic
  kMaxQActorMean = 2,     // CEM initialized at the actor's action
  kMaxQActorCandidate = 3 // actor's action injected into every CEM round
};

enum class ExplorationStrategy : std::uint8_t {
  kActorOnly = 0,
  kCriticOnly = 1,    // implicit CEM policy on the critic
  kEpisodeSwitch = 2, // one coin per episode
  kStepSwitch = 3     // one coin per step
};

TargetStrategy target_strategy_from_string(const std::string& s);
std::string to_string(TargetStrategy s);
ExplorationStrategy exploration_from_string(const std::string& s);
std::string to_string(ExplorationStrategy s);

struct AgentConfig {
  std::string algorithm = "aw_opt";
  double gamma = 0.95;              // discount
  double tau = 0.01;                // Polyak coefficient
  double lambda = 1.0;              // advantage temperature
  double adv_clip = 20.0;           // cap on the exponentiated weight
  std::uint32_t n_adv_samples = 10; // actor samples for baselines/expectations
  TargetStrategy target_strategy = TargetStrategy::kMaxQActorCandidate;
  bool positive_filtering = true;
  bool balanced_critic_batches = true;
  replay::ActorFilter actor_filter = replay::ActorFilter::kEpisode;
  ExplorationStrategy exploration = ExplorationStrategy::kEpisodeSwitch;
  double p_critic = 0.8;            // critic share for the random switchers
  // When set, the actor is trained without advantage weighting and is never
  // consulted for exploration or targets (the qt_opt auxiliary actor, kept
  // around so inference timing can be compared on equal networks).
  bool aux_actor = false;

  std::vector<std::size_t> hidden = {64, 64};
  std::string optimizer = "adam";
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  std::uint32_t batch_size = 64;

  // Throws ConfigError on contradictory settings.
  void validate() const;
};

struct Agent {
  action::ActionSpec spec;
  AgentConfig config;
  cem::CemConfig cem_config;
  ActorNet actor;
  CriticNets critic;
  nn::OptimizerState actor_opt;
  nn::OptimizerState critic_opt;
};

Agent make_agent(std::size_t observation_dim, const action::ActionSpec& spec,
                 const AgentConfig& config, const cem::CemConfig& cem_config, Rng& rng);

// Bellman backup value for one transition. Terminal transitions never
// bootstrap: the target is exactly the reward.
double bellman_target(const CriticNets& critic, const ActorNet& actor,
                      const envs::Transition& transition, TargetStrategy strategy,
                      double gamma, std::uint32_t n_adv_samples,
                      const cem::CemConfig& cem_config, Rng& rng);

// One mean-squared Bellman error step on the online critic followed by the
// Polyak target update. Returns the pre-update loss.
double critic_update(CriticNets& critic, const replay::Batch& batch,
                     const std::vector<double>& targets, nn::OptimizerState& optimizer);

// Q(s, a_data) minus the Monte-Carlo mean of Q over actor samples at s, both
// under the target critic.
double advantage(const CriticNets& critic, const ActorNet& actor,
                 const envs::Transition& transition, std::uint32_t n_adv_samples,
                 Rng& rng);

// Exponentiated-advantage weighted imitation step on the actor. With
// positive filtering enabled every batch element must pass the success
// filter, otherwise a UsageError is thrown. Empty batches are a no-op.
double actor_update(ActorNet& actor, const CriticNets& critic,
                    const replay::Batch& batch, const AgentConfig& config,
                    nn::OptimizerState& optimizer, Rng& rng);

// Per-episode coin for the episode-level switcher; true selects the critic.
bool draw_episode_policy_coin(const AgentConfig& config, Rng& rng);

action::MixedAction select_exploration_action(const Agent& agent,
                                              const std::vector<double>& observation,
                                              ExplorationStrategy strategy,
                                              bool episode_use_critic, Rng& rng);

// Deterministic evaluation-time action: distribution mode for actor-bearing
// algorithms, plain CEM on the critic for qt_opt.
action::MixedAction greedy_action(const Agent& agent,
                                  const std::vector<double>& observation, Rng& rng);

}  // namespace awopt::agents
