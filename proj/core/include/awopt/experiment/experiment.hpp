#pragma once

#include <memory>

#include "awopt/agents/algorithms.hpp"
#include "awopt/envs/dataset.hpp"
#include "awopt/experiment/metrics.hpp"

namespace awopt::experiment {

// Inline dataset generation, used instead of a dataset path.
struct DataGenSpec {
  bool enabled = false;
  std::string policy = "scripted";  // scripted | random
  std::uint32_t episodes = 100;
  double noise = 0.0;
  std::string keep = "positives";
  std::uint64_t seed = 1234;
};

struct ExperimentConfig {
  // env
  std::string env_name = "nav";
  envs::NavConfig nav;
  envs::ReachConfig reach;

  agents::AgentConfig agent;
  cem::CemConfig cem;

  // prior data
  std::string dataset_path;
  DataGenSpec datagen;
  std::size_t replay_capacity = 200000;

  // schedule: offline pretraining then online collection. pretrain_steps is
  // the gradient-step count of the offline phase (the offline/online switch
  // point); the env horizon is a separate env property.
  std::uint32_t pretrain_steps = 2000;
  std::uint32_t online_episodes = 400;
  // When nonzero, online collection additionally stops once this many
  // transitions have been gathered, equalizing experience across algorithms
  // whose episode lengths differ.
  std::uint64_t online_transition_budget = 0;
  std::uint32_t gradient_steps_per_episode = 4;
  std::uint32_t episodes_per_iteration = 1;
  std::uint32_t collect_workers = 1;

  // evaluation
  std::uint32_t eval_every_steps = 1000;    // offline cadence (gradient steps)
  std::uint32_t eval_every_episodes = 100;  // online cadence (episodes)
  std::uint32_t eval_episodes = 100;
  double report_threshold = 0.5;

  std::uint64_t seed = 0;
  std::string out_dir;
  bool record_timing = false;   // measured times in metrics.csv (breaks byte determinism)
  bool write_episodes = false;  // dump collected online episodes as jsonl

  void validate() const;
};

std::unique_ptr<envs::Env> make_env_from_config(const ExperimentConfig& config);

struct EvalResult {
  double success_rate = 0.0;
  double mean_action_select_ms = 0.0;
};

// Deterministic-policy rollouts; mean wall time is measured around every
// action-selection call.
EvalResult evaluate(const agents::Agent& agent, envs::Env& env,
                    std::uint32_t episodes, Rng& rng);

// Shared counters across the two phases.
struct TrainState {
  std::uint64_t gradient_steps = 0;
  std::uint64_t transitions = 0;
  std::uint64_t next_episode_id = 0;
  std::uint32_t eval_counter = 0;
};

// Exactly pretrain_steps gradient iterations on the seeded buffer with no
// environment interaction. Throws ConfigError on an empty buffer.
std::vector<MetricsRecord> run_offline_phase(agents::Agent& agent,
                                             replay::ReplayBuffer& buffer,
                                             const ExperimentConfig& config,
                                             envs::Env& eval_env, TrainState& state,
                                             Rng& train_rng, Rng& eval_rng);

// Alternates episode collection with gradient steps, inserting every episode
// into the buffer. Numeric failures dump a checkpoint into out_dir/crash
// before propagating. Returns the collected episodes through out_episodes
// when non-null.
std::vector<MetricsRecord> run_online_phase(agents::Agent& agent,
                                            replay::ReplayBuffer& buffer,
                                            const ExperimentConfig& config,
                                            envs::Env& train_env, envs::Env& eval_env,
                                            TrainState& state, Rng& train_rng,
                                            Rng& collect_rng, Rng& eval_rng,
                                            std::vector<envs::Episode>* out_episodes);

struct RunResult {
  std::vector<MetricsRecord> records;
  agents::Agent agent;
  std::uint64_t env_steps = 0;  // train env step counter at the end
};

// Full run: build env and agent, seed the buffer, offline then online phase,
// write metrics/checkpoints into out_dir when set.
RunResult run_experiment(const ExperimentConfig& config);

// Checkpoint helpers (actor.bin, critic.bin, critic_target.bin in dir).
void save_agent_checkpoint(const agents::Agent& agent, const std::string& dir);
void load_agent_checkpoint(agents::Agent& agent, const std::string& dir);

}  // namespace awopt::experiment
