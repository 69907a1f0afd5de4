#include <chrono>
#include <filesystem>
#include <thread>

#include "awopt/checkpoint.hpp"
#include "awopt/errors.hpp"
#include "awopt/experiment/experiment.hpp"

namespace awopt::experiment {
namespace {

namespace fs = std::filesystem;

envs::BehaviorTag episode_tag(const agents::AgentConfig& config, bool coin) {
  switch (config.exploration) {
    case agents::ExplorationStrategy::kActorOnly:
      return envs::BehaviorTag::kActor;
    case agents::ExplorationStrategy::kCriticOnly:
      return envs::BehaviorTag::kCem;
    case agents::ExplorationStrategy::kEpisodeSwitch:
      return coin ? envs::BehaviorTag::kCem : envs::BehaviorTag::kActor;
    case agents::ExplorationStrategy::kStepSwitch:
      return config.p_critic >= 0.5 ? envs::BehaviorTag::kCem : envs::BehaviorTag::kActor;
  }
  return envs::BehaviorTag::kActor;
}

// One critic step plus one actor step from the buffer.
void gradient_step(agents::Agent& agent, replay::ReplayBuffer& buffer, Rng& rng) {
  const agents::AgentConfig& cfg = agent.config;

  replay::Batch critic_batch =
      cfg.balanced_critic_batches
          ? buffer.sample_critic_batch(cfg.batch_size, rng)
          : buffer.sample_uniform_batch(cfg.batch_size, rng);
  std::vector<double> targets(critic_batch.size());
  for (std::size_t i = 0; i < critic_batch.size(); ++i) {
    targets[i] = agents::bellman_target(agent.critic, agent.actor,
                                        critic_batch.transitions[i],
                                        cfg.target_strategy, cfg.gamma,
                                        cfg.n_adv_samples, agent.cem_config, rng);
  }
  agents::critic_update(agent.critic, critic_batch, targets, agent.critic_opt);

  replay::Batch actor_batch;
  if (cfg.positive_filtering && !cfg.aux_actor) {
    if (buffer.positive_size() > 0) {
      actor_batch = buffer.sample_actor_batch(cfg.batch_size, rng, cfg.actor_filter);
    }
    // No positives yet: the filtered batch is empty and the update is a no-op.
  } else {
    actor_batch = buffer.sample_uniform_batch(cfg.batch_size, rng);
  }
  agents::actor_update(agent.actor, agent.critic, actor_batch, cfg, agent.actor_opt, rng);
}

envs::Episode collect_episode(agents::Agent& agent, envs::Env& env,
                              std::uint64_t episode_id, Rng& rng) {
  const bool coin = agents::draw_episode_policy_coin(agent.config, rng);
  envs::Episode episode;
  episode.id = episode_id;
  episode.behavior_tag = episode_tag(agent.config, coin);

  std::vector<double> obs = env.reset(rng);
  bool done = false;
  while (!done) {
    envs::Transition t;
    t.observation = obs;
    t.action = agents::select_exploration_action(agent, obs, agent.config.exploration,
                                                 coin, rng);
    const envs::Env::StepResult step = env.step(t.action);
    t.reward = step.reward;
    t.done = step.done;
    t.next_observation = step.observation;
    t.episode_id = episode_id;
    t.behavior_tag = episode.behavior_tag;
    done = step.done;
    obs = step.observation;
    episode.transitions.push_back(std::move(t));
  }
  episode.success = episode.transitions.back().reward == 1.0;
  for (envs::Transition& t : episode.transitions) t.episode_success = episode.success;
  return episode;
}

MetricsRecord eval_record(agents::Agent& agent, envs::Env& eval_env,
                          const ExperimentConfig& config, TrainState& state,
                          Phase phase, Rng& eval_rng) {
  Rng rng = eval_rng.split(state.eval_counter++);
  const EvalResult r = evaluate(agent, eval_env, config.eval_episodes, rng);
  MetricsRecord record;
  record.step = state.gradient_steps;
  record.transitions = state.transitions;
  record.phase = phase;
  record.success_rate = r.success_rate;
  record.action_select_ms = r.mean_action_select_ms;
  return record;
}

void dump_crash_checkpoint(const agents::Agent& agent, const std::string& out_dir) {
  if (out_dir.empty()) return;
  const fs::path dir = fs::path(out_dir) / "crash";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return;
  save_agent_checkpoint(agent, dir.string());
}

}  // namespace

void ExperimentConfig::validate() const {
  if (env_name != "nav" && env_name != "reach") {
    throw ConfigError("env.name: unknown env '" + env_name + "'");
  }
  if (eval_episodes < 1) throw ConfigError("experiment.eval_episodes must be >= 1");
  if (eval_every_steps < 1) throw ConfigError("experiment.eval_every_steps must be >= 1");
  if (eval_every_episodes < 1) throw ConfigError("experiment.eval_every_episodes must be >= 1");
  if (episodes_per_iteration < 1) throw ConfigError("experiment.episodes_per_iteration must be >= 1");
  if (collect_workers < 1) throw ConfigError("experiment.collect_workers must be >= 1");
  if (gradient_steps_per_episode < 1) throw ConfigError("experiment.gradient_steps_per_episode must be >= 1");
  if (replay_capacity < 1) throw ConfigError("experiment.replay_capacity must be >= 1");
  if (datagen.enabled && datagen.policy != "scripted" && datagen.policy != "random") {
    throw ConfigError("data.generate.policy must be 'scripted' or 'random'");
  }
  agent.validate();
  cem.validate();
}

std::unique_ptr<envs::Env> make_env_from_config(const ExperimentConfig& config) {
  if (config.env_name == "nav") return std::make_unique<envs::NavEnv>(config.nav);
  if (config.env_name == "reach") return std::make_unique<envs::ReachEnv>(config.reach);
  throw ConfigError("env.name: unknown env '" + config.env_name + "'");
}

EvalResult evaluate(const agents::Agent& agent, envs::Env& env,
                    std::uint32_t episodes, Rng& rng) {
  if (episodes < 1) throw UsageError("evaluate: episodes must be >= 1");
  std::uint32_t successes = 0;
  double total_ms = 0.0;
  std::uint64_t calls = 0;
  for (std::uint32_t e = 0; e < episodes; ++e) {
    std::vector<double> obs = env.reset(rng);
    bool done = false;
    double reward = 0.0;
    while (!done) {
      const auto start = std::chrono::steady_clock::now();
      const action::MixedAction act = agents::greedy_action(agent, obs, rng);
      const auto stop = std::chrono::steady_clock::now();
      total_ms += std::chrono::duration<double, std::milli>(stop - start).count();
      ++calls;
      const envs::Env::StepResult step = env.step(act);
      done = step.done;
      reward = step.reward;
      obs = step.observation;
    }
    if (reward == 1.0) ++successes;
  }
  EvalResult result;
  result.success_rate = static_cast<double>(successes) / static_cast<double>(episodes);
  result.mean_action_select_ms = calls > 0 ? total_ms / static_cast<double>(calls) : 0.0;
  return result;
}

std::vector<MetricsRecord> run_offline_phase(agents::Agent& agent,
                                             replay::ReplayBuffer& buffer,
                                             const ExperimentConfig& config,
                                             envs::Env& eval_env, TrainState& state,
                                             Rng& train_rng, Rng& eval_rng) {
  if (buffer.empty()) {
    throw ConfigError("run_offline_phase: replay buffer is empty");
  }
  std::vector<MetricsRecord> records;
  for (std::uint32_t step = 1; step <= config.pretrain_steps; ++step) {
    gradient_step(agent, buffer, train_rng);
    ++state.gradient_steps;
    if (step % config.eval_every_steps == 0 && step != config.pretrain_steps) {
      records.push_back(eval_record(agent, eval_env, config, state, Phase::kOffline, eval_rng));
    }
  }
  // The final offline record is always present, also for a zero-step phase.
  records.push_back(eval_record(agent, eval_env, config, state, Phase::kOffline, eval_rng));
  return records;
}

std::vector<MetricsRecord> run_online_phase(agents::Agent& agent,
                                            replay::ReplayBuffer& buffer,
                                            const ExperimentConfig& config,
                                            envs::Env& train_env, envs::Env& eval_env,
                                            TrainState& state, Rng& train_rng,
                                            Rng& collect_rng, Rng& eval_rng,
                                            std::vector<envs::Episode>* out_episodes) {
  std::vector<MetricsRecord> records;
  if (config.online_episodes == 0) return records;

  const std::uint64_t initial_transitions = state.transitions;
  auto budget_left = [&]() {
    return config.online_transition_budget == 0 ||
           state.transitions - initial_transitions < config.online_transition_budget;
  };

  try {
    std::uint32_t episodes_done = 0;
    std::uint32_t since_eval = 0;
    while (episodes_done < config.online_episodes && budget_left()) {
      const std::uint32_t batch = std::min<std::uint32_t>(
          config.episodes_per_iteration, config.online_episodes - episodes_done);

      // One rng per episode slot: serial and threaded collection agree.
      std::vector<Rng> slot_rngs;
      slot_rngs.reserve(batch);
      for (std::uint32_t j = 0; j < batch; ++j) {
        slot_rngs.push_back(collect_rng.split(state.next_episode_id + j));
      }
      std::vector<envs::Episode> collected(batch);
      if (config.collect_workers > 1 && batch > 1) {
        std::vector<std::unique_ptr<envs::Env>> worker_envs;
        for (std::uint32_t j = 0; j < batch; ++j) {
          worker_envs.push_back(make_env_from_config(config));
        }
        std::vector<std::thread> workers;
        const std::uint32_t n_workers = std::min(config.collect_workers, batch);
        for (std::uint32_t w = 0; w < n_workers; ++w) {
          workers.emplace_back([&, w]() {
            for (std::uint32_t j = w; j < batch; j += n_workers) {
              collected[j] = collect_episode(agent, *worker_envs[j],
                                             state.next_episode_id + j, slot_rngs[j]);
            }
          });
        }
        for (std::thread& t : workers) t.join();
        // Worker envs do not contribute to the train env step counter; account
        // for their steps explicitly below via episode lengths.
      } else {
        for (std::uint32_t j = 0; j < batch; ++j) {
          collected[j] = collect_episode(agent, train_env, state.next_episode_id + j,
                                         slot_rngs[j]);
        }
      }

      for (envs::Episode& ep : collected) {
        state.transitions += ep.length();
        buffer.insert_episode(ep);
        if (out_episodes) out_episodes->push_back(ep);
      }
      state.next_episode_id += batch;
      episodes_done += batch;
      since_eval += batch;

      const std::uint64_t grad_steps =
          static_cast<std::uint64_t>(batch) * config.gradient_steps_per_episode;
      for (std::uint64_t g = 0; g < grad_steps; ++g) {
        gradient_step(agent, buffer, train_rng);
        ++state.gradient_steps;
      }

      if (since_eval >= config.eval_every_episodes &&
          episodes_done < config.online_episodes && budget_left()) {
        since_eval = 0;
        records.push_back(eval_record(agent, eval_env, config, state, Phase::kOnline, eval_rng));
      }
    }
    records.push_back(eval_record(agent, eval_env, config, state, Phase::kOnline, eval_rng));
  } catch (const NumericError&) {
    dump_crash_checkpoint(agent, config.out_dir);
    throw;
  }
  return records;
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();

  Rng master(config.seed);
  Rng init_rng = master.split(0x01);
  Rng data_rng(config.datagen.seed);
  Rng train_rng = master.split(0x02);
  Rng collect_rng = master.split(0x03);
  Rng eval_rng = master.split(0x04);

  std::unique_ptr<envs::Env> train_env = make_env_from_config(config);
  std::unique_ptr<envs::Env> eval_env = make_env_from_config(config);

  agents::Agent agent = agents::make_agent(train_env->observation_dim(),
                                           train_env->action_spec(), config.agent,
                                           config.cem, init_rng);

  replay::ReplayBuffer buffer(config.replay_capacity);
  std::vector<envs::Episode> prior;
  if (!config.dataset_path.empty()) {
    prior = envs::load_episodes_jsonl(config.dataset_path);
  } else if (config.datagen.enabled) {
    std::unique_ptr<envs::Env> data_env = make_env_from_config(config);
    const envs::Policy policy = config.datagen.policy == "random"
                                    ? envs::make_uniform_random_policy(*data_env)
                                    : envs::make_scripted_policy(*data_env, config.datagen.noise);
    const envs::BehaviorTag tag = config.datagen.policy == "random"
                                      ? envs::BehaviorTag::kRandom
                                      : envs::BehaviorTag::kDemo;
    prior = envs::generate_dataset(*data_env, policy, config.datagen.episodes,
                                   envs::keep_mode_from_string(config.datagen.keep),
                                   tag, data_rng);
  }
  TrainState state;
  for (const envs::Episode& ep : prior) {
    buffer.insert_episode(ep);
    state.next_episode_id = std::max(state.next_episode_id, ep.id + 1);
  }

  RunResult result{.records = {}, .agent = std::move(agent), .env_steps = 0};
  std::vector<envs::Episode> online_episodes;

  std::vector<MetricsRecord> offline = run_offline_phase(
      result.agent, buffer, config, *eval_env, state, train_rng, eval_rng);
  result.records.insert(result.records.end(), offline.begin(), offline.end());

  std::vector<MetricsRecord> online = run_online_phase(
      result.agent, buffer, config, *train_env, *eval_env, state, train_rng,
      collect_rng, eval_rng, config.write_episodes ? &online_episodes : nullptr);
  result.records.insert(result.records.end(), online.begin(), online.end());
  result.env_steps = train_env->step_count();

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    write_metrics_csv(result.records, (fs::path(config.out_dir) / "metrics.csv").string(),
                      config.record_timing);
    save_agent_checkpoint(result.agent, config.out_dir);
    if (config.write_episodes) {
      envs::save_episodes_jsonl(online_episodes,
                                (fs::path(config.out_dir) / "episodes.jsonl").string());
    }
  }
  return result;
}

void save_agent_checkpoint(const agents::Agent& agent, const std::string& dir) {
  nn::save_checkpoint(agent.actor.params, (fs::path(dir) / "actor.bin").string());
  nn::save_checkpoint(agent.critic.online, (fs::path(dir) / "critic.bin").string());
  nn::save_checkpoint(agent.critic.target, (fs::path(dir) / "critic_target.bin").string());
}

void load_agent_checkpoint(agents::Agent& agent, const std::string& dir) {
  agent.actor.params = nn::load_checkpoint((fs::path(dir) / "actor.bin").string());
  agent.critic.online = nn::load_checkpoint((fs::path(dir) / "critic.bin").string());
  agent.critic.target = nn::load_checkpoint((fs::path(dir) / "critic_target.bin").string());
}

}  // namespace awopt::experiment
