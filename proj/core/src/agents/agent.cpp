#include "awopt/agents/agent.hpp"

#include <algorithm>
#include <cmath>

#include "awopt/errors.hpp"

namespace awopt::agents {

TargetStrategy target_strategy_from_string(const std::string& s) {
  if (s == "awac_expectation") return TargetStrategy::kAwacExpectation;
  if (s == "max_q") return TargetStrategy::kMaxQ;
  if (s == "max_q_actor_mean") return TargetStrategy::kMaxQActorMean;
  if (s == "max_q_actor_candidate") return TargetStrategy::kMaxQActorCandidate;
  throw ConfigError("unknown target strategy '" + s + "'");
}

std::string to_string(TargetStrategy s) {
  switch (s) {
    case TargetStrategy::kAwacExpectation: return "awac_expectation";
    case TargetStrategy::kMaxQ: return "max_q";
    case TargetStrategy::kMaxQActorMean: return "max_q_actor_mean";
    case TargetStrategy::kMaxQActorCandidate: return "max_q_actor_candidate";
  }
  return "max_q";
}

ExplorationStrategy exploration_from_string(const std::string& s) {
  if (s == "actor_only") return ExplorationStrategy::kActorOnly;
  if (s == "critic_only") return ExplorationStrategy::kCriticOnly;
  if (s == "episode_switch") return ExplorationStrategy::kEpisodeSwitch;
  if (s == "step_switch") return ExplorationStrategy::kStepSwitch;
  throw ConfigError("unknown exploration strategy '" + s + "'");
}

std::string to_string(ExplorationStrategy s) {
  switch (s) {
    case ExplorationStrategy::kActorOnly: return "actor_only";
    case ExplorationStrategy::kCriticOnly: return "critic_only";
    case ExplorationStrategy::kEpisodeSwitch: return "episode_switch";
    case ExplorationStrategy::kStepSwitch: return "step_switch";
  }
  return "actor_only";
}

void AgentConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("agent.gamma must be in (0, 1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("agent.tau must be in (0, 1]");
  if (!(lambda > 0.0)) throw ConfigError("agent.lambda must be > 0");
  if (adv_clip < 1.0) throw ConfigError("agent.adv_clip must be >= 1");
  if (n_adv_samples < 1) throw ConfigError("agent.n_adv_samples must be >= 1");
  if (!(p_critic >= 0.0 && p_critic <= 1.0)) throw ConfigError("agent.p_critic must be in [0, 1]");
  if (batch_size < 1) throw ConfigError("agent.batch_size must be >= 1");
  if (optimizer != "adam" && optimizer != "sgd") {
    throw ConfigError("agent.optimizer must be 'adam' or 'sgd'");
  }
  if (algorithm == "qt_opt") {
    // qt_opt has no trained policy network: its actor is auxiliary only.
    if (exploration != ExplorationStrategy::kCriticOnly) {
      throw ConfigError("qt_opt requires critic_only exploration");
    }
    if (target_strategy != TargetStrategy::kMaxQ) {
      throw ConfigError("qt_opt requires max_q targets (the actor is auxiliary)");
    }
    if (!aux_actor) {
      throw ConfigError("qt_opt requires aux_actor=true");
    }
  }
}

Agent make_agent(std::size_t observation_dim, const action::ActionSpec& spec,
                 const AgentConfig& config, const cem::CemConfig& cem_config, Rng& rng) {
  spec.validate();
  config.validate();
  cem_config.validate();

  Agent agent;
  agent.spec = spec;
  agent.config = config;
  agent.cem_config = cem_config;
  Rng actor_rng = rng.split(0x41);
  Rng critic_rng = rng.split(0x43);
  agent.actor = make_actor_net(observation_dim, spec, config.hidden, actor_rng);
  agent.critic = make_critic_nets(observation_dim, spec, config.hidden, config.tau, critic_rng);
  const nn::OptimizerKind kind = config.optimizer == "sgd" ? nn::OptimizerKind::kSgd
                                                           : nn::OptimizerKind::kAdam;
  agent.actor_opt = nn::make_optimizer(kind, config.actor_lr, agent.actor.params);
  agent.critic_opt = nn::make_optimizer(kind, config.critic_lr, agent.critic.online);
  return agent;
}

double bellman_target(const CriticNets& critic, const ActorNet& actor,
                      const envs::Transition& transition, TargetStrategy strategy,
                      double gamma, std::uint32_t n_adv_samples,
                      const cem::CemConfig& cem_config, Rng& rng) {
  if (transition.done) return transition.reward;

  const std::vector<double>& next_obs = transition.next_observation;
  double next_value = 0.0;
  switch (strategy) {
    case TargetStrategy::kAwacExpectation: {
      const action::ActorDistribution dist = actor.distribution(next_obs);
      std::vector<action::MixedAction> samples;
      samples.reserve(n_adv_samples);
      for (std::uint32_t i = 0; i < n_adv_samples; ++i) {
        samples.push_back(action::sample(actor.spec, dist, rng));
      }
      const std::vector<double> values = critic.q_target_batch(next_obs, samples);
      double sum = 0.0;
      for (double v : values) sum += v;
      next_value = sum / static_cast<double>(values.size());
      break;
    }
    case TargetStrategy::kMaxQ:
    case TargetStrategy::kMaxQActorMean:
    case TargetStrategy::kMaxQActorCandidate: {
      cem::CemConfig cfg = cem_config;
      std::optional<action::MixedAction> proposal;
      if (strategy == TargetStrategy::kMaxQ) {
        cfg.mode = cem::CemMode::kPlain;
      } else {
        cfg.mode = strategy == TargetStrategy::kMaxQActorMean
                       ? cem::CemMode::kActorMean
                       : cem::CemMode::kActorCandidate;
        proposal = action::mode_action(actor.spec, actor.distribution(next_obs));
      }
      auto evaluator = [&](const std::vector<action::MixedAction>& actions) {
        return critic.q_target_batch(next_obs, actions);
      };
      next_value = cem::cem_argmax(evaluator, critic.spec, cfg, proposal, rng).best_value;
      break;
    }
  }

  const double target = transition.reward + gamma * next_value;
  if (!std::isfinite(target)) throw NumericError("bellman_target: non-finite target");
  return target;
}

double critic_update(CriticNets& critic, const replay::Batch& batch,
                     const std::vector<double>& targets, nn::OptimizerState& optimizer) {
  if (targets.size() != batch.size()) {
    throw ShapeError("critic_update: targets not aligned with batch");
  }
  if (batch.size() == 0) return 0.0;

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  nn::MlpGrads grads = nn::zeros_like(critic.online);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const envs::Transition& t = batch.transitions[i];
    const std::vector<double> input = critic.encode(t.observation, t.action);
    const double q = nn::forward(critic.online, input)[0];
    const double err = q - targets[i];
    loss += err * err * inv_n;
    const nn::BackwardResult back =
        nn::backward(critic.online, input, {2.0 * err * inv_n});
    grads.add_scaled(back.param_grads, 1.0);
  }
  if (!std::isfinite(loss)) throw NumericError("critic_update: non-finite loss");

  nn::apply_gradients(critic.online, grads, optimizer);
  critic.polyak_update();
  return loss;
}

double advantage(const CriticNets& critic, const ActorNet& actor,
                 const envs::Transition& transition, std::uint32_t n_adv_samples,
                 Rng& rng) {
  if (n_adv_samples < 1) throw UsageError("advantage: n_adv_samples must be >= 1");
  const double q_data = critic.q_target(transition.observation, transition.action);
  const action::ActorDistribution dist = actor.distribution(transition.observation);
  std::vector<action::MixedAction> samples;
  samples.reserve(n_adv_samples);
  for (std::uint32_t i = 0; i < n_adv_samples; ++i) {
    samples.push_back(action::sample(actor.spec, dist, rng));
  }
  const std::vector<double> values = critic.q_target_batch(transition.observation, samples);
  double baseline = 0.0;
  for (double v : values) baseline += v;
  baseline /= static_cast<double>(values.size());
  return q_data - baseline;
}

double actor_update(ActorNet& actor, const CriticNets& critic,
                    const replay::Batch& batch, const AgentConfig& config,
                    nn::OptimizerState& optimizer, Rng& rng) {
  if (batch.size() == 0) return 0.0;

  if (config.positive_filtering && !config.aux_actor) {
    for (const envs::Transition& t : batch.transitions) {
      const bool passes = config.actor_filter == replay::ActorFilter::kEpisode
                              ? t.episode_success
                              : t.reward == 1.0;
      if (!passes) {
        throw UsageError("actor_update: batch contains a transition that fails "
                         "the success filter");
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const double log_clip = std::log(config.adv_clip);
  nn::MlpGrads grads = nn::zeros_like(actor.params);
  double total_loss = 0.0;

  for (const envs::Transition& t : batch.transitions) {
    double weight = 1.0;
    if (!config.aux_actor) {
      const double adv = advantage(critic, actor, t, config.n_adv_samples, rng);
      if (!std::isfinite(adv)) throw NumericError("actor_update: non-finite advantage");
      // Clipping in log space keeps exp() from overflowing before the cap.
      weight = std::exp(std::min(adv / config.lambda, log_clip));
    }

    const std::vector<double> raw = nn::forward(actor.params, t.observation);
    const action::ActorDistribution dist = actor.distribution_from_raw(raw);
    const action::ActorLossResult loss = action::actor_loss(actor.spec, t.action, dist);
    total_loss += weight * loss.loss * inv_n;
    const std::vector<double> d_raw = actor.head_grad_to_raw(raw, loss.grad);
    const nn::BackwardResult back = nn::backward(actor.params, t.observation, d_raw);
    grads.add_scaled(back.param_grads, weight * inv_n);
  }
  if (!std::isfinite(total_loss)) throw NumericError("actor_update: non-finite loss");

  nn::apply_gradients(actor.params, grads, optimizer);
  return total_loss;
}

bool draw_episode_policy_coin(const AgentConfig& config, Rng& rng) {
  return rng.bernoulli(config.p_critic);
}

action::MixedAction select_exploration_action(const Agent& agent,
                                              const std::vector<double>& observation,
                                              ExplorationStrategy strategy,
                                              bool episode_use_critic, Rng& rng) {
  auto actor_action = [&]() {
    return action::sample(agent.spec, agent.actor.distribution(observation), rng);
  };
  auto critic_action = [&]() {
    auto evaluator = [&](const std::vector<action::MixedAction>& actions) {
      return agent.critic.q_online_batch(observation, actions);
    };
    return cem::cem_policy_action(evaluator, agent.spec, agent.cem_config, rng);
  };

  switch (strategy) {
    case ExplorationStrategy::kActorOnly:
      return actor_action();
    case ExplorationStrategy::kCriticOnly:
      return critic_action();
    case ExplorationStrategy::kEpisodeSwitch:
      return episode_use_critic ? critic_action() : actor_action();
    case ExplorationStrategy::kStepSwitch:
      return rng.bernoulli(agent.config.p_critic) ? critic_action() : actor_action();
  }
  return actor_action();
}

action::MixedAction greedy_action(const Agent& agent,
                                  const std::vector<double>& observation, Rng& rng) {
  if (agent.config.aux_actor) {
    auto evaluator = [&](const std::vector<action::MixedAction>& actions) {
      return agent.critic.q_online_batch(observation, actions);
    };
    return cem::cem_policy_action(evaluator, agent.spec, agent.cem_config, rng);
  }
  return action::mode_action(agent.spec, agent.actor.distribution(observation));
}

}  // namespace awopt::agents
