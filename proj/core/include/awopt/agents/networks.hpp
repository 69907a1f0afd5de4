#pragma once

#include "awopt/action_space.hpp"
#include "awopt/mlp.hpp"

namespace awopt::agents {

// Policy network head over a mixed action space. The MLP emits, in order,
// one mean and one raw-variance value per continuous subaction followed by a
// logit block per discrete subaction. Variances go through a softplus with a
// small floor, logits through a softmax.
struct ActorNet {
  action::ActionSpec spec;
  nn::MlpParams params;
  double variance_floor = 1e-4;

  std::size_t head_dim() const;
  action::ActorDistribution distribution(const std::vector<double>& observation) const;
  action::ActorDistribution distribution_from_raw(const std::vector<double>& raw) const;

  // Chain rule through the head: gradient with respect to the distribution
  // parameters mapped back onto the raw MLP outputs.
  std::vector<double> head_grad_to_raw(const std::vector<double>& raw,
                                       const action::ActorLossGrad& grad) const;
};

ActorNet make_actor_net(std::size_t observation_dim, const action::ActionSpec& spec,
                        const std::vector<std::size_t>& hidden, Rng& rng);

// Online and target Q networks over (observation ++ action encoding), where
// the encoding is the raw continuous values plus one-hot discrete blocks.
struct CriticNets {
  action::ActionSpec spec;
  nn::MlpParams online;  // updated by gradient steps
  nn::MlpParams target;  // Polyak-coupled copy used for Bellman targets
  double tau = 0.01;

  std::vector<double> encode(const std::vector<double>& observation,
                             const action::MixedAction& action) const;
  double q_online(const std::vector<double>& observation,
                  const action::MixedAction& action) const;
  double q_target(const std::vector<double>& observation,
                  const action::MixedAction& action) const;
  // One observation against many candidate actions.
  std::vector<double> q_target_batch(const std::vector<double>& observation,
                                     const std::vector<action::MixedAction>& actions) const;
  std::vector<double> q_online_batch(const std::vector<double>& observation,
                                     const std::vector<action::MixedAction>& actions) const;

  // target <- tau * online + (1 - tau) * target, entrywise.
  void polyak_update();
};

CriticNets make_critic_nets(std::size_t observation_dim, const action::ActionSpec& spec,
                            const std::vector<std::size_t>& hidden, double tau, Rng& rng);

}  // namespace awopt::agents
