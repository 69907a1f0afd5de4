#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "awopt/rng.hpp"

namespace awopt::action {

struct ContinuousSubaction {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  double loss_weight = 1.0;

  bool operator==(const ContinuousSubaction&) const = default;
};

struct DiscreteSubaction {
  std::string name;
  std::uint32_t cardinality = 2;
  double loss_weight = 1.0;

  bool operator==(const DiscreteSubaction&) const = default;
};

// Joint description of a mixed continuous/discrete action space, including
// the per-subaction weights of the actor loss.
struct ActionSpec {
  std::vector<ContinuousSubaction> continuous;
  std::vector<DiscreteSubaction> discrete;

  std::size_t continuous_dims() const { return continuous.size(); }
  std::size_t discrete_dims() const { return discrete.size(); }
  std::size_t subaction_count() const { return continuous.size() + discrete.size(); }
  // Dimension of the flat critic-input encoding: raw continuous values plus a
  // one-hot block per discrete subaction.
  std::size_t encoded_dim() const;

  // Throws ConfigError on invalid bounds, weights or empty spec.
  void validate() const;

  bool operator==(const ActionSpec&) const = default;
};

struct MixedAction {
  std::vector<double> continuous;        // one value per continuous subaction
  std::vector<std::uint32_t> discrete;   // one index per discrete subaction

  bool operator==(const MixedAction&) const = default;
};

// Throws UsageError if the action does not conform to the spec.
void validate_action(const ActionSpec& spec, const MixedAction& action);

// Gaussian head per continuous subaction, categorical head per discrete one.
struct ActorDistribution {
  std::vector<double> mean;                        // per continuous subaction
  std::vector<double> variance;                    // > 0
  std::vector<std::vector<double>> discrete_probs; // each sums to 1

  void validate(const ActionSpec& spec) const;
};

// Gradient of the actor loss with respect to the distribution parameters.
struct ActorLossGrad {
  std::vector<double> d_mean;
  std::vector<double> d_variance;                    // zero: loss ignores variance
  std::vector<std::vector<double>> d_discrete_probs;
};

struct ActorLossResult {
  double loss = 0.0;
  ActorLossGrad grad;
};

// Draw an action: Gaussian per continuous subaction clipped to bounds,
// categorical per discrete subaction.
MixedAction sample(const ActionSpec& spec, const ActorDistribution& dist, Rng& rng);

// Deterministic mode of the distribution: clipped mean / argmax probability.
MixedAction mode_action(const ActionSpec& spec, const ActorDistribution& dist);

// Weighted imitation loss: sum_k w_k (target_k - mean_k)^2 over continuous
// subactions plus w_d * cross_entropy(target index) per discrete subaction.
// Probabilities below 1e-12 are clamped inside the log.
ActorLossResult actor_loss(const ActionSpec& spec, const MixedAction& target,
                           const ActorDistribution& dist);

// Uniform draw within bounds / over indices.
MixedAction uniform_random_action(const ActionSpec& spec, Rng& rng);

}  // namespace awopt::action
