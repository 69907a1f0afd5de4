#include "awopt/action_space.hpp"

#include <algorithm>
#include <cmath>

#include "awopt/errors.hpp"

namespace awopt::action {

namespace {
constexpr double kProbFloor = 1e-12;
}

std::size_t ActionSpec::encoded_dim() const {
  std::size_t dim = continuous.size();
  for (const DiscreteSubaction& d : discrete) dim += d.cardinality;
  return dim;
}

void ActionSpec::validate() const {
  if (subaction_count() == 0) {
    throw ConfigError("ActionSpec: at least one subaction required");
  }
  for (const ContinuousSubaction& c : continuous) {
    if (!std::isfinite(c.lower) || !std::isfinite(c.upper) || c.lower >= c.upper) {
      throw ConfigError("ActionSpec: invalid bounds for '" + c.name + "'");
    }
    if (c.loss_weight <= 0.0) {
      throw ConfigError("ActionSpec: non-positive loss weight for '" + c.name + "'");
    }
  }
  for (const DiscreteSubaction& d : discrete) {
    if (d.cardinality < 1) {
      throw ConfigError("ActionSpec: zero cardinality for '" + d.name + "'");
    }
    if (d.loss_weight <= 0.0) {
      throw ConfigError("ActionSpec: non-positive loss weight for '" + d.name + "'");
    }
  }
}

void validate_action(const ActionSpec& spec, const MixedAction& action) {
  if (action.continuous.size() != spec.continuous.size() ||
      action.discrete.size() != spec.discrete.size()) {
    throw UsageError("MixedAction: subaction count mismatch");
  }
  for (std::size_t k = 0; k < spec.continuous.size(); ++k) {
    const double v = action.continuous[k];
    if (!(v >= spec.continuous[k].lower && v <= spec.continuous[k].upper)) {
      throw UsageError("MixedAction: '" + spec.continuous[k].name + "' out of bounds");
    }
  }
  for (std::size_t k = 0; k < spec.discrete.size(); ++k) {
    if (action.discrete[k] >= spec.discrete[k].cardinality) {
      throw UsageError("MixedAction: '" + spec.discrete[k].name + "' index out of range");
    }
  }
}

void ActorDistribution::validate(const ActionSpec& spec) const {
  if (mean.size() != spec.continuous.size() || variance.size() != spec.continuous.size() ||
      discrete_probs.size() != spec.discrete.size()) {
    throw UsageError("ActorDistribution: head count mismatch");
  }
  for (double v : variance) {
    if (!(v > 0.0)) throw UsageError("ActorDistribution: non-positive variance");
  }
  for (std::size_t k = 0; k < discrete_probs.size(); ++k) {
    if (discrete_probs[k].size() != spec.discrete[k].cardinality) {
      throw UsageError("ActorDistribution: probability vector size mismatch");
    }
    double sum = 0.0;
    for (double p : discrete_probs[k]) {
      if (p < 0.0) throw UsageError("ActorDistribution: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw UsageError("ActorDistribution: probabilities do not sum to 1");
    }
  }
}

MixedAction sample(const ActionSpec& spec, const ActorDistribution& dist, Rng& rng) {
  MixedAction action;
  action.continuous.resize(spec.continuous.size());
  for (std::size_t k = 0; k < spec.continuous.size(); ++k) {
    const double draw = rng.normal(dist.mean[k], std::sqrt(dist.variance[k]));
    action.continuous[k] =
        std::clamp(draw, spec.continuous[k].lower, spec.continuous[k].upper);
  }
  action.discrete.resize(spec.discrete.size());
  for (std::size_t k = 0; k < spec.discrete.size(); ++k) {
    const auto& probs = dist.discrete_probs[k];
    const double u = rng.uniform();
    double acc = 0.0;
    std::uint32_t idx = static_cast<std::uint32_t>(probs.size()) - 1;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      acc += probs[j];
      if (u < acc) {
        idx = static_cast<std::uint32_t>(j);
        break;
      }
    }
    action.discrete[k] = idx;
  }
  return action;
}

MixedAction mode_action(const ActionSpec& spec, const ActorDistribution& dist) {
  MixedAction action;
  action.continuous.resize(spec.continuous.size());
  for (std::size_t k = 0; k < spec.continuous.size(); ++k) {
    action.continuous[k] =
        std::clamp(dist.mean[k], spec.continuous[k].lower, spec.continuous[k].upper);
  }
  action.discrete.resize(spec.discrete.size());
  for (std::size_t k = 0; k < spec.discrete.size(); ++k) {
    const auto& probs = dist.discrete_probs[k];
    action.discrete[k] = static_cast<std::uint32_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
  }
  return action;
}

ActorLossResult actor_loss(const ActionSpec& spec, const MixedAction& target,
                           const ActorDistribution& dist) {
  if (target.continuous.size() != spec.continuous.size() ||
      target.discrete.size() != spec.discrete.size()) {
    throw UsageError("actor_loss: target does not conform to spec");
  }
  dist.validate(spec);

  ActorLossResult result;
  result.grad.d_mean.assign(spec.continuous.size(), 0.0);
  result.grad.d_variance.assign(spec.continuous.size(), 0.0);
  result.grad.d_discrete_probs.resize(spec.discrete.size());

  for (std::size_t k = 0; k < spec.continuous.size(); ++k) {
    const double w = spec.continuous[k].loss_weight;
    const double err = dist.mean[k] - target.continuous[k];
    result.loss += w * err * err;
    result.grad.d_mean[k] = 2.0 * w * err;
  }
  for (std::size_t k = 0; k < spec.discrete.size(); ++k) {
    const double w = spec.discrete[k].loss_weight;
    const auto& probs = dist.discrete_probs[k];
    result.grad.d_discrete_probs[k].assign(probs.size(), 0.0);
    const std::uint32_t t = target.discrete[k];
    const double p = probs[t];
    result.loss += -w * std::log(std::max(p, kProbFloor));
    // Flat below the clamp, so the gradient vanishes there.
    if (p > kProbFloor) result.grad.d_discrete_probs[k][t] = -w / p;
  }
  return result;
}

MixedAction uniform_random_action(const ActionSpec& spec, Rng& rng) {
  MixedAction action;
  action.continuous.resize(spec.continuous.size());
  for (std::size_t k = 0; k < spec.continuous.size(); ++k) {
    action.continuous[k] = rng.uniform(spec.continuous[k].lower, spec.continuous[k].upper);
  }
  action.discrete.resize(spec.discrete.size());
  for (std::size_t k = 0; k < spec.discrete.size(); ++k) {
    action.discrete[k] = rng.uniform_int(spec.discrete[k].cardinality);
  }
  return action;
}

}  // namespace awopt::action
