#include "awopt/envs/scripted.hpp"

#include <algorithm>
#include <cmath>

#include "awopt/errors.hpp"

namespace awopt::envs {
namespace {

void add_continuous_noise(const action::ActionSpec& spec, double sigma,
                          action::MixedAction& act, Rng& rng) {
  if (sigma <= 0.0) return;
  for (std::size_t k = 0; k < spec.continuous.size(); ++k) {
    const auto& c = spec.continuous[k];
    const double half_range = 0.5 * (c.upper - c.lower);
    act.continuous[k] =
        std::clamp(act.continuous[k] + sigma * half_range * rng.normal(),
                   c.lower, c.upper);
  }
}

}  // namespace

action::MixedAction scripted_nav_action(const NavConfig& config,
                                        const std::vector<double>& observation,
                                        double noise_sigma, Rng& rng) {
  if (observation.size() < 2) throw UsageError("scripted_nav_action: bad observation");
  const double dx = observation[observation.size() - 2];  // forward offset
  const double dy = observation[observation.size() - 1];  // left offset
  const double distance = std::hypot(dx, dy);
  const double bearing = std::atan2(dy, dx);

  action::MixedAction act;
  act.continuous = {0.0, 0.0};
  act.discrete = {0};
  if (distance <= 0.9 * config.success_radius) {
    act.discrete[0] = 1;
  } else {
    const double w = std::clamp(bearing, -config.ang_vel_max, config.ang_vel_max);
    // Drive only when roughly facing the goal, at most onto the goal point.
    const double fwd = distance * std::max(0.0, std::cos(bearing));
    act.continuous[0] = std::clamp(fwd, config.lin_vel_min, config.lin_vel_max);
    act.continuous[1] = w;
  }

  action::ActionSpec spec;
  spec.continuous = {{"lin_vel", config.lin_vel_min, config.lin_vel_max, 1.0},
                     {"ang_vel", -config.ang_vel_max, config.ang_vel_max, 1.0}};
  spec.discrete = {{"terminate", 2, 1.0}};
  add_continuous_noise(spec, noise_sigma, act, rng);
  return act;
}

action::MixedAction scripted_reach_action(const ReachConfig& config,
                                          const std::vector<double>& observation,
                                          double noise_sigma, Rng& rng) {
  if (observation.size() != 2) throw UsageError("scripted_reach_action: bad observation");
  const double offset = observation[1];

  action::MixedAction act;
  act.continuous = {0.0};
  act.discrete = {0};
  if (std::abs(offset) <= 0.8 * config.success_radius) {
    act.discrete[0] = 1;
  } else {
    act.continuous[0] = std::clamp(offset, -config.max_step, config.max_step);
  }
  action::ActionSpec spec;
  spec.continuous = {{"delta", -config.max_step, config.max_step, 1.0}};
  spec.discrete = {{"terminate", 2, 1.0}};
  add_continuous_noise(spec, noise_sigma, act, rng);
  return act;
}

Policy make_scripted_policy(const Env& env, double noise_sigma) {
  if (const auto* nav = dynamic_cast<const NavEnv*>(&env)) {
    NavConfig cfg = nav->config();
    return [cfg, noise_sigma](const std::vector<double>& obs, Rng& rng) {
      return scripted_nav_action(cfg, obs, noise_sigma, rng);
    };
  }
  if (const auto* reach = dynamic_cast<const ReachEnv*>(&env)) {
    ReachConfig cfg = reach->config();
    return [cfg, noise_sigma](const std::vector<double>& obs, Rng& rng) {
      return scripted_reach_action(cfg, obs, noise_sigma, rng);
    };
  }
  throw UsageError("make_scripted_policy: no scripted controller for this env");
}

Policy make_uniform_random_policy(const Env& env) {
  action::ActionSpec spec = env.action_spec();
  return [spec](const std::vector<double>&, Rng& rng) {
    return action::uniform_random_action(spec, rng);
  };
}

}  // namespace awopt::envs
