#pragma once

#include <functional>

#include "awopt/envs/nav_env.hpp"
#include "awopt/envs/reach_env.hpp"

namespace awopt::envs {

// An acting policy: observation in, action out. All stochasticity draws from
// the caller-owned rng.
using Policy = std::function<action::MixedAction(const std::vector<double>&, Rng&)>;

// Proportional controller on the goal offset portion of the observation:
// turn toward the goal, drive forward, terminate inside the success radius.
// noise_sigma adds Gaussian noise scaled by each subaction's half-range.
action::MixedAction scripted_nav_action(const NavConfig& config,
                                        const std::vector<double>& observation,
                                        double noise_sigma, Rng& rng);

action::MixedAction scripted_reach_action(const ReachConfig& config,
                                          const std::vector<double>& observation,
                                          double noise_sigma, Rng& rng);

Policy make_scripted_policy(const Env& env, double noise_sigma);
Policy make_uniform_random_policy(const Env& env);

}  // namespace awopt::envs
