#include "awopt/envs/reach_env.hpp"

#include <algorithm>
#include <cmath>

#include "awopt/errors.hpp"

namespace awopt::envs {

ReachEnv::ReachEnv(ReachConfig config) : config_(config) {
  spec_.continuous = {{"delta", -config_.max_step, config_.max_step, 1.0}};
  spec_.discrete = {{"terminate", 2, 1.0}};
  spec_.validate();
}

std::vector<double> ReachEnv::reset(Rng& rng) {
  done_ = false;
  steps_ = 0;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    position_ = rng.uniform(0.0, 1.0);
    goal_ = rng.uniform(0.0, 1.0);
    if (std::abs(goal_ - position_) >= config_.min_goal_distance) break;
  }
  return {position_, goal_ - position_};
}

Env::StepResult ReachEnv::step(const action::MixedAction& act) {
  if (done_) throw UsageError("ReachEnv: step on a finished episode");
  action::validate_action(spec_, act);
  ++step_count_;
  ++steps_;

  position_ = std::clamp(position_ + act.continuous[0], 0.0, 1.0);
  const bool terminate = act.discrete[0] == 1;
  const bool timeout = steps_ >= config_.horizon;

  StepResult result;
  if (terminate || timeout) {
    done_ = true;
    result.done = true;
    result.reward = std::abs(goal_ - position_) <= config_.success_radius ? 1.0 : 0.0;
  }
  result.observation = {position_, goal_ - position_};
  return result;
}

}  // namespace awopt::envs
