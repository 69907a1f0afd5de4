#pragma once

#include "awopt/envs/env.hpp"

namespace awopt::envs {

struct ReachConfig {
  double success_radius = 0.1;
  std::uint32_t horizon = 10;
  double min_goal_distance = 0.3;
  double max_step = 0.25;
};

// 1D reach toy: move a point along [0, 1] toward a goal and terminate there.
// Observation is (position, goal - position). Exists to keep full training
// loop tests fast.
class ReachEnv : public Env {
 public:
  explicit ReachEnv(ReachConfig config = {});

  std::size_t observation_dim() const override { return 2; }
  const action::ActionSpec& action_spec() const override { return spec_; }
  std::uint32_t horizon() const override { return config_.horizon; }

  std::vector<double> reset(Rng& rng) override;
  StepResult step(const action::MixedAction& action) override;

  const ReachConfig& config() const { return config_; }

 private:
  ReachConfig config_;
  action::ActionSpec spec_;
  double position_ = 0.0;
  double goal_ = 0.0;
  std::uint32_t steps_ = 0;
  bool done_ = true;
};

}  // namespace awopt::envs
