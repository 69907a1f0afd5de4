#pragma once

#include <optional>

#include "awopt/envs/env.hpp"

namespace awopt::envs {

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

struct NavConfig {
  double arena_size = 4.0;
  std::uint32_t n_rays = 24;
  double success_radius = 0.2;
  std::uint32_t horizon = 50;
  std::uint32_t obstacles_min = 0;
  std::uint32_t obstacles_max = 2;
  double min_goal_distance = 0.5;
  double lin_vel_min = -0.25;
  double lin_vel_max = 0.5;
  double ang_vel_max = 1.5707963267948966;  // pi/2 per step
};

// Point-to-point navigation in a square arena with optional rectangular
// obstacles. Observation: n_rays normalized LIDAR distances followed by the
// goal offset in the robot frame. Action: (linear velocity, angular velocity)
// plus a binary terminate subaction. Reward 1 only on the final step and only
// when the robot ends within the success radius of the goal.
class NavEnv : public Env {
 public:
  explicit NavEnv(NavConfig config = {});

  std::size_t observation_dim() const override { return config_.n_rays + 2; }
  const action::ActionSpec& action_spec() const override { return spec_; }
  std::uint32_t horizon() const override { return config_.horizon; }

  std::vector<double> reset(Rng& rng) override;
  StepResult step(const action::MixedAction& action) override;

  const NavConfig& config() const { return config_; }

  struct State {
    double x = 0.0, y = 0.0, heading = 0.0;
    double goal_x = 0.0, goal_y = 0.0;
    std::vector<Rect> obstacles;
    std::uint32_t steps = 0;
    bool done = true;
  };
  const State& state() const { return state_; }

  // Test hook: place the robot and goal explicitly.
  void set_state(double x, double y, double heading, double goal_x, double goal_y,
                 std::vector<Rect> obstacles);

  std::vector<double> observation() const;

 private:
  double ray_distance(double angle) const;

  NavConfig config_;
  action::ActionSpec spec_;
  State state_;
  double max_range_ = 0.0;
};

// Distance from (px, py) along direction angle to the boundary of the arena
// [0, size] x [0, size], exiting from inside.
double ray_exit_distance(double px, double py, double angle, double size);

// Entry distance of the ray into the rectangle, if it hits.
std::optional<double> ray_rect_entry(double px, double py, double angle, const Rect& r);

}  // namespace awopt::envs
