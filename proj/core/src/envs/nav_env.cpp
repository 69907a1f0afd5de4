#include "awopt/envs/nav_env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "awopt/errors.hpp"

namespace awopt::envs {
namespace {

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

double ray_exit_distance(double px, double py, double angle, double size) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  double t = std::numeric_limits<double>::infinity();
  if (dx > 1e-12) t = std::min(t, (size - px) / dx);
  if (dx < -1e-12) t = std::min(t, (0.0 - px) / dx);
  if (dy > 1e-12) t = std::min(t, (size - py) / dy);
  if (dy < -1e-12) t = std::min(t, (0.0 - py) / dy);
  return std::max(t, 0.0);
}

std::optional<double> ray_rect_entry(double px, double py, double angle, const Rect& r) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();

  if (std::abs(dx) > 1e-12) {
    double t1 = (r.x0 - px) / dx;
    double t2 = (r.x1 - px) / dx;
    if (t1 > t2) std::swap(t1, t2);
    t_enter = std::max(t_enter, t1);
    t_exit = std::min(t_exit, t2);
  } else if (px < r.x0 || px > r.x1) {
    return std::nullopt;
  }
  if (std::abs(dy) > 1e-12) {
    double t1 = (r.y0 - py) / dy;
    double t2 = (r.y1 - py) / dy;
    if (t1 > t2) std::swap(t1, t2);
    t_enter = std::max(t_enter, t1);
    t_exit = std::min(t_exit, t2);
  } else if (py < r.y0 || py > r.y1) {
    return std::nullopt;
  }
  if (t_enter > t_exit || t_exit < 0.0) return std::nullopt;
  return std::max(t_enter, 0.0);
}

NavEnv::NavEnv(NavConfig config) : config_(config) {
  spec_.continuous = {
      {"lin_vel", config_.lin_vel_min, config_.lin_vel_max, 1.0},
      {"ang_vel", -config_.ang_vel_max, config_.ang_vel_max, 1.0},
  };
  spec_.discrete = {{"terminate", 2, 1.0}};
  spec_.validate();
  max_range_ = config_.arena_size * std::numbers::sqrt2;
}

std::vector<double> NavEnv::reset(Rng& rng) {
  state_ = State{};
  state_.done = false;

  const double margin = 0.05;
  const std::uint32_t span = config_.obstacles_max - config_.obstacles_min + 1;
  const std::uint32_t n_obs = config_.obstacles_min + rng.uniform_int(span);
  for (std::uint32_t i = 0; i < n_obs; ++i) {
    const double w = rng.uniform(0.3, 0.9);
    const double h = rng.uniform(0.3, 0.9);
    const double cx = rng.uniform(0.6, config_.arena_size - 0.6);
    const double cy = rng.uniform(0.6, config_.arena_size - 0.6);
    state_.obstacles.push_back(Rect{cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2});
  }

  auto blocked = [&](double x, double y, double clearance) {
    for (const Rect& r : state_.obstacles) {
      Rect grown{r.x0 - clearance, r.y0 - clearance, r.x1 + clearance, r.y1 + clearance};
      if (grown.contains(x, y)) return true;
    }
    return false;
  };

  for (int attempt = 0; attempt < 1000; ++attempt) {
    state_.x = rng.uniform(margin, config_.arena_size - margin);
    state_.y = rng.uniform(margin, config_.arena_size - margin);
    if (!blocked(state_.x, state_.y, 0.1)) break;
  }
  state_.heading = rng.uniform(-std::numbers::pi, std::numbers::pi);

  for (int attempt = 0; attempt < 1000; ++attempt) {
    state_.goal_x = rng.uniform(margin, config_.arena_size - margin);
    state_.goal_y = rng.uniform(margin, config_.arena_size - margin);
    const double dist = std::hypot(state_.goal_x - state_.x, state_.goal_y - state_.y);
    if (dist >= config_.min_goal_distance && !blocked(state_.goal_x, state_.goal_y, 0.3)) break;
  }

  return observation();
}

void NavEnv::set_state(double x, double y, double heading, double goal_x, double goal_y,
                       std::vector<Rect> obstacles) {
  state_ = State{};
  state_.done = false;
  state_.x = x;
  state_.y = y;
  state_.heading = heading;
  state_.goal_x = goal_x;
  state_.goal_y = goal_y;
  state_.obstacles = std::move(obstacles);
}

double NavEnv::ray_distance(double angle) const {
  double dist = ray_exit_distance(state_.x, state_.y, angle, config_.arena_size);
  for (const Rect& r : state_.obstacles) {
    if (auto entry = ray_rect_entry(state_.x, state_.y, angle, r)) {
      dist = std::min(dist, *entry);
    }
  }
  return dist;
}

std::vector<double> NavEnv::observation() const {
  std::vector<double> obs;
  obs.reserve(observation_dim());
  for (std::uint32_t i = 0; i < config_.n_rays; ++i) {
    const double angle =
        state_.heading + 2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(config_.n_rays);
    obs.push_back(ray_distance(angle) / max_range_);
  }
  const double dx = state_.goal_x - state_.x;
  const double dy = state_.goal_y - state_.y;
  const double c = std::cos(state_.heading);
  const double s = std::sin(state_.heading);
  obs.push_back(c * dx + s * dy);   // goal offset, robot frame x (forward)
  obs.push_back(-s * dx + c * dy);  // robot frame y (left)
  return obs;
}

Env::StepResult NavEnv::step(const action::MixedAction& act) {
  if (state_.done) throw UsageError("NavEnv: step on a finished episode");
  action::validate_action(spec_, act);
  ++step_count_;
  ++state_.steps;

  const double v = act.continuous[0];
  const double w = act.continuous[1];
  const bool terminate = act.discrete[0] == 1;

  // Rotate, then translate along the new heading over a unit timestep.
  state_.heading = wrap_angle(state_.heading + w);
  const double nx = state_.x + v * std::cos(state_.heading);
  const double ny = state_.y + v * std::sin(state_.heading);
  const double cx = std::clamp(nx, 0.0, config_.arena_size);
  const double cy = std::clamp(ny, 0.0, config_.arena_size);
  bool collides = false;
  for (const Rect& r : state_.obstacles) {
    if (r.contains(cx, cy)) {
      collides = true;
      break;
    }
  }
  if (!collides) {
    state_.x = cx;
    state_.y = cy;
  }

  StepResult result;
  const bool timeout = state_.steps >= config_.horizon;
  if (terminate || timeout) {
    state_.done = true;
    result.done = true;
    const double dist = std::hypot(state_.goal_x - state_.x, state_.goal_y - state_.y);
    result.reward = dist <= config_.success_radius ? 1.0 : 0.0;
  }
  result.observation = observation();
  return result;
}

}  // namespace awopt::envs
