#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "awopt/action_space.hpp"
#include "awopt/rng.hpp"

namespace awopt::envs {

enum class BehaviorTag : std::uint8_t {
  kDemo = 0,
  kScripted = 1,
  kActor = 2,
  kCem = 3,
  kRandom = 4,
};

std::string to_string(BehaviorTag tag);
BehaviorTag behavior_tag_from_string(const std::string& s);

// One environment step. next_observation on the final step of an episode is
// never bootstrapped through, so it may be left empty by loaders.
struct Transition {
  std::vector<double> observation;
  action::MixedAction action;
  double reward = 0.0;
  std::vector<double> next_observation;
  bool done = false;
  bool episode_success = false;  // success flag of the enclosing episode
  std::uint64_t episode_id = 0;
  BehaviorTag behavior_tag = BehaviorTag::kScripted;
};

struct Episode {
  std::vector<Transition> transitions;
  bool success = false;
  BehaviorTag behavior_tag = BehaviorTag::kScripted;
  std::uint64_t id = 0;

  std::size_t length() const { return transitions.size(); }
};

// Sparse binary reward environment: reward is 0 except possibly on the final
// step, episodes end when the termination subaction fires or the horizon is
// reached.
class Env {
 public:
  virtual ~Env() = default;

  virtual std::size_t observation_dim() const = 0;
  virtual const action::ActionSpec& action_spec() const = 0;
  virtual std::uint32_t horizon() const = 0;

  virtual std::vector<double> reset(Rng& rng) = 0;

  struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;
  };
  // Throws UsageError when called on a finished episode.
  virtual StepResult step(const action::MixedAction& action) = 0;

  // Total steps taken since construction, across all episodes.
  std::uint64_t step_count() const { return step_count_; }

 protected:
  std::uint64_t step_count_ = 0;
};

std::unique_ptr<Env> make_env(const std::string& name);

}  // namespace awopt::envs
