#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "awopt/action_space.hpp"
#include "awopt/rng.hpp"

namespace awopt::cem {

enum class CemMode : std::uint8_t {
  kPlain = 0,
  kActorMean = 1,       // iteration-1 continuous mean taken from the proposal
  kActorCandidate = 2,  // proposal injected into every iteration's population
};

struct CemConfig {
  std::uint32_t iterations = 3;
  std::uint32_t population = 64;
  std::uint32_t elite_count = 6;
  // Per continuous dim; empty means (upper - lower) / 4.
  std::vector<double> initial_std;
  CemMode mode = CemMode::kPlain;

  void validate() const;
};

// Values for a whole candidate set at once; the state the Q function is
// conditioned on is bound into the evaluator.
using BatchEvaluator =
    std::function<std::vector<double>(const std::vector<action::MixedAction>&)>;

struct CemResult {
  action::MixedAction best_action;
  double best_value = 0.0;
};

// Iterative sampling maximizer over a mixed action space: Gaussian per
// continuous dim (clipped to bounds), categorical per discrete dim, elites
// refit the sampling distribution each iteration. Returns the best candidate
// ever evaluated. Throws NumericError naming the candidate if the evaluator
// returns a non-finite value, UsageError if the proposal requirement of the
// mode is violated.
CemResult cem_argmax(const BatchEvaluator& q, const action::ActionSpec& spec,
                     const CemConfig& config,
                     const std::optional<action::MixedAction>& actor_proposal,
                     Rng& rng);

// Plain-mode argmax used as the implicit exploration/evaluation policy.
action::MixedAction cem_policy_action(const BatchEvaluator& q,
                                      const action::ActionSpec& spec,
                                      const CemConfig& config, Rng& rng);

}  // namespace awopt::cem
