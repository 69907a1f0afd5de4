#include "awopt/cem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "awopt/errors.hpp"

namespace awopt::cem {
namespace {

constexpr double kStdFloor = 1e-3;
constexpr double kProbSmoothing = 1e-3;

std::uint32_t sample_categorical(const std::vector<double>& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    acc += probs[j];
    if (u < acc) return static_cast<std::uint32_t>(j);
  }
  return static_cast<std::uint32_t>(probs.size()) - 1;
}

}  // namespace

void CemConfig::validate() const {
  if (iterations < 1) throw ConfigError("cem: iterations must be >= 1");
  if (population < 1) throw ConfigError("cem: population must be >= 1");
  if (elite_count < 1 || elite_count > population) {
    throw ConfigError("cem: elite_count must be in [1, population]");
  }
  for (double s : initial_std) {
    if (!(s > 0.0)) throw ConfigError("cem: initial_std entries must be > 0");
  }
}

CemResult cem_argmax(const BatchEvaluator& q, const action::ActionSpec& spec,
                     const CemConfig& config,
                     const std::optional<action::MixedAction>& actor_proposal,
                     Rng& rng) {
  config.validate();
  const bool needs_proposal = config.mode != CemMode::kPlain;
  if (needs_proposal && !actor_proposal.has_value()) {
    throw UsageError("cem_argmax: mode requires an actor proposal");
  }
  if (actor_proposal) action::validate_action(spec, *actor_proposal);

  const std::size_t n_cont = spec.continuous_dims();
  const std::size_t n_disc = spec.discrete_dims();

  std::vector<double> mean(n_cont), stddev(n_cont);
  for (std::size_t c = 0; c < n_cont; ++c) {
    const auto& sub = spec.continuous[c];
    mean[c] = 0.5 * (sub.lower + sub.upper);
    stddev[c] = config.initial_std.empty() ? 0.25 * (sub.upper - sub.lower)
                                           : config.initial_std[c];
  }
  if (config.mode == CemMode::kActorMean) {
    mean = actor_proposal->continuous;
  }

  std::vector<std::vector<double>> probs(n_disc);
  for (std::size_t d = 0; d < n_disc; ++d) {
    probs[d].assign(spec.discrete[d].cardinality,
                    1.0 / static_cast<double>(spec.discrete[d].cardinality));
  }

  CemResult best;
  bool have_best = false;
  double prev_best = -std::numeric_limits<double>::infinity();

  for (std::uint32_t iter = 0; iter < config.iterations; ++iter) {
    std::vector<action::MixedAction> candidates;
    candidates.reserve(config.population + 1);
    for (std::uint32_t i = 0; i < config.population; ++i) {
      action::MixedAction a;
      a.continuous.resize(n_cont);
      for (std::size_t c = 0; c < n_cont; ++c) {
        a.continuous[c] = std::clamp(rng.normal(mean[c], stddev[c]),
                                     spec.continuous[c].lower, spec.continuous[c].upper);
      }
      a.discrete.resize(n_disc);
      for (std::size_t d = 0; d < n_disc; ++d) {
        a.discrete[d] = sample_categorical(probs[d], rng);
      }
      candidates.push_back(std::move(a));
    }
    if (config.mode == CemMode::kActorCandidate) {
      candidates.push_back(*actor_proposal);
    }

    const std::vector<double> values = q(candidates);
    if (values.size() != candidates.size()) {
      throw UsageError("cem_argmax: evaluator returned wrong number of values");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw NumericError("cem_argmax: non-finite value for candidate " +
                           std::to_string(i) + " at iteration " + std::to_string(iter));
      }
      if (!have_best || values[i] > best.best_value) {
        best.best_value = values[i];
        best.best_action = candidates[i];
        have_best = true;
      }
    }
    // Running best never regresses across iterations.
    if (best.best_value < prev_best) {
      throw NumericError("cem_argmax: best value regressed");
    }
    prev_best = best.best_value;

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (values[a] != values[b]) return values[a] > values[b];
      return a < b;
    });
    const std::size_t n_elite =
        std::min<std::size_t>(config.elite_count, order.size());

    for (std::size_t c = 0; c < n_cont; ++c) {
      double sum = 0.0;
      for (std::size_t e = 0; e < n_elite; ++e) {
        sum += candidates[order[e]].continuous[c];
      }
      const double m = sum / static_cast<double>(n_elite);
      double var = 0.0;
      for (std::size_t e = 0; e < n_elite; ++e) {
        const double d = candidates[order[e]].continuous[c] - m;
        var += d * d;
      }
      var /= static_cast<double>(n_elite);
      mean[c] = m;
      stddev[c] = std::max(std::sqrt(var), kStdFloor);
    }
    for (std::size_t d = 0; d < n_disc; ++d) {
      std::vector<double> counts(spec.discrete[d].cardinality, kProbSmoothing);
      for (std::size_t e = 0; e < n_elite; ++e) {
        counts[candidates[order[e]].discrete[d]] += 1.0;
      }
      const double total = static_cast<double>(n_elite) +
                           kProbSmoothing * static_cast<double>(counts.size());
      for (double& cnt : counts) cnt /= total;
      probs[d] = std::move(counts);
    }
  }
  return best;
}

action::MixedAction cem_policy_action(const BatchEvaluator& q,
                                      const action::ActionSpec& spec,
                                      const CemConfig& config, Rng& rng) {
  CemConfig plain = config;
  plain.mode = CemMode::kPlain;
  return cem_argmax(q, spec, plain, std::nullopt, rng).best_action;
}

}  // namespace awopt::cem
