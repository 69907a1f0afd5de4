#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "awopt/action_space.hpp"
#include "awopt/errors.hpp"
#include "helpers/finite_diff.hpp"

using namespace awopt;
using action::ActionSpec;
using action::ActorDistribution;
using action::MixedAction;

namespace {

ActionSpec one_continuous(double lo, double hi, double weight) {
  ActionSpec spec;
  spec.continuous = {{"v", lo, hi, weight}};
  return spec;
}

// Grasping-style space: x, y, z, rotation plus three binary flags.
ActionSpec grasp_spec() {
  ActionSpec spec;
  spec.continuous = {{"x", -1.0, 1.0, 33.3},
                     {"y", -1.0, 1.0, 33.3},
                     {"z", -1.0, 1.0, 33.3},
                     {"theta", -3.14, 3.14, 5.5}};
  spec.discrete = {{"open", 2, 1.0}, {"close", 2, 1.0}, {"terminate", 2, 1.0}};
  return spec;
}

}  // namespace

TEST_SUITE("action_space") {

TEST_CASE("sample with vanishing variance returns the mean") {
  const ActionSpec spec = one_continuous(-2.0, 2.0, 1.0);
  ActorDistribution dist;
  dist.mean = {0.37};
  dist.variance = {1e-12};
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const MixedAction a = action::sample(spec, dist, rng);
    CHECK(std::abs(a.continuous[0] - 0.37) < 1e-4);
  }
}

TEST_CASE("sample with a deterministic categorical always picks it") {
  ActionSpec spec;
  spec.discrete = {{"d", 3, 1.0}};
  ActorDistribution dist;
  dist.discrete_probs = {{1.0, 0.0, 0.0}};
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    CHECK(action::sample(spec, dist, rng).discrete[0] == 0);
  }
}

TEST_CASE("categorical sampling frequencies concentrate") {
  ActionSpec spec;
  spec.discrete = {{"d", 2, 1.0}};
  ActorDistribution dist;
  dist.discrete_probs = {{0.2, 0.8}};
  Rng rng(3);
  int ones = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    ones += action::sample(spec, dist, rng).discrete[0] == 1 ? 1 : 0;
  }
  const double freq = static_cast<double>(ones) / n;
  CHECK(freq == doctest::Approx(0.8).epsilon(0.025));
}

TEST_CASE("sample respects bounds on every draw") {
  const ActionSpec spec = one_continuous(-0.5, 0.25, 1.0);
  ActorDistribution dist;
  dist.mean = {0.2};
  dist.variance = {4.0};  // wide: most raw draws fall outside the bounds
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    const MixedAction a = action::sample(spec, dist, rng);
    CHECK(a.continuous[0] >= -0.5);
    CHECK(a.continuous[0] <= 0.25);
  }
}

TEST_CASE("actor loss vanishes at the optimum with grasp-style weights") {
  const ActionSpec spec = grasp_spec();
  MixedAction target;
  target.continuous = {0.1, -0.3, 0.8, 1.5};
  target.discrete = {1, 0, 1};
  ActorDistribution dist;
  dist.mean = target.continuous;
  dist.variance = {0.1, 0.1, 0.1, 0.1};
  dist.discrete_probs = {{0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
  const action::ActorLossResult r = action::actor_loss(spec, target, dist);
  CHECK(r.loss == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single weighted continuous term: 6.0 * 0.2^2") {
  const ActionSpec spec = one_continuous(-1.0, 1.0, 6.0);
  MixedAction target;
  target.continuous = {0.7};
  ActorDistribution dist;
  dist.mean = {0.5};
  dist.variance = {0.3};
  const action::ActorLossResult r = action::actor_loss(spec, target, dist);
  CHECK(r.loss == doctest::Approx(0.24).epsilon(1e-12));
}

TEST_CASE("actor loss gradient w.r.t. the mean matches finite differences") {
  const ActionSpec spec = grasp_spec();
  MixedAction target;
  target.continuous = {0.2, 0.1, -0.4, 0.9};
  target.discrete = {0, 1, 1};
  ActorDistribution dist;
  dist.mean = {0.05, -0.2, 0.3, 1.2};
  dist.variance = {0.2, 0.2, 0.2, 0.2};
  dist.discrete_probs = {{0.6, 0.4}, {0.3, 0.7}, {0.5, 0.5}};

  const action::ActorLossResult r = action::actor_loss(spec, target, dist);
  auto loss_of_mean = [&](const std::vector<double>& mean) {
    ActorDistribution d = dist;
    d.mean = mean;
    return action::actor_loss(spec, target, d).loss;
  };
  const std::vector<double> fd = testing::fd_gradient(loss_of_mean, dist.mean);
  for (std::size_t k = 0; k < fd.size(); ++k) {
    CHECK(r.grad.d_mean[k] == doctest::Approx(fd[k]).epsilon(1e-4));
  }
}

TEST_CASE("actor loss gradient w.r.t. probabilities matches finite differences") {
  ActionSpec spec;
  spec.discrete = {{"d", 3, 2.5}};
  MixedAction target;
  target.discrete = {2};
  ActorDistribution dist;
  dist.discrete_probs = {{0.3, 0.25, 0.45}};
  const action::ActorLossResult r = action::actor_loss(spec, target, dist);
  // Only the target-index coordinate carries gradient: -w / p.
  CHECK(r.grad.d_discrete_probs[0][0] == 0.0);
  CHECK(r.grad.d_discrete_probs[0][1] == 0.0);
  CHECK(r.grad.d_discrete_probs[0][2] == doctest::Approx(-2.5 / 0.45).epsilon(1e-10));
}

TEST_CASE("actor loss clamps vanishing probabilities instead of throwing") {
  ActionSpec spec;
  spec.discrete = {{"d", 2, 1.0}};
  MixedAction target;
  target.discrete = {0};
  ActorDistribution dist;
  dist.discrete_probs = {{0.0, 1.0}};
  const action::ActorLossResult r = action::actor_loss(spec, target, dist);
  CHECK(std::isfinite(r.loss));
  CHECK(r.loss == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("actor loss is non-negative and zero only at the optimum") {
  Rng rng(5);
  const ActionSpec spec = grasp_spec();
  for (int trial = 0; trial < 200; ++trial) {
    MixedAction target = action::uniform_random_action(spec, rng);
    ActorDistribution dist;
    for (const auto& c : spec.continuous) {
      dist.mean.push_back(rng.uniform(c.lower, c.upper));
      dist.variance.push_back(rng.uniform(0.01, 1.0));
    }
    for (const auto& d : spec.discrete) {
      std::vector<double> p(d.cardinality);
      double sum = 0.0;
      for (double& v : p) {
        v = rng.uniform(0.05, 1.0);
        sum += v;
      }
      for (double& v : p) v /= sum;
      dist.discrete_probs.push_back(p);
    }
    const action::ActorLossResult r = action::actor_loss(spec, target, dist);
    CHECK(r.loss >= 0.0);
  }
}

TEST_CASE("actor loss is invariant to permuting subaction declarations") {
  ActionSpec spec;
  spec.continuous = {{"a", -1.0, 1.0, 2.0}, {"b", -2.0, 2.0, 5.0}};
  MixedAction target;
  target.continuous = {0.3, -0.7};
  ActorDistribution dist;
  dist.mean = {0.1, 0.4};
  dist.variance = {0.2, 0.2};

  ActionSpec swapped;
  swapped.continuous = {spec.continuous[1], spec.continuous[0]};
  MixedAction swapped_target;
  swapped_target.continuous = {target.continuous[1], target.continuous[0]};
  ActorDistribution swapped_dist;
  swapped_dist.mean = {dist.mean[1], dist.mean[0]};
  swapped_dist.variance = {dist.variance[1], dist.variance[0]};

  CHECK(action::actor_loss(spec, target, dist).loss ==
        doctest::Approx(action::actor_loss(swapped, swapped_target, swapped_dist).loss)
            .epsilon(1e-14));
}

TEST_CASE("uniform_random_action near-degenerate bounds") {
  const ActionSpec spec = one_continuous(0.5, 0.5 + 1e-9, 1.0);
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    CHECK(action::uniform_random_action(spec, rng).continuous[0] ==
          doctest::Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("uniform_random_action discrete frequencies are balanced") {
  ActionSpec spec;
  spec.discrete = {{"d", 2, 1.0}};
  Rng rng(7);
  int ones = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    ones += action::uniform_random_action(spec, rng).discrete[0];
  }
  CHECK(static_cast<double>(ones) / n == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("uniform_random_action respects bounds over many draws") {
  const ActionSpec spec = grasp_spec();
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    CHECK_NOTHROW(action::validate_action(spec, action::uniform_random_action(spec, rng)));
  }
}

TEST_CASE("spec validation rejects bad bounds and weights") {
  CHECK_THROWS_AS(one_continuous(1.0, -1.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(one_continuous(-1.0, 1.0, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(ActionSpec{}.validate(), ConfigError);
}

}  // TEST_SUITE
