#include <doctest.h>

#include <cmath>

#include "awopt/agents/algorithms.hpp"
#include "awopt/errors.hpp"
#include "helpers/tabular.hpp"

using namespace awopt;
using agents::Agent;
using agents::AgentConfig;
using agents::ExplorationStrategy;
using agents::TargetStrategy;

namespace {

action::ActionSpec mixed_spec() {
  action::ActionSpec spec;
  spec.continuous = {{"v", -1.0, 1.0, 1.0}};
  spec.discrete = {{"t", 2, 1.0}};
  return spec;
}

Agent small_agent(const action::ActionSpec& spec, std::uint64_t seed,
                  const AgentConfig& base = AgentConfig{}) {
  AgentConfig cfg = base;
  cfg.hidden = {16, 16};
  cem::CemConfig cem_cfg;
  cem_cfg.population = 16;
  cem_cfg.iterations = 2;
  cem_cfg.elite_count = 3;
  Rng rng(seed);
  return agents::make_agent(4, spec, cfg, cem_cfg, rng);
}

envs::Transition make_transition(const std::vector<double>& obs,
                                 const action::MixedAction& act, double reward,
                                 const std::vector<double>& next_obs, bool done,
                                 bool success = true) {
  envs::Transition t;
  t.observation = obs;
  t.action = act;
  t.reward = reward;
  t.next_observation = next_obs;
  t.done = done;
  t.episode_success = success;
  return t;
}

void zero_params(nn::MlpParams& params) {
  for (nn::Layer& l : params.layers) {
    for (double& w : l.weight.values()) w = 0.0;
    for (double& b : l.bias) b = 0.0;
  }
}

// Discrete-only actor whose head is a constant: first index carries nearly
// all probability mass, so every sample is index 0 and advantages are exact
// Q differences.
struct DiscreteFixture {
  action::ActionSpec spec;
  Agent agent;

  explicit DiscreteFixture(std::vector<double> q_per_index)
      : spec(make_spec(q_per_index.size())), agent(build(q_per_index)) {}

  static action::ActionSpec make_spec(std::size_t cardinality) {
    action::ActionSpec s;
    s.discrete = {{"d", static_cast<std::uint32_t>(cardinality), 1.0}};
    return s;
  }

  Agent build(const std::vector<double>& q_per_index) {
    AgentConfig cfg;
    cfg.hidden = {4};
    cfg.optimizer = "sgd";
    cem::CemConfig cem_cfg;
    cem_cfg.population = 8;
    cem_cfg.iterations = 2;
    cem_cfg.elite_count = 2;
    Rng rng(99);
    Agent agent = agents::make_agent(1, spec, cfg, cem_cfg, rng);

    // Actor: logits (+40, 0, 0, ...) -> index 0 is drawn every time.
    zero_params(agent.actor.params);
    agent.actor.params.layers.back().bias[0] = 40.0;

    // Critic (online and target): linear in the one-hot block, zero elsewhere.
    // encode = [obs(1), onehot(cardinality)].
    zero_params(agent.critic.online);
    zero_params(agent.critic.target);
    nn::MlpParams linear;
    nn::Matrix w(1, 1 + q_per_index.size());
    for (std::size_t i = 0; i < q_per_index.size(); ++i) w(0, 1 + i) = q_per_index[i];
    linear.layers.push_back(nn::Layer{std::move(w), {0.0}, nn::Activation::kIdentity});
    agent.critic.online = linear;
    agent.critic.target = linear;
    agent.critic_opt = nn::make_optimizer(nn::OptimizerKind::kSgd, 1e-3, agent.critic.online);
    agent.actor_opt = nn::make_optimizer(nn::OptimizerKind::kSgd, 1e-3, agent.actor.params);
    return agent;
  }
};

}  // namespace

TEST_SUITE("agents") {

TEST_CASE("terminal transitions never bootstrap") {
  const action::ActionSpec spec = mixed_spec();
  Agent agent = small_agent(spec, 1);
  action::MixedAction a;
  a.continuous = {0.3};
  a.discrete = {1};
  const envs::Transition t = make_transition({0.1, 0.2, 0.3, 0.4}, a, 1.0,
                                             {0.0, 0.0, 0.0, 0.0}, true);
  for (const TargetStrategy s :
       {TargetStrategy::kAwacExpectation, TargetStrategy::kMaxQ,
        TargetStrategy::kMaxQActorMean, TargetStrategy::kMaxQActorCandidate}) {
    Rng rng(2);
    CHECK(agents::bellman_target(agent.critic, agent.actor, t, s, 0.9, 5,
                                 agent.cem_config, rng) == 1.0);
  }
}

TEST_CASE("zero discount reduces the target to the reward") {
  const action::ActionSpec spec = mixed_spec();
  Agent agent = small_agent(spec, 3);
  action::MixedAction a;
  a.continuous = {-0.5};
  a.discrete = {0};
  const envs::Transition t = make_transition({0.1, 0.2, 0.3, 0.4}, a, 0.0,
                                             {0.5, 0.4, 0.3, 0.2}, false);
  for (const TargetStrategy s :
       {TargetStrategy::kAwacExpectation, TargetStrategy::kMaxQ,
        TargetStrategy::kMaxQActorMean, TargetStrategy::kMaxQActorCandidate}) {
    Rng rng(4);
    CHECK(agents::bellman_target(agent.critic, agent.actor, t, s, 0.0, 5,
                                 agent.cem_config, rng) == 0.0);
  }
}

TEST_CASE("polyak endpoints copy or freeze the target") {
  Agent agent = small_agent(mixed_spec(), 5);
  agent.critic.tau = 1.0;
  // Perturb online so the nets differ.
  agent.critic.online.layers[0].weight(0, 0) += 0.5;
  agent.critic.polyak_update();
  CHECK(agent.critic.target == agent.critic.online);

  const nn::MlpParams frozen = agent.critic.target;
  agent.critic.tau = 0.0;
  agent.critic.online.layers[0].weight(0, 0) += 0.5;
  agent.critic.polyak_update();
  CHECK(agent.critic.target == frozen);
}

TEST_CASE("polyak update is an entrywise convex combination") {
  Agent agent = small_agent(mixed_spec(), 6);
  agent.critic.tau = 0.3;
  nn::MlpParams online = agent.critic.online;
  for (nn::Layer& l : online.layers) {
    for (double& w : l.weight.values()) w += 1.0;
  }
  agent.critic.online = online;
  const nn::MlpParams before = agent.critic.target;
  agent.critic.polyak_update();
  for (std::size_t k = 0; k < before.layers.size(); ++k) {
    const auto& lo = agent.critic.online.layers[k].weight.values();
    const auto& lb = before.layers[k].weight.values();
    const auto& lt = agent.critic.target.layers[k].weight.values();
    for (std::size_t i = 0; i < lt.size(); ++i) {
      const double low = std::min(lo[i], lb[i]);
      const double high = std::max(lo[i], lb[i]);
      CHECK(lt[i] >= low - 1e-12);
      CHECK(lt[i] <= high + 1e-12);
    }
  }
}

TEST_CASE("repeated critic updates regress Q to a fixed target") {
  Agent agent = small_agent(mixed_spec(), 7);
  agent.critic_opt = nn::make_optimizer(nn::OptimizerKind::kAdam, 1e-2, agent.critic.online);
  action::MixedAction a;
  a.continuous = {0.2};
  a.discrete = {1};
  replay::Batch batch;
  batch.transitions = {make_transition({0.1, -0.2, 0.3, 0.0}, a, 0.0, {}, true)};
  batch.positive_count = 1;
  for (int i = 0; i < 500; ++i) {
    agents::critic_update(agent.critic, batch, {0.7}, agent.critic_opt);
  }
  CHECK(agent.critic.q_online({0.1, -0.2, 0.3, 0.0}, a) == doctest::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("critic update returns the pre-update loss and rejects misaligned targets") {
  Agent agent = small_agent(mixed_spec(), 8);
  action::MixedAction a;
  a.continuous = {0.0};
  a.discrete = {0};
  replay::Batch batch;
  batch.transitions = {make_transition({0.0, 0.0, 0.0, 0.0}, a, 0.0, {}, true)};
  CHECK_THROWS_AS((void)agents::critic_update(agent.critic, batch, {0.1, 0.2},
                                              agent.critic_opt),
                  ShapeError);
  const double q = agent.critic.q_online({0.0, 0.0, 0.0, 0.0}, a);
  const double loss = agents::critic_update(agent.critic, batch, {q + 2.0}, agent.critic_opt);
  CHECK(loss == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("advantage is zero under a constant critic") {
  Agent agent = small_agent(mixed_spec(), 9);
  zero_params(agent.critic.target);
  action::MixedAction a;
  a.continuous = {0.4};
  a.discrete = {1};
  const envs::Transition t = make_transition({0.1, 0.1, 0.1, 0.1}, a, 0.0,
                                             {0.0, 0.0, 0.0, 0.0}, false);
  Rng rng(10);
  CHECK(agents::advantage(agent.critic, agent.actor, t, 16, rng) == 0.0);
}

TEST_CASE("advantage estimate converges to a large-sample oracle") {
  Agent agent = small_agent(mixed_spec(), 11);
  action::MixedAction a;
  a.continuous = {0.1};
  a.discrete = {0};
  const envs::Transition t = make_transition({0.3, -0.1, 0.8, 0.2}, a, 0.0, {}, false);

  // Oracle: independent 100k-sample Monte Carlo baseline.
  Rng oracle_rng(1234);
  const action::ActorDistribution dist = agent.actor.distribution(t.observation);
  const double q_data = agent.critic.q_target(t.observation, t.action);
  double sum = 0.0, sum_sq = 0.0;
  const int oracle_n = 100000;
  for (int i = 0; i < oracle_n; ++i) {
    const double q = agent.critic.q_target(
        t.observation, action::sample(agent.spec, dist, oracle_rng));
    sum += q;
    sum_sq += q * q;
  }
  const double oracle_mean = sum / oracle_n;
  const double variance = sum_sq / oracle_n - oracle_mean * oracle_mean;
  const double oracle_adv = q_data - oracle_mean;

  const int estimate_n = 20000;
  Rng rng(12);
  const double estimate = agents::advantage(agent.critic, agent.actor, t, estimate_n, rng);
  const double se = std::sqrt(variance / estimate_n + variance / oracle_n);
  CHECK(std::abs(estimate - oracle_adv) <= 2.0 * se);
}

TEST_CASE("advantage of the actor's own mode is near zero") {
  Agent agent = small_agent(mixed_spec(), 13);
  const std::vector<double> obs = {0.2, 0.2, -0.3, 0.5};
  // Point the actor head at a fixed action with tiny variance.
  zero_params(agent.actor.params);
  agent.actor.params.layers.back().bias = {0.25, -12.0, -30.0, 30.0};
  const action::ActorDistribution dist = agent.actor.distribution(obs);
  CHECK(dist.variance[0] <= 2e-4);

  const action::MixedAction mode = action::mode_action(agent.spec, dist);
  const envs::Transition t = make_transition(obs, mode, 0.0, {}, false);
  Rng rng(14);
  const double adv = agents::advantage(agent.critic, agent.actor, t, 64, rng);
  CHECK(std::abs(adv) < 0.05);
}

TEST_CASE("zero advantage reduces the actor update to behavioral cloning") {
  const action::ActionSpec spec = mixed_spec();
  Agent weighted = small_agent(spec, 15);
  zero_params(weighted.critic.target);  // constant critic: Adv = 0 exactly
  Agent cloned = weighted;

  action::MixedAction a;
  a.continuous = {0.5};
  a.discrete = {1};
  replay::Batch batch;
  batch.transitions = {make_transition({0.1, 0.2, 0.3, 0.4}, a, 1.0, {}, true),
                       make_transition({-0.1, 0.0, 0.2, 0.9}, a, 1.0, {}, true)};
  batch.positive_count = 2;

  Rng rng_w(16), rng_c(17);
  agents::actor_update(weighted.actor, weighted.critic, batch, weighted.config,
                       weighted.actor_opt, rng_w);
  AgentConfig bc_cfg = cloned.config;
  bc_cfg.aux_actor = true;  // weight-1 path, no advantage draws
  agents::actor_update(cloned.actor, cloned.critic, batch, bc_cfg, cloned.actor_opt, rng_c);

  CHECK(weighted.actor.params == cloned.actor.params);
}

TEST_CASE("positive filtering rejects batches holding failures") {
  Agent agent = small_agent(mixed_spec(), 18);
  action::MixedAction a;
  a.continuous = {0.0};
  a.discrete = {0};
  replay::Batch batch;
  batch.transitions = {make_transition({0.0, 0.0, 0.0, 0.0}, a, 0.0, {}, true, false)};
  Rng rng(19);
  CHECK_THROWS_AS((void)agents::actor_update(agent.actor, agent.critic, batch,
                                             agent.config, agent.actor_opt, rng),
                  UsageError);
}

TEST_CASE("empty filtered batch leaves the actor unchanged") {
  Agent agent = small_agent(mixed_spec(), 20);
  const nn::MlpParams before = agent.actor.params;
  replay::Batch empty;
  Rng rng(21);
  const double loss = agents::actor_update(agent.actor, agent.critic, empty,
                                           agent.config, agent.actor_opt, rng);
  CHECK(loss == 0.0);
  CHECK(agent.actor.params == before);
}

TEST_CASE("exp-advantage weights match a hand-assembled weighted gradient") {
  // Critic q-values per discrete index: (0, +1, -1). The actor always draws
  // index 0, so the advantages of targets 1 and 2 are exactly +1 and -1.
  DiscreteFixture fixture({0.0, 1.0, -1.0});
  Agent& agent = fixture.agent;
  agent.config.lambda = 1.0;
  agent.config.adv_clip = 20.0;
  agent.actor_opt = nn::make_optimizer(nn::OptimizerKind::kSgd, 1.0, agent.actor.params);

  action::MixedAction a1, a2;
  a1.discrete = {1};
  a2.discrete = {2};
  const envs::Transition t1 = make_transition({0.5}, a1, 0.0, {}, false);
  const envs::Transition t2 = make_transition({0.5}, a2, 0.0, {}, false);

  // Single-sample updates give the per-sample weighted gradients.
  Agent only1 = agent;
  replay::Batch b1;
  b1.transitions = {t1};
  Rng r1(22);
  agents::actor_update(only1.actor, only1.critic, b1, only1.config, only1.actor_opt, r1);

  Agent only2 = agent;
  replay::Batch b2;
  b2.transitions = {t2};
  Rng r2(23);
  agents::actor_update(only2.actor, only2.critic, b2, only2.config, only2.actor_opt, r2);

  Agent both = agent;
  replay::Batch b12;
  b12.transitions = {t1, t2};
  Rng r12(24);
  agents::actor_update(both.actor, both.critic, b12, both.config, both.actor_opt, r12);

  // params_after(both) = params - (delta1 + delta2) / 2 under sgd lr 1.
  const auto flatten = [](const nn::MlpParams& p) {
    std::vector<double> out;
    for (const nn::Layer& l : p.layers) {
      out.insert(out.end(), l.weight.values().begin(), l.weight.values().end());
      out.insert(out.end(), l.bias.begin(), l.bias.end());
    }
    return out;
  };
  const std::vector<double> base = flatten(agent.actor.params);
  const std::vector<double> p1 = flatten(only1.actor.params);
  const std::vector<double> p2 = flatten(only2.actor.params);
  const std::vector<double> pb = flatten(both.actor.params);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double delta1 = base[i] - p1[i];
    const double delta2 = base[i] - p2[i];
    CHECK(pb[i] == doctest::Approx(base[i] - 0.5 * (delta1 + delta2)).epsilon(1e-12));
  }
}

TEST_CASE("advantage weights are capped by adv_clip") {
  // Advantage +5 with clip 2: the update must use weight 2, not e^5.
  DiscreteFixture fixture({0.0, 5.0});
  Agent& agent = fixture.agent;
  agent.config.lambda = 1.0;
  agent.config.adv_clip = 2.0;
  agent.actor_opt = nn::make_optimizer(nn::OptimizerKind::kSgd, 1.0, agent.actor.params);

  action::MixedAction target;
  target.discrete = {1};
  replay::Batch batch;
  batch.transitions = {make_transition({0.5}, target, 0.0, {}, false)};

  Agent capped = agent;
  Rng r1(25);
  agents::actor_update(capped.actor, capped.critic, batch, capped.config,
                       capped.actor_opt, r1);

  // Reference: unweighted update scaled by exactly 2 via sgd lr.
  Agent reference = agent;
  AgentConfig bc = reference.config;
  bc.aux_actor = true;
  reference.actor_opt = nn::make_optimizer(nn::OptimizerKind::kSgd, 2.0, reference.actor.params);
  Rng r2(26);
  agents::actor_update(reference.actor, reference.critic, batch, bc, reference.actor_opt, r2);

  CHECK(capped.actor.params == reference.actor.params);
}

TEST_CASE("actor-candidate targets dominate expectation targets when samples coincide") {
  DiscreteFixture fixture({0.4, -0.2, 0.1});
  Agent& agent = fixture.agent;
  action::MixedAction a;
  a.discrete = {1};
  const envs::Transition t = make_transition({0.5}, a, 0.0, {0.5}, false);

  Rng r1(27), r2(28);
  const double expect_target = agents::bellman_target(
      agent.critic, agent.actor, t, TargetStrategy::kAwacExpectation, 0.9, 8,
      agent.cem_config, r1);
  const double candidate_target = agents::bellman_target(
      agent.critic, agent.actor, t, TargetStrategy::kMaxQActorCandidate, 0.9, 8,
      agent.cem_config, r2);
  // Every actor sample is index 0, so the expectation equals Q(s', 0); the
  // candidate run evaluates that same action plus others.
  CHECK(expect_target == doctest::Approx(0.9 * 0.4).epsilon(1e-12));
  CHECK(candidate_target >= expect_target - 1e-12);
}

TEST_CASE("exploration strategy endpoints collapse to the pure policies") {
  Agent agent = small_agent(mixed_spec(), 29);
  const std::vector<double> obs = {0.1, 0.2, 0.3, 0.4};

  Rng ra(30), rb(30);
  const action::MixedAction episode_critic = agents::select_exploration_action(
      agent, obs, ExplorationStrategy::kEpisodeSwitch, true, ra);
  const action::MixedAction pure_critic = agents::select_exploration_action(
      agent, obs, ExplorationStrategy::kCriticOnly, false, rb);
  CHECK(episode_critic == pure_critic);

  Rng rc(31), rd(31);
  const action::MixedAction episode_actor = agents::select_exploration_action(
      agent, obs, ExplorationStrategy::kEpisodeSwitch, false, rc);
  const action::MixedAction pure_actor = agents::select_exploration_action(
      agent, obs, ExplorationStrategy::kActorOnly, false, rd);
  CHECK(episode_actor == pure_actor);

  // Step switch with p=1 consumes one coin, then follows the critic path.
  agent.config.p_critic = 1.0;
  Rng re(32), rf(32);
  const action::MixedAction stepped = agents::select_exploration_action(
      agent, obs, ExplorationStrategy::kStepSwitch, false, re);
  (void)rf.bernoulli(1.0);
  const action::MixedAction manual = agents::select_exploration_action(
      agent, obs, ExplorationStrategy::kCriticOnly, false, rf);
  CHECK(stepped == manual);
}

TEST_CASE("episode coin frequency tracks p_critic") {
  AgentConfig cfg;
  cfg.p_critic = 0.8;
  Rng rng(33);
  int critic_episodes = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    critic_episodes += agents::draw_episode_policy_coin(cfg, rng) ? 1 : 0;
  }
  CHECK(static_cast<double>(critic_episodes) / n == doctest::Approx(0.8).epsilon(0.0125));
}

TEST_CASE("make_algorithm presets") {
  const AgentConfig aw = agents::make_algorithm("aw_opt");
  CHECK(aw.target_strategy == TargetStrategy::kMaxQActorCandidate);
  CHECK(aw.exploration == ExplorationStrategy::kEpisodeSwitch);
  CHECK(aw.p_critic == 0.8);
  CHECK(aw.positive_filtering);
  CHECK(aw.balanced_critic_batches);

  const AgentConfig awac = agents::make_algorithm("awac");
  CHECK(awac.target_strategy == TargetStrategy::kAwacExpectation);
  CHECK(awac.exploration == ExplorationStrategy::kActorOnly);
  CHECK_FALSE(awac.positive_filtering);
  CHECK_FALSE(awac.balanced_critic_batches);

  const AgentConfig qt = agents::make_algorithm("qt_opt");
  CHECK(qt.target_strategy == TargetStrategy::kMaxQ);
  CHECK(qt.exploration == ExplorationStrategy::kCriticOnly);
  CHECK(qt.aux_actor);

  const AgentConfig ablation =
      agents::make_algorithm("aw_opt", {{"positive_filtering", "false"}});
  CHECK_FALSE(ablation.positive_filtering);
  CHECK(ablation.target_strategy == aw.target_strategy);
  CHECK(ablation.exploration == aw.exploration);
}

TEST_CASE("contradictory overrides are rejected") {
  CHECK_THROWS_AS((void)agents::make_algorithm("qt_opt", {{"exploration", "actor_only"}}),
                  ConfigError);
  CHECK_THROWS_AS((void)agents::make_algorithm("qt_opt",
                                               {{"target_strategy", "awac_expectation"}}),
                  ConfigError);
  CHECK_THROWS_AS((void)agents::make_algorithm("nonsense"), ConfigError);
  CHECK_THROWS_AS((void)agents::make_algorithm("awac", {{"lambda", "-1"}}), ConfigError);
}

TEST_CASE("full AW-Opt critic training reaches the tabular fixed point") {
  agents::AgentConfig cfg = agents::make_algorithm("aw_opt");
  cfg.gamma = testing::TabularChain::kGamma;
  cfg.tau = 0.05;
  cfg.hidden = {32, 32};
  cfg.batch_size = 16;
  cfg.n_adv_samples = 4;
  const Agent agent = testing::train_tabular_agent(cfg, 2000, 7);
  CHECK(testing::tabular_q_error(agent) <= 1e-2);
}

}  // TEST_SUITE
