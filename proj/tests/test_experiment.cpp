#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "awopt/envs/reach_env.hpp"
#include "awopt/errors.hpp"
#include "awopt/experiment/experiment.hpp"

using namespace awopt;
using experiment::ExperimentConfig;
using experiment::MetricsRecord;
using experiment::Phase;

namespace {

// Small reach-env run used by most loop tests.
ExperimentConfig reach_config(const std::string& algorithm) {
  ExperimentConfig cfg;
  cfg.env_name = "reach";
  cfg.agent = agents::make_algorithm(algorithm);
  cfg.agent.hidden = {16, 16};
  cfg.agent.batch_size = 16;
  cfg.agent.n_adv_samples = 4;
  cfg.cem.population = 16;
  cfg.cem.iterations = 2;
  cfg.cem.elite_count = 3;
  cfg.datagen.enabled = true;
  cfg.datagen.policy = "scripted";
  cfg.datagen.episodes = 20;
  cfg.datagen.keep = "positives";
  cfg.datagen.seed = 50;
  cfg.pretrain_steps = 40;
  cfg.online_episodes = 10;
  cfg.gradient_steps_per_episode = 1;
  cfg.eval_every_steps = 20;
  cfg.eval_every_episodes = 5;
  cfg.eval_episodes = 10;
  return cfg;
}

MetricsRecord rec(std::uint64_t transitions, double success) {
  MetricsRecord r;
  r.transitions = transitions;
  r.success_rate = success;
  return r;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("transitions_to_threshold uses a trailing window of three") {
  const std::vector<MetricsRecord> records = {rec(100, 0.1), rec(200, 0.5), rec(300, 0.9)};
  // Smoothed: 0.1, 0.3, 0.5 -> threshold 0.45 is first reached at 300.
  const auto hit = experiment::transitions_to_threshold(records, 0.45);
  REQUIRE(hit.has_value());
  CHECK(*hit == 300);
}

TEST_CASE("transitions_to_threshold threshold zero returns the first record") {
  const std::vector<MetricsRecord> records = {rec(120, 0.0), rec(240, 0.2)};
  const auto hit = experiment::transitions_to_threshold(records, 0.0);
  REQUIRE(hit.has_value());
  CHECK(*hit == 120);
}

TEST_CASE("transitions_to_threshold above the maximum yields none") {
  const std::vector<MetricsRecord> records = {rec(100, 0.4), rec(200, 0.6)};
  CHECK_FALSE(experiment::transitions_to_threshold(records, 0.99).has_value());
}

TEST_CASE("metrics csv round-trips") {
  std::vector<MetricsRecord> records;
  records.push_back({100, 0, Phase::kOffline, 0.25, 1.5});
  records.push_back({200, 150, Phase::kOnline, 0.75, 0.125});
  const std::string path = "experiment_metrics_roundtrip.csv";
  experiment::write_metrics_csv(records, path, /*include_timing=*/true);
  const std::vector<MetricsRecord> loaded = experiment::read_metrics_csv(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].step == 100);
  CHECK(loaded[0].phase == Phase::kOffline);
  CHECK(loaded[0].success_rate == doctest::Approx(0.25));
  CHECK(loaded[0].action_select_ms == doctest::Approx(1.5));
  CHECK(loaded[1].transitions == 150);
  CHECK(loaded[1].phase == Phase::kOnline);
  std::remove(path.c_str());
}

TEST_CASE("metrics csv zeroes the timing column by default") {
  std::vector<MetricsRecord> records;
  records.push_back({1, 2, Phase::kOffline, 0.5, 123.456});
  const std::string path = "experiment_metrics_notiming.csv";
  experiment::write_metrics_csv(records, path, /*include_timing=*/false);
  const std::vector<MetricsRecord> loaded = experiment::read_metrics_csv(path);
  CHECK(loaded[0].action_select_ms == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("zero pretrain steps leaves parameters at initialization with one record") {
  ExperimentConfig cfg = reach_config("aw_opt");
  cfg.pretrain_steps = 0;
  cfg.online_episodes = 0;
  const experiment::RunResult result = experiment::run_experiment(cfg);
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].phase == Phase::kOffline);
  CHECK(result.records[0].step == 0);
  CHECK(result.records[0].transitions == 0);

  // Same seed, fresh agent: parameters must match the untouched init.
  Rng master(cfg.seed);
  Rng init_rng = master.split(0x01);
  envs::ReachEnv env;
  const agents::Agent fresh = agents::make_agent(env.observation_dim(), env.action_spec(),
                                                 cfg.agent, cfg.cem, init_rng);
  CHECK(result.agent.actor.params == fresh.actor.params);
  CHECK(result.agent.critic.online == fresh.critic.online);
}

TEST_CASE("offline phase requires a nonempty buffer") {
  ExperimentConfig cfg = reach_config("aw_opt");
  cfg.datagen.enabled = false;  // no prior data at all
  CHECK_THROWS_AS((void)experiment::run_experiment(cfg), ConfigError);
}

TEST_CASE("offline phase performs zero environment steps") {
  ExperimentConfig cfg = reach_config("aw_opt");
  cfg.online_episodes = 0;
  cfg.pretrain_steps = 30;
  const experiment::RunResult result = experiment::run_experiment(cfg);
  CHECK(result.env_steps == 0);
  for (const MetricsRecord& r : result.records) {
    CHECK(r.phase == Phase::kOffline);
    CHECK(r.transitions == 0);
  }
}

TEST_CASE("zero online episodes adds no transitions or records") {
  ExperimentConfig cfg = reach_config("aw_opt");
  cfg.online_episodes = 0;
  const experiment::RunResult result = experiment::run_experiment(cfg);
  for (const MetricsRecord& r : result.records) CHECK(r.phase == Phase::kOffline);
  CHECK(result.records.back().transitions == 0);
}

TEST_CASE("transitions counted equal the sum of collected episode lengths") {
  ExperimentConfig cfg = reach_config("aw_opt");
  cfg.write_episodes = true;
  cfg.out_dir = "experiment_transition_count_run";
  const experiment::RunResult result = experiment::run_experiment(cfg);
  const auto episodes = envs::load_episodes_jsonl(cfg.out_dir + "/episodes.jsonl");
  std::uint64_t total = 0;
  for (const auto& ep : episodes) total += ep.length();
  CHECK(result.records.back().transitions == total);
  CHECK(result.env_steps == total);
  std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("fixed seeds give bit-identical metrics records") {
  ExperimentConfig cfg = reach_config("aw_opt");
  cfg.seed = 99;
  const experiment::RunResult a = experiment::run_experiment(cfg);
  const experiment::RunResult b = experiment::run_experiment(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].step == b.records[i].step);
    CHECK(a.records[i].transitions == b.records[i].transitions);
    CHECK(a.records[i].phase == b.records[i].phase);
    CHECK(a.records[i].success_rate == b.records[i].success_rate);
  }
  CHECK(a.agent.critic.online == b.agent.critic.online);
  CHECK(a.agent.actor.params == b.agent.actor.params);
}

TEST_CASE("parallel collection reproduces the serial episode stream") {
  ExperimentConfig serial = reach_config("aw_opt");
  serial.online_episodes = 8;
  serial.episodes_per_iteration = 4;
  serial.collect_workers = 1;
  ExperimentConfig parallel = serial;
  parallel.collect_workers = 4;
  const experiment::RunResult a = experiment::run_experiment(serial);
  const experiment::RunResult b = experiment::run_experiment(parallel);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].success_rate == b.records[i].success_rate);
    CHECK(a.records[i].transitions == b.records[i].transitions);
  }
  CHECK(a.agent.critic.online == b.agent.critic.online);
}

TEST_CASE("evaluate reports success fraction in {0,1} for one episode") {
  ExperimentConfig cfg = reach_config("aw_opt");
  std::unique_ptr<envs::Env> env = experiment::make_env_from_config(cfg);
  Rng init(5);
  agents::Agent agent = agents::make_agent(env->observation_dim(), env->action_spec(),
                                           cfg.agent, cfg.cem, init);
  Rng rng(6);
  const experiment::EvalResult r = experiment::evaluate(agent, *env, 1, rng);
  CHECK((r.success_rate == 0.0 || r.success_rate == 1.0));
}

TEST_CASE("checkpoints round-trip through the run directory") {
  ExperimentConfig cfg = reach_config("aw_opt");
  cfg.out_dir = "experiment_checkpoint_run";
  const experiment::RunResult result = experiment::run_experiment(cfg);

  std::unique_ptr<envs::Env> env = experiment::make_env_from_config(cfg);
  Rng init(1);
  agents::Agent loaded = agents::make_agent(env->observation_dim(), env->action_spec(),
                                            cfg.agent, cfg.cem, init);
  experiment::load_agent_checkpoint(loaded, cfg.out_dir);
  CHECK(loaded.actor.params == result.agent.actor.params);
  CHECK(loaded.critic.online == result.agent.critic.online);
  CHECK(loaded.critic.target == result.agent.critic.target);
  std::filesystem::remove_all(cfg.out_dir);
}

}  // TEST_SUITE
