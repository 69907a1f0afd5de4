#include "awopt/cli/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "awopt/config/experiment_config.hpp"
#include "awopt/config/manifest.hpp"
#include "awopt/config/toml.hpp"
#include "awopt/errors.hpp"
#include "awopt/experiment/experiment.hpp"

namespace awopt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int classify_error(const std::exception& e) {
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  return kExitUsage;
}

int report_error(const char* command, const std::exception& e) {
  std::cerr << command << ": error: " << e.what() << "\n";
  return classify_error(e);
}

// Resolved config tree for train/evaluate/matrix: config file (or algorithm
// defaults), then the flag-level settings, then --override pairs.
json resolve_config_tree(const std::string& config_path, const std::string& algo,
                         const std::string& data_path,
                         const std::vector<std::string>& overrides) {
  json tree;
  if (!config_path.empty()) {
    tree = config::toml_parse_file(config_path);
    if (!algo.empty()) tree["agent"]["algorithm"] = algo;
  } else {
    tree = config::default_config_json(algo.empty() ? "aw_opt" : algo);
  }
  if (!data_path.empty()) {
    tree["data"]["path"] = data_path;
    tree["data"].erase("generate");
  }
  for (const std::string& o : overrides) {
    config::apply_override_to_json(tree, o);
  }
  return tree;
}

struct RunSummary {
  std::uint64_t seed = 0;
  double post_offline_success = 0.0;
  double final_success = 0.0;
  std::optional<std::uint64_t> transitions_to_threshold;
  double action_select_ms = 0.0;
};

RunSummary summarize_records(const std::vector<experiment::MetricsRecord>& records,
                             double threshold) {
  RunSummary s;
  for (const auto& r : records) {
    if (r.phase == experiment::Phase::kOffline) s.post_offline_success = r.success_rate;
  }
  if (!records.empty()) {
    s.final_success = records.back().success_rate;
    s.action_select_ms = records.back().action_select_ms;
  }
  s.transitions_to_threshold = experiment::transitions_to_threshold(records, threshold);
  return s;
}

std::string format_transitions(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

}  // namespace

std::string resolve_out_path(const std::string& path) {
  if (path.empty()) return path;
  if (fs::path(path).is_absolute()) return path;
  const char* root = std::getenv("AWOPT_OUT_DIR");
  if (root == nullptr || *root == '\0') return path;
  return (fs::path(root) / path).string();
}

int cmd_generate_data(const GenerateDataArgs& args) {
  try {
    if (args.episodes < 1) throw UsageError("--episodes must be >= 1");
    if (args.out.empty()) throw UsageError("--out is required");

    experiment::ExperimentConfig cfg;
    cfg.env_name = args.env;
    if (args.obstacles_max) {
      cfg.nav.obstacles_max = *args.obstacles_max;
      if (cfg.nav.obstacles_min > cfg.nav.obstacles_max) cfg.nav.obstacles_min = 0;
    }
    std::unique_ptr<envs::Env> env = experiment::make_env_from_config(cfg);

    envs::Policy policy;
    envs::BehaviorTag tag;
    if (args.policy == "random") {
      policy = envs::make_uniform_random_policy(*env);
      tag = envs::BehaviorTag::kRandom;
    } else if (args.policy == "scripted") {
      policy = envs::make_scripted_policy(*env, args.noise);
      tag = args.noise == 0.0 ? envs::BehaviorTag::kDemo : envs::BehaviorTag::kScripted;
    } else {
      throw UsageError("--policy must be scripted or random");
    }

    Rng rng(args.seed);
    const std::vector<envs::Episode> episodes = envs::generate_dataset(
        *env, policy, args.episodes, envs::keep_mode_from_string(args.keep), tag, rng);

    const std::string out_path = resolve_out_path(args.out);
    if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    envs::save_episodes_jsonl(episodes, out_path);

    std::size_t positives = 0;
    std::size_t transitions = 0;
    for (const envs::Episode& ep : episodes) {
      positives += ep.success ? 1 : 0;
      transitions += ep.length();
    }
    std::printf("wrote %s: episodes=%zu positives=%zu negatives=%zu transitions=%zu\n",
                out_path.c_str(), episodes.size(), positives,
                episodes.size() - positives, transitions);
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error("generate-data", e);
  }
}

int cmd_train(const TrainArgs& args) {
  try {
    json tree = resolve_config_tree(args.config_path, args.algo, args.data_path,
                                    args.overrides);
    if (args.seed) tree["experiment"]["seeds"] = json::array({*args.seed});
    if (!args.out_dir.empty()) tree["experiment"]["out_dir"] = args.out_dir;
    if (args.record_timing) tree["experiment"]["record_timing"] = true;

    config::RunSpec spec = config::run_spec_from_json(tree);
    if (spec.base.out_dir.empty()) {
      throw ConfigError("experiment.out_dir: required (or pass --out)");
    }
    spec.base.out_dir = resolve_out_path(spec.base.out_dir);

    const json resolved = config::run_spec_to_json(spec);
    config::RunManifest manifest;
    manifest.config_hash = config::canonical_hash_hex(resolved);
    manifest.seeds = spec.seeds;
    manifest.out_dir = spec.base.out_dir;
    manifest.resolved_config = resolved;
    manifest.started_at = config::timestamp_utc_now();

    fs::create_directories(spec.base.out_dir);
    for (const std::uint64_t seed : spec.seeds) {
      experiment::ExperimentConfig run = spec.base;
      run.seed = seed;
      if (spec.seeds.size() > 1) {
        run.out_dir = (fs::path(spec.base.out_dir) / ("seed_" + std::to_string(seed))).string();
      }
      const experiment::RunResult result = experiment::run_experiment(run);
      const RunSummary summary = summarize_records(result.records, run.report_threshold);
      std::printf("seed %llu: post_offline=%.4f final=%.4f transitions=%llu\n",
                  static_cast<unsigned long long>(seed), summary.post_offline_success,
                  summary.final_success,
                  static_cast<unsigned long long>(
                      result.records.empty() ? 0 : result.records.back().transitions));
    }

    manifest.finished_at = config::timestamp_utc_now();
    config::write_manifest(manifest,
                           (fs::path(spec.base.out_dir) / "manifest.json").string());
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error("train", e);
  }
}

int cmd_evaluate(const EvaluateArgs& args) {
  try {
    if (args.checkpoint_dir.empty()) throw UsageError("--checkpoint is required");
    json tree = resolve_config_tree(args.config_path, args.algo, "", args.overrides);
    tree["experiment"]["seeds"] = json::array({args.seed});
    // Evaluation does not touch the replay buffer or datasets.
    tree["data"] = json::object();

    config::RunSpec spec = config::run_spec_from_json(tree);
    experiment::ExperimentConfig cfg = spec.base;
    cfg.seed = args.seed;

    std::unique_ptr<envs::Env> env = experiment::make_env_from_config(cfg);
    Rng master(cfg.seed);
    Rng init_rng = master.split(0x01);
    agents::Agent agent = agents::make_agent(env->observation_dim(), env->action_spec(),
                                             cfg.agent, cfg.cem, init_rng);
    experiment::load_agent_checkpoint(agent, args.checkpoint_dir);

    Rng eval_rng = master.split(0x04);
    const experiment::EvalResult result =
        experiment::evaluate(agent, *env, args.episodes, eval_rng);
    std::printf("success_rate=%.4f action_select_ms=%.4f episodes=%u\n",
                result.success_rate, result.mean_action_select_ms, args.episodes);
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error("evaluate", e);
  }
}

int cmd_ablation_matrix(const MatrixArgs& args) {
  try {
    if (args.matrix.empty()) throw UsageError("--matrix is required");
    if (args.out_dir.empty()) throw UsageError("--out is required");
    if (args.seeds.empty()) throw UsageError("--seeds is required");

    struct Variant {
      std::string name;
      std::string override_key;  // empty: name is the algorithm itself
      std::string override_value;
    };
    std::vector<Variant> variants;
    if (args.matrix == "exploration") {
      for (const char* v : {"actor_only", "critic_only", "episode_switch", "step_switch"}) {
        variants.push_back({v, "agent.exploration", v});
      }
    } else if (args.matrix == "targets") {
      for (const char* v : {"awac_expectation", "max_q", "max_q_actor_mean",
                            "max_q_actor_candidate"}) {
        variants.push_back({v, "agent.target_strategy", v});
      }
    } else if (args.matrix == "splits") {
      // critic/actor exploration shares
      for (const char* v : {"0.2", "0.5", "0.6", "0.7", "0.8", "0.9"}) {
        variants.push_back({std::string("split_") + v, "agent.p_critic", v});
      }
    } else if (args.matrix == "features") {
      for (const char* v : {"aw_opt", "aw_opt_no_positive_filtering",
                            "aw_opt_no_actor_candidate", "aw_opt_no_hybrid_exploration"}) {
        variants.push_back({v, "agent.algorithm", v});
      }
    } else {
      throw UsageError("--matrix must be one of exploration|targets|splits|features");
    }

    const std::string out_dir = resolve_out_path(args.out_dir);
    fs::create_directories(out_dir);

    struct Row {
      std::string variant;
      bool failed = false;
      RunSummary mean;
    };
    std::vector<Row> rows;
    bool any_failed = false;

    for (const Variant& variant : variants) {
      Row row;
      row.variant = variant.name;
      try {
        double post_sum = 0.0, final_sum = 0.0, ms_sum = 0.0;
        std::optional<std::uint64_t> best_transitions;
        for (const std::uint64_t seed : args.seeds) {
          json tree = resolve_config_tree(args.config_path, args.algo, "", args.overrides);
          config::apply_override_to_json(tree, variant.override_key + "=" +
                                                   variant.override_value);
          tree["experiment"]["seeds"] = json::array({seed});
          config::RunSpec spec = config::run_spec_from_json(tree);
          experiment::ExperimentConfig run = spec.base;
          run.seed = seed;
          run.out_dir = (fs::path(out_dir) / variant.name /
                         ("seed_" + std::to_string(seed))).string();
          const experiment::RunResult result = experiment::run_experiment(run);
          const RunSummary s = summarize_records(result.records, run.report_threshold);
          post_sum += s.post_offline_success;
          final_sum += s.final_success;
          ms_sum += s.action_select_ms;
          if (s.transitions_to_threshold &&
              (!best_transitions || *s.transitions_to_threshold < *best_transitions)) {
            best_transitions = s.transitions_to_threshold;
          }
        }
        const double n = static_cast<double>(args.seeds.size());
        row.mean.post_offline_success = post_sum / n;
        row.mean.final_success = final_sum / n;
        row.mean.action_select_ms = ms_sum / n;
        row.mean.transitions_to_threshold = best_transitions;
      } catch (const std::exception& e) {
        std::cerr << "ablation-matrix: variant " << variant.name << " failed: "
                  << e.what() << "\n";
        row.failed = true;
        any_failed = true;
      }
      rows.push_back(std::move(row));
    }

    const std::string csv_path = (fs::path(out_dir) / "summary.csv").string();
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw UsageError("cannot open " + csv_path);
    out << "variant,status,post_offline_success,final_success,"
           "transitions_to_threshold,action_select_ms\n";
    char line[256];
    for (const Row& row : rows) {
      if (row.failed) {
        out << row.variant << ",failed,,,,\n";
        continue;
      }
      std::snprintf(line, sizeof(line), "%s,ok,%.6f,%.6f,%s,%.4f\n",
                    row.variant.c_str(), row.mean.post_offline_success,
                    row.mean.final_success,
                    format_transitions(row.mean.transitions_to_threshold).c_str(),
                    row.mean.action_select_ms);
      out << line;
    }
    out.close();
    std::printf("wrote %s (%zu variants)\n", csv_path.c_str(), rows.size());
    return any_failed ? kExitPartialFailure : kExitOk;
  } catch (const std::exception& e) {
    return report_error("ablation-matrix", e);
  }
}

int cmd_summarize(const SummarizeArgs& args) {
  try {
    if (args.run_dirs.empty()) throw UsageError("at least one run directory required");
    if (args.out.empty()) throw UsageError("--out is required");

    const std::string out_path = resolve_out_path(args.out);
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw UsageError("cannot open " + out_path);
    out << "run,algorithm,post_offline_success,final_success,"
           "transitions_to_threshold,action_select_ms\n";
    char line[512];
    for (const std::string& dir : args.run_dirs) {
      const std::vector<experiment::MetricsRecord> records =
          experiment::read_metrics_csv((fs::path(dir) / "metrics.csv").string());
      std::string algorithm;
      const fs::path manifest_path = fs::path(dir) / "manifest.json";
      if (fs::exists(manifest_path)) {
        const config::RunManifest manifest = config::read_manifest(manifest_path.string());
        algorithm = manifest.resolved_config.value(
            "/agent/algorithm"_json_pointer, std::string());
      }
      const RunSummary s = summarize_records(records, args.threshold);
      std::snprintf(line, sizeof(line), "%s,%s,%.6f,%.6f,%s,%.4f\n", dir.c_str(),
                    algorithm.c_str(), s.post_offline_success, s.final_success,
                    format_transitions(s.transitions_to_threshold).c_str(),
                    s.action_select_ms);
      out << line;
    }
    std::printf("wrote %s (%zu runs)\n", out_path.c_str(), args.run_dirs.size());
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error("summarize", e);
  }
}

}  // namespace awopt::cli
