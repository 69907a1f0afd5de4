#include <CLI11.hpp>

#include "awopt/cli/commands.hpp"
#include "awopt/config/manifest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"AW-Opt / AWAC / QT-Opt training and experiment runner"};
  app.set_version_flag("--version", awopt::config::kVersionString);
  app.require_subcommand(1);

  awopt::cli::GenerateDataArgs gen;
  CLI::App* c_gen = app.add_subcommand("generate-data", "Roll out a policy and write JSONL episodes");
  c_gen->add_option("--env", gen.env, "Environment name (nav|reach)");
  c_gen->add_option("--episodes", gen.episodes, "Number of kept episodes")->required();
  c_gen->add_option("--keep", gen.keep, "all|positives|negatives");
  c_gen->add_option("--policy", gen.policy, "scripted|random");
  c_gen->add_option("--noise", gen.noise, "Gaussian action noise sigma for the scripted policy");
  c_gen->add_option("--seed", gen.seed, "RNG seed");
  c_gen->add_option("--out", gen.out, "Output JSONL path")->required();
  std::uint32_t obstacles_max = 0;
  CLI::Option* obs_opt = c_gen->add_option("--obstacles-max", obstacles_max,
                                           "Maximum obstacle count (nav only)");

  awopt::cli::TrainArgs train;
  CLI::App* c_train = app.add_subcommand("train", "Offline pretraining followed by online finetuning");
  c_train->add_option("--config", train.config_path, "TOML config file");
  c_train->add_option("--algo", train.algo, "Algorithm preset (qt_opt|awac|aw_opt|named variant)");
  c_train->add_option("--override", train.overrides, "key=value config override (repeatable)");
  std::uint64_t train_seed = 0;
  CLI::Option* seed_opt = c_train->add_option("--seed", train_seed, "Single seed (overrides config seeds)");
  c_train->add_option("--out", train.out_dir, "Output directory");
  c_train->add_option("--data", train.data_path, "Prior-data JSONL path");
  c_train->add_flag("--record-timing", train.record_timing,
                    "Write measured action-selection times into metrics.csv");

  awopt::cli::EvaluateArgs eval;
  CLI::App* c_eval = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  c_eval->add_option("--config", eval.config_path, "TOML config file");
  c_eval->add_option("--algo", eval.algo, "Algorithm preset");
  c_eval->add_option("--override", eval.overrides, "key=value config override (repeatable)");
  c_eval->add_option("--checkpoint", eval.checkpoint_dir, "Checkpoint directory")->required();
  c_eval->add_option("--episodes", eval.episodes, "Evaluation episodes");
  c_eval->add_option("--seed", eval.seed, "RNG seed");

  awopt::cli::MatrixArgs matrix;
  CLI::App* c_matrix = app.add_subcommand("ablation-matrix", "Run a named variant matrix");
  c_matrix->add_option("--config", matrix.config_path, "TOML config file");
  c_matrix->add_option("--algo", matrix.algo, "Base algorithm preset");
  c_matrix->add_option("--matrix", matrix.matrix, "exploration|targets|splits|features")->required();
  c_matrix->add_option("--override", matrix.overrides, "key=value config override (repeatable)");
  c_matrix->add_option("--seeds", matrix.seeds, "Seed list")->required()->delimiter(',');
  c_matrix->add_option("--out", matrix.out_dir, "Output directory")->required();

  awopt::cli::SummarizeArgs summarize;
  CLI::App* c_sum = app.add_subcommand("summarize", "Aggregate run directories into one CSV");
  c_sum->add_option("--runs", summarize.run_dirs, "Run directories")->required()->delimiter(',');
  c_sum->add_option("--out", summarize.out, "Output CSV path")->required();
  c_sum->add_option("--threshold", summarize.threshold, "Success threshold for transitions-to-threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : awopt::cli::kExitUsage;
  }

  if (c_gen->parsed()) {
    if (obs_opt->count() > 0) gen.obstacles_max = obstacles_max;
    return awopt::cli::cmd_generate_data(gen);
  }
  if (c_train->parsed()) {
    if (seed_opt->count() > 0) train.seed = train_seed;
    return awopt::cli::cmd_train(train);
  }
  if (c_eval->parsed()) return awopt::cli::cmd_evaluate(eval);
  if (c_matrix->parsed()) return awopt::cli::cmd_ablation_matrix(matrix);
  if (c_sum->parsed()) return awopt::cli::cmd_summarize(summarize);
  return awopt::cli::kExitUsage;
}
