#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace awopt::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitPartialFailure = 4;

struct GenerateDataArgs {
  std::string env = "nav";
  std::uint32_t episodes = 0;
  std::string keep = "all";
  std::string policy = "scripted";  // scripted | random
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::uint32_t> obstacles_max;
};

struct TrainArgs {
  std::string config_path;
  std::string algo;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string data_path;
  bool record_timing = false;
};

struct EvaluateArgs {
  std::string config_path;
  std::string algo;
  std::vector<std::string> overrides;
  std::string checkpoint_dir;
  std::uint32_t episodes = 100;
  std::uint64_t seed = 0;
};

struct MatrixArgs {
  std::string config_path;
  std::string algo = "aw_opt";
  std::string matrix;  // exploration | targets | splits | features
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
};

struct SummarizeArgs {
  std::vector<std::string> run_dirs;
  std::string out;
  double threshold = 0.5;
};

// Each command returns one of the exit codes above and reports errors on
// stderr. AWOPT_OUT_DIR, when set, prefixes relative output paths.
int cmd_generate_data(const GenerateDataArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_evaluate(const EvaluateArgs& args);
int cmd_ablation_matrix(const MatrixArgs& args);
int cmd_summarize(const SummarizeArgs& args);

// Applies the AWOPT_OUT_DIR override to a relative path.
std::string resolve_out_path(const std::string& path);

}  // namespace awopt::cli
