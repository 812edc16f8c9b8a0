#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlsbm/defs.hpp"

namespace mlsbm::cli {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNoConverge = 3;
inline constexpr int kExitUndefinedMetric = 4;

// Fully resolved options of one invocation. Defaults here are the documented
// CLI defaults; main() overlays config file values, then command-line flags.
struct RunConfig {
  std::string command;

  // io
  std::string input;
  std::string output_dir = ".";  // default may come from MLSBM_OUTPUT_DIR
  std::optional<bool> self_loops;

  // model / EM
  int k_groups = 0;
  std::string mode = "directed-full";
  int n_restarts = 10;
  int max_iterations = 500;
  double convergence_tolerance = 0.1;
  int convergence_window = 10;
  int check_every = 1;
  double init_scale = 1.0;
  std::uint64_t seed = 1;

  // generate
  std::string preset;  // empty = correlated benchmark; else G1 | G2 | G3
  int n_nodes = 300;
  int n_layers = 4;
  double keep_prob = 1.0;
  double mixing = 0.0;
  double degree_exponent = -3.0;
  int min_degree = 3;
  int max_degree = 30;

  // predict / interdependence
  int target_layer = -1;  // required by predict (holdout mode) and interdep
  std::vector<int> training_layers;  // empty = all layers
  bool whole_dataset = false;
  std::string direction = "greedy";  // or "topdown"; bottom-up/top-down accepted as synonyms
  int max_layers = 0;                   // 0 = all layers
  int min_layers = 1;

  // cluster-layers
  int n_clusters = 2;
  std::string affinities;  // fitted affinity file; empty = fit from --input
};

// Key=value dump of every option relevant to `command`, written alongside all
// artifacts so a run can be replayed exactly.
std::string resolved_config_text(const RunConfig& cfg);

int cmd_generate(const RunConfig& cfg);
int cmd_fit(const RunConfig& cfg);
int cmd_predict(const RunConfig& cfg);
int cmd_interdep(const RunConfig& cfg);
int cmd_cluster_layers(const RunConfig& cfg);

// Runs the command named by cfg.command and maps exceptions to exit codes
// (UsageError 1, ParseError 2, UndefinedMetricError 4).
int dispatch(const RunConfig& cfg);

}  // namespace mlsbm::cli
