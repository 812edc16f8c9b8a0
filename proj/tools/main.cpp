#include <cstdlib>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mlsbm/commands.hpp"

namespace {

void add_shared_options(CLI::App* cmd, mlsbm::cli::RunConfig& cfg) {
  cmd->add_option("-i,--input", cfg.input, "edge-list input file");
  cmd->add_option("-o,--output-dir", cfg.output_dir, "directory for all output artifacts")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "run seed; every random stream derives from it")
      ->capture_default_str();
  cmd->add_option("-k,--k", cfg.k_groups, "number of groups");
  cmd->add_option("--mode", cfg.mode,
                  "directed-full | undirected-full | directed-diagonal | undirected-diagonal")
      ->capture_default_str();
  cmd->add_option("--restarts", cfg.n_restarts, "EM restarts, best objective wins")
      ->capture_default_str();
  cmd->add_option("--max-iter,--max-iterations", cfg.max_iterations, "EM sweep cap")
      ->capture_default_str();
  cmd->add_option("--tol,--tolerance", cfg.convergence_tolerance,
                  "objective improvement counted as progress")
      ->capture_default_str();
  cmd->add_option("--window", cfg.convergence_window,
                  "consecutive low-improvement checks required to stop")
      ->capture_default_str();
  cmd->add_option("--check-every", cfg.check_every, "sweeps between convergence checks")
      ->capture_default_str();
  cmd->add_option("--init-scale", cfg.init_scale, "multiplies every random init entry")
      ->capture_default_str();
  cmd->add_option("--self-loops", cfg.self_loops,
                  "override the input's self-loop handling (true/false)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilayer mixed-membership stochastic block model toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);  // lets --config sit before or after the subcommand
  app.set_version_flag("--version", "mlsbm 0.1.0");
  // INI keys live in a section named after the subcommand, e.g. [fit] k=5;
  // command-line flags take precedence over file values.
  app.set_config("--config", "", "read options from an INI file (flags take precedence)");

  mlsbm::cli::RunConfig cfg;
  if (const char* env = std::getenv("MLSBM_OUTPUT_DIR")) cfg.output_dir = env;

  CLI::App* gen = app.add_subcommand("generate", "synthesize a benchmark network");
  add_shared_options(gen, cfg);
  gen->add_option("--preset", cfg.preset, "mixed-structure suite: G1, G2 or G3");
  gen->add_option("--n-nodes", cfg.n_nodes, "node count")->capture_default_str();
  gen->add_option("--n-layers", cfg.n_layers, "layer count (correlated benchmark)")
      ->capture_default_str();
  gen->add_option("--p,--keep-prob", cfg.keep_prob, "inter-layer label keep probability")
      ->capture_default_str();
  gen->add_option("--mu,--mixing", cfg.mixing, "group-oblivious edge fraction")
      ->capture_default_str();
  gen->add_option("--gamma,--degree-exponent", cfg.degree_exponent, "power-law degree exponent")
      ->capture_default_str();
  gen->add_option("--kmin,--min-degree", cfg.min_degree, "degree lower cutoff")
      ->capture_default_str();
  gen->add_option("--kmax,--max-degree", cfg.max_degree, "degree upper cutoff")
      ->capture_default_str();

  CLI::App* fit = app.add_subcommand("fit", "fit the model to an edge list");
  add_shared_options(fit, cfg);

  CLI::App* pred = app.add_subcommand("predict", "cross-validated link prediction AUC");
  add_shared_options(pred, cfg);
  pred->add_option("--target-layer", cfg.target_layer, "layer whose dyads are held out")
      ->capture_default_str();
  pred->add_option("--training-layers", cfg.training_layers,
                   "layers used for fitting (default: all)")
      ->delimiter(',');
  pred->add_flag("--whole-dataset", cfg.whole_dataset,
                 "score every dyad of every layer without holdout");

  CLI::App* inter = app.add_subcommand("interdep", "layer interdependence trajectories");
  add_shared_options(inter, cfg);
  inter->add_option("--target-layer", cfg.target_layer, "prediction target layer")
      ->capture_default_str();
  inter->add_option("--direction", cfg.direction, "greedy (bottom-up) | topdown")
      ->capture_default_str();
  inter->add_option("--max-layers", cfg.max_layers, "bottom-up stop size (0 = all layers)")
      ->capture_default_str();
  inter->add_option("--min-layers", cfg.min_layers, "top-down stop size")->capture_default_str();

  CLI::App* clus = app.add_subcommand("cluster-layers", "k-means over fitted affinity matrices");
  add_shared_options(clus, cfg);
  clus->add_option("--n-clusters", cfg.n_clusters, "number of layer clusters")
      ->capture_default_str();
  clus->add_option("--affinities", cfg.affinities,
                   "fitted affinity file (skips the inline fit)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mlsbm::cli::kExitUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return mlsbm::cli::dispatch(cfg);
}
