#include "mlsbm/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mlsbm/benchmark.hpp"
#include "mlsbm/em.hpp"
#include "mlsbm/evaluation.hpp"
#include "mlsbm/interdependence.hpp"
#include "mlsbm/io.hpp"
#include "mlsbm/rng.hpp"

namespace mlsbm::cli {

namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + cfg.output_dir + "'");
  return (fs::path(cfg.output_dir) / name).string();
}

void write_text(const RunConfig& cfg, const std::string& name, const std::string& text) {
  const std::string path = out_path(cfg, name);
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  out << text;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

std::string join_layers(const std::vector<int>& layers, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(layers[i]);
  }
  return out;
}

em::EmConfig em_config_from(const RunConfig& cfg) {
  if (cfg.k_groups < 1) throw UsageError("--k is required and must be >= 1");
  em::EmConfig ec;
  ec.k_groups = cfg.k_groups;
  ec.mode = mode_from_name(cfg.mode);
  ec.n_restarts = cfg.n_restarts;
  ec.max_iterations = cfg.max_iterations;
  ec.convergence_tolerance = cfg.convergence_tolerance;
  ec.convergence_window = cfg.convergence_window;
  ec.check_every = cfg.check_every;
  ec.init_scale = cfg.init_scale;
  ec.seed = cfg.seed;
  return ec;
}

MultilayerGraph load_graph(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("--input is required");
  io::ParseOptions opts;
  opts.allow_self_loops = cfg.self_loops;
  return io::read_edge_list(cfg.input, opts);
}

std::vector<int> resolve_training(const RunConfig& cfg, const MultilayerGraph& g) {
  if (!cfg.training_layers.empty()) return cfg.training_layers;
  std::vector<int> all(static_cast<std::size_t>(g.n_layers()));
  for (int a = 0; a < g.n_layers(); ++a) all[static_cast<std::size_t>(a)] = a;
  return all;
}

void emit_resolved_config(const RunConfig& cfg) {
  write_text(cfg, "config_resolved.txt", resolved_config_text(cfg));
}

// Order-sensitive digest of the shuffled dyad list and fold labels, so two
// reports with equal hashes used the same holdout split.
std::uint64_t mask_hash(const eval::HoldoutMask& mask) {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(mask.target_layer));
  for (std::size_t d = 0; d < mask.dyads.size(); ++d) {
    h = splitmix64(h ^ static_cast<std::uint64_t>(mask.dyads[d].i));
    h = splitmix64(h ^ static_cast<std::uint64_t>(mask.dyads[d].j));
    h = splitmix64(h ^ static_cast<std::uint64_t>(mask.fold_of[d]));
  }
  return h;
}

}  // namespace

std::string resolved_config_text(const RunConfig& cfg) {
  std::ostringstream ss;
  ss << "command = " << cfg.command << "\n";
  ss << "input = " << cfg.input << "\n";
  ss << "output-dir = " << cfg.output_dir << "\n";
  ss << "seed = " << cfg.seed << "\n";
  ss << "k = " << cfg.k_groups << "\n";
  ss << "mode = " << cfg.mode << "\n";
  ss << "restarts = " << cfg.n_restarts << "\n";
  ss << "max-iterations = " << cfg.max_iterations << "\n";
  ss << "tolerance = " << fmt(cfg.convergence_tolerance) << "\n";
  ss << "window = " << cfg.convergence_window << "\n";
  ss << "check-every = " << cfg.check_every << "\n";
  ss << "init-scale = " << fmt(cfg.init_scale) << "\n";
  ss << "self-loops = "
     << (cfg.self_loops ? (*cfg.self_loops ? "true" : "false") : "auto") << "\n";
  ss << "preset = " << cfg.preset << "\n";
  ss << "n-nodes = " << cfg.n_nodes << "\n";
  ss << "n-layers = " << cfg.n_layers << "\n";
  ss << "keep-prob = " << fmt(cfg.keep_prob) << "\n";
  ss << "mixing = " << fmt(cfg.mixing) << "\n";
  ss << "degree-exponent = " << fmt(cfg.degree_exponent) << "\n";
  ss << "min-degree = " << cfg.min_degree << "\n";
  ss << "max-degree = " << cfg.max_degree << "\n";
  ss << "target-layer = " << cfg.target_layer << "\n";
  ss << "training-layers = "
     << (cfg.training_layers.empty() ? std::string("all") : join_layers(cfg.training_layers))
     << "\n";
  ss << "whole-dataset = " << (cfg.whole_dataset ? "true" : "false") << "\n";
  ss << "direction = " << cfg.direction << "\n";
  ss << "max-layers = " << cfg.max_layers << "\n";
  ss << "min-layers = " << cfg.min_layers << "\n";
  ss << "n-clusters = " << cfg.n_clusters << "\n";
  ss << "affinities = " << cfg.affinities << "\n";
  return ss.str();
}

int cmd_generate(const RunConfig& cfg) {
  MultilayerGraph graph(1, 1, true, true, {{}});
  bench::GroundTruth truth;
  std::vector<Matrix> planted_w;

  if (cfg.preset.empty()) {
    bench::BenchmarkSpec spec;
    spec.n_nodes = cfg.n_nodes;
    spec.n_layers = cfg.n_layers;
    spec.k_groups = cfg.k_groups > 0 ? cfg.k_groups : 5;
    spec.keep_prob = cfg.keep_prob;
    spec.mixing = cfg.mixing;
    spec.degree_exponent = cfg.degree_exponent;
    spec.min_degree = cfg.min_degree;
    spec.max_degree = cfg.max_degree;
    spec.seed = cfg.seed;
    auto sample = bench::generate_benchmark(spec);
    graph = std::move(sample.graph);
    truth = std::move(sample.truth);
  } else {
    bench::MixedStructureSpec spec;
    if (cfg.preset == "G1")
      spec = bench::g1_spec(cfg.seed);
    else if (cfg.preset == "G2")
      spec = bench::g2_spec(cfg.seed);
    else if (cfg.preset == "G3")
      spec = bench::g3_spec(cfg.seed);
    else
      throw UsageError("unknown preset '" + cfg.preset + "' (expected G1, G2 or G3)");
    spec.n_nodes = cfg.n_nodes;
    auto sample = bench::generate_mixed_structure(spec);
    graph = std::move(sample.graph);
    truth = std::move(sample.truth);
    planted_w = sample.planted.w;
  }

  io::write_edge_list(graph, out_path(cfg, "edges.txt"));
  io::write_membership(graph.node_labels(), truth.aggregate_membership(),
                       out_path(cfg, "ground_truth_membership.txt"));
  {
    std::ostringstream ss;
    ss << "# per-layer ground-truth partitions: label g_1 ... g_L\n";
    for (int i = 0; i < graph.n_nodes(); ++i) {
      ss << graph.node_labels()[static_cast<std::size_t>(i)];
      for (const auto& part : truth.partitions) ss << ' ' << part[static_cast<std::size_t>(i)];
      ss << "\n";
    }
    write_text(cfg, "ground_truth_partitions.txt", ss.str());
  }
  if (!planted_w.empty())
    io::write_affinities(planted_w, graph.layer_names(), out_path(cfg, "affinities_true.txt"));
  emit_resolved_config(cfg);

  std::cout << "generated " << graph.n_nodes() << " nodes, " << graph.n_layers() << " layers, "
            << graph.n_edges() << " edges -> " << out_path(cfg, "edges.txt") << "\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& cfg) {
  const MultilayerGraph g = load_graph(cfg);
  const em::EmConfig ec = em_config_from(cfg);
  const em::FitResult fit = em::run_em(g, ec);

  io::write_membership(g.node_labels(), fit.params.u, out_path(cfg, "u.txt"));
  if (mode_is_directed(ec.mode))
    io::write_membership(g.node_labels(), fit.params.v, out_path(cfg, "v.txt"));
  io::write_affinities(fit.params.w, g.layer_names(), out_path(cfg, "affinities.txt"));

  std::ostringstream ss;
  ss << "objective = " << fmt(fit.objective) << "\n";
  ss << "log-likelihood = " << fmt(fit.log_likelihood) << "\n";
  ss << "converged = " << (fit.converged ? "true" : "false") << "\n";
  ss << "iterations = " << fit.n_iterations << "\n";
  ss << "restart-index = " << fit.restart_index << "\n";
  ss << "warnings = " << fit.warning_count << "\n";
  ss << "n-nodes = " << g.n_nodes() << "\n";
  ss << "n-layers = " << g.n_layers() << "\n";
  ss << "k = " << ec.k_groups << "\n";
  ss << "mode = " << mode_name(ec.mode) << "\n";
  write_text(cfg, "summary.txt", ss.str());
  emit_resolved_config(cfg);

  std::cout << "objective " << fmt(fit.objective) << ", "
            << (fit.converged ? "converged" : "did not converge") << " after "
            << fit.n_iterations << " iterations (restart " << fit.restart_index << ")\n";
  return fit.converged ? kExitOk : kExitNoConverge;
}

int cmd_predict(const RunConfig& cfg) {
  const MultilayerGraph g = load_graph(cfg);
  const em::EmConfig ec = em_config_from(cfg);

  if (cfg.whole_dataset) {
    const em::FitResult fit = em::run_em(g, ec);
    const double a = eval::whole_dataset_auc(g, fit.params);
    std::ostringstream rep;
    rep << "whole-dataset = true\n";
    rep << "auc = " << fmt(a) << "\n";
    rep << "converged = " << (fit.converged ? "true" : "false") << "\n";
    write_text(cfg, "auc_report.txt", rep.str());
    emit_resolved_config(cfg);
    std::cout << "whole-dataset auc " << fmt(a) << "\n";
    return kExitOk;
  }

  if (cfg.target_layer < 0) throw UsageError("--target-layer is required");
  const std::vector<int> training = resolve_training(cfg, g);
  const eval::CvResult cv =
      eval::cross_validated_auc(g, cfg.target_layer, training, ec, cfg.seed);
  const eval::HoldoutMask mask =
      eval::make_folds(g, cfg.target_layer, derive_seed(cfg.seed, 17));

  std::ostringstream rep;
  rep << "target-layer = " << cfg.target_layer << "\n";
  rep << "training-layers = " << join_layers(training) << "\n";
  rep << "folds = " << mask.n_folds << "\n";
  rep << "mask-seed = " << derive_seed(cfg.seed, 17) << "\n";
  rep << "mask-hash = " << mask_hash(mask) << "\n";
  for (std::size_t f = 0; f < cv.fold_aucs.size(); ++f) {
    rep << "fold-" << f << "-seed = " << derive_seed(cfg.seed, 101 + static_cast<int>(f)) << "\n";
    rep << "fold-" << f << "-auc = " << fmt(cv.fold_aucs[f]) << "\n";
  }
  rep << "mean-auc = " << fmt(cv.mean_auc) << "\n";
  rep << "std-auc = " << fmt(cv.std_auc) << "\n";
  write_text(cfg, "auc_report.txt", rep.str());

  std::ostringstream sc;
  sc << "# fold src tgt observed score\n";
  for (const auto& fold : cv.fold_scores)
    for (const auto& e : fold.entries)
      sc << fold.fold << ' ' << g.node_labels()[static_cast<std::size_t>(e.i)] << ' '
         << g.node_labels()[static_cast<std::size_t>(e.j)] << ' ' << (e.is_link ? 1 : 0) << ' '
         << fmt(e.score) << "\n";
  write_text(cfg, "scores.txt", sc.str());
  io::write_mask(mask, out_path(cfg, "mask.txt"));
  emit_resolved_config(cfg);

  std::cout << "mean auc " << fmt(cv.mean_auc) << " (std " << fmt(cv.std_auc) << ") over "
            << mask.n_folds << " folds\n";
  return kExitOk;
}

int cmd_interdep(const RunConfig& cfg) {
  const MultilayerGraph g = load_graph(cfg);
  const em::EmConfig ec = em_config_from(cfg);
  if (cfg.target_layer < 0) throw UsageError("--target-layer is required");

  interdep::InterdepReport rep;
  if (cfg.direction == "greedy" || cfg.direction == "bottom-up") {
    const int max_layers = cfg.max_layers > 0 ? cfg.max_layers : g.n_layers();
    rep = interdep::greedy_layer_selection(g, cfg.target_layer, max_layers, ec, cfg.seed);
  } else if (cfg.direction == "topdown" || cfg.direction == "top-down") {
    rep = interdep::top_down_removal(g, cfg.target_layer, cfg.min_layers, ec, cfg.seed);
  } else {
    throw UsageError("--direction must be greedy or topdown");
  }

  std::ostringstream ss;
  ss << "# target=" << rep.target_layer
     << " direction=" << (rep.bottom_up ? "greedy" : "topdown") << "\n";
  ss << "# step layers mean_auc std_auc changed_layer\n";
  for (std::size_t s = 0; s < rep.trajectory.size(); ++s) {
    const auto& st = rep.trajectory[s];
    ss << s << ' ' << join_layers(st.layer_set, '+') << ' ' << fmt(st.mean_auc) << ' '
       << fmt(st.std_auc) << ' ' << st.changed_layer << "\n";
    if (!st.candidates.empty()) {
      ss << "# candidates";
      for (const auto& [layer, mean] : st.candidates) ss << ' ' << layer << ':' << fmt(mean);
      ss << "\n";
    }
  }
  write_text(cfg, "interdep_report.txt", ss.str());
  emit_resolved_config(cfg);

  std::cout << "trajectory of " << rep.trajectory.size() << " steps, final mean auc "
            << fmt(rep.trajectory.back().mean_auc) << "\n";
  return kExitOk;
}

int cmd_cluster_layers(const RunConfig& cfg) {
  std::vector<Matrix> w;
  std::vector<std::string> names;
  if (!cfg.affinities.empty()) {
    w = io::read_affinities(cfg.affinities, &names);
  } else {
    const MultilayerGraph g = load_graph(cfg);
    const em::EmConfig ec = em_config_from(cfg);
    w = em::run_em(g, ec).params.w;
    names = g.layer_names();
  }

  const interdep::AffinityEmbedding emb =
      interdep::cluster_affinity_matrices(w, cfg.n_clusters, cfg.seed);

  std::ostringstream ss;
  ss << "# layer name cluster pca_x pca_y\n";
  for (std::size_t a = 0; a < w.size(); ++a)
    ss << a << ' ' << names[a] << ' ' << emb.cluster[a] << ' ' << fmt(emb.pca(static_cast<int>(a), 0))
       << ' ' << fmt(emb.pca(static_cast<int>(a), 1)) << "\n";
  ss << "# inertia = " << fmt(emb.inertia) << "\n";
  write_text(cfg, "cluster_report.txt", ss.str());
  emit_resolved_config(cfg);

  std::cout << "clustered " << w.size() << " layers into " << cfg.n_clusters
            << " groups (inertia " << fmt(emb.inertia) << ")\n";
  return kExitOk;
}

int dispatch(const RunConfig& cfg) {
  try {
    if (cfg.command == "generate") return cmd_generate(cfg);
    if (cfg.command == "fit") return cmd_fit(cfg);
    if (cfg.command == "predict") return cmd_predict(cfg);
    if (cfg.command == "interdep") return cmd_interdep(cfg);
    if (cfg.command == "cluster-layers") return cmd_cluster_layers(cfg);
    throw UsageError("unknown command '" + cfg.command + "'");
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const UndefinedMetricError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUndefinedMetric;
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace mlsbm::cli
