#pragma once

#include <cstdint>
#include <vector>

#include "mlsbm/graph.hpp"
#include "mlsbm/model.hpp"

namespace mlsbm::em {

struct EmConfig {
  int k_groups = 0;  // required, in [1, n_nodes]
  Mode mode = Mode::DirectedFull;
  int n_restarts = 10;
  int max_iterations = 500;
  // Converged once the objective improves by less than the tolerance for
  // `convergence_window` consecutive checks; checks run every `check_every`
  // sweeps.
  double convergence_tolerance = 0.1;
  int convergence_window = 10;
  int check_every = 1;
  double init_scale = 1.0;  // multiplies every random init entry
  std::uint64_t seed = 1;
};

void validate_config(const EmConfig& cfg, const MultilayerGraph& g);

// rho[layer][e] is the K x K responsibility matrix of the e-th edge in the
// canonical enumeration graph.edges(layer); rows index the source group k,
// columns the target group l.
using Responsibilities = std::vector<std::vector<Matrix>>;

struct UpdateStats {
  // Entries set to zero because their update denominator vanished while the
  // numerator did not.
  int zero_denominator_entries = 0;
  // Edges whose responsibility normalizer was zero (uniform fallback used).
  int degenerate_rho_edges = 0;
};

// E-step: rho_kl = u_ik v_jl w_kl / M_ij per observed edge. A zero normalizer
// falls back to the uniform matrix and is counted in stats.
Responsibilities update_rho(const MultilayerGraph& g, const ModelParams& p,
                            UpdateStats* stats = nullptr);

// Exact coordinate-ascent M-steps for the expected complete-data objective.
// Denominators follow the dyad universe of g (directedness, self-loop
// convention) and exclude masked dyads when a mask is given; g must not
// contain edges at masked dyads. Undirected graphs fold both orientations of
// each edge into the single returned membership.
Matrix update_u(const MultilayerGraph& g, const ModelParams& p, const Responsibilities& rho,
                const LayerMask* mask = nullptr, UpdateStats* stats = nullptr);
Matrix update_v(const MultilayerGraph& g, const ModelParams& p, const Responsibilities& rho,
                const LayerMask* mask = nullptr, UpdateStats* stats = nullptr);
std::vector<Matrix> update_w(const MultilayerGraph& g, const ModelParams& p,
                             const Responsibilities& rho, const LayerMask* mask = nullptr,
                             UpdateStats* stats = nullptr);

// Variational lower bound
//   sum_edges A sum_{kl} rho_kl [ log(u v w) - log rho_kl ] - sum_universe M,
// equal to log_likelihood(g, p) when rho is the update_rho responsibility
// (the bound is tight at the Boltzmann posterior).
double variational_objective(const MultilayerGraph& g, const ModelParams& p,
                             const Responsibilities& rho, const LayerMask* mask = nullptr);

struct FitResult {
  ModelParams params;
  // Final value of the convergence objective. The trace records the bound
  // right after the responsibility update, where it is tight, so objective and
  // log_likelihood are the same number by construction.
  double objective = 0.0;
  double log_likelihood = 0.0;
  std::vector<double> objective_trace;  // one entry per convergence check
  int n_iterations = 0;
  int restart_index = 0;
  bool converged = false;
  int warning_count = 0;
};

// Multi-restart EM. Restart r uses the derived seed splitmix(seed, r); the
// restart with the highest final objective wins, ties going to the lowest
// index. Sweep order inside one iteration: rho, u, v, w, each consuming the
// freshest values. Undirected modes copy the u-update into v and re-symmetrize
// w after every sweep.
FitResult run_em(const MultilayerGraph& g, const EmConfig& cfg);

// Same, but masked dyads of one layer drop out of both the data term and the
// model term (their edges are removed from the training graph internally).
FitResult run_em_masked(const MultilayerGraph& g, const EmConfig& cfg, const LayerMask& mask);

// Deterministic initial parameters for restart-level reproducibility: u
// row-major, then v (directed modes only), then w per layer; undirected modes
// draw the upper triangle and mirror it, diagonal modes draw the diagonal.
// Memberships are flat draws. Affinities alternate by restart between a
// diagonal-dominant shape (even restarts) and a flat one (odd restarts):
// assortative optima are rarely reached from flat starts and flat starts are
// needed for off-diagonal-heavy optima, so a restart sweep covers both.
ModelParams init_params(const MultilayerGraph& g, const EmConfig& cfg, std::uint64_t seed,
                        int restart = 0);

}  // namespace mlsbm::em
