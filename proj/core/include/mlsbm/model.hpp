#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mlsbm/defs.hpp"
#include "mlsbm/graph.hpp"

namespace mlsbm {

// Bilinear Poisson model: the expected weight of dyad (i, j) in layer a is
//   M_ij^(a) = sum_{k,l} u_ik * v_jl * w_kl^(a),
// with out-memberships u, in-memberships v (v == u for undirected modes) and
// one K x K affinity matrix per layer. All entries are nonnegative.
struct ModelParams {
  Matrix u;               // N x K
  Matrix v;               // N x K
  std::vector<Matrix> w;  // L matrices, each K x K
  Mode mode = Mode::DirectedFull;

  int n_nodes() const { return static_cast<int>(u.rows()); }
  int n_groups() const { return static_cast<int>(u.cols()); }
  int n_layers() const { return static_cast<int>(w.size()); }
};

// Shape/sign checks; throws UsageError. Undirected modes additionally require
// v == u and symmetric w, diagonal modes require off-diagonal w to be zero.
void validate_params(const ModelParams& p);

// M_ij^(a). Every caller of the model goes through this scalar kernel (same
// summation order), so tensor and scalar views agree exactly.
double expected_edge(const ModelParams& p, int i, int j, int layer);

Matrix expected_layer(const ModelParams& p, int layer);
std::vector<Matrix> expected_all_layers(const ModelParams& p);

// Sum of M over the dyad universe of g minus any masked dyads. Group-space
// closed form; O(L K^2 + N K^2) instead of O(N^2 L K^2).
double expected_total(const MultilayerGraph& g, const ModelParams& p,
                      const LayerMask* mask = nullptr);

// Poisson log-likelihood with the log A! term omitted:
//   sum_universe [ A log M - M ].
// Returns -inf when an observed edge has M == 0. Masked dyads contribute
// neither term.
double log_likelihood(const MultilayerGraph& g, const ModelParams& p,
                      const LayerMask* mask = nullptr);

// Draws A_ij^(a) ~ Poisson(M_ij^(a)) over the dyad universe implied by the
// mode's directedness. Default universe: directed includes the diagonal,
// undirected excludes it; pass allow_self_loops to override.
MultilayerGraph sample_network(const ModelParams& p, std::uint64_t seed,
                               std::optional<bool> allow_self_loops = std::nullopt);

// Row-stochastic view of a nonnegative membership matrix. All-zero rows stay
// zero; their indices are appended to *isolated when given. Throws UsageError
// on negative entries.
Matrix normalize_membership(const Matrix& m, std::vector<int>* isolated = nullptr);

// Argmax per row; ties resolve to the lowest group index. All-zero (isolated)
// rows get the sentinel label -1.
std::vector<int> hard_assignment(const Matrix& membership);

}  // namespace mlsbm
