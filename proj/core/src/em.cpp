#include "mlsbm/em.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "mlsbm/rng.hpp"

namespace mlsbm::em {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Sign of the diagonal correction to the partner sum S seen by node i:
// excluded self-pairs remove the node's own contribution, while undirected
// self-loops count it twice (the dyad (i, i) carries both endpoint roles).
double self_sign(const MultilayerGraph& g) {
  if (g.directed()) return g.allow_self_loops() ? 0.0 : -1.0;
  return g.allow_self_loops() ? 1.0 : -1.0;
}

void bump_zero_den(UpdateStats* stats) {
  if (stats) ++stats->zero_denominator_entries;
}

}  // namespace

void validate_config(const EmConfig& cfg, const MultilayerGraph& g) {
  if (cfg.k_groups < 1 || cfg.k_groups > g.n_nodes())
    throw UsageError("k_groups must be in [1, n_nodes]");
  if (cfg.n_restarts < 1) throw UsageError("n_restarts must be >= 1");
  if (cfg.max_iterations < 1) throw UsageError("max_iterations must be >= 1");
  if (cfg.convergence_window < 1) throw UsageError("convergence_window must be >= 1");
  if (cfg.check_every < 1) throw UsageError("check_every must be >= 1");
  if (cfg.convergence_tolerance < 0) throw UsageError("convergence_tolerance must be >= 0");
  if (!(cfg.init_scale > 0)) throw UsageError("init_scale must be > 0");
  if (mode_is_directed(cfg.mode) != g.directed())
    throw UsageError("mode directedness must match the graph (got mode " + mode_name(cfg.mode) +
                     (g.directed() ? " on a directed graph)" : " on an undirected graph)"));
}

Responsibilities update_rho(const MultilayerGraph& g, const ModelParams& p, UpdateStats* stats) {
  const int K = p.n_groups();
  Responsibilities rho(static_cast<std::size_t>(g.n_layers()));
  for (int a = 0; a < g.n_layers(); ++a) {
    const auto& es = g.edges(a);
    rho[a].reserve(es.size());
    const Matrix& w = p.w[a];
    for (const Edge& e : es) {
      Matrix r(K, K);
      for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) r(k, l) = p.u(e.i, k) * p.v(e.j, l) * w(k, l);
      const double den = expected_edge(p, e.i, e.j, a);
      if (den > 0.0) {
        r /= den;
      } else {
        r.setConstant(1.0 / (static_cast<double>(K) * K));
        if (stats) ++stats->degenerate_rho_edges;
      }
      rho[a].push_back(std::move(r));
    }
  }
  return rho;
}

Matrix update_u(const MultilayerGraph& g, const ModelParams& p, const Responsibilities& rho,
                const LayerMask* mask, UpdateStats* stats) {
  const int n = g.n_nodes(), K = p.n_groups();
  Matrix num = Matrix::Zero(n, K);
  for (int a = 0; a < g.n_layers(); ++a) {
    const auto& es = g.edges(a);
    for (std::size_t e = 0; e < es.size(); ++e) {
      const Edge& ed = es[e];
      const Matrix& r = rho[a][e];
      const double A = static_cast<double>(ed.weight);
      if (g.directed()) {
        for (int k = 0; k < K; ++k) num(ed.i, k) += A * r.row(k).sum();
      } else if (ed.i == ed.j) {
        // Both endpoint roles of the self-dyad land on the same node.
        for (int k = 0; k < K; ++k) num(ed.i, k) += A * (r.row(k).sum() + r.col(k).sum());
      } else {
        for (int k = 0; k < K; ++k) {
          num(ed.i, k) += A * r.row(k).sum();
          num(ed.j, k) += A * r.col(k).sum();
        }
      }
    }
  }

  const Matrix& vm = g.directed() ? p.v : p.u;
  Matrix wsum = Matrix::Zero(K, K);
  for (const Matrix& w : p.w) wsum += w;
  const Vector sv = vm.colwise().sum();
  const double sign = self_sign(g);

  // Partner sums removed by the mask, weighted later by the target layer's w.
  Matrix mv;
  if (mask) {
    mv = Matrix::Zero(n, K);
    for (const Dyad& d : mask->dyads) {
      if (g.directed()) {
        mv.row(d.i) += vm.row(d.j);
      } else if (d.i == d.j) {
        mv.row(d.i) += 2.0 * vm.row(d.i);
      } else {
        mv.row(d.i) += vm.row(d.j);
        mv.row(d.j) += vm.row(d.i);
      }
    }
  }

  Matrix out(n, K);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) {
      double den = 0.0;
      for (int l = 0; l < K; ++l) den += wsum(k, l) * (sv(l) + sign * vm(i, l));
      if (mask) {
        const Matrix& wt = p.w[mask->layer];
        for (int l = 0; l < K; ++l) den -= wt(k, l) * mv(i, l);
      }
      if (den > 0.0) {
        out(i, k) = num(i, k) / den;
      } else {
        if (num(i, k) > 0.0) bump_zero_den(stats);
        out(i, k) = 0.0;
      }
    }
  }
  return out;
}

Matrix update_v(const MultilayerGraph& g, const ModelParams& p, const Responsibilities& rho,
                const LayerMask* mask, UpdateStats* stats) {
  if (!g.directed()) return update_u(g, p, rho, mask, stats);

  const int n = g.n_nodes(), K = p.n_groups();
  Matrix num = Matrix::Zero(n, K);
  for (int a = 0; a < g.n_layers(); ++a) {
    const auto& es = g.edges(a);
    for (std::size_t e = 0; e < es.size(); ++e) {
      const Edge& ed = es[e];
      const Matrix& r = rho[a][e];
      const double A = static_cast<double>(ed.weight);
      for (int l = 0; l < K; ++l) num(ed.j, l) += A * r.col(l).sum();
    }
  }

  Matrix wsum = Matrix::Zero(K, K);
  for (const Matrix& w : p.w) wsum += w;
  const Vector su = p.u.colwise().sum();
  const double sign = self_sign(g);

  Matrix mu;
  if (mask) {
    mu = Matrix::Zero(n, K);
    for (const Dyad& d : mask->dyads) mu.row(d.j) += p.u.row(d.i);
  }

  Matrix out(n, K);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < K; ++l) {
      double den = 0.0;
      for (int k = 0; k < K; ++k) den += wsum(k, l) * (su(k) + sign * p.u(j, k));
      if (mask) {
        const Matrix& wt = p.w[mask->layer];
        for (int k = 0; k < K; ++k) den -= wt(k, l) * mu(j, k);
      }
      if (den > 0.0) {
        out(j, l) = num(j, l) / den;
      } else {
        if (num(j, l) > 0.0) bump_zero_den(stats);
        out(j, l) = 0.0;
      }
    }
  }
  return out;
}

std::vector<Matrix> update_w(const MultilayerGraph& g, const ModelParams& p,
                             const Responsibilities& rho, const LayerMask* mask,
                             UpdateStats* stats) {
  const int K = p.n_groups();
  const bool diagonal = mode_is_diagonal(p.mode);
  const Matrix& vm = g.directed() ? p.v : p.u;
  const Vector su = p.u.colwise().sum();
  const Vector sv = vm.colwise().sum();
  const Matrix cross = p.u.transpose() * vm;  // cross(k,l) = sum_i u_ik v_il

  std::vector<Matrix> out;
  out.reserve(p.w.size());
  for (int a = 0; a < g.n_layers(); ++a) {
    Matrix num = Matrix::Zero(K, K);
    const auto& es = g.edges(a);
    for (std::size_t e = 0; e < es.size(); ++e) {
      const Edge& ed = es[e];
      const Matrix& r = rho[a][e];
      const double A = static_cast<double>(ed.weight);
      // Undirected layers fold both orientations; for a self-dyad r is
      // exactly symmetric, so r + r^T doubles it as required.
      if (g.directed())
        num += A * r;
      else
        num += A * (r + r.transpose());
    }

    Matrix mw = Matrix::Zero(K, K);
    if (mask && a == mask->layer) {
      for (const Dyad& d : mask->dyads) {
        if (g.directed()) {
          mw += p.u.row(d.i).transpose() * vm.row(d.j);
        } else if (d.i == d.j) {
          mw += 2.0 * (p.u.row(d.i).transpose() * p.u.row(d.i));
        } else {
          mw += p.u.row(d.i).transpose() * p.u.row(d.j);
          mw += p.u.row(d.j).transpose() * p.u.row(d.i);
        }
      }
    }

    Matrix wn = Matrix::Zero(K, K);
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < K; ++l) {
        if (diagonal && k != l) continue;
        double den;
        if (g.directed())
          den = su(k) * sv(l) - (g.allow_self_loops() ? 0.0 : cross(k, l));
        else
          den = su(k) * sv(l) + (g.allow_self_loops() ? 1.0 : -1.0) * cross(k, l);
        den -= mw(k, l);
        if (den > 0.0) {
          wn(k, l) = num(k, l) / den;
        } else {
          if (num(k, l) > 0.0) bump_zero_den(stats);
          wn(k, l) = 0.0;
        }
      }
    }
    if (!g.directed()) wn = ((wn + wn.transpose()) / 2.0).eval();
    out.push_back(std::move(wn));
  }
  return out;
}

double variational_objective(const MultilayerGraph& g, const ModelParams& p,
                             const Responsibilities& rho, const LayerMask* mask) {
  const int K = p.n_groups();
  double acc = 0.0;
  for (int a = 0; a < g.n_layers(); ++a) {
    const auto& es = g.edges(a);
    const Matrix& w = p.w[a];
    for (std::size_t e = 0; e < es.size(); ++e) {
      const Edge& ed = es[e];
      if (mask && a == mask->layer && mask->contains(ed.i, ed.j)) continue;
      const Matrix& r = rho[a][e];
      const double A = static_cast<double>(ed.weight);
      for (int k = 0; k < K; ++k) {
        for (int l = 0; l < K; ++l) {
          const double q = r(k, l);
          if (q <= 0.0) continue;
          const double t = p.u(ed.i, k) * p.v(ed.j, l) * w(k, l);
          if (t <= 0.0) return kNegInf;
          acc += A * q * (std::log(t) - std::log(q));
        }
      }
    }
  }
  return acc - expected_total(g, p, mask);
}

ModelParams init_params(const MultilayerGraph& g, const EmConfig& cfg, std::uint64_t seed,
                        int restart) {
  const int n = g.n_nodes(), K = cfg.k_groups;
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double s = cfg.init_scale;

  ModelParams p;
  p.mode = cfg.mode;
  p.u.resize(n, K);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) p.u(i, k) = s * uni(rng);
  if (mode_is_directed(cfg.mode)) {
    p.v.resize(n, K);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < K; ++k) p.v(i, k) = s * uni(rng);
  } else {
    p.v = p.u;
  }
  // Affinity shape alternates by restart. Even restarts start
  // diagonal-dominant (off-diagonal an order of magnitude below the
  // diagonal): a flat draw leaves the first responsibility update
  // near-uniform over group pairs and assortative structure is almost never
  // recovered from it. Odd restarts stay flat, which is what
  // off-diagonal-heavy (disassortative, bipartite-like) optima need; the
  // diagonal-dominant start funnels those into assortative local optima.
  const bool diag_dominant = restart % 2 == 0;
  auto diag_entry = [&] { return s * (diag_dominant ? 0.1 + 0.9 * uni(rng) : uni(rng)); };
  auto offdiag_entry = [&] { return s * (diag_dominant ? 0.1 : 1.0) * uni(rng); };
  p.w.reserve(static_cast<std::size_t>(g.n_layers()));
  for (int a = 0; a < g.n_layers(); ++a) {
    Matrix w = Matrix::Zero(K, K);
    if (mode_is_diagonal(cfg.mode)) {
      for (int k = 0; k < K; ++k) w(k, k) = diag_entry();
    } else if (mode_is_directed(cfg.mode)) {
      for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) w(k, l) = k == l ? diag_entry() : offdiag_entry();
    } else {
      for (int k = 0; k < K; ++k)
        for (int l = k; l < K; ++l) w(k, l) = w(l, k) = k == l ? diag_entry() : offdiag_entry();
    }
    p.w.push_back(std::move(w));
  }
  return p;
}

namespace {

FitResult run_em_impl(const MultilayerGraph& g, const EmConfig& cfg, const LayerMask* mask) {
  validate_config(cfg, g);
  FitResult best;
  bool have_best = false;
  for (int r = 0; r < cfg.n_restarts; ++r) {
    ModelParams p = init_params(g, cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)), r);
    UpdateStats st;
    std::vector<double> trace;
    double prev = kNegInf;
    double last_ll = kNegInf;
    bool checked_current = false;
    bool converged = false;
    int streak = 0;
    int iters = 0;

    for (int t = 1; t <= cfg.max_iterations; ++t) {
      const Responsibilities rho = update_rho(g, p, &st);
      const Matrix unew = update_u(g, p, rho, mask, &st);
      if (mode_is_directed(cfg.mode)) {
        p.u = unew;
        p.v = update_v(g, p, rho, mask, &st);
      } else {
        p.u = unew;
        p.v = unew;
      }
      p.w = update_w(g, p, rho, mask, &st);
      iters = t;
      checked_current = false;
      if (t % cfg.check_every == 0) {
        last_ll = log_likelihood(g, p, mask);
        trace.push_back(last_ll);
        checked_current = true;
        streak = (last_ll - prev < cfg.convergence_tolerance) ? streak + 1 : 0;
        prev = last_ll;
        if (streak >= cfg.convergence_window) {
          converged = true;
          break;
        }
      }
    }
    if (!checked_current) {
      last_ll = log_likelihood(g, p, mask);
      trace.push_back(last_ll);
    }

    if (!have_best || last_ll > best.objective) {
      have_best = true;
      best.params = std::move(p);
      best.objective = last_ll;
      best.log_likelihood = last_ll;
      best.objective_trace = std::move(trace);
      best.n_iterations = iters;
      best.restart_index = r;
      best.converged = converged;
      best.warning_count = st.zero_denominator_entries + st.degenerate_rho_edges;
    }
  }
  return best;
}

}  // namespace

FitResult run_em(const MultilayerGraph& g, const EmConfig& cfg) {
  return run_em_impl(g, cfg, nullptr);
}

FitResult run_em_masked(const MultilayerGraph& g, const EmConfig& cfg, const LayerMask& mask) {
  validate_mask(g, mask);
  const MultilayerGraph train = g.without_masked_edges(mask);
  return run_em_impl(train, cfg, &mask);
}

}  // namespace mlsbm::em
