#include "midlayer/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "midlayer/combinatorics.hpp"

namespace midlayer {

namespace {

uint64_t factorial64(int n) {
  uint64_t r = 1;
  for (int i = 2; i <= n; i++) r *= i;
  return r;
}

// Support-set walker. A multiset cluster's incompatibility graph is connected
// iff its support (the distinct polymers) is connected, because repeated
// copies of a polymer are always mutually adjacent. So: enumerate connected
// supports with Σ|Q_i| <= k, then distribute the remaining size over
// multiplicities.
//
// ESU over the polymer adjacency graph with one shared candidate stack:
// a recursion level owns ext[lo, hi); branching on ext[i] appends the newly
// reachable polymers and hands [i+1, end) to the child. Polymer ids ascend
// with size, so neighbor scans stop at the first polymer too big for the
// remaining budget.
struct ClusterEnum {
  const LayerGraph& g;
  Side side;
  int k;
  const std::function<void(const Cluster&)>& fn;
  const ClusterLimits& lim;

  std::vector<Polymer> polys;
  std::vector<std::vector<int>> by_boundary;  // lower vertex -> polymer ids, ascending
  std::vector<int> support;
  std::vector<int> ext;
  std::vector<uint8_t> seen;  // marks, restored on backtrack
  uint64_t emitted = 0;

  void run() {
    polys = enumerate_polymers(g, side, k, lim.polymer_cap);
    by_boundary.assign(g.side_size(opposite(side)), {});
    for (int i = 0; i < static_cast<int>(polys.size()); i++)
      polys[i].nmask.for_each([&](int w) { by_boundary[w].push_back(i); });
    seen.assign(polys.size(), 0);
    for (int root = 0; root < static_cast<int>(polys.size()); root++) {
      support.push_back(root);
      seen[root] = 1;
      int base = polys[root].size();
      emit_support(base);
      if (base < k) {
        append_neighbors(root, root, k - base);
        extend(base, 0);
        for (int q : ext) seen[q] = 0;
        ext.clear();
      }
      seen[root] = 0;
      support.pop_back();
    }
  }

  // append unseen neighbors of `p` with id > root and size <= budget
  void append_neighbors(int p, int root, int budget) {
    polys[p].nmask.for_each([&](int w) {
      for (int q : by_boundary[w]) {
        if (polys[q].size() > budget) break;  // ids ascend with size
        if (q > root && !seen[q]) {
          seen[q] = 1;
          ext.push_back(q);
        }
      }
    });
  }

  void extend(int base, size_t lo) {
    size_t hi = ext.size();
    int root = support.front();
    for (size_t i = lo; i < hi; i++) {
      int w = ext[i];
      int sz = polys[w].size();
      if (base + sz > k) continue;  // budgets only shrink below, safe to drop
      support.push_back(w);
      emit_support(base + sz);
      if (base + sz < k) {
        append_neighbors(w, root, k - base - sz);
        extend(base + sz, i + 1);
        for (size_t j = hi; j < ext.size(); j++) seen[ext[j]] = 0;
        ext.resize(hi);
      }
      support.pop_back();
    }
  }

  void emit_support(int base) {
    // distribute multiplicities m_i >= 1 with Σ m_i·|Q_i| = k
    std::vector<int> mult(support.size(), 1);
    distribute(0, k - base, mult);
  }

  void distribute(size_t idx, int slack, std::vector<int>& mult) {
    if (idx == support.size()) {
      if (slack == 0) emit_cluster(mult);
      return;
    }
    int sz = polys[support[idx]].size();
    // remaining slack assigned to this part must be a multiple of its size
    for (int extra = 0; extra * sz <= slack; extra++) {
      mult[idx] = 1 + extra;
      if (idx + 1 == support.size() && (slack - extra * sz) != 0) continue;
      distribute(idx + 1, slack - extra * sz, mult);
    }
    mult[idx] = 1;
  }

  void emit_cluster(const std::vector<int>& mult) {
    if (++emitted > lim.cluster_cap)
      throw scale_error("cluster enumeration exceeded cap of " + std::to_string(lim.cluster_cap) +
                        " multisets (support frontier " + std::to_string(support.size()) + ")");
    Cluster c;
    int copies = 0;
    for (size_t i = 0; i < support.size(); i++) copies += mult[i];
    if (copies > 9)
      throw scale_error("cluster with " + std::to_string(copies) +
                        " polymer copies exceeds the Ursell evaluation limit of 9");
    c.graph.m = copies;
    // expanded copies in part order; same-part copies are pairwise adjacent
    std::vector<int> owner(copies);
    {
      int pos = 0;
      for (size_t i = 0; i < support.size(); i++)
        for (int j = 0; j < mult[i]; j++) owner[pos++] = static_cast<int>(i);
    }
    for (int a = 0; a < copies; a++)
      for (int b = a + 1; b < copies; b++) {
        if (owner[a] == owner[b] ||
            polys[support[owner[a]]].nmask.intersects(polys[support[owner[b]]].nmask))
          c.graph.set_edge(a, b);
      }
    uint64_t ord = factorial64(copies);
    for (size_t i = 0; i < support.size(); i++) ord /= factorial64(mult[i]);
    c.orderings = ord;
    c.size = k;
    c.parts.reserve(support.size());
    for (size_t i = 0; i < support.size(); i++) c.parts.emplace_back(polys[support[i]], mult[i]);
    std::sort(c.parts.begin(), c.parts.end(), [](const auto& x, const auto& y) {
      if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
      return x.first.vmask < y.first.vmask;
    });
    fn(c);
  }
};

}  // namespace

void for_each_cluster(const LayerGraph& g, Side side, int k,
                      const std::function<void(const Cluster&)>& fn, const ClusterLimits& lim) {
  g.require_middle_layers("cluster enumeration");
  if (k < 1) throw parse_error("cluster size k must be >= 1");
  ClusterEnum e{g, side, k, fn, lim};
  e.run();
}

std::vector<Cluster> enumerate_clusters(const LayerGraph& g, Side side, int k,
                                        const ClusterLimits& lim) {
  std::vector<Cluster> out;
  for_each_cluster(g, side, k, [&](const Cluster& c) { out.push_back(c); }, lim);
  return out;
}

Rat cluster_weight(const Cluster& c, const Rat& lambda) {
  Rat w = UrsellCache::instance().get(c.graph);
  for (const auto& [p, m] : c.parts) w *= polymer_weight(p, lambda).pow(m);
  return w;
}

Rat expansion_term(const LayerGraph& g, Side side, const Rat& lambda, int k,
                   const ClusterLimits& lim) {
  // group by total boundary: Π w^m = λ^k / (1+λ)^β with β = Σ m_i·|N(Q_i)|,
  // so the enumeration only accumulates small rationals per β
  std::map<int, Rat> coeff;
  auto& cache = UrsellCache::instance();
  for_each_cluster(g, side, k, [&](const Cluster& c) {
    int beta = 0;
    for (const auto& [p, m] : c.parts) beta += m * p.boundary_size;
    Rat phi = cache.get(c.graph);
    if (phi.is_zero()) return;
    coeff[beta] += phi * Rat(static_cast<long>(c.orderings));
  }, lim);
  Rat sum(0);
  Rat lp1 = Rat(1) + lambda;
  for (const auto& [beta, cf] : coeff) sum += cf / lp1.pow(beta);
  return sum * lambda.pow(k);
}

std::pair<Rat, Rat> closed_form_terms(int d, const Rat& lambda) {
  if (d < 2) throw parse_error("closed_form_terms needs d >= 2");
  int n = 2 * d - 1;
  Rat N = Rat::binom(n, d);
  Rat lp1 = Rat(1) + lambda;
  Rat L1 = N * lambda / lp1.pow(d);
  Rat L2 = Rat(-1, 2) * N * Rat(static_cast<long>(d) * d - d + 1) * lambda.pow(2) / lp1.pow(2 * d) +
           N * Rat::binom(d, 2) * lambda.pow(2) / lp1.pow(2 * d - 1);
  return {L1, L2};
}

std::vector<std::string> regime_warnings(int d, const Rat& lambda) {
  std::vector<std::string> w;
  if (d < 10)
    w.push_back("asymptotic formula evaluated at small d=" + std::to_string(d) +
                "; error terms are not controlled");
  double thr = lambda_threshold(d, 1.0);
  if (lambda.to_double() < thr) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "lambda=%.6g below threshold ln(d)/d^(1/3)=%.6g (C0=1); convergence regime "
                  "not guaranteed",
                  lambda.to_double(), thr);
    w.push_back(buf);
  }
  return w;
}

ExpansionReport build_expansion_report(int d, const Rat& lambda, int k_max, TermSource source,
                                       Side side, const ClusterLimits& lim) {
  if (k_max < 1) throw parse_error("k_max must be >= 1");
  ExpansionReport rep;
  rep.d = d;
  rep.lambda = lambda;
  rep.source = source;
  if (source == TermSource::closed_form) {
    if (k_max > 2)
      throw parse_error("closed-form terms exist only for k <= 2; use the enumerated source");
    auto [L1, L2] = closed_form_terms(d, lambda);
    rep.terms.push_back(L1);
    if (k_max >= 2) rep.terms.push_back(L2);
    if (d == 2)
      rep.warnings.push_back(
          "closed-form L2 assumes size-2 polymers exist, which fails at d=2 (their closure "
          "covers more than half the layer)");
  } else {
    LayerGraph g(2 * d - 1, d);
    for (int k = 1; k <= k_max; k++)
      rep.terms.push_back(expansion_term(g, side, lambda, k, lim));
  }
  Rat run(0);
  for (const Rat& t : rep.terms) {
    run += t;
    rep.partial_sums.push_back(run);
  }
  auto pred = predict_partition(d, lambda, static_cast<int>(rep.terms.size()), rep.terms);
  rep.ln_Z_estimate = pred.ln_Z_estimate;
  rep.epsilon_shape_bound = pred.epsilon_shape_bound;
  for (auto& w : pred.warnings) rep.warnings.push_back(w);
  return rep;
}

KPReport kp_check(const LayerGraph& g, const WeightParams& w, int max_polymer_size,
                  uint64_t polymer_cap) {
  g.require_middle_layers("kp_check");
  KPReport rep;
  int d = g.d();
  rep.d = d;
  rep.lambda = w.lambda;
  rep.aux_C = w.aux_C;
  rep.max_polymer_size = max_polymer_size;
  rep.vertex_bound = 1.0 / (static_cast<double>(d) * d * d * d);
  rep.truncated = max_polymer_size < g.side_size(Side::upper) / 2;

  auto polys = enumerate_polymers(g, Side::upper, max_polymer_size, polymer_cap);
  rep.polymers = static_cast<int>(polys.size());
  double dd = static_cast<double>(d);

  // weighted term per polymer: w(S)·exp(C|S|/d² + γ(d,|S|))
  std::vector<double> term(polys.size());
  for (size_t i = 0; i < polys.size(); i++) {
    const Polymer& p = polys[i];
    double lw = polymer_weight(p, w.lambda).log();
    term[i] = std::exp(lw + w.aux_C * p.size() / (dd * dd) + gamma_fn(d, p.size(), w.lambda));
  }

  rep.per_vertex.resize(g.side_size(Side::upper));
  for (int v = 0; v < g.side_size(Side::upper); v++) rep.per_vertex[v].vid = v;
  for (size_t i = 0; i < polys.size(); i++)
    for (int v : polys[i].verts) rep.per_vertex[v].sum += term[i];
  rep.per_vertex_max = 0;
  for (auto& row : rep.per_vertex) rep.per_vertex_max = std::max(rep.per_vertex_max, row.sum);
  rep.per_vertex_pass = rep.per_vertex_max <= rep.vertex_bound;

  // per-polymer margins f(S0) − Σ_{S~S0} term(S)
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < polys.size(); i++) {
    double lhs = 0;
    for (size_t j = 0; j < polys.size(); j++)
      if (polys[i].nmask.intersects(polys[j].nmask)) lhs += term[j];
    double margin = polys[i].size() / (dd * dd) - lhs;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_polymer = static_cast<int>(i);
    }
  }
  if (polys.empty()) rep.worst_margin = 0;
  rep.pass = rep.per_vertex_pass && rep.worst_margin >= 0;
  return rep;
}

PartitionPrediction predict_partition(int d, const Rat& lambda, int k,
                                      const std::vector<Rat>& terms) {
  if (d < 2) throw parse_error("predict_partition needs d >= 2");
  if (static_cast<int>(terms.size()) < k) throw parse_error("missing expansion terms");
  PartitionPrediction pred;
  pred.d = d;
  pred.k = k;
  double N = static_cast<double>(binom64(2 * d - 1, d));
  double sum = 0;
  for (int j = 0; j < k; j++) sum += terms[j].to_double();
  pred.ln_Z_estimate = std::log(2.0) + N * (Rat(1) + lambda).log() + sum;
  // truncation-error shape at k+1 (constant reported as 1)
  double kk = k + 1;
  double ln_eps = std::log(N) + (11.0 * kk - 2.0) * std::log(static_cast<double>(d)) -
                  (d * kk - 1.5 * kk * kk) * (Rat(1) + lambda).log();
  pred.epsilon_shape_bound = std::exp(ln_eps);
  pred.warnings = regime_warnings(d, lambda);
  pred.warnings.push_back("epsilon bound is shape-only: the O(.) constant is reported as 1");
  return pred;
}

}  // namespace midlayer
