#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "midlayer/polymer.hpp"
#include "midlayer/ursell.hpp"

namespace midlayer {

/// A cluster as a canonical multiset: parts sorted in polymer canonical
/// order, `orderings` counting the ordered tuples that realize the multiset.
struct Cluster {
  std::vector<std::pair<Polymer, int>> parts;  // (polymer, multiplicity)
  int size = 0;                                // ‖Γ‖ = Σ multiplicity·|S|
  uint64_t orderings = 0;                      // (Σm)! / Π m_i!
  IncompatGraph graph;                         // on the Σm expanded copies
};

struct ClusterLimits {
  uint64_t polymer_cap = 50'000'000;   // 2-linked enumeration states
  uint64_t cluster_cap = 20'000'000;   // emitted multisets
};

/// Visit every cluster of total size exactly k as a canonical multiset.
/// Deterministic order. scale_error with a frontier diagnostic beyond caps.
void for_each_cluster(const LayerGraph& g, Side side, int k,
                      const std::function<void(const Cluster&)>& fn,
                      const ClusterLimits& lim = {});

std::vector<Cluster> enumerate_clusters(const LayerGraph& g, Side side, int k,
                                        const ClusterLimits& lim = {});

/// Per-ordered-tuple weight w(Γ) = φ(H)·Π w(S)^m. The multiset's total
/// contribution to L_k is orderings × this value.
Rat cluster_weight(const Cluster& c, const Rat& lambda);

/// L_k = Σ_{‖Γ‖=k} w(Γ), exact, by cluster enumeration.
Rat expansion_term(const LayerGraph& g, Side side, const Rat& lambda, int k,
                   const ClusterLimits& lim = {});

/// Closed forms from the size-1/size-2 census:
///   L1 = C(n,d)·λ/(1+λ)^d
///   L2 = −(1/2)·C(n,d)(d²−d+1)·λ²/(1+λ)^{2d} + C(n,d)·C(d,2)·λ²/(1+λ)^{2d−1}
/// The L2 formula presumes distance-2 pairs are polymers, which first holds
/// at d = 3; at d = 2 the enumerated value differs by exactly the missing
/// C(n,d)·C(d,2)·λ²/(1+λ)^{2d−1} contribution.
std::pair<Rat, Rat> closed_form_terms(int d, const Rat& lambda);

enum class TermSource { closed_form, enumerated };

struct ExpansionReport {
  int d = 0;
  Rat lambda;
  TermSource source = TermSource::closed_form;
  std::vector<Rat> terms;         // L_1 .. L_kmax
  std::vector<Rat> partial_sums;  // Σ_{j<=k} L_j
  double ln_Z_estimate = 0.0;     // ln2 + N·ln(1+λ) + Σ L_j
  double epsilon_shape_bound = 0.0;
  std::vector<std::string> warnings;
};

/// The shifted truncation index T_k = Σ_{i<=k-1} L_i is partial_sums[k-2].
/// The two sides are symmetric; `side` picks which one the enumerated source
/// walks.
ExpansionReport build_expansion_report(int d, const Rat& lambda, int k_max, TermSource source,
                                       Side side = Side::upper, const ClusterLimits& lim = {});

struct KPVertexRow {
  int vid = 0;
  double sum = 0.0;  // Σ_{S∋v} w(S)·exp(C|S|/d² + γ(d,|S|))
};

struct KPReport {
  int d = 0;
  Rat lambda;
  double aux_C = 1.0;
  int max_polymer_size = 0;
  bool truncated = true;      // polymers above the cap not summed
  int polymers = 0;
  double per_vertex_max = 0.0;
  double vertex_bound = 0.0;  // 1/d^4
  bool per_vertex_pass = false;
  double worst_margin = 0.0;  // min over S0 of f(S0) − Σ_{S~S0} w̃(S)e^{f+g}
  int worst_polymer = -1;
  bool pass = false;
  std::vector<KPVertexRow> per_vertex;
};

/// Numeric Kotecký–Preiss condition check with f(S)=|S|/d², g(S)=γ(d,|S|),
/// over polymers up to the size cap. Truncation is a reported state.
KPReport kp_check(const LayerGraph& g, const WeightParams& w, int max_polymer_size,
                  uint64_t polymer_cap = 50'000'000);

struct PartitionPrediction {
  int d = 0;
  int k = 0;
  double ln_Z_estimate = 0.0;
  double epsilon_shape_bound = 0.0;  // shape only; the O(·) constant is unknown
  std::vector<std::string> warnings;
};

/// ln Z ≈ ln 2 + N·ln(1+λ) + Σ_{j<=k} L_j with the truncation-error shape
/// N·d^{11k+9}/(1+λ)^{d(k+1)−3(k+1)²/2} reported alongside (constant 1).
PartitionPrediction predict_partition(int d, const Rat& lambda, int k,
                                      const std::vector<Rat>& terms);

/// Shared regime warnings for asymptotic formulas at desk scale.
std::vector<std::string> regime_warnings(int d, const Rat& lambda);

}  // namespace midlayer
