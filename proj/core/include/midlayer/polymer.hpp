#pragma once

#include <vector>

#include "midlayer/layer_graph.hpp"
#include "midlayer/rational.hpp"

namespace midlayer {

/// A polymer: non-empty 2-linked same-side set whose closure covers at most
/// half the side. Boundary and closure sizes are cached at construction.
struct Polymer {
  Side side = Side::upper;
  std::vector<int> verts;  // ascending ids
  BitVec vmask;            // over own side
  BitVec nmask;            // over opposite side
  int boundary_size = 0;
  int closure_size = 0;

  int size() const { return static_cast<int>(verts.size()); }
};

struct WeightParams {
  Rat lambda{1};
  double aux_C = 1.0;  // the constant C of the auxiliary weight, >= 1
  int d = 0;
};

/// λ regime threshold C0·ln d / d^{1/3}. C0 is user-supplied (the source
/// leaves it unpinned), so this feeds warnings rather than verdicts.
double lambda_threshold(int d, double C0 = 1.0);

/// True iff s is non-empty, 2-linked, and 2|[s]| <= N. Middle layers only.
bool is_polymer(const LayerGraph& g, const VertexSet& s);

/// Validates and caches; throws shape/parse errors on bad input.
Polymer make_polymer(const LayerGraph& g, const VertexSet& s);

/// w(S) = λ^|S| / (1+λ)^|N(S)|, exact.
Rat polymer_weight(const Polymer& p, const Rat& lambda);

/// Auxiliary weight w̃(S) = w(S)·exp((C−1)|S|/d²), as double (the exp factor
/// is transcendental).
double polymer_weight_aux(const Polymer& p, const WeightParams& w);

/// Compatible = union not 2-linked. A polymer is incompatible with itself.
/// Throws parse_error when the sides differ.
bool compatible(const Polymer& p, const Polymer& q);

/// True iff p ∪ q is 2-linked (the polymer adjacency relation S ~ S').
inline bool polymers_adjacent(const Polymer& p, const Polymer& q) { return !compatible(p, q); }

/// All polymers with |S| <= max_size, canonically ordered (size, then mask).
std::vector<Polymer> enumerate_polymers(const LayerGraph& g, Side side, int max_size,
                                        uint64_t cap = 50'000'000);

/// G(a,b): every 2-linked A on the side with |[A]| = a and |N(A)| = b.
/// Members are 2-linked sets, not necessarily polymers (a may exceed N/2).
struct ContainerFamily {
  int a = 0, b = 0;
  Side side = Side::upper;
  std::vector<VertexSet> members;
};

ContainerFamily enumerate_container_family(const LayerGraph& g, Side side, int a, int b,
                                           uint64_t cap = 50'000'000);

/// Σ_{A∈G(a,b)} λ^|A| / (1+λ)^b, exact.
Rat container_sum(const ContainerFamily& f, const Rat& lambda);

/// Reference shape of the container bound, C(n,d)·exp(−C1·(b−a)·ln d / d^{2/3}),
/// with user-supplied C1 (never defaulted into a verdict).
double container_bound_shape(const LayerGraph& g, int a, int b, double C1);

/// γ(d,k): piecewise convergence exponent.
///   k <= d/4:        (dk − 3k²/2)·ln(1+λ) − 11k·ln d
///   d/4 < k <= d^4:  (dk/12)·ln(1+λ)
///   k > d^4:         k/d²
double gamma_fn(int d, double k, const Rat& lambda);

}  // namespace midlayer
