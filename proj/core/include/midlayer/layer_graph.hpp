#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "midlayer/bitvec.hpp"
#include "midlayer/errors.hpp"

namespace midlayer {

enum class Side { upper, lower };

inline Side opposite(Side s) { return s == Side::upper ? Side::lower : Side::upper; }
inline const char* side_name(Side s) { return s == Side::upper ? "upper" : "lower"; }
Side parse_side(const std::string& s);

/// A vertex as a subset of the ground set [n], encoded in the low n bits.
struct Vertex {
  uint64_t bits = 0;
  Side side = Side::upper;
};

/// Textual vertex form: sorted 1-based element list, e.g. "{1,2,4}".
std::string vertex_label(uint64_t bits);
uint64_t parse_vertex_label(const std::string& s, int n);

/// The bipartite graph on layers k and k-1 of the n-element Boolean lattice.
/// Upper vertices are the k-subsets of [n], lower vertices the (k-1)-subsets;
/// adjacency is containment with one element removed. Vertices get dense
/// per-side ids in colex order of their bitsets. Immutable once built.
class LayerGraph {
public:
  LayerGraph(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int side_size(Side s) const { return s == Side::upper ? upper_size_ : lower_size_; }
  int upper_size() const { return upper_size_; }
  int lower_size() const { return lower_size_; }
  int degree(Side s) const { return s == Side::upper ? k_ : n_ - k_ + 1; }

  /// True for the middle-two-layers case n = 2d-1, k = d: the graph is
  /// d-regular and both sides have C(n,d) vertices.
  bool is_middle_layers() const { return n_ == 2 * k_ - 1; }
  int d() const { return k_; }
  /// Throws shape_error unless this is the middle-layers graph.
  void require_middle_layers(const char* what) const;

  uint64_t vertex_bits(Side s, int id) const { return verts(s)[id]; }
  int vertex_id(Side s, uint64_t bits) const;  // combinadic colex rank
  Vertex vertex(Side s, int id) const { return Vertex{vertex_bits(s, id), s}; }

  const std::vector<int>& neighbor_ids(Side s, int id) const {
    return s == Side::upper ? up_nbr_ids_[id] : lo_nbr_ids_[id];
  }
  /// Mask over the opposite side's ids.
  const BitVec& neighbor_mask(Side s, int id) const {
    return s == Side::upper ? up_nbr_[id] : lo_nbr_[id];
  }
  /// Same-side vertices at distance exactly 2 (sharing a neighbor).
  const BitVec& square_mask(Side s, int id) const {
    return s == Side::upper ? up_sq_[id] : lo_sq_[id];
  }

  BitVec empty_set(Side s) const { return BitVec(side_size(s)); }

private:
  const std::vector<uint64_t>& verts(Side s) const {
    return s == Side::upper ? upper_verts_ : lower_verts_;
  }

  int n_, k_;
  int upper_size_, lower_size_;
  std::vector<uint64_t> upper_verts_, lower_verts_;  // colex-ordered bitsets
  std::vector<std::vector<int>> up_nbr_ids_, lo_nbr_ids_;
  std::vector<BitVec> up_nbr_, lo_nbr_;
  std::vector<BitVec> up_sq_, lo_sq_;
};

/// A set of same-side vertices by dense id.
struct VertexSet {
  Side side = Side::upper;
  BitVec members;

  int size() const { return members.count(); }
  bool empty() const { return members.empty(); }
};

VertexSet make_vertex_set(const LayerGraph& g, Side side, const std::vector<int>& ids);
std::vector<std::string> vertex_set_labels(const LayerGraph& g, const VertexSet& s);

/// N(A): union of neighbors, on the opposite side. N(∅) = ∅.
VertexSet neighborhood(const LayerGraph& g, const VertexSet& s);

/// Closure [A] = {v on A's side : N(v) ⊆ N(A)}. Extensive and idempotent;
/// [∅] = ∅ by convention.
VertexSet closure(const LayerGraph& g, const VertexSet& a);

/// Maximal 2-linked subsets of s (components of s in the square graph),
/// in canonical order (by lowest member id).
std::vector<VertexSet> two_linked_components(const LayerGraph& g, const VertexSet& s);

/// Whether s is 2-linked (connected in the square graph). ∅ and singletons
/// count as 2-linked.
bool is_two_linked(const LayerGraph& g, const VertexSet& s);

/// Enumerate connected vertex sets of the side's square graph. Each set is
/// reported exactly once, via its minimum-id seed. `cap` bounds the number of
/// sets visited (scale_error beyond it). Ordering is deterministic.
void enumerate_two_linked_sets(const LayerGraph& g, Side side, int max_size, uint64_t cap,
                               const std::function<void(const BitVec&)>& emit);

struct TwoLinkedCount {
  uint64_t count = 0;
  double bound = 0.0;  // exp(6 t ln d) = d^{6t}
  bool bound_ok = false;
  std::vector<VertexSet> sets;  // populated only when keep_sets
};

/// Count 2-linked same-side sets of size t containing the given vertex, and
/// compare against the d^{6t} bound.
TwoLinkedCount count_two_linked_containing(const LayerGraph& g, Side side, int vid, int t,
                                           bool keep_sets = false, uint64_t cap = 50'000'000);

struct IsoperimetryReport {
  char mode = 'i';
  bool exhaustive = true;
  uint64_t sets_checked = 0;
  uint64_t samples = 0;  // when sampled
  uint64_t seed = 0;
  double worst_ratio = 0.0;  // min |N(S)| / bound over scanned nonempty sets
  bool pass = true;          // vacuous pass when nothing is in range
  std::vector<std::string> witness;  // labels of the worst set
  int max_size = 0;
};

/// Check the layer isoperimetric inequalities on one side:
///   mode 'i':   |S| <= d/4      =>  |N(S)| >= d|S| - |S|^2/2
///   mode 'ii':  |S| <= d^4      =>  |N(S)| >= d|S|/6
///   mode 'iii': |S| <= N/2      =>  |N(S)| >= (1 + 1/(2d-1))|S|
/// `max_size` caps |S| below the mode's own bound (0 = mode default).
/// Exhaustive while the scan fits in `budget` states; falls back to seeded
/// random sampling otherwise (flagged in the report).
IsoperimetryReport isoperimetry_check(const LayerGraph& g, char mode, Side side = Side::upper,
                                      int max_size = 0, uint64_t budget = 1ull << 22,
                                      uint64_t samples = 200'000, uint64_t seed = 1);

}  // namespace midlayer
