#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>

#include "midlayer/rational.hpp"

namespace midlayer {

/// Small simple graph for Ursell evaluation: m vertices, edges packed as a
/// bitmask over pairs (i<j) at index j(j-1)/2 + i. Self-loops are implicit
/// in the polymer incompatibility semantics and never stored here.
struct IncompatGraph {
  int m = 1;
  uint64_t edges = 0;

  static int pair_index(int i, int j) {
    if (i > j) std::swap(i, j);
    return j * (j - 1) / 2 + i;
  }
  bool edge(int i, int j) const { return i != j && (edges >> pair_index(i, j)) & 1; }
  void set_edge(int i, int j) { edges |= 1ull << pair_index(i, j); }

  static IncompatGraph complete(int m);
  static IncompatGraph path(int m);
};

/// Ursell function φ(H) = (1/m!) Σ_F (−1)^{e(F)} over connected spanning
/// subgraphs F of H. Exact; zero when H is disconnected. m <= 9.
///
/// Evaluated by the complement recursion over induced subsets: with r the
/// anchor vertex of U and W(U) the signed spanning-connected count,
///   W(U) = 0^{e(U)} − Σ W(U \ I)  over non-empty independent I ⊆ U \ {r},
/// memoized over the 2^m subset masks.
Rat ursell(const IncompatGraph& h);

/// Signed spanning-connected-subgraph count W(H) = m!·φ(H), exact in int64
/// for m <= 9.
int64_t ursell_signed_count(const IncompatGraph& h);

/// Process-wide Ursell memo keyed by a degree-sorted adjacency form.
/// Optionally persisted under MIDLAYER_CACHE_DIR (file ursell.cache); a file
/// that fails validation raises cache_error rather than being recomputed
/// silently.
class UrsellCache {
public:
  /// Shared instance; loads the persisted file once if the env var is set.
  static UrsellCache& instance();

  Rat get(const IncompatGraph& h);
  size_t size() const;

  /// Write-back of entries accumulated this process (no-op without cache dir).
  void persist() const;

  // exposed for tests
  static uint64_t canonical_key(const IncompatGraph& h);
  void load_file(const std::string& path);
  void save_file(const std::string& path) const;

private:
  mutable std::mutex mu_;
  std::unordered_map<uint64_t, Rat> map_;
  std::string file_;
};

}  // namespace midlayer
