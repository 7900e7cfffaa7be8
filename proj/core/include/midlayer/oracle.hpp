#pragma once

#include <cstdint>
#include <vector>

#include "midlayer/layer_graph.hpp"
#include "midlayer/rational.hpp"

namespace midlayer {

/// Joint histogram over one side's subsets A: cell (s, b) counts subsets with
/// |A| = s and |N(A)| = b. Everything exact downstream is evaluated from
/// these integer counts, so the 2^N sweep never touches big numbers.
struct SweepHistogram {
  int N = 0;  // swept side size (rows: |A| in 0..N)
  int M = 0;  // opposite side size (cols: |N(A)| in 0..M)
  std::vector<uint64_t> cells;
  int shards = 1;
  double wall_ms = 0.0;

  uint64_t& at(int s, int b) { return cells[static_cast<size_t>(s) * (M + 1) + b]; }
  uint64_t at(int s, int b) const { return cells[static_cast<size_t>(s) * (M + 1) + b]; }
  uint64_t total() const;
  void add(const SweepHistogram& o);
};

/// Gray-code sweep over all 2^N subsets of one side. Requires N <= 36.
/// Sharded deterministically by the top bits of the subset mask; results are
/// independent of the shard count.
SweepHistogram sweep_all_subsets(const LayerGraph& g, Side side, int shards = 0);

/// Same sweep restricted to `good` subsets: every 2-linked component S of A
/// has 2|[S]| <= N. These are exactly the polymer configurations, so
/// Σ_good λ^|A| (1+λ)^{N−|N(A)|} = (1+λ)^N · Ξ(P, w).
SweepHistogram sweep_restricted(const LayerGraph& g, Side side, int shards = 0);

/// Process-wide memoized variants; the histogram is deterministic, so
/// repeated verification passes reuse the first computation.
const SweepHistogram& sweep_all_cached(const LayerGraph& g, Side side, int shards = 0);
const SweepHistogram& sweep_restricted_cached(const LayerGraph& g, Side side, int shards = 0);

/// Z(λ) = Σ hist[s][b] · λ^s · (1+λ)^{N−b}, exact. With `hist` from the
/// restricted sweep this is the restricted partition sum Σ_{I∈M_D} λ^|I|.
Rat eval_Z_from_histogram(const SweepHistogram& h, const Rat& lambda);

/// Ξ = Σ hist[s][b] · λ^s · (1+λ)^{−b} over the restricted histogram.
Rat eval_xi_from_histogram(const SweepHistogram& h, const Rat& lambda);

/// Independence-polynomial coefficients: coeff[j] = #{I : |I| = j}, exact,
/// derived from the full histogram via (1+λ)^{N−b} expansion.
std::vector<Rat> independence_coefficients(const SweepHistogram& h);

/// Independent brute force over all subsets of V(G) (both sides); checks
/// edges directly. Feasible only when upper+lower <= ~24.
Rat exact_Z_naive(const LayerGraph& g, const Rat& lambda);

/// Σ_{I∈B} λ^|I| with B = M_d ∩ M_{d-1}: independent sets whose components
/// on *both* sides stay below half closure. Needs 2^upper · inner work, so
/// d <= 3.
Rat b_both_sum(const LayerGraph& g, const Rat& lambda);

struct OneSidedLowerBound {
  int d = 0;
  long t = 0;  // round(N·2^{-d}), ties to even
  Rat exact_sum;         // Σ over all t-subsets T of 2^{N−|N(T)|}
  double formula_value;  // 2·2^N·exp(N·2^{-d} + ln2·C(d,2)·N·2^{-2d}), o(1) := 0
  double formula_log2;
  uint64_t subsets = 0;
};

/// The lower-bound construction: independent sets with |I ∩ upper| = t.
OneSidedLowerBound one_sided_lower_bound(int d, uint64_t cap = 200'000'000);

struct ExpectedBoundary {
  Rat exact;           // N·(1 − C(N−d,t)/C(N,t))
  double paper_approx;  // d·t − C(d,2)·t²/N
};

/// E|N(T)| for a uniform random t-subset T of the upper layer.
ExpectedBoundary expected_boundary(int d, long t);

struct AsymptoticCountEstimate {
  int d = 0;
  uint64_t N = 0;
  double term_first = 0.0;   // N·2^{-d}
  double term_second = 0.0;  // C(d,2)·N·2^{-2d}
  double log2_count = 0.0;   // 1 + N + (first+second)/ln 2
  double stirling_N = 0.0;   // 2^{2d-1}/sqrt(pi·d)
  std::vector<std::string> warnings;
};

AsymptoticCountEstimate asymptotic_count_estimate(int d);

/// Per-lower-vertex hit counters driving the sweeps; exposed so the
/// incremental bookkeeping can be property-tested against recomputation.
class CoverageCounter {
public:
  CoverageCounter(const LayerGraph& g, Side side);
  void toggle(int upper_id);  // O(deg) counter updates
  int covered() const { return covered_; }
  int uncovered() const { return static_cast<int>(hits_.size()) - covered_; }
  int recompute_covered() const;  // from scratch, for validation

private:
  const LayerGraph& g_;
  Side side_;
  BitVec current_;
  std::vector<uint16_t> hits_;
  int covered_ = 0;
};

}  // namespace midlayer
