#include "midlayer/oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "midlayer/combinatorics.hpp"

namespace midlayer {

uint64_t SweepHistogram::total() const {
  uint64_t t = 0;
  for (uint64_t c : cells) t += c;
  return t;
}

void SweepHistogram::add(const SweepHistogram& o) {
  for (size_t i = 0; i < cells.size(); i++) cells[i] += o.cells[i];
}

namespace {

// Single-word sweep kernel for N <= 36. Byte-indexed union tables make the
// per-state component analysis a handful of table lookups.
struct SweepKernel {
  int N = 0;  // swept side
  int M = 0;  // opposite side
  int bad_threshold = 0;  // floor(N/2)+1: closure size that disqualifies
  std::vector<uint64_t> nbr;           // upper id -> lower mask
  uint64_t exp_tab[5][256];            // square-graph union by byte
  uint64_t nbu_tab[5][256];            // neighbor union by byte

  explicit SweepKernel(const LayerGraph& g, Side side) {
    N = g.side_size(side);
    M = g.side_size(opposite(side));
    if (N > 36 || M > 64) throw scale_error("sweep supports N <= 36 (d <= 4)");
    bad_threshold = N / 2 + 1;
    nbr.resize(N);
    std::vector<uint64_t> sq(N);
    for (int v = 0; v < N; v++) {
      nbr[v] = g.neighbor_mask(side, v).words()[0];
      sq[v] = g.square_mask(side, v).words()[0];
    }
    for (int blk = 0; blk < 5; blk++)
      for (int b = 0; b < 256; b++) {
        uint64_t e = 0, u = 0;
        for (int j = 0; j < 8; j++)
          if (b >> j & 1) {
            int v = blk * 8 + j;
            if (v < N) {
              e |= sq[v];
              u |= nbr[v];
            }
          }
        exp_tab[blk][b] = e;
        nbu_tab[blk][b] = u;
      }
  }

  uint64_t expand(uint64_t m) const {
    return exp_tab[0][m & 255] | exp_tab[1][(m >> 8) & 255] | exp_tab[2][(m >> 16) & 255] |
           exp_tab[3][(m >> 24) & 255] | exp_tab[4][(m >> 32) & 255];
  }
  uint64_t nb_union(uint64_t m) const {
    return nbu_tab[0][m & 255] | nbu_tab[1][(m >> 8) & 255] | nbu_tab[2][(m >> 16) & 255] |
           nbu_tab[3][(m >> 24) & 255] | nbu_tab[4][(m >> 32) & 255];
  }

  // all 2-linked components of A have closure below half the layer?
  bool is_good(uint64_t A, int covered) const {
    // a disqualifying component needs |[S]| >= bad_threshold, hence
    // |N(S)| >= |[S]| >= bad_threshold; boundaries of distinct components
    // are disjoint, so at most one component can qualify
    if (covered < bad_threshold) return true;
    uint64_t rem = A;
    int remcov = covered;
    while (rem) {
      uint64_t comp = rem & (~rem + 1);
      for (;;) {
        uint64_t nc = (expand(comp) & A) | comp;
        if (nc == comp) break;
        comp = nc;
      }
      uint64_t nb = nb_union(comp);
      int bc = std::popcount(nb);
      if (bc >= bad_threshold) {
        if (std::popcount(comp) >= bad_threshold) return false;  // closure ⊇ S
        uint64_t nnb = ~nb;
        int cl = 0;
        for (int v = 0; v < N; v++) cl += ((nbr[v] & nnb) == 0);
        return cl < bad_threshold;  // no other component can reach the bar
      }
      rem &= ~comp;
      remcov -= bc;
      if (remcov < bad_threshold) return true;
    }
    return true;
  }
};

template <bool Restricted>
void sweep_shard(const SweepKernel& kern, uint64_t start, uint64_t count,
                 std::vector<uint64_t>& hist) {
  uint64_t A = start ^ (start >> 1);  // gray(start)
  uint8_t cov[64] = {0};
  int covered = 0, sz = 0;
  for (uint64_t m = A; m; m &= m - 1) {
    int v = std::countr_zero(m);
    sz++;
    for (uint64_t nm = kern.nbr[v]; nm; nm &= nm - 1)
      if (cov[std::countr_zero(nm)]++ == 0) covered++;
  }
  int row = kern.M + 1;
  for (uint64_t i = 0;; i++) {
    if constexpr (Restricted) {
      if (kern.is_good(A, covered)) hist[sz * row + covered]++;
    } else {
      hist[sz * row + covered]++;
    }
    if (i + 1 == count) break;
    uint64_t idx = start + i + 1;
    int b = std::countr_zero(idx);
    uint64_t bm = 1ull << b;
    if (A & bm) {
      sz--;
      for (uint64_t nm = kern.nbr[b]; nm; nm &= nm - 1)
        if (--cov[std::countr_zero(nm)] == 0) covered--;
    } else {
      sz++;
      for (uint64_t nm = kern.nbr[b]; nm; nm &= nm - 1)
        if (cov[std::countr_zero(nm)]++ == 0) covered++;
    }
    A ^= bm;
  }
}

template <bool Restricted>
SweepHistogram run_sweep(const LayerGraph& g, Side side, int shards) {
  SweepKernel kern(g, side);
  int N = kern.N, M = kern.M;
  auto t0 = std::chrono::steady_clock::now();
  if (shards <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    shards = hw ? static_cast<int>(hw) : 2;
  }
  // power-of-two shard count, at most 256, at most 2^N
  int lg = 0;
  while ((2 << lg) <= shards && lg < 8 && (lg + 1) < N) lg++;
  int nsh = 1 << lg;
  uint64_t per = (1ull << N) / nsh;

  SweepHistogram out;
  out.N = N;
  out.M = M;
  out.cells.assign(static_cast<size_t>(N + 1) * (M + 1), 0);
  out.shards = nsh;

  std::vector<std::vector<uint64_t>> parts(nsh);
  std::vector<std::thread> threads;
  for (int s = 0; s < nsh; s++) {
    threads.emplace_back([&, s]() {
      std::vector<uint64_t> h(static_cast<size_t>(N + 1) * (M + 1), 0);
      sweep_shard<Restricted>(kern, per * s, per, h);
      parts[s] = std::move(h);
    });
  }
  for (auto& t : threads) t.join();
  for (int s = 0; s < nsh; s++)
    for (size_t i = 0; i < out.cells.size(); i++) out.cells[i] += parts[s][i];
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

}  // namespace

SweepHistogram sweep_all_subsets(const LayerGraph& g, Side side, int shards) {
  return run_sweep<false>(g, side, shards);
}

SweepHistogram sweep_restricted(const LayerGraph& g, Side side, int shards) {
  g.require_middle_layers("restricted sweep");
  return run_sweep<true>(g, side, shards);
}

namespace {

const SweepHistogram& sweep_memo(const LayerGraph& g, Side side, int shards, bool restricted) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, bool>, SweepHistogram> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.n(), g.k(), side == Side::upper ? 0 : 1, restricted);
  auto it = memo.find(key);
  if (it == memo.end())
    it = memo.emplace(key, restricted ? sweep_restricted(g, side, shards)
                                      : sweep_all_subsets(g, side, shards))
             .first;
  return it->second;
}

}  // namespace

const SweepHistogram& sweep_all_cached(const LayerGraph& g, Side side, int shards) {
  return sweep_memo(g, side, shards, false);
}

const SweepHistogram& sweep_restricted_cached(const LayerGraph& g, Side side, int shards) {
  return sweep_memo(g, side, shards, true);
}

Rat eval_Z_from_histogram(const SweepHistogram& h, const Rat& lambda) {
  Rat lp1 = Rat(1) + lambda;
  // powers of λ and 1+λ precomputed up to the side sizes
  std::vector<Rat> lpow(h.N + 1), ppow(h.M + 1);
  lpow[0] = Rat(1);
  ppow[0] = Rat(1);
  for (int i = 1; i <= h.N; i++) lpow[i] = lpow[i - 1] * lambda;
  for (int i = 1; i <= h.M; i++) ppow[i] = ppow[i - 1] * lp1;
  Rat sum(0);
  for (int s = 0; s <= h.N; s++)
    for (int b = 0; b <= h.M; b++) {
      uint64_t c = h.at(s, b);
      if (c) sum += Rat(mpz_class(static_cast<unsigned long>(c))) * lpow[s] * ppow[h.M - b];
    }
  return sum;
}

Rat eval_xi_from_histogram(const SweepHistogram& h, const Rat& lambda) {
  return eval_Z_from_histogram(h, lambda) / (Rat(1) + lambda).pow(h.M);
}

std::vector<Rat> independence_coefficients(const SweepHistogram& h) {
  // coeff[j] = Σ_{s,b} hist[s][b] · C(M−b, j−s)
  std::vector<Rat> coeff(static_cast<size_t>(h.N + h.M + 1), Rat(0));
  int top = 0;
  for (int s = 0; s <= h.N; s++)
    for (int b = 0; b <= h.M; b++) {
      uint64_t c = h.at(s, b);
      if (!c) continue;
      Rat rc{mpz_class(static_cast<unsigned long>(c))};
      for (int j = s; j <= s + h.M - b; j++) {
        coeff[j] += rc * Rat::binom(h.M - b, j - s);
        top = std::max(top, j);
      }
    }
  coeff.resize(top + 1);
  return coeff;
}

Rat exact_Z_naive(const LayerGraph& g, const Rat& lambda) {
  int U = g.upper_size(), L = g.lower_size();
  if (U + L > 24) throw scale_error("naive enumeration needs upper+lower <= 24 vertices");
  // subsets over all vertices; adjacency tested straight from the masks
  std::vector<uint64_t> lower_nbr(U, 0);
  for (int u = 0; u < U; u++) lower_nbr[u] = g.neighbor_mask(Side::upper, u).words()[0];
  Rat sum(0);
  std::vector<Rat> lpow(U + L + 1);
  lpow[0] = Rat(1);
  for (int i = 1; i <= U + L; i++) lpow[i] = lpow[i - 1] * lambda;
  for (uint64_t m = 0; m < (1ull << (U + L)); m++) {
    uint64_t a = m & ((1ull << U) - 1);
    uint64_t b = m >> U;
    bool indep = true;
    for (uint64_t rest = a; rest && indep; rest &= rest - 1)
      if (lower_nbr[std::countr_zero(rest)] & b) indep = false;
    if (indep) sum += lpow[std::popcount(m)];
  }
  return sum;
}

Rat b_both_sum(const LayerGraph& g, const Rat& lambda) {
  g.require_middle_layers("b_both_sum");
  int N = g.upper_size();
  if (N > 20) throw scale_error("both-sides restricted sum needs d <= 3");
  SweepKernel up(g, Side::upper), lo(g, Side::lower);
  std::vector<Rat> lpow(2 * N + 1);
  lpow[0] = Rat(1);
  for (int i = 1; i <= 2 * N; i++) lpow[i] = lpow[i - 1] * lambda;

  // precompute lower-side goodness for every subset
  std::vector<bool> lower_good(1ull << N);
  for (uint64_t m = 0; m < (1ull << N); m++)
    lower_good[m] = lo.is_good(m, std::popcount(lo.nb_union(m)));

  Rat total(0);
  for (uint64_t a = 0; a < (1ull << N); a++) {
    int acov = std::popcount(up.nb_union(a));
    if (!up.is_good(a, acov)) continue;
    uint64_t avail = ~up.nb_union(a) & ((1ull << N) - 1);
    // walk subsets of the available lower vertices
    uint64_t b = avail;
    int asz = std::popcount(a);
    for (;;) {
      if (lower_good[b]) total += lpow[asz + std::popcount(b)];
      if (b == 0) break;
      b = (b - 1) & avail;
    }
  }
  return total;
}

OneSidedLowerBound one_sided_lower_bound(int d, uint64_t cap) {
  if (d < 2) throw parse_error("one_sided_lower_bound needs d >= 2");
  OneSidedLowerBound r;
  r.d = d;
  int n = 2 * d - 1;
  uint64_t N = binom64(n, d);
  double t_real = static_cast<double>(N) * std::pow(2.0, -d);
  // nearest integer, ties to even
  long t = std::lround(t_real);
  if (std::abs(t_real - std::floor(t_real) - 0.5) < 1e-12) {
    long lo_t = static_cast<long>(std::floor(t_real));
    t = (lo_t % 2 == 0) ? lo_t : lo_t + 1;
  }
  r.t = t;
  if (t < 1) throw scale_error("lower-bound construction regime error: rounded t is zero at d=" +
                               std::to_string(d));

  double log2_formula = 1.0 + static_cast<double>(N) +
                        (static_cast<double>(N) * std::pow(2.0, -d) +
                         std::log(2.0) * (d * (d - 1) / 2.0) * N * std::pow(2.0, -2.0 * d)) /
                            std::log(2.0);
  r.formula_log2 = log2_formula;
  r.formula_value = std::pow(2.0, log2_formula);

  if (N > 63 || binom64(static_cast<int>(N), static_cast<int>(t)) > cap)
    throw scale_error("lower-bound construction exact sum infeasible at d=" + std::to_string(d));

  LayerGraph g(n, d);
  int Ni = static_cast<int>(N);
  std::vector<uint64_t> nbr(Ni);
  for (int v = 0; v < Ni; v++) nbr[v] = g.neighbor_mask(Side::upper, v).words()[0];

  // iterate t-subsets of the upper side, Σ 2^{N−|N(T)|} exactly
  Rat sum(0);
  std::vector<Rat> p2(Ni + 1);
  p2[0] = Rat(1);
  for (int i = 1; i <= Ni; i++) p2[i] = p2[i - 1] * Rat(2);
  uint64_t m = (1ull << t) - 1, top = 1ull << Ni;
  while (m < top) {
    uint64_t nb = 0;
    for (uint64_t rest = m; rest; rest &= rest - 1) nb |= nbr[std::countr_zero(rest)];
    sum += p2[Ni - std::popcount(nb)];
    r.subsets++;
    m = next_subset_mask(m);
  }
  r.exact_sum = sum;
  return r;
}

ExpectedBoundary expected_boundary(int d, long t) {
  if (d < 2) throw parse_error("expected_boundary needs d >= 2");
  int n = 2 * d - 1;
  uint64_t N = binom64(n, d);
  if (t < 0 || static_cast<uint64_t>(t) > N) throw parse_error("t out of range [0, N]");
  ExpectedBoundary r;
  // P(v not covered) = C(N−d, t)/C(N, t); each lower vertex has d upper nbrs
  Rat Nn{mpz_class(static_cast<unsigned long>(N))};
  Rat miss = Rat::binom(N - d, t) / Rat::binom(N, t);
  r.exact = Nn * (Rat(1) - miss);
  double td = static_cast<double>(t);
  r.paper_approx = d * td - (d * (d - 1) / 2.0) * td * td / static_cast<double>(N);
  return r;
}

AsymptoticCountEstimate asymptotic_count_estimate(int d) {
  if (d < 2) throw parse_error("asymptotic_count_estimate needs d >= 2");
  AsymptoticCountEstimate r;
  r.d = d;
  r.N = binom64(2 * d - 1, d);
  double N = static_cast<double>(r.N);
  r.term_first = N * std::pow(2.0, -d);
  r.term_second = (d * (d - 1) / 2.0) * N * std::pow(2.0, -2.0 * d);
  r.log2_count = 1.0 + N + (r.term_first + r.term_second) / std::log(2.0);
  r.stirling_N = std::pow(2.0, 2 * d - 1) / std::sqrt(M_PI * d);
  r.warnings.push_back("asymptotic count with o(1) set to 0; not a certified value at finite d");
  return r;
}

CoverageCounter::CoverageCounter(const LayerGraph& g, Side side)
    : g_(g), side_(side), current_(g.side_size(side)),
      hits_(static_cast<size_t>(g.side_size(opposite(side))), 0) {}

void CoverageCounter::toggle(int upper_id) {
  bool removing = current_.test(upper_id);
  if (removing)
    current_.reset(upper_id);
  else
    current_.set(upper_id);
  for (int w : g_.neighbor_ids(side_, upper_id)) {
    if (removing) {
      if (--hits_[w] == 0) covered_--;
    } else {
      if (hits_[w]++ == 0) covered_++;
    }
  }
}

int CoverageCounter::recompute_covered() const {
  VertexSet s{side_, current_};
  return neighborhood(g_, s).size();
}

}  // namespace midlayer
