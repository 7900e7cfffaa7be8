#include "midlayer/layer_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "midlayer/combinatorics.hpp"
#include "midlayer/rng.hpp"

namespace midlayer {

Side parse_side(const std::string& s) {
  if (s == "upper") return Side::upper;
  if (s == "lower") return Side::lower;
  throw parse_error("side must be 'upper' or 'lower', got '" + s + "'");
}

std::string vertex_label(uint64_t bits) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i = 0; i < 64; i++)
    if (bits >> i & 1) {
      if (!first) os << ',';
      os << i + 1;  // elements of [n] are 1-based in text form
      first = false;
    }
  os << '}';
  return os.str();
}

uint64_t parse_vertex_label(const std::string& s, int n) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw parse_error("vertex label must look like {1,2,4}: " + s);
  uint64_t bits = 0;
  std::string body = s.substr(1, s.size() - 2);
  if (body.empty()) return 0;
  std::istringstream is(body);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    size_t pos = 0;
    int e = std::stoi(tok, &pos);
    if (pos != tok.size() || e < 1 || e > n)
      throw parse_error("vertex element out of range in " + s);
    uint64_t bit = 1ull << (e - 1);
    if (bits & bit) throw parse_error("repeated element in " + s);
    bits |= bit;
  }
  return bits;
}

LayerGraph::LayerGraph(int n, int k) : n_(n), k_(k) {
  if (n < 2 || n > 63) throw parse_error("ground set size n must be in [2, 63]");
  if (k < 1 || k > n) throw parse_error("layer index k must satisfy 1 <= k <= n");
  uint64_t us = binom64(n, k), ls = binom64(n, k - 1);
  if (us > (1ull << 31) || ls > (1ull << 31)) throw scale_error("layer too large to materialize");
  upper_size_ = static_cast<int>(us);
  lower_size_ = static_cast<int>(ls);

  auto gen = [n](int sz, std::vector<uint64_t>& out) {
    out.reserve(binom64(n, sz));
    if (sz == 0) {
      out.push_back(0);
      return;
    }
    uint64_t m = (1ull << sz) - 1, top = 1ull << n;
    while (m < top) {
      out.push_back(m);
      m = next_subset_mask(m);
    }
  };
  gen(k, upper_verts_);
  gen(k - 1, lower_verts_);

  up_nbr_ids_.resize(upper_size_);
  lo_nbr_ids_.resize(lower_size_);
  up_nbr_.assign(upper_size_, BitVec(lower_size_));
  lo_nbr_.assign(lower_size_, BitVec(upper_size_));
  for (int id = 0; id < upper_size_; id++) {
    uint64_t v = upper_verts_[id];
    auto& ids = up_nbr_ids_[id];
    ids.reserve(k);
    for (uint64_t rest = v; rest; rest &= rest - 1) {
      uint64_t w = v ^ (rest & (~rest + 1));  // drop one element
      int wid = vertex_id(Side::lower, w);
      ids.push_back(wid);
      up_nbr_[id].set(wid);
      lo_nbr_ids_[wid].push_back(id);
      lo_nbr_[wid].set(id);
    }
    std::sort(ids.begin(), ids.end());
  }
  for (auto& ids : lo_nbr_ids_) std::sort(ids.begin(), ids.end());

  // square graph: same-side vertices sharing a neighbor; the neighbors of a
  // vertex on the other side form a clique
  up_sq_.assign(upper_size_, BitVec(upper_size_));
  lo_sq_.assign(lower_size_, BitVec(lower_size_));
  for (int w = 0; w < lower_size_; w++)
    for (int a : lo_nbr_ids_[w])
      for (int b : lo_nbr_ids_[w])
        if (a != b) up_sq_[a].set(b);
  for (int u = 0; u < upper_size_; u++)
    for (int a : up_nbr_ids_[u])
      for (int b : up_nbr_ids_[u])
        if (a != b) lo_sq_[a].set(b);
}

int LayerGraph::vertex_id(Side s, uint64_t bits) const {
  // colex rank: sum of C(c_i, i+1) over ascending element positions c_i
  uint64_t rank = 0;
  int i = 0;
  for (uint64_t rest = bits; rest; rest &= rest - 1)
    rank += binom64(std::countr_zero(rest), ++i);
  int expect = s == Side::upper ? k_ : k_ - 1;
  if (i != expect) throw parse_error("vertex has wrong layer size");
  return static_cast<int>(rank);
}

void LayerGraph::require_middle_layers(const char* what) const {
  if (!is_middle_layers())
    throw shape_error(std::string(what) + " requires the middle-layers graph (n = 2d-1, k = d); got n=" +
                      std::to_string(n_) + ", k=" + std::to_string(k_));
}

VertexSet make_vertex_set(const LayerGraph& g, Side side, const std::vector<int>& ids) {
  VertexSet s{side, g.empty_set(side)};
  for (int id : ids) {
    if (id < 0 || id >= g.side_size(side)) throw parse_error("vertex id out of range");
    s.members.set(id);
  }
  return s;
}

std::vector<std::string> vertex_set_labels(const LayerGraph& g, const VertexSet& s) {
  std::vector<std::string> out;
  s.members.for_each([&](int id) { out.push_back(vertex_label(g.vertex_bits(s.side, id))); });
  return out;
}

VertexSet neighborhood(const LayerGraph& g, const VertexSet& s) {
  VertexSet r{opposite(s.side), g.empty_set(opposite(s.side))};
  s.members.for_each([&](int id) { r.members |= g.neighbor_mask(s.side, id); });
  return r;
}

VertexSet closure(const LayerGraph& g, const VertexSet& a) {
  VertexSet nb = neighborhood(g, a);
  VertexSet r{a.side, g.empty_set(a.side)};
  if (a.empty()) return r;
  int m = g.side_size(a.side);
  for (int v = 0; v < m; v++)
    if (g.neighbor_mask(a.side, v).is_subset_of(nb.members)) r.members.set(v);
  return r;
}

std::vector<VertexSet> two_linked_components(const LayerGraph& g, const VertexSet& s) {
  std::vector<VertexSet> comps;
  BitVec rem = s.members;
  while (!rem.empty()) {
    BitVec comp(g.side_size(s.side));
    comp.set(rem.lowest());
    for (;;) {
      BitVec grow = comp;
      comp.for_each([&](int v) { grow |= g.square_mask(s.side, v); });
      grow &= rem;
      grow |= comp;
      if (grow == comp) break;
      comp = grow;
    }
    rem.subtract(comp);
    comps.push_back(VertexSet{s.side, comp});
  }
  return comps;
}

bool is_two_linked(const LayerGraph& g, const VertexSet& s) {
  return two_linked_components(g, s).size() <= 1;
}

namespace {

// ESU-style enumeration of connected sets of the square graph. With
// `above_only`, only vertices with id > root are eligible, so looping the
// root over all ids yields each set exactly once from its minimum element.
struct SquareEnum {
  const LayerGraph& g;
  Side side;
  int max_size;
  uint64_t cap;
  uint64_t visited = 0;
  const std::function<void(const BitVec&)>& emit;

  void run_root(int root, bool above_only) {
    int m = g.side_size(side);
    BitVec sub(m);
    sub.set(root);
    BitVec ext = g.square_mask(side, root);
    if (above_only)
      for (int i = 0; i <= root; i++) ext.reset(i);
    BitVec seen = ext;
    seen.set(root);
    bump();
    emit(sub);
    if (max_size > 1) extend(sub, ext, seen, root, above_only);
  }

  void bump() {
    if (++visited > cap)
      throw scale_error("2-linked enumeration frontier exceeded cap of " + std::to_string(cap));
  }

  void extend(BitVec& sub, BitVec ext, BitVec& seen, int root, bool above_only) {
    while (!ext.empty()) {
      int w = ext.lowest();
      ext.reset(w);
      // exclusive new neighbors of w
      BitVec nw = g.square_mask(side, w);
      nw.subtract(seen);
      if (above_only)
        for (int i = 0; i <= root && i < nw.universe(); i++) nw.reset(i);
      sub.set(w);
      bump();
      emit(sub);
      if (sub.count() < max_size) {
        BitVec ext2 = ext;
        ext2 |= nw;
        BitVec seen2 = seen;
        seen2 |= nw;
        seen2.set(w);
        extend(sub, ext2, seen2, root, above_only);
      }
      sub.reset(w);
    }
  }
};

}  // namespace

void enumerate_two_linked_sets(const LayerGraph& g, Side side, int max_size, uint64_t cap,
                               const std::function<void(const BitVec&)>& emit) {
  if (max_size < 1) return;
  SquareEnum e{g, side, max_size, cap, 0, emit};
  for (int v = 0; v < g.side_size(side); v++) e.run_root(v, true);
}

TwoLinkedCount count_two_linked_containing(const LayerGraph& g, Side side, int vid, int t,
                                           bool keep_sets, uint64_t cap) {
  if (t < 1) throw parse_error("set size t must be >= 1");
  if (vid < 0 || vid >= g.side_size(side)) throw parse_error("vertex id out of range");
  TwoLinkedCount r;
  std::function<void(const BitVec&)> emit = [&](const BitVec& s) {
    if (s.count() != t) return;
    r.count++;
    if (keep_sets) r.sets.push_back(VertexSet{side, s});
  };
  SquareEnum e{g, side, t, cap, 0, emit};
  e.run_root(vid, false);
  int d = g.is_middle_layers() ? g.d() : std::max(g.degree(Side::upper), g.degree(Side::lower));
  r.bound = std::exp(6.0 * t * std::log(static_cast<double>(d)));
  r.bound_ok = static_cast<double>(r.count) <= r.bound;
  return r;
}

namespace {

double iso_bound(char mode, int d, int s) {
  switch (mode) {
    case 'i':
      return d * static_cast<double>(s) - s * static_cast<double>(s) / 2.0;
    case 'j':  // mode ii
      return d * static_cast<double>(s) / 6.0;
    default:  // mode iii
      return (1.0 + 1.0 / (2.0 * d - 1.0)) * s;
  }
}

int iso_default_max(char mode, int d, int N) {
  switch (mode) {
    case 'i':
      return d / 4;
    case 'j': {
      double lim = std::pow(static_cast<double>(d), 4);
      return lim >= N ? N : static_cast<int>(lim);
    }
    default:
      return N / 2;
  }
}

}  // namespace

IsoperimetryReport isoperimetry_check(const LayerGraph& g, char mode, Side side, int max_size,
                                      uint64_t budget, uint64_t samples, uint64_t seed) {
  g.require_middle_layers("isoperimetry_check");
  if (mode != 'i' && mode != 'j' && mode != 'k') {
    // accept 'i', 'ii', 'iii' spellings via canonical chars i/j/k
    throw parse_error("isoperimetry mode must be one of i, ii, iii");
  }
  int d = g.d(), N = g.side_size(side);
  IsoperimetryReport rep;
  rep.mode = mode;
  int cap = iso_default_max(mode, d, N);
  if (max_size > 0) cap = std::min(cap, max_size);
  rep.max_size = cap;
  if (cap < 1) {
    rep.pass = true;  // nothing in range: vacuous
    rep.worst_ratio = std::numeric_limits<double>::infinity();
    return rep;
  }

  // feasibility of the exhaustive scan, with saturation
  long double total = 0;
  for (int s = 1; s <= cap && total <= static_cast<long double>(budget); s++) {
    long double c = 1;
    for (int i = 1; i <= s; i++) c = c * (N - s + i) / i;
    total += c;
  }
  rep.exhaustive = total <= static_cast<long double>(budget);

  double worst = std::numeric_limits<double>::infinity();
  BitVec worst_set;
  auto consider = [&](const BitVec& mask) {
    VertexSet vs{side, mask};
    int b = neighborhood(g, vs).size();
    double ratio = b / iso_bound(mode, d, mask.count());
    if (ratio < worst) {
      worst = ratio;
      worst_set = mask;
    }
    rep.sets_checked++;
  };

  if (rep.exhaustive) {
    // s-combinations of the side's ids, by index vector
    for (int s = 1; s <= cap; s++) {
      std::vector<int> c(s);
      for (int i = 0; i < s; i++) c[i] = i;
      for (;;) {
        BitVec bv(N);
        for (int i : c) bv.set(i);
        consider(bv);
        int i = s - 1;
        while (i >= 0 && c[i] == N - s + i) i--;
        if (i < 0) break;
        c[i]++;
        for (int j = i + 1; j < s; j++) c[j] = c[j - 1] + 1;
      }
    }
  } else {
    SplitMix64 rng(seed);
    rep.samples = samples;
    rep.seed = seed;
    for (uint64_t i = 0; i < samples; i++) {
      int s = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(cap)));
      BitVec bv(N);
      for (int j = 0; j < s; j++) {
        int v;
        do {
          v = static_cast<int>(rng.below(static_cast<uint64_t>(N)));
        } while (bv.test(v));
        bv.set(v);
      }
      consider(bv);
    }
  }

  rep.worst_ratio = worst;
  rep.pass = worst >= 1.0;
  if (!worst_set.words().empty())
    rep.witness = vertex_set_labels(g, VertexSet{side, worst_set});
  return rep;
}

}  // namespace midlayer
