#include "midlayer/polymer.hpp"

#include <algorithm>
#include <cmath>

namespace midlayer {

double lambda_threshold(int d, double C0) {
  return C0 * std::log(static_cast<double>(d)) / std::cbrt(static_cast<double>(d));
}

bool is_polymer(const LayerGraph& g, const VertexSet& s) {
  g.require_middle_layers("is_polymer");
  if (s.empty()) return false;
  if (!is_two_linked(g, s)) return false;
  int cl = closure(g, s).size();
  return 2 * cl <= g.side_size(s.side);
}

Polymer make_polymer(const LayerGraph& g, const VertexSet& s) {
  g.require_middle_layers("make_polymer");
  if (s.empty()) throw parse_error("polymer must be non-empty");
  if (!is_two_linked(g, s)) throw parse_error("polymer must be 2-linked");
  Polymer p;
  p.side = s.side;
  p.vmask = s.members;
  p.verts = s.members.to_ids();
  VertexSet nb = neighborhood(g, s);
  p.nmask = nb.members;
  p.boundary_size = nb.size();
  p.closure_size = closure(g, s).size();
  if (2 * p.closure_size > g.side_size(s.side))
    throw parse_error("closure exceeds half the layer; not a polymer");
  // d-regular bipartite expansion: |N(S)| >= |S|
  if (p.boundary_size < p.size())
    throw invariant_error("polymer boundary smaller than the polymer itself");
  return p;
}

Rat polymer_weight(const Polymer& p, const Rat& lambda) {
  return lambda.pow(p.size()) / (Rat(1) + lambda).pow(p.boundary_size);
}

double polymer_weight_aux(const Polymer& p, const WeightParams& w) {
  if (w.aux_C < 1.0) throw parse_error("auxiliary weight constant C must be >= 1");
  double base = polymer_weight(p, w.lambda).to_double();
  double dd = static_cast<double>(w.d);
  return base * std::exp((w.aux_C - 1.0) * p.size() / (dd * dd));
}

bool compatible(const Polymer& p, const Polymer& q) {
  if (p.side != q.side) throw parse_error("polymers on different sides are not comparable");
  // p ∪ q is 2-linked iff the parts overlap or share a neighbor
  if (p.vmask.intersects(q.vmask)) return false;
  return !p.nmask.intersects(q.nmask);
}

std::vector<Polymer> enumerate_polymers(const LayerGraph& g, Side side, int max_size,
                                        uint64_t cap) {
  g.require_middle_layers("enumerate_polymers");
  if (max_size < 1) return {};
  int N = g.side_size(side);
  std::vector<Polymer> out;
  enumerate_two_linked_sets(g, side, max_size, cap, [&](const BitVec& mask) {
    VertexSet s{side, mask};
    if (2 * closure(g, s).size() > N) return;
    out.push_back(make_polymer(g, s));
  });
  std::sort(out.begin(), out.end(), [](const Polymer& x, const Polymer& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x.vmask < y.vmask;
  });
  return out;
}

ContainerFamily enumerate_container_family(const LayerGraph& g, Side side, int a, int b,
                                           uint64_t cap) {
  g.require_middle_layers("enumerate_container_family");
  if (a < 1 || b < 1) throw parse_error("container family needs a, b >= 1");
  ContainerFamily f;
  f.a = a;
  f.b = b;
  f.side = side;
  // |A| <= |[A]| = a, so enumerating 2-linked sets up to size a suffices
  enumerate_two_linked_sets(g, side, a, cap, [&](const BitVec& mask) {
    VertexSet s{side, mask};
    if (neighborhood(g, s).size() != b) return;
    if (closure(g, s).size() != a) return;
    f.members.push_back(s);
  });
  return f;
}

Rat container_sum(const ContainerFamily& f, const Rat& lambda) {
  Rat total(0);
  Rat denom = (Rat(1) + lambda).pow(f.b);
  for (const auto& m : f.members) total += lambda.pow(m.size());
  return total / denom;
}

double container_bound_shape(const LayerGraph& g, int a, int b, double C1) {
  g.require_middle_layers("container_bound_shape");
  double d = g.d();
  double N = g.side_size(Side::upper);
  return N * std::exp(-C1 * (b - a) * std::log(d) / std::pow(d, 2.0 / 3.0));
}

double gamma_fn(int d, double k, const Rat& lambda) {
  if (d < 2 || k < 1) throw parse_error("gamma_fn needs d >= 2, k >= 1");
  double dd = static_cast<double>(d);
  double l1p = (Rat(1) + lambda).log();
  if (k <= dd / 4.0) return (dd * k - 1.5 * k * k) * l1p - 11.0 * k * std::log(dd);
  if (k <= dd * dd * dd * dd) return dd * k / 12.0 * l1p;
  return k / (dd * dd);
}

}  // namespace midlayer
