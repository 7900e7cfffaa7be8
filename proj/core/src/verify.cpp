#include "midlayer/verify.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "midlayer/cluster.hpp"
#include "midlayer/combinatorics.hpp"
#include "midlayer/oracle.hpp"
#include "midlayer/sampler.hpp"

namespace midlayer {

namespace {

// --- regression constants -------------------------------------------------
// Values established once by the exhaustive oracles in this module and pinned
// thereafter (see the census and restricted-sum checks).
const char* kCensusFractionD3 = "6017/6212";  // B(5,3), hard-core λ=1
const char* kZCountD3 = "6212";               // |I(B(5,3))|

CheckResult timed(const std::string& name, const std::function<void(std::ostringstream&)>& body) {
  CheckResult r;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  try {
    body(detail);
    r.pass = true;
  } catch (const std::exception& e) {
    r.pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << e.what();
  }
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.detail = detail.str();
  return r;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw invariant_error(msg);
}

// Independent reference for the Ursell function: raw alternating sum over
// edge subsets, testing spanning connectivity directly. Deliberately naive;
// kept apart from the production recursion.
Rat ursell_bruteforce(const IncompatGraph& h) {
  int m = h.m;
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j < m; j++)
    for (int i = 0; i < j; i++)
      if (h.edge(i, j)) edges.emplace_back(i, j);
  int64_t acc = 0;
  for (uint64_t sub = 0; sub < (1ull << edges.size()); sub++) {
    // union-find over the chosen edges
    int parent[16];
    for (int v = 0; v < m; v++) parent[v] = v;
    std::function<int(int)> find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    int comps = m;
    for (size_t e = 0; e < edges.size(); e++)
      if (sub >> e & 1) {
        int a = find(edges[e].first), b = find(edges[e].second);
        if (a != b) {
          parent[a] = b;
          comps--;
        }
      }
    if (comps == 1) acc += (std::popcount(sub) % 2 == 0) ? 1 : -1;
  }
  return Rat(mpz_class(acc)) / Rat::factorial(m);
}

Rat count_with_upper_size(const SweepHistogram& h, int t) {
  Rat sum(0);
  for (int b = 0; b <= h.M; b++) {
    uint64_t c = h.at(t, b);
    if (c) sum += Rat(mpz_class(static_cast<unsigned long>(c))) * Rat::pow2(h.M - b);
  }
  return sum;
}

std::string rat3(const Rat& r) { return r.str(); }

// --- acceptance criteria ----------------------------------------------------

CheckResult criterion1() {
  return timed("acceptance-1-exact-count-d2", [](std::ostringstream& out) {
    LayerGraph g(3, 2);
    auto hist = sweep_all_subsets(g, Side::upper, 2);
    Rat z1 = eval_Z_from_histogram(hist, Rat(1));
    require(z1 == Rat(18), "Z(1) on B(3,2) must be 18, got " + z1.str());
    auto coeffs = independence_coefficients(hist);
    std::vector<long> want{1, 6, 9, 2};
    require(coeffs.size() == want.size(), "coefficient vector length");
    for (size_t i = 0; i < want.size(); i++)
      require(coeffs[i] == Rat(want[i]), "coefficient " + std::to_string(i));
    Rat naive = exact_Z_naive(g, Rat(1));
    require(naive == z1, "gray-code vs naive disagreement");
    // dual method at a second fugacity
    require(exact_Z_naive(g, Rat(2)) == eval_Z_from_histogram(hist, Rat(2)),
            "gray-code vs naive at lambda=2");
    require(eval_Z_from_histogram(hist, Rat(2)) == Rat(65), "Z(2) must be 65");
    out << "Z(1)=18, coeffs (1,6,9,2), methods agree";
  });
}

CheckResult criterion2() {
  return timed("acceptance-2-zapprox-identity", [](std::ostringstream& out) {
    for (int d : {2, 3}) {
      LayerGraph g(2 * d - 1, d);
      auto full = sweep_all_subsets(g, Side::upper, 2);
      auto restr = sweep_restricted(g, Side::upper, 2);
      for (Rat lambda : {Rat(1, 2), Rat(1), Rat(2)}) {
        Rat z = eval_Z_from_histogram(full, lambda);
        Rat xi = eval_xi_from_histogram(restr, lambda);
        Rat b = b_both_sum(g, lambda);
        Rat lhs = Rat(2) * (Rat(1) + lambda).pow(g.upper_size()) * xi;
        require(lhs == z + b, "identity 2(1+λ)^N·Ξ = Z + Σ_B fails at d=" + std::to_string(d) +
                                  ", λ=" + lambda.str() + ": " + lhs.str() + " vs " +
                                  (z + b).str());
        if (d == 2 && lambda == Rat(1)) {
          require(lhs == Rat(28) && z == Rat(18) && b == Rat(10),
                  "d=2, λ=1 instance must read 28 = 18 + 10");
          out << "28 = 18 + 10 at d=2; ";
        }
      }
    }
    out << "identity exact for d in {2,3}, λ in {1/2, 1, 2}";
  });
}

CheckResult criterion3() {
  return timed("acceptance-3-closed-forms", [](std::ostringstream& out) {
    for (Rat lambda : {Rat(1), Rat(1, 2)}) {
      for (int d : {2, 3, 4}) {
        LayerGraph g(2 * d - 1, d);
        auto [L1, L2] = closed_form_terms(d, lambda);
        Rat e1 = expansion_term(g, Side::upper, lambda, 1);
        require(e1 == L1, "L1 closed form vs enumeration at d=" + std::to_string(d));
        Rat e2 = expansion_term(g, Side::upper, lambda, 2);
        if (d >= 3) {
          require(e2 == L2, "L2 closed form vs enumeration at d=" + std::to_string(d));
        } else {
          // the missing size-2 polymers contribute C(n,d)C(d,2)λ²/(1+λ)^{2d-1}
          Rat missing = Rat::binom(3, 2) * Rat::binom(2, 2) * lambda.pow(2) /
                        (Rat(1) + lambda).pow(2 * d - 1);
          require(L2 - e2 == missing, "d=2 discrepancy must equal the missing polymer mass");
          if (lambda == Rat(1))
            require(e2 == Rat(-9, 32) && L2 == Rat(3, 32),
                    "d=2, λ=1 values must be -9/32 (enumerated) vs 3/32 (closed form)");
        }
      }
    }
    out << "L1 matches d in {2,3,4}; L2 matches d in {3,4}; d=2 gap = C(n,d)C(d,2)λ²/(1+λ)^3";
  });
}

CheckResult criterion4() {
  return timed("acceptance-4-ursell", [](std::ostringstream& out) {
    require(ursell(IncompatGraph::complete(1)) == Rat(1), "phi(K1) = 1");
    require(ursell(IncompatGraph::complete(2)) == Rat(-1, 2), "phi(K2) = -1/2");
    require(ursell(IncompatGraph::complete(3)) == Rat(1, 3), "phi(K3) = 1/3");
    require(ursell(IncompatGraph::path(3)) == Rat(1, 6), "phi(P3) = 1/6");
    // recursion vs brute force on every graph with <= 6 vertices
    uint64_t graphs = 0;
    for (int m = 1; m <= 6; m++) {
      int pairs = m * (m - 1) / 2;
      for (uint64_t mask = 0; mask < (1ull << pairs); mask++) {
        IncompatGraph h{m, mask};
        require(ursell(h) == ursell_bruteforce(h),
                "method disagreement on m=" + std::to_string(m) +
                    " mask=" + std::to_string(mask));
        graphs++;
      }
    }
    out << "unit values pinned; methods agree on all " << graphs << " graphs with <= 6 vertices";
  });
}

CheckResult criterion5(bool include_d4, int shards, std::ostream* progress) {
  return timed("acceptance-5-truncation-improvement", [&](std::ostringstream& out) {
    std::vector<int> ds{3};
    if (include_d4) ds.push_back(4);
    for (int d : ds) {
      LayerGraph g(2 * d - 1, d);
      Rat lambda(1);
      std::vector<Rat> terms;
      Rat psum(0);
      for (int k = 1; k <= 4; k++) {
        terms.push_back(expansion_term(g, Side::upper, lambda, k));
        psum += terms.back();
      }
      if (progress) *progress << "  [d=" << d << "] L1..L4 enumerated; running restricted sweep\n";
      const auto& restr = sweep_restricted_cached(g, Side::upper, shards);
      Rat xi = eval_xi_from_histogram(restr, lambda);
      double ln_xi = xi.log();
      double gap4 = std::abs(psum.to_double() - ln_xi);
      double gap1 = std::abs(terms[0].to_double() - ln_xi);
      require(gap4 < gap1, "partial sum through L4 must beat L1 alone at d=" + std::to_string(d));
      out << "d=" << d << ": |S4-lnXi|=" << gap4 << " < |L1-lnXi|=" << gap1
          << " (lnXi=" << ln_xi << ")";
      if (!std::getenv("MIDLAYER_FIXED_TIME"))
        out << " [sweep " << restr.wall_ms / 1000.0 << "s]";
      out << "; ";
    }
    if (!include_d4) out << "d=4 sweep deferred to the full suite";
  });
}

CheckResult criterion6(uint64_t samples, uint64_t seed) {
  return timed("acceptance-6-sampler-d2", [&](std::ostringstream& out) {
    LayerGraph g(3, 2);
    Rat lambda(1);
    auto restr = sweep_restricted(g, Side::upper, 1);
    Rat xi = eval_xi_from_histogram(restr, lambda);
    require(xi == Rat(7, 4), "Ξ(B(3,2), λ=1) must be 7/4");

    // analytic μ̂ over all 18 independent sets, against the hand table
    auto rows = exact_hardcore_table(g, lambda);
    require(rows.size() == 18, "B(3,2) has 18 independent sets");
    Rat total(0);
    std::map<std::pair<uint64_t, uint64_t>, Rat> analytic;
    for (const auto& row : rows) {
      Rat m = mu_hat_mass(g, lambda, xi, row.upper_mask, row.lower_mask);
      analytic[{row.upper_mask, row.lower_mask}] = m;
      total += m;
      int up = std::popcount(row.upper_mask), lo = std::popcount(row.lower_mask);
      Rat want;
      if (up + lo == 0) want = Rat(1, 14);
      else if (up + lo == 1) want = Rat(1, 14);
      else if (up == 1 && lo == 1) want = Rat(1, 14);
      else if (up == 2 || lo == 2) want = Rat(1, 28);
      else want = Rat(1, 28);  // full side (3 on one side)
      if (up == 3 || lo == 3) want = Rat(1, 28);
      require(m == want, "μ̂ mass mismatch on a set of profile (" + std::to_string(up) + "," +
                             std::to_string(lo) + "): " + m.str() + " vs " + want.str());
    }
    require(total == Rat(1), "analytic μ̂ must sum to 1, got " + total.str());

    // empirical frequencies within 4σ per outcome
    MuHatSampler sampler(g, lambda);
    std::map<std::pair<uint64_t, uint64_t>, uint64_t> freq;
    for (uint64_t i = 0; i < samples; i++) {
      auto rec = sampler.sample(seed, i);
      freq[{rec.upper_mask, rec.lower_mask}]++;
    }
    for (const auto& [key, p] : analytic) {
      double pd = p.to_double();
      double sigma = std::sqrt(pd * (1 - pd) / static_cast<double>(samples));
      double fr = static_cast<double>(freq[key]) / static_cast<double>(samples);
      require(std::abs(fr - pd) <= 4 * sigma,
              "empirical frequency outside 4σ for an outcome: " + std::to_string(fr) + " vs " +
                  std::to_string(pd));
    }

    TvReport tv = tv_distance(g, lambda);
    require(tv.tv == Rat(10, 63), "TV(μ̂, hard-core) must be 10/63, got " + tv.tv.str());
    require(tv.b_sum == Rat(10), "Σ_B λ^|I| must be 10");
    require(tv.b_mass == Rat(10, 28), "b_mass must be 10/28");
    out << "table exact (sums to 1), " << samples << " samples within 4σ, TV = 10/63";
  });
}

CheckResult criterion7() {
  return timed("acceptance-7-structure-census", [](std::ostringstream& out) {
    LayerGraph g2(3, 2);
    auto rep2 = structure_census(g2, Rat(1), CensusMode::exact);
    require(rep2.property_fraction == Rat(1), "all 18 sets on B(3,2) satisfy the property");
    LayerGraph g3(5, 3);
    auto rep3 = structure_census(g3, Rat(1), CensusMode::exact);
    Rat pinned = Rat::parse(kCensusFractionD3);
    require(rep3.property_fraction == pinned,
            "B(5,3) census fraction regression: got " + rep3.property_fraction.str() +
                ", pinned " + pinned.str());
    auto hist = sweep_all_subsets(g3, Side::upper, 2);
    require(eval_Z_from_histogram(hist, Rat(1)) == Rat::parse(kZCountD3),
            "B(5,3) independent-set count regression");
    out << "B(3,2): 18/18; B(5,3): fraction " << rep3.property_fraction.str() << " of "
        << kZCountD3 << " sets (pinned)";
  });
}

CheckResult criterion8() {
  return timed("acceptance-8-checker-bounds", [](std::ostringstream& out) {
    // isoperimetry at the scales fixed in the module contract
    LayerGraph g3(5, 3);
    auto ri = isoperimetry_check(g3, 'i');
    require(ri.pass && ri.sets_checked == 0, "mode i at d=3 is a vacuous pass");
    LayerGraph g5(9, 5);
    auto rii = isoperimetry_check(g5, 'j', Side::upper, 3);
    require(rii.exhaustive && rii.pass, "mode ii at d=5, |S| <= 3, exhaustive pass");
    auto riii = isoperimetry_check(g3, 'k', Side::upper, 5);
    require(riii.exhaustive && riii.pass, "mode iii at d=3, |S| <= 5, exhaustive pass");
    out << "isoperimetry i/ii/iii pass (worst ratios " << rii.worst_ratio << ", "
        << riii.worst_ratio << "); ";

    // 2-linked counting bound, d in {3,4,5}, t <= 4
    for (int d : {3, 4, 5}) {
      LayerGraph g(2 * d - 1, d);
      for (int t = 1; t <= 4; t++) {
        auto r = count_two_linked_containing(g, Side::upper, 0, t);
        require(r.bound_ok, "2-linked count exceeds d^{6t} at d=" + std::to_string(d) +
                                ", t=" + std::to_string(t));
      }
    }
    out << "2-linked counts within d^{6t}; ";

    // construction sum vs the census of sets with that upper size
    auto ex = one_sided_lower_bound(3);
    require(ex.t == 1 && ex.exact_sum == Rat(1280), "d=3 exact sum must be 1280");
    LayerGraph g(5, 3);
    auto hist = sweep_all_subsets(g, Side::upper, 2);
    Rat with_size = count_with_upper_size(hist, static_cast<int>(ex.t));
    require(ex.exact_sum <= with_size, "construction sum must not exceed the exact census");
    auto ex4 = one_sided_lower_bound(4);
    require(ex4.t == 2, "d=4 rounds t to 2");
    out << "construction: d=3 sum 1280 <= " << with_size.str() << "; d=4 sum "
        << ex4.exact_sum.str();
  });
}

CheckResult criterion9(bool include_d4) {
  return timed("acceptance-9-regime-notes", [&](std::ostringstream& out) {
    // asymptotic statements are not numerically certifiable at desk scale;
    // they must evaluate finite and carry explicit regime warnings
    std::vector<int> ds{2, 3};
    if (include_d4) ds.push_back(4);
    for (int d : ds) {
      auto t14 = asymptotic_count_estimate(d);
      require(!t14.warnings.empty(), "asymptotic count estimate must carry a regime warning");
      require(std::isfinite(t14.log2_count), "estimate must be finite");
      LayerGraph g(2 * d - 1, d);
      const auto& hist = sweep_all_cached(g, Side::upper);
      double exact_log2 = eval_Z_from_histogram(hist, Rat(1)).log() / std::log(2.0);
      auto [L1, L2] = closed_form_terms(d, Rat(1));
      auto pred = predict_partition(d, Rat(1), 2, {L1, L2});
      require(!pred.warnings.empty(), "prediction must carry regime warnings");
      out << "d=" << d << ": formula log2=" << t14.log2_count << " vs exact " << exact_log2
          << " (gap " << t14.log2_count - exact_log2 << "), prediction lnZ=" << pred.ln_Z_estimate
          << "; ";
    }
    out << "documented gaps, no numeric assertion";
  });
}

// --- module invariants ------------------------------------------------------

CheckResult inv_closure_properties() {
  return timed("invariant-closure-scan", [](std::ostringstream& out) {
    uint64_t scanned = 0;
    for (int d : {2, 3}) {
      LayerGraph g(2 * d - 1, d);
      for (Side side : {Side::upper, Side::lower}) {
        int N = g.side_size(side);
        for (uint64_t m = 0; m < (1ull << N); m++) {
          VertexSet s{side, BitVec(N)};
          s.members.words()[0] = m;
          VertexSet cl = closure(g, s);
          require(s.members.is_subset_of(cl.members), "closure is extensive");
          VertexSet cl2 = closure(g, cl);
          require(cl2.members == cl.members, "closure is idempotent");
          require(neighborhood(g, cl).members == neighborhood(g, s).members,
                  "closure preserves the boundary");
          scanned++;
        }
      }
    }
    out << scanned << " sets scanned on B(3,2) and B(5,3), both sides";
  });
}

CheckResult inv_two_linked_partition(uint64_t seed) {
  return timed("invariant-two-linked-partition", [&](std::ostringstream& out) {
    LayerGraph g(5, 3);
    SplitMix64 rng(seed);
    for (int trial = 0; trial < 2000; trial++) {
      uint64_t m = rng.next() & ((1ull << 10) - 1);
      VertexSet s{Side::upper, BitVec(10)};
      s.members.words()[0] = m;
      auto comps = two_linked_components(g, s);
      BitVec un(10);
      int total = 0;
      for (auto& c : comps) {
        require(!c.members.empty(), "components are non-empty");
        require(!un.intersects(c.members), "components are disjoint");
        require(is_two_linked(g, c), "each component is 2-linked");
        un |= c.members;
        total += c.size();
      }
      require(un == s.members && total == s.size(), "components cover the set");
      // merging two distinct components must break 2-linkage
      if (comps.size() >= 2) {
        VertexSet merged{Side::upper, comps[0].members | comps[1].members};
        require(!is_two_linked(g, merged), "two distinct components must not be 2-linked");
      }
    }
    out << "2000 random subsets of B(5,3) upper";
  });
}

CheckResult inv_degree_regularity() {
  return timed("invariant-degree-regularity", [](std::ostringstream& out) {
    for (int d = 2; d <= 6; d++) {
      LayerGraph g(2 * d - 1, d);
      require(g.upper_size() == g.lower_size(), "equal sides at n=2d-1");
      for (Side side : {Side::upper, Side::lower})
        for (int v = 0; v < g.side_size(side); v++)
          require(static_cast<int>(g.neighbor_ids(side, v).size()) == d,
                  "vertex degree must equal d");
    }
    out << "B(2d-1, d) is d-regular for d in {2..6}";
  });
}

CheckResult inv_count_vertex_transitive() {
  return timed("invariant-count-vertex-independent", [](std::ostringstream& out) {
    LayerGraph g(5, 3);
    for (int t = 1; t <= 3; t++) {
      auto base = count_two_linked_containing(g, Side::upper, 0, t);
      for (int v = 1; v < g.upper_size(); v++)
        require(count_two_linked_containing(g, Side::upper, v, t).count == base.count,
                "count depends on the anchor vertex at t=" + std::to_string(t));
    }
    require(count_two_linked_containing(g, Side::upper, 0, 2).count == 6,
            "t=2 count must be d(d-1) = 6");
    out << "counts agree over all anchors at d=3, t <= 3";
  });
}

CheckResult inv_polymer_caches() {
  return timed("invariant-polymer-caches", [](std::ostringstream& out) {
    LayerGraph g(5, 3);
    auto polys = enumerate_polymers(g, Side::upper, 3);
    for (const auto& p : polys) {
      VertexSet s{p.side, p.vmask};
      require(p.boundary_size == neighborhood(g, s).size(), "cached boundary size");
      require(p.closure_size == closure(g, s).size(), "cached closure size");
      require(p.nmask == neighborhood(g, s).members, "cached boundary mask");
    }
    // weight depends only on (|S|, |N(S)|, λ)
    Rat lambda(7, 5);
    std::map<std::pair<int, int>, Rat> seen;
    for (const auto& p : polys) {
      Rat w = polymer_weight(p, lambda);
      auto key = std::make_pair(p.size(), p.boundary_size);
      auto it = seen.find(key);
      if (it == seen.end())
        seen.emplace(key, w);
      else
        require(it->second == w, "weight must be a function of (|S|, |N(S)|)");
    }
    out << polys.size() << " polymers checked on B(5,3)";
  });
}

CheckResult inv_polymer_counts() {
  return timed("invariant-polymer-counts", [](std::ostringstream& out) {
    for (int d = 2; d <= 5; d++) {
      LayerGraph g(2 * d - 1, d);
      auto singles = enumerate_polymers(g, Side::upper, 1);
      require(static_cast<int>(singles.size()) == g.upper_size(),
              "every vertex is a size-1 polymer");
    }
    LayerGraph g3(5, 3);
    require(enumerate_polymers(g3, Side::upper, 2).size() == 40, "10 + 30 polymers at d=3");
    LayerGraph g2(3, 2);
    require(enumerate_polymers(g2, Side::upper, 2).size() == 3,
            "no size-2 polymer survives the closure cap at d=2");
    out << "size-1 census matches N for d in {2..5}; size-2 counts match";
  });
}

CheckResult inv_compatibility() {
  return timed("invariant-compatibility", [](std::ostringstream& out) {
    LayerGraph g(5, 3);
    auto polys = enumerate_polymers(g, Side::upper, 2);
    for (const auto& p : polys) require(!compatible(p, p), "self-compatibility must be false");
    for (size_t i = 0; i < polys.size(); i++)
      for (size_t j = i + 1; j < polys.size(); j++)
        require(compatible(polys[i], polys[j]) == compatible(polys[j], polys[i]),
                "compatibility must be symmetric");
    out << polys.size() << " polymers, all pairs";
  });
}

CheckResult inv_gamma_monotonicity() {
  return timed("invariant-gamma-monotonicity", [](std::ostringstream& out) {
    // within the first branch γ(d,k)/k = (d − 3k/2)ln(1+λ) − 11·ln d is
    // always non-increasing
    for (int d : {5, 10, 20})
      for (Rat lambda : {Rat(1, 2), Rat(1), Rat(2)}) {
        double prev = gamma_fn(d, 1, lambda) / 1.0;
        for (int k = 2; k <= d / 4; k++) {
          double cur = gamma_fn(d, k, lambda) / k;
          require(cur <= prev + 1e-12, "γ/k must not increase within branch 1");
          prev = cur;
        }
      }
    // across branches the claim is asymptotic; it holds numerically once
    // d·ln(1+λ) dominates ln d (checked at d=500 over k up to 10^4)
    for (Rat lambda : {Rat(1, 2), Rat(1), Rat(2)}) {
      double prev = gamma_fn(500, 1, lambda);
      for (int k = 2; k <= 10'000; k++) {
        double cur = gamma_fn(500, k, lambda) / k;
        require(cur <= prev + 1e-12, "γ/k must not increase at d=500, k=" + std::to_string(k));
        prev = cur;
      }
    }
    out << "branch-1 monotone at d in {5,10,20}; full claim verified at d=500 "
           "(cross-branch monotonicity first holds at large d)";
  });
}

CheckResult inv_expansion_closed_forms() {
  return timed("invariant-expansion-vs-closed-form", [](std::ostringstream& out) {
    for (int d = 2; d <= 5; d++) {
      LayerGraph g(2 * d - 1, d);
      for (Rat lambda : {Rat(1), Rat(1, 2), Rat(2)}) {
        auto [L1, L2] = closed_form_terms(d, lambda);
        require(expansion_term(g, Side::upper, lambda, 1) == L1,
                "L1 at d=" + std::to_string(d));
        if (d >= 3)
          require(expansion_term(g, Side::upper, lambda, 2) == L2,
                  "L2 at d=" + std::to_string(d));
      }
    }
    out << "L1 for d in {2..5}, L2 for d in {3..5}, λ in {1, 1/2, 2}";
  });
}

CheckResult inv_ursell_isomorphism(uint64_t seed) {
  return timed("invariant-ursell-isomorphism", [&](std::ostringstream& out) {
    SplitMix64 rng(seed);
    uint64_t tested = 0;
    for (int m = 2; m <= 5; m++) {
      int pairs = m * (m - 1) / 2;
      for (uint64_t mask = 0; mask < (1ull << pairs); mask++) {
        IncompatGraph h{m, mask};
        Rat base = ursell(h);
        // random relabeling
        int perm[5];
        for (int i = 0; i < m; i++) perm[i] = i;
        for (int i = m - 1; i > 0; i--)
          std::swap(perm[i], perm[rng.below(static_cast<uint64_t>(i + 1))]);
        IncompatGraph r{m, 0};
        for (int j = 1; j < m; j++)
          for (int i = 0; i < j; i++)
            if (h.edge(i, j)) r.set_edge(perm[i], perm[j]);
        require(ursell(r) == base, "Ursell value must be isomorphism-invariant");
        tested++;
      }
    }
    out << tested << " graphs up to 5 vertices under random relabelings";
  });
}

CheckResult inv_coverage_counter(uint64_t seed) {
  return timed("invariant-coverage-counter", [&](std::ostringstream& out) {
    LayerGraph g(5, 3);
    CoverageCounter cc(g, Side::upper);
    SplitMix64 rng(seed);
    for (int i = 0; i < 10'000; i++) {
      cc.toggle(static_cast<int>(rng.below(10)));
      if (i % 37 == 0)
        require(cc.covered() == cc.recompute_covered(), "incremental coverage drifted");
    }
    require(cc.covered() == cc.recompute_covered(), "final coverage mismatch");
    out << "10^4 random toggles, counters match recomputation";
  });
}

CheckResult inv_nu_table() {
  return timed("invariant-nu-table", [](std::ostringstream& out) {
    for (int d : {2, 3}) {
      LayerGraph g(2 * d - 1, d);
      for (Rat lambda : {Rat(1), Rat(3, 2)}) {
        auto t = exact_nu_table(g, lambda, Side::upper);
        Rat sum(0);
        for (const auto& row : t.rows) sum += row.prob;
        require(sum == Rat(1), "ν probabilities must sum to 1 exactly");
        // every config decomposes into pairwise-compatible polymers
        for (const auto& row : t.rows) {
          VertexSet s{Side::upper, g.empty_set(Side::upper)};
          s.members.words()[0] = row.config.union_mask;
          auto comps = two_linked_components(g, s);
          require(static_cast<int>(comps.size()) == row.config.num_polymers,
                  "component count mismatch");
          std::vector<Polymer> ps;
          for (auto& c : comps) {
            require(is_polymer(g, c), "every component must be a polymer");
            ps.push_back(make_polymer(g, c));
          }
          for (size_t i = 0; i < ps.size(); i++)
            for (size_t j = i + 1; j < ps.size(); j++)
              require(compatible(ps[i], ps[j]), "config polymers must be pairwise compatible");
        }
      }
    }
    LayerGraph g2(3, 2);
    auto t = exact_nu_table(g2, Rat(1), Side::upper);
    require(t.rows.size() == 4, "B(3,2) has 4 configs");
    require(t.xi == Rat(7, 4), "Ξ = 7/4");
    require(t.rows[0].prob == Rat(4, 7), "ν(∅) = 4/7");
    out << "tables exact at d in {2,3}; B(3,2) table is {4/7, 1/7, 1/7, 1/7}";
  });
}

CheckResult inv_sampler_validity(uint64_t seed) {
  return timed("invariant-sampler-validity", [&](std::ostringstream& out) {
    LayerGraph g(3, 2);
    MuHatSampler sampler(g, Rat(3, 2));
    SampleRun a = sampler.run(seed, 2000);
    SampleRun b = sampler.run(seed, 2000);
    for (size_t i = 0; i < a.records.size(); i++) {
      const auto& ra = a.records[i];
      const auto& rb = b.records[i];
      require(ra.upper_mask == rb.upper_mask && ra.lower_mask == rb.lower_mask &&
                  ra.defect == rb.defect && ra.minority == rb.minority,
              "same seed must reproduce identical records");
      // no edge inside I
      for (int u = 0; u < g.upper_size(); u++)
        if (ra.upper_mask >> u & 1)
          require((g.neighbor_mask(Side::upper, u).words()[0] & ra.lower_mask) == 0,
                  "sample must be an independent set");
      require(ra.config_size <= g.side_size(ra.defect), "‖Λ‖ per side is bounded by N");
    }
    out << "2000 samples at λ=3/2: reproducible, independent, ‖Λ‖ <= N";
  });
}

CheckResult inv_expected_boundary(uint64_t seed) {
  return timed("invariant-expected-boundary", [&](std::ostringstream& out) {
    auto r = expected_boundary(3, 2);
    require(r.exact == Rat(16, 3), "E|N(T)| at d=3, t=2 must be 16/3");
    require(std::abs(r.paper_approx - 4.8) < 1e-12, "approximation must be 4.8");
    require(expected_boundary(3, 0).exact == Rat(0), "t=0 gives 0");
    require(expected_boundary(3, 10).exact == Rat(10), "t=N covers everything");
    // Monte Carlo confirmation
    LayerGraph g(5, 3);
    SplitMix64 rng(seed);
    const int trials = 20'000;
    double acc = 0;
    for (int i = 0; i < trials; i++) {
      uint64_t T = 0;
      int picked = 0;
      while (picked < 2) {
        int v = static_cast<int>(rng.below(10));
        if (!(T >> v & 1)) {
          T |= 1ull << v;
          picked++;
        }
      }
      uint64_t nb = 0;
      for (int v = 0; v < 10; v++)
        if (T >> v & 1) nb |= g.neighbor_mask(Side::upper, v).words()[0];
      acc += std::popcount(nb);
    }
    double mc = acc / trials;
    double exact = r.exact.to_double();
    // binomial-ish σ: |N(T)| lives in [5, 6] here, spread < 1
    require(std::abs(mc - exact) < 0.05, "Monte Carlo mean too far from exact value");
    out << "exact 16/3 vs approx 4.8 vs MC " << mc;
  });
}

CheckResult inv_lower_bound_within_count(bool include_d4) {
  return timed("invariant-lower-bound-within-count", [&](std::ostringstream& out) {
    std::vector<int> ds{3};
    if (include_d4) ds.push_back(4);
    for (int d : ds) {
      auto ex = one_sided_lower_bound(d);
      LayerGraph g(2 * d - 1, d);
      const auto& hist = sweep_all_cached(g, Side::upper);
      Rat z1 = eval_Z_from_histogram(hist, Rat(1));
      require(ex.exact_sum <= z1, "construction sum must be at most Z(1) at d=" +
                                      std::to_string(d));
      out << "d=" << d << ": " << ex.exact_sum.str() << " <= " << z1.str() << "; ";
    }
  });
}

CheckResult inv_asymptotic_count_stirling() {
  return timed("invariant-asymptotic-count-stirling", [](std::ostringstream& out) {
    auto r = asymptotic_count_estimate(10);
    require(r.N == 92378, "C(19,10) = 92378");
    double ratio = static_cast<double>(r.N) / r.stirling_N;
    require(std::abs(ratio - 1.0) < 0.02, "Stirling approximation ratio must be near 1");
    auto r4 = asymptotic_count_estimate(4);
    require(r4.N == 35 && std::abs(r4.term_first - 35.0 / 16.0) < 1e-12 &&
                std::abs(r4.term_second - 6.0 * 35.0 / 256.0) < 1e-12,
            "d=4 component values");
    out << "N/stirling = " << ratio << " at d=10; d=4 components pinned";
  });
}

}  // namespace

std::vector<CheckResult> run_acceptance(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  auto push = [&](CheckResult r) {
    if (opt.progress)
      *opt.progress << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.ms / 1000.0
                    << "s)" << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
    out.push_back(std::move(r));
  };
  push(criterion1());
  push(criterion2());
  push(criterion3());
  push(criterion4());
  push(criterion5(opt.full, opt.shards, opt.progress));
  push(criterion6(opt.samples, opt.seed));
  push(criterion7());
  push(criterion8());
  push(criterion9(opt.full));
  return out;
}

std::vector<CheckResult> run_invariants(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  auto push = [&](CheckResult r) {
    if (opt.progress)
      *opt.progress << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.ms / 1000.0
                    << "s)" << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
    out.push_back(std::move(r));
  };
  push(inv_closure_properties());
  push(inv_two_linked_partition(opt.seed));
  push(inv_degree_regularity());
  push(inv_count_vertex_transitive());
  push(inv_polymer_caches());
  push(inv_polymer_counts());
  push(inv_compatibility());
  push(inv_gamma_monotonicity());
  push(inv_expansion_closed_forms());
  push(inv_ursell_isomorphism(opt.seed));
  push(inv_coverage_counter(opt.seed));
  push(inv_nu_table());
  push(inv_sampler_validity(opt.seed));
  push(inv_expected_boundary(opt.seed));
  push(inv_lower_bound_within_count(opt.full));
  push(inv_asymptotic_count_stirling());
  return out;
}

std::vector<CheckResult> run_verify(const VerifyOptions& opt) {
  std::vector<CheckResult> all = run_invariants(opt);
  auto acc = run_acceptance(opt);
  all.insert(all.end(), acc.begin(), acc.end());
  return all;
}

}  // namespace midlayer
