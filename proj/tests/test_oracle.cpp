#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "midlayer/oracle.hpp"
#include "midlayer/rng.hpp"

using namespace midlayer;

TEST_CASE("independence polynomial on B(3,2)") {
  LayerGraph g(3, 2);
  auto hist = sweep_all_subsets(g, Side::upper, 2);
  CHECK(hist.total() == 8);  // 2^3 upper subsets
  CHECK(eval_Z_from_histogram(hist, Rat(1)) == Rat(18));
  CHECK(eval_Z_from_histogram(hist, Rat(0)) == Rat(1));
  CHECK(eval_Z_from_histogram(hist, Rat(2)) == Rat(65));  // 1 + 12 + 36 + 16
  auto coeffs = independence_coefficients(hist);
  REQUIRE(coeffs.size() == 4);
  CHECK(coeffs[0] == Rat(1));
  CHECK(coeffs[1] == Rat(6));
  CHECK(coeffs[2] == Rat(9));
  CHECK(coeffs[3] == Rat(2));
}

TEST_CASE("gray-code and naive methods agree on B(5,3), all three fugacities") {
  LayerGraph g(5, 3);
  auto hist = sweep_all_subsets(g, Side::upper, 2);
  for (Rat lambda : {Rat(1), Rat(1, 2), Rat(2)})
    CHECK(eval_Z_from_histogram(hist, lambda) == exact_Z_naive(g, lambda));
  CHECK(eval_Z_from_histogram(hist, Rat(1)) == Rat(6212));
}

TEST_CASE("sweeps work on non-middle layer graphs too") {
  LayerGraph g(4, 2);
  auto hist = sweep_all_subsets(g, Side::upper, 1);
  CHECK(eval_Z_from_histogram(hist, Rat(1)) == exact_Z_naive(g, Rat(1)));
}

TEST_CASE("shard count does not change the histogram") {
  LayerGraph g(5, 3);
  auto h1 = sweep_all_subsets(g, Side::upper, 1);
  auto h4 = sweep_all_subsets(g, Side::upper, 4);
  CHECK(h1.cells == h4.cells);
  auto r1 = sweep_restricted(g, Side::upper, 1);
  auto r4 = sweep_restricted(g, Side::upper, 4);
  CHECK(r1.cells == r4.cells);
}

TEST_CASE("restricted sums instantiate the partition identity") {
  LayerGraph g(3, 2);
  auto restr = sweep_restricted(g, Side::upper, 2);
  CHECK(eval_Z_from_histogram(restr, Rat(1)) == Rat(14));
  CHECK(eval_xi_from_histogram(restr, Rat(1)) == Rat(7, 4));
  CHECK(b_both_sum(g, Rat(1)) == Rat(10));
  // 2(1+λ)^N · Ξ = Z + Σ_B, in exact rationals, at several λ
  auto full = sweep_all_subsets(g, Side::upper, 2);
  for (Rat lambda : {Rat(1, 2), Rat(1), Rat(2), Rat(7, 3)}) {
    Rat lhs = Rat(2) * (Rat(1) + lambda).pow(3) * eval_xi_from_histogram(restr, lambda);
    Rat rhs = eval_Z_from_histogram(full, lambda) + b_both_sum(g, lambda);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("scale guards") {
  CHECK_THROWS_AS(LayerGraph(40, 20), scale_error);
  LayerGraph g95(9, 5);  // N = 126 > 36: sweeps must refuse
  CHECK_THROWS_AS(sweep_all_subsets(g95, Side::upper, 1), scale_error);
  LayerGraph g53(5, 3);
  CHECK_THROWS_AS(b_both_sum(LayerGraph(9, 5), Rat(1)), scale_error);
  CHECK_THROWS_AS(exact_Z_naive(LayerGraph(7, 4), Rat(1)), scale_error);
}

TEST_CASE("one-sided lower-bound construction") {
  auto e3 = one_sided_lower_bound(3);
  CHECK(e3.t == 1);
  CHECK(e3.exact_sum == Rat(1280));  // 10 singletons × 2^7
  CHECK(e3.subsets == 10);

  auto e4 = one_sided_lower_bound(4);
  CHECK(e4.t == 2);
  CHECK(e4.subsets == 595);
  // 210 sharing pairs at 2^28 plus 385 disjoint-boundary pairs at 2^27
  CHECK(e4.exact_sum == Rat(210) * Rat::pow2(28) + Rat(385) * Rat::pow2(27));

  // the formula exponent uses ln2·C(d,2)·N·2^{-2d}: at d=3 the log2 value is
  // 1 + N + N·2^{-d}/ln2 + C(d,2)·N·2^{-2d}
  double want = 1.0 + 10.0 + 1.25 / std::log(2.0) + 3.0 * 10.0 / 64.0;
  CHECK(e3.formula_log2 == doctest::Approx(want).epsilon(1e-12));

  CHECK_THROWS_AS(one_sided_lower_bound(5), scale_error);  // N = 126 > 63
  CHECK_THROWS_AS(one_sided_lower_bound(1), parse_error);
}

TEST_CASE("expected boundary of a random t-subset") {
  auto r = expected_boundary(3, 2);
  CHECK(r.exact == Rat(16, 3));
  CHECK(r.paper_approx == doctest::Approx(4.8));
  CHECK(expected_boundary(3, 0).exact == Rat(0));
  CHECK(expected_boundary(3, 0).paper_approx == 0.0);
  CHECK(expected_boundary(3, 10).exact == Rat(10));
  CHECK_THROWS_AS(expected_boundary(3, 11), parse_error);
  CHECK_THROWS_AS(expected_boundary(3, -1), parse_error);

  // Monte Carlo agreement at d=3, t=2
  LayerGraph g(5, 3);
  SplitMix64 rng(99);
  double acc = 0;
  const int trials = 40'000;
  for (int i = 0; i < trials; i++) {
    uint64_t T = 0;
    while (std::popcount(T) < 2) T |= 1ull << rng.below(10);
    uint64_t nb = 0;
    for (int v = 0; v < 10; v++)
      if (T >> v & 1) nb |= g.neighbor_mask(Side::upper, v).words()[0];
    acc += std::popcount(nb);
  }
  CHECK(acc / trials == doctest::Approx(16.0 / 3.0).epsilon(0.01));
}

TEST_CASE("asymptotic count estimate components") {
  auto r3 = asymptotic_count_estimate(3);
  CHECK(r3.N == 10);
  double want = 1.0 + 10.0 + (1.25 + 30.0 / 64.0) / std::log(2.0);
  CHECK(r3.log2_count == doctest::Approx(want).epsilon(1e-12));
  auto r4 = asymptotic_count_estimate(4);
  CHECK(r4.N == 35);
  CHECK(r4.term_first == doctest::Approx(35.0 / 16.0));
  CHECK(r4.term_second == doctest::Approx(210.0 / 256.0));
  auto r10 = asymptotic_count_estimate(10);
  CHECK(r10.N == 92378);
  CHECK(static_cast<double>(r10.N) / r10.stirling_N == doctest::Approx(1.0).epsilon(0.02));
  CHECK(!r10.warnings.empty());
}

TEST_CASE("coverage counters survive a random toggle storm") {
  LayerGraph g(5, 3);
  CoverageCounter cc(g, Side::upper);
  SplitMix64 rng(5);
  for (int i = 0; i < 10'000; i++) {
    cc.toggle(static_cast<int>(rng.below(10)));
    if (i % 97 == 0) CHECK(cc.covered() == cc.recompute_covered());
  }
  CHECK(cc.covered() == cc.recompute_covered());
  CHECK(cc.covered() + cc.uncovered() == 10);
}

TEST_CASE("memoized sweeps return the same histograms") {
  LayerGraph g(5, 3);
  const auto& a = sweep_all_cached(g, Side::upper);
  const auto& b = sweep_all_cached(g, Side::upper);
  CHECK(&a == &b);
  CHECK(a.cells == sweep_all_subsets(g, Side::upper, 2).cells);
}
