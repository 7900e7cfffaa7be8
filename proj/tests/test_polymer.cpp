#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "midlayer/polymer.hpp"

using namespace midlayer;

namespace {

VertexSet from_labels(const LayerGraph& g, Side side, std::initializer_list<const char*> labels) {
  std::vector<int> ids;
  for (const char* l : labels) ids.push_back(g.vertex_id(side, parse_vertex_label(l, g.n())));
  return make_vertex_set(g, side, ids);
}

}  // namespace

TEST_CASE("is_polymer honors the closure cap") {
  LayerGraph g32(3, 2);
  CHECK(is_polymer(g32, from_labels(g32, Side::upper, {"{1,2}"})));
  CHECK(!is_polymer(g32, from_labels(g32, Side::upper, {"{1,2}", "{1,3}"})));  // closure 3 > 3/2
  CHECK(!is_polymer(g32, VertexSet{Side::upper, g32.empty_set(Side::upper)}));

  LayerGraph g53(5, 3);
  CHECK(is_polymer(g53, from_labels(g53, Side::upper, {"{1,2,3}", "{1,2,4}"})));
  CHECK(!is_polymer(g53, from_labels(g53, Side::upper, {"{1,2,3}", "{1,4,5}"})));  // not 2-linked

  LayerGraph g42(4, 2);
  CHECK_THROWS_AS(is_polymer(g42, VertexSet{Side::upper, g42.empty_set(Side::upper)}),
                  shape_error);
}

TEST_CASE("polymer weights, plain and auxiliary") {
  LayerGraph g32(3, 2);
  Polymer p = make_polymer(g32, from_labels(g32, Side::upper, {"{1,2}"}));
  CHECK(polymer_weight(p, Rat(1)) == Rat(1, 4));

  LayerGraph g53(5, 3);
  Polymer q = make_polymer(g53, from_labels(g53, Side::upper, {"{1,2,3}", "{1,2,4}"}));
  CHECK(q.boundary_size == 5);
  CHECK(polymer_weight(q, Rat(1)) == Rat(1, 32));

  // aux mode with C = 1 coincides with the plain weight
  WeightParams w{Rat(1), 1.0, 3};
  CHECK(polymer_weight_aux(q, w) == doctest::Approx(1.0 / 32).epsilon(1e-15));
  WeightParams w2{Rat(1), 2.0, 3};
  CHECK(polymer_weight_aux(q, w2) ==
        doctest::Approx(std::exp(2.0 / 9.0) / 32).epsilon(1e-12));
  WeightParams bad{Rat(1), 0.5, 3};
  CHECK_THROWS_AS(polymer_weight_aux(q, bad), parse_error);
}

TEST_CASE("compatibility is non-reflexive and side-checked") {
  LayerGraph g32(3, 2);
  Polymer a = make_polymer(g32, from_labels(g32, Side::upper, {"{1,2}"}));
  Polymer b = make_polymer(g32, from_labels(g32, Side::upper, {"{1,3}"}));
  CHECK(!compatible(a, b));  // share the neighbor {1}
  CHECK(!compatible(a, a));

  LayerGraph g53(5, 3);
  Polymer c = make_polymer(g53, from_labels(g53, Side::upper, {"{1,2,3}"}));
  Polymer d = make_polymer(g53, from_labels(g53, Side::upper, {"{1,4,5}"}));
  CHECK(compatible(c, d));  // symmetric difference of size 4

  Polymer e = make_polymer(g53, from_labels(g53, Side::lower, {"{1,2}"}));
  CHECK_THROWS_AS(compatible(c, e), parse_error);
}

TEST_CASE("polymer enumeration counts") {
  LayerGraph g53(5, 3);
  CHECK(enumerate_polymers(g53, Side::upper, 1).size() == 10);
  auto two = enumerate_polymers(g53, Side::upper, 2);
  CHECK(two.size() == 40);  // 10 singletons + 30 distance-2 pairs
  // canonical order: sizes ascend
  for (size_t i = 1; i < two.size(); i++) CHECK(two[i - 1].size() <= two[i].size());

  LayerGraph g32(3, 2);
  CHECK(enumerate_polymers(g32, Side::upper, 2).size() == 3);  // no pair survives at d=2

  CHECK_THROWS_AS(enumerate_polymers(g53, Side::upper, 4, 5), scale_error);
}

TEST_CASE("container families on B(5,3)") {
  LayerGraph g(5, 3);
  auto f13 = enumerate_container_family(g, Side::upper, 1, 3);
  CHECK(f13.members.size() == 10);
  CHECK(container_sum(f13, Rat(1)) == Rat(10, 8));

  auto f25 = enumerate_container_family(g, Side::upper, 2, 5);
  CHECK(f25.members.size() == 30);
  CHECK(container_sum(f25, Rat(1)) == Rat(30, 32));

  // per 4-subset T of [5]: the four triples inside T and the full quadruple
  auto f46 = enumerate_container_family(g, Side::upper, 4, 6);
  CHECK(f46.members.size() == 25);

  auto empty = enumerate_container_family(g, Side::upper, 1, 7);
  CHECK(empty.members.empty());
  CHECK(container_sum(empty, Rat(1)) == Rat(0));

  CHECK(container_bound_shape(g, 2, 5, 1.0) ==
        doctest::Approx(10.0 * std::exp(-3.0 * std::log(3.0) / std::pow(3.0, 2.0 / 3.0))));
}

TEST_CASE("gamma function branches") {
  // d=10, k=1: first branch
  CHECK(gamma_fn(10, 1, Rat(1)) ==
        doctest::Approx(8.5 * std::log(2.0) - 11.0 * std::log(10.0)).epsilon(1e-12));
  CHECK(gamma_fn(10, 1, Rat(1)) == doctest::Approx(-19.4366).epsilon(1e-4));
  // d=100, k=30: middle branch
  CHECK(gamma_fn(100, 30, Rat(1)) == doctest::Approx(250.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(gamma_fn(100, 30, Rat(1)) == doctest::Approx(173.287).epsilon(1e-4));
  // d=10, k=1e5: tail branch
  CHECK(gamma_fn(10, 1e5, Rat(1)) == doctest::Approx(1000.0));
  // branch boundary goes to the first branch inclusively
  CHECK(gamma_fn(8, 2, Rat(1)) ==
        doctest::Approx((16.0 - 6.0) * std::log(2.0) - 22.0 * std::log(8.0)));
  CHECK_THROWS_AS(gamma_fn(1, 1, Rat(1)), parse_error);
  CHECK_THROWS_AS(gamma_fn(5, 0, Rat(1)), parse_error);
}

TEST_CASE("lambda threshold shape") {
  CHECK(lambda_threshold(8, 1.0) == doctest::Approx(std::log(8.0) / 2.0));
  CHECK(lambda_threshold(8, 2.5) == doctest::Approx(2.5 * std::log(8.0) / 2.0));
}
