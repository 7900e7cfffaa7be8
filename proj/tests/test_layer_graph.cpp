#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "midlayer/layer_graph.hpp"

using namespace midlayer;

namespace {

VertexSet from_labels(const LayerGraph& g, Side side, std::initializer_list<const char*> labels) {
  std::vector<int> ids;
  for (const char* l : labels) ids.push_back(g.vertex_id(side, parse_vertex_label(l, g.n())));
  return make_vertex_set(g, side, ids);
}

std::set<std::string> label_set(const LayerGraph& g, const VertexSet& s) {
  auto v = vertex_set_labels(g, s);
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("build_graph shapes and degrees") {
  LayerGraph g32(3, 2);
  CHECK(g32.upper_size() == 3);
  CHECK(g32.lower_size() == 3);
  CHECK(g32.degree(Side::upper) == 2);
  CHECK(g32.degree(Side::lower) == 2);
  CHECK(g32.is_middle_layers());

  LayerGraph g53(5, 3);
  CHECK(g53.upper_size() == 10);
  CHECK(g53.lower_size() == 10);
  for (int v = 0; v < 10; v++) {
    CHECK(g53.neighbor_ids(Side::upper, v).size() == 3);
    CHECK(g53.neighbor_ids(Side::lower, v).size() == 3);
  }

  LayerGraph g42(4, 2);
  CHECK(g42.upper_size() == 6);
  CHECK(g42.lower_size() == 4);
  CHECK(g42.degree(Side::upper) == 2);
  CHECK(g42.degree(Side::lower) == 3);
  CHECK(!g42.is_middle_layers());
  CHECK_THROWS_AS(g42.require_middle_layers("x"), shape_error);

  CHECK_THROWS_AS(LayerGraph(1, 1), parse_error);
  CHECK_THROWS_AS(LayerGraph(64, 3), parse_error);
  CHECK_THROWS_AS(LayerGraph(5, 0), parse_error);
  CHECK_THROWS_AS(LayerGraph(5, 6), parse_error);
}

TEST_CASE("vertex labels round-trip") {
  CHECK(vertex_label(0b1011) == "{1,2,4}");
  CHECK(parse_vertex_label("{1,2,4}", 5) == 0b1011);
  CHECK(parse_vertex_label("{}", 5) == 0);
  CHECK_THROWS_AS(parse_vertex_label("{0}", 5), parse_error);
  CHECK_THROWS_AS(parse_vertex_label("{6}", 5), parse_error);
  CHECK_THROWS_AS(parse_vertex_label("{1,1}", 5), parse_error);
  CHECK_THROWS_AS(parse_vertex_label("1,2", 5), parse_error);

  LayerGraph g(5, 3);
  for (int v = 0; v < g.upper_size(); v++)
    CHECK(g.vertex_id(Side::upper, parse_vertex_label(vertex_label(g.vertex_bits(Side::upper, v)),
                                                      5)) == v);
}

TEST_CASE("neighborhood matches hand expansion") {
  LayerGraph g32(3, 2);
  auto n1 = neighborhood(g32, from_labels(g32, Side::upper, {"{1,2}"}));
  CHECK(label_set(g32, n1) == std::set<std::string>{"{1}", "{2}"});
  auto n0 = neighborhood(g32, VertexSet{Side::upper, g32.empty_set(Side::upper)});
  CHECK(n0.empty());

  LayerGraph g53(5, 3);
  auto n = neighborhood(g53, from_labels(g53, Side::upper, {"{1,2,3}", "{1,2,4}"}));
  CHECK(label_set(g53, n) ==
        std::set<std::string>{"{1,2}", "{1,3}", "{2,3}", "{1,4}", "{2,4}"});
}

TEST_CASE("closure examples") {
  LayerGraph g32(3, 2);
  auto c1 = closure(g32, from_labels(g32, Side::upper, {"{1,2}"}));
  CHECK(label_set(g32, c1) == std::set<std::string>{"{1,2}"});
  auto c2 = closure(g32, from_labels(g32, Side::upper, {"{1,2}", "{1,3}"}));
  CHECK(label_set(g32, c2) == std::set<std::string>{"{1,2}", "{1,3}", "{2,3}"});

  LayerGraph g53(5, 3);
  auto c3 = closure(g53, from_labels(g53, Side::upper, {"{1,2,3}", "{1,3,4}", "{2,3,4}"}));
  CHECK(label_set(g53, c3) ==
        std::set<std::string>{"{1,2,3}", "{1,2,4}", "{1,3,4}", "{2,3,4}"});
  // the empty set closes to itself
  CHECK(closure(g53, VertexSet{Side::upper, g53.empty_set(Side::upper)}).empty());
}

TEST_CASE("two-linked components") {
  LayerGraph g53(5, 3);
  auto one = two_linked_components(g53, from_labels(g53, Side::upper, {"{1,2,3}", "{1,2,4}"}));
  CHECK(one.size() == 1);
  CHECK(one[0].size() == 2);
  auto two = two_linked_components(g53, from_labels(g53, Side::upper, {"{1,2,3}", "{1,4,5}"}));
  CHECK(two.size() == 2);
  CHECK(two[0].size() == 1);
  CHECK(two[1].size() == 1);

  LayerGraph g32(3, 2);
  auto full = two_linked_components(g32, from_labels(g32, Side::upper, {"{1,2}", "{1,3}", "{2,3}"}));
  CHECK(full.size() == 1);
  CHECK(full[0].size() == 3);
  CHECK(two_linked_components(g32, VertexSet{Side::upper, g32.empty_set(Side::upper)}).empty());
}

TEST_CASE("counting 2-linked sets containing a vertex") {
  LayerGraph g53(5, 3);
  int v = g53.vertex_id(Side::upper, parse_vertex_label("{1,2,3}", 5));
  CHECK(count_two_linked_containing(g53, Side::upper, v, 1).count == 1);
  CHECK(count_two_linked_containing(g53, Side::upper, v, 2).count == 6);

  LayerGraph g74(7, 4);
  int u = g74.vertex_id(Side::upper, parse_vertex_label("{1,2,3,4}", 7));
  auto r = count_two_linked_containing(g74, Side::upper, u, 2);
  CHECK(r.count == 12);
  CHECK(r.bound_ok);

  CHECK_THROWS_AS(count_two_linked_containing(g53, Side::upper, 0, 0), parse_error);
  // tiny cap triggers the scale guard
  CHECK_THROWS_AS(count_two_linked_containing(g53, Side::upper, 0, 4, false, 3), scale_error);
}

TEST_CASE("isoperimetry checkers at contract scales") {
  LayerGraph g53(5, 3);
  auto ri = isoperimetry_check(g53, 'i');
  CHECK(ri.pass);
  CHECK(ri.sets_checked == 0);  // d/4 < 1: vacuous

  LayerGraph g95(9, 5);
  auto rii = isoperimetry_check(g95, 'j', Side::upper, 3);
  CHECK(rii.exhaustive);
  CHECK(rii.pass);
  CHECK(rii.sets_checked == 126ull + 7875 + 325500);

  auto riii = isoperimetry_check(g53, 'k', Side::upper, 5);
  CHECK(riii.exhaustive);
  CHECK(riii.pass);
  CHECK(riii.worst_ratio >= 1.0);

  // sampled fallback flags itself
  auto rs = isoperimetry_check(g95, 'k', Side::upper, 0, 1 << 10, 2000, 7);
  CHECK(!rs.exhaustive);
  CHECK(rs.samples == 2000);
  CHECK(rs.pass);

  CHECK_THROWS_AS(isoperimetry_check(g53, 'x'), parse_error);
  LayerGraph g42(4, 2);
  CHECK_THROWS_AS(isoperimetry_check(g42, 'i'), shape_error);
}

TEST_CASE("mode-i inequality is meaningful once d >= 8") {
  // first d where |S| = 2 is in range; pairs have |N(S)| >= 2d-1 >= d·2-2
  LayerGraph g(15, 8);
  auto r = isoperimetry_check(g, 'i', Side::upper, 2, 1ull << 12, 4000, 11);
  CHECK(r.pass);
}
