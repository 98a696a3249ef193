#include "doctest.h"
#include "helpers.hpp"
#include "pa/paths.hpp"

using namespace pa;
using namespace pa::testing;

namespace {

bool has_issue(const ValidationReport& r, ErrorCode c) {
  for (const auto& i : r.issues)
    if (i.code == c) return true;
  return false;
}

// mu(a) mu(abar) = 1 read through weight_from on both ends
bool reverse_products_one(const WeightedGraph& g) {
  for (int e = 0; e < g.num_edges(); ++e)
    if (g.weight_from(e, g.edge(e).source) * g.weight_from(e, g.edge(e).target) != QScalar(1)) return false;
  return true;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("parallel edges give delta = n") {
  for (int n = 1; n <= 5; ++n) {
    auto b = build_multi_edge(n);
    auto r = validate_weight(*b.graph);
    CHECK(r.ok());
    REQUIRE(r.delta.has_value());
    CHECK(*r.delta == QScalar(n));
    CHECK(reverse_products_one(*b.graph));
    CHECK(r.degree_bound_ok);
  }
}

TEST_CASE("tree ball is valid at interior vertices") {
  auto b = build_biregular_tree(3, 3, 12);
  auto r = validate_weight(*b.graph);
  CHECK(r.ok());
  CHECK(*r.delta == QScalar(3));
  CHECK(r.boundary_vertices > 0);
  CHECK(reverse_products_one(*b.graph));
  for (int e = 0; e < b.graph->num_edges(); ++e) CHECK(b.graph->mu(e) == QScalar(1));
}

TEST_CASE("BH modulus is sqrt 6") {
  auto b = bh_s3();
  auto r = validate_weight(*b.graph);
  CHECK(r.ok());
  CHECK(*r.delta == QScalar::sqrt_of(6));
  CHECK(b.graph->field() == 6);
}

TEST_CASE("perturbed 4-cycle is inconsistent") {
  auto g = four_cycle(QScalar(2));
  auto r = validate_weight(*g);
  CHECK(has_issue(r, ErrorCode::InconsistentMu));
  CHECK_THROWS_AS(vertex_weights(*g, 0), Error);
}

TEST_CASE("wrong modulus reports the vertex") {
  auto g = four_cycle();
  g->set_delta(QScalar(3));
  auto r = validate_weight(*g);
  REQUIRE(has_issue(r, ErrorCode::RowSumMismatch));
  CHECK(r.issues.front().vertex >= 0);
  CHECK(r.issues.front().message.find("v0") != std::string::npos);
}

TEST_CASE("modulus inferred when absent") {
  auto g = four_cycle();
  g->clear_delta();
  auto r = validate_weight(*g);
  CHECK(r.ok());
  CHECK(r.delta_inferred);
  CHECK(*r.delta == QScalar(2));
}

TEST_CASE("disconnected graph") {
  WeightedGraph g;
  int v = g.add_vertex("v", true), w = g.add_vertex("w", false);
  int v2 = g.add_vertex("v2", true), w2 = g.add_vertex("w2", false);
  g.add_edge("a", v, w, 1, QScalar(1));
  g.add_edge("b", v2, w2, 1, QScalar(1));
  auto r = validate_weight(g);
  CHECK(has_issue(r, ErrorCode::NotConnected));
}

TEST_CASE("vertex weights on the (2,8) tree alternate") {
  auto b = build_biregular_tree(2, 8, 4);
  const auto& g = *b.graph;
  CHECK(validate_weight(g).ok());
  CHECK(*g.delta() == QScalar(4));
  int o = g.ball()->center;
  auto w = vertex_weights(g, o);
  auto dist = g.distances_from(o);
  for (int v = 0; v < g.num_vertices(); ++v) CHECK(w.mu_V[v] == QScalar(dist[v] % 2 == 0 ? 1 : 2));
  // A mu_V = delta mu_V away from the frontier
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!g.is_interior(v)) continue;
    QScalar s;
    for (int e : g.incident(v)) s += w.mu_V[g.other_end(e, v)];
    CHECK(s == *g.delta() * w.mu_V[v]);
  }
}

TEST_CASE("4-cycle vertex weights are flat") {
  auto g = four_cycle();
  auto w = vertex_weights(*g, 0);
  for (const auto& x : w.mu_V) CHECK(x == QScalar(1));
  CHECK(w.base == 0);
}

TEST_CASE("path counts") {
  auto g = four_cycle();
  auto p1 = PathSpace::make(*g, 1, Sign::Plus);
  CHECK(p1->size() == 4);
  CHECK(p1->st_count() == 4);
  auto p0 = PathSpace::make(*g, 0, Sign::Plus);
  CHECK(p0->size() == 2);
  CHECK(p0->st_count() == 2);
  auto p2 = PathSpace::make(*g, 2, Sign::Plus);
  CHECK(p2->size() == 8);
  CHECK(p2->st_count() == 16);  // blocks (v0,v0) (v0,v1) (v1,v0) (v1,v1) of size 2
  for (int n = 1; n <= 4; ++n) {
    auto b = build_multi_edge(n);
    CHECK(PathSpace::make(*b.graph, 1, Sign::Plus)->st_count() == n * n);
  }
}

TEST_CASE("paths alternate parity and respect the frontier") {
  auto b = build_biregular_tree(3, 3, 4);
  const auto& g = *b.graph;
  auto sp = PathSpace::make(g, 3, Sign::Minus);
  CHECK(sp->partial());
  for (int i = 0; i < sp->size(); ++i) {
    auto vs = path_vertices(g, sp->path(i));
    for (size_t j = 0; j < vs.size(); ++j) CHECK(g.is_even(vs[j]) == (j % 2 == 1));
  }
  // an explicit source next to the frontier is refused
  int leaf = *g.boundary().begin();
  int near = g.other_end(g.incident(leaf).front(), leaf);
  Sign s = g.is_even(near) ? Sign::Plus : Sign::Minus;
  CHECK_THROWS_AS(PathSpace(g, 3, s, std::vector<int>{near}), Error);
}

TEST_CASE("path products equal vertex weight ratios") {
  auto b = build_biregular_tree(2, 8, 5);
  const auto& g = *b.graph;
  int o = g.ball()->center;
  auto w = vertex_weights(g, o);
  auto sp = PathSpace::make(g, 3, Sign::Plus, std::vector<int>{o});
  for (int i = 0; i < sp->size(); ++i) CHECK(sp->mu(i) == w.mu_V[sp->target(i)] / w.mu_V[o]);
}

}  // TEST_SUITE
