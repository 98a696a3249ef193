#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pa/symmetry.hpp"

using namespace pa;
using namespace pa::testing;

namespace {

bool has_issue(const ActionReport& r, ErrorCode c) {
  for (const auto& i : r.issues)
    if (i.code == c) return true;
  return false;
}

}  // namespace

TEST_SUITE("symmetry") {

TEST_CASE("Z/2 swap on the 4-cycle") {
  auto b = build_diagonal_cyclic(2);
  auto r = validate_action(*b.graph, *b.oracle);
  CHECK(r.ok());
  CHECK(r.transitive_plus);
  CHECK(r.transitive_minus);
  CHECK(r.group_order == 2);
}

TEST_CASE("parity violation is not an automorphism") {
  auto g = four_cycle();
  GraphAutomorphism h = GraphAutomorphism::identity(*g);
  std::swap(h.vmap[0], h.vmap[2]);  // v0 <-> w0
  auto s = SymmetryOracle::explicit_group({h}, 0);
  auto r = validate_action(*g, s);
  CHECK(has_issue(r, ErrorCode::NotAutomorphism));
}

TEST_CASE("weight change is reported") {
  // (2,8)-tree style weights on a finite star: swap that maps a mu=1 edge onto mu=2 is caught.
  WeightedGraph g;
  int v = g.add_vertex("v", true), w0 = g.add_vertex("w0", false), w1 = g.add_vertex("w1", false);
  g.add_edge("a", v, w0, 1, QScalar(1));
  g.add_edge("b", v, w1, 1, QScalar(2));
  GraphAutomorphism h = GraphAutomorphism::identity(g);
  std::swap(h.vmap[w0], h.vmap[w1]);
  std::swap(h.emap[0], h.emap[1]);
  auto r = validate_action(g, SymmetryOracle::explicit_group({h}, v));
  CHECK(has_issue(r, ErrorCode::WeightNotPreserved));
}

TEST_CASE("identity on a single edge") {
  auto g = single_edge();
  auto s = SymmetryOracle::explicit_group({GraphAutomorphism::identity(*g)}, 0);
  auto r = validate_action(*g, s);
  CHECK(r.ok());
  CHECK(r.transitive_plus);
  CHECK(r.transitive_minus);
}

TEST_CASE("ST orbits under Z/2") {
  auto b = build_diagonal_cyclic(2);
  auto t = orbits(*b.graph, *b.oracle, ObjectKind::StPairs, 1, Sign::Plus);
  CHECK(t.count() == 2);
  for (int s : t.sizes) CHECK(s == 2);
  // sizes add up, representatives are minimal
  for (int n = 0; n <= 3; ++n) {
    auto u = orbits(*b.graph, *b.oracle, ObjectKind::StPairs, n, Sign::Plus);
    long long sum = 0;
    for (int s : u.sizes) sum += s;
    CHECK(sum == static_cast<long long>(u.objects.size()));
    CHECK(sum == u.space->st_count());
    std::map<int, long long> least;
    for (size_t i = 0; i < u.objects.size(); ++i)
      if (!least.count(u.orbit_of[i])) least[u.orbit_of[i]] = u.objects[i];
    for (int k = 0; k < u.count(); ++k) CHECK(u.representatives[k] == least[k]);
  }
}

TEST_CASE("vertex and path orbits") {
  auto b = bh_s3();
  auto tv = orbits(*b.graph, *b.oracle, ObjectKind::Vertices, 0, Sign::Plus);
  CHECK(tv.count() == 1);
  auto tp = orbits(*b.graph, *b.oracle, ObjectKind::Paths, 1, Sign::Plus);
  CHECK(tp.count() == 1);  // G acts transitively on its own edges e_g
  CHECK(orbits(*b.graph, *b.oracle, ObjectKind::StPairs, 0, Sign::Plus).count() == 1);
  CHECK(orbits(*b.graph, *b.oracle, ObjectKind::StPairs, 0, Sign::Minus).count() == 1);
}

TEST_CASE("trivial group: orbit count is |ST_n|") {
  auto g = four_cycle();
  auto s = SymmetryOracle::explicit_group({GraphAutomorphism::identity(*g)}, 0);
  for (int n = 0; n <= 3; ++n) {
    auto t = orbits(*g, s, ObjectKind::StPairs, n, Sign::Plus);
    CHECK(t.count() == t.space->st_count());
  }
  auto basis = fixed_point_basis<QScalar>(*g, s, 2, Sign::Plus);
  for (const auto& f : basis) {
    CHECK(f.entries().size() == 1);
    CHECK(f.entries().begin()->second == QScalar(1));
  }
}

TEST_CASE("fixed-point dimensions against brute-force orbits") {
  auto b = build_diagonal_cyclic(2);
  CHECK(fixed_point_basis<QScalar>(*b.graph, *b.oracle, 1, Sign::Plus).size() == 2);
  CHECK(fixed_point_basis<QScalar>(*b.graph, *b.oracle, 2, Sign::Plus).size() == 8);
  for (auto bb : {build_diagonal_cyclic(2), build_diagonal_cyclic(3), bh_s3(), build_multi_edge(3, true)})
    for (Sign s : {Sign::Plus, Sign::Minus})
      for (int n = 0; n <= 3; ++n)
        CHECK(static_cast<int>(fixed_point_basis<QScalar>(*bb.graph, *bb.oracle, n, s).size()) ==
              oracle::st_orbit_count(*bb.graph, bb.oracle->generators(), n, s));
}

TEST_CASE("orbit sums span a *-subalgebra") {
  for (auto bb : {build_diagonal_cyclic(2), bh_s3()}) {
    const auto& elems = bb.oracle->elements(*bb.graph);
    auto basis = fixed_point_basis<QScalar>(*bb.graph, *bb.oracle, 2, Sign::Plus);
    for (const auto& x : basis) {
      for (const auto& h : elems) CHECK(act(h, x) == x);
      for (const auto& y : basis) {
        auto p = x * y;
        for (const auto& h : elems) CHECK(act(h, p) == p);
      }
      // the adjoint of an orbit sum is an orbit sum
      bool found = false;
      for (const auto& y : basis) found = found || y == x.adjoint();
      CHECK(found);
    }
  }
}

TEST_CASE("tree oracle: Catalan dimensions") {
  auto b = build_biregular_tree(3, 3, 10);
  for (int n = 1; n <= 4; ++n) {
    auto basis = fixed_point_basis<QScalar>(*b.graph, *b.oracle, n, Sign::Plus);
    CHECK(static_cast<long long>(basis.size()) == oracle::catalan(n));
    CHECK(static_cast<long long>(basis.size()) == tl_dim_oracle(n));
    auto t = orbits(*b.graph, *b.oracle, ObjectKind::StPairs, n, Sign::Plus, true);
    CHECK(t.count() == oracle::catalan(n));
  }
  auto t2 = orbits(*b.graph, *b.oracle, ObjectKind::StPairs, 2, Sign::Plus, true);
  CHECK(t2.count() == 2);
}

TEST_CASE("sphericality") {
  auto d = build_diagonal_cyclic(2);
  auto rd = check_spherical(*d.graph, *d.oracle);
  CHECK(rd.spherical);
  CHECK(rd.criterion_agrees);

  auto bh = bh_s3();
  auto rb = check_spherical(*bh.graph, *bh.oracle);
  CHECK(rb.spherical);
  CHECK(rb.criterion_agrees);
  QScalar mu = QScalar(mpq_class(3, 2), mpq_class(0), 6).sqrt().value();
  for (int e = 0; e < bh.graph->num_edges(); ++e) CHECK(bh.graph->mu(e) == mu);

  auto flat = build_bisch_haagerup(3, {{1, 0, 2}}, {{1, 2, 0}}, true);
  auto rf = check_spherical(*flat.graph, *flat.oracle);
  CHECK_FALSE(rf.spherical);
  CHECK(rf.criterion_agrees);
  for (const auto& e : rf.edges) CHECK((e.lhs == e.rhs) == (e.tau_l == e.tau_r));

  auto t = build_biregular_tree(3, 3, 6);
  auto rt = check_spherical(*t.graph, *t.oracle);
  CHECK(rt.spherical);
  CHECK(rt.criterion_agrees);
}

TEST_CASE("non-transitive action is not a candidate") {
  auto g = four_cycle();
  auto s = SymmetryOracle::explicit_group({GraphAutomorphism::identity(*g)}, 0);
  auto r = check_spherical(*g, s);
  CHECK_FALSE(r.candidate);
  CHECK_FALSE(r.spherical);
}

TEST_CASE("stabilizer data") {
  auto d = build_diagonal_cyclic(2);
  int o = d.oracle->based_vertex(*d.graph, Sign::Plus);
  auto r = stabilizer_data(*d.graph, *d.oracle, o);
  CHECK(r.orbit_representatives.size() == 2);
  for (auto s : r.orbit_sizes) CHECK(s == 1);

  auto bh = bh_s3();
  auto rb = stabilizer_data(*bh.graph, *bh.oracle, bh.oracle->based_vertex(*bh.graph, Sign::Plus));
  CHECK(rb.orbit_representatives.size() <= bh.graph->vertices(Sign::Plus).size());
  long long total = 0;
  for (auto s : rb.orbit_sizes) total += s;
  CHECK(total == static_cast<long long>(bh.graph->vertices(Sign::Plus).size()));

  auto t = build_biregular_tree(3, 3, 8);
  auto rt = stabilizer_data(*t.graph, *t.oracle, t.graph->ball()->center);
  CHECK(rt.scoped);
  std::map<int, long long> by_radius;
  for (size_t i = 0; i < rt.orbit_radius.size(); ++i) by_radius[rt.orbit_radius[i]] = rt.orbit_sizes[i];
  CHECK(by_radius[0] == 1);
  for (int k = 1; k <= 3; ++k) CHECK(by_radius[2 * k] == 3LL * (1LL << (2 * k - 1)));
}

TEST_CASE("unique weight from a transitive action") {
  auto bh = bh_s3();
  WeightedGraph bare;
  for (int v = 0; v < bh.graph->num_vertices(); ++v) bare.add_vertex(bh.graph->vertex_name(v), bh.graph->is_even(v));
  for (const auto& e : bh.graph->edges()) bare.add_edge(e.name, e.source, e.target, e.label);
  auto w = infer_unique_weight(bare, *bh.oracle);
  CHECK(*w.delta() == QScalar::sqrt_of(6));
  for (int e = 0; e < w.num_edges(); ++e) CHECK(w.mu(e) == bh.graph->mu(e));
}

}  // TEST_SUITE
