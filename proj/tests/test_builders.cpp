#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pa/symmetry.hpp"

using namespace pa;
using namespace pa::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no throw");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_SUITE("builders") {

TEST_CASE("Temperley-Lieb dimension oracle") {
  CHECK(tl_dim_oracle(1) == 1);
  CHECK(tl_dim_oracle(3) == 5);
  CHECK(tl_dim_oracle(4) == 14);
  for (int n = 0; n <= 10; ++n) CHECK(tl_dim_oracle(n) == oracle::catalan(n));
}

TEST_CASE("diagonal Z/2 is the 4-cycle") {
  auto b = build_diagonal_cyclic(2);
  const auto& g = *b.graph;
  CHECK(g.vertices(Sign::Plus).size() == 2);
  CHECK(g.vertices(Sign::Minus).size() == 2);
  CHECK(g.num_edges() == 4);
  for (int v = 0; v < g.num_vertices(); ++v) CHECK(g.degree(v) == 2);
  CHECK(require_valid(g) == QScalar(2));
  auto a = validate_action(g, *b.oracle);
  CHECK(a.ok());
  CHECK(a.transitive_plus);
  CHECK(a.transitive_minus);
}

TEST_CASE("diagonal over S3 with three steps") {
  auto S3 = PermGroup::named("S3");
  int t = S3.index_of({1, 0, 2}), c = S3.index_of({1, 2, 0});
  auto b = build_diagonal(S3, {t, c, S3.identity()});
  CHECK(require_valid(*b.graph) == QScalar(3));
  CHECK(validate_action(*b.graph, *b.oracle).ok());
  CHECK(code_of([&] { build_diagonal(S3, {t, c}); }) == ErrorCode::InvalidParameters);
}

TEST_CASE("Bisch-Haagerup degrees and weights") {
  auto b = bh_s3();
  const auto& g = *b.graph;
  CHECK(g.vertices(Sign::Plus).size() == 3);
  CHECK(g.vertices(Sign::Minus).size() == 2);
  CHECK(g.num_edges() == 6);
  for (int v : g.vertices(Sign::Plus)) CHECK(g.degree(v) == 2);
  for (int v : g.vertices(Sign::Minus)) CHECK(g.degree(v) == 3);
  QScalar delta = QScalar::sqrt_of(6);
  for (int v = 0; v < g.num_vertices(); ++v) {
    QScalar s;
    for (int e : g.incident(v)) s += g.weight_from(e, v);
    CHECK(s == delta);
  }
  CHECK(validate_action(g, *b.oracle).ok());
}

TEST_CASE("Bisch-Haagerup refuses overlapping subgroups") {
  CHECK(code_of([] { build_bisch_haagerup(3, {{1, 0, 2}}, {{1, 0, 2}}); }) == ErrorCode::InvalidParameters);
}

TEST_CASE("biregular trees") {
  auto b = build_biregular_tree(3, 3, 12);
  CHECK(require_valid(*b.graph) == QScalar(3));
  CHECK(b.oracle->is_tree());
  auto c = build_biregular_tree(2, 8, 4);
  CHECK(require_valid(*c.graph) == QScalar(4));
  QScalar mu = QScalar(2);
  for (int e = 0; e < c.graph->num_edges(); ++e) CHECK(c.graph->mu(e) == mu);
  auto d = build_biregular_tree(2, 3, 4);
  CHECK(require_valid(*d.graph) == QScalar::sqrt_of(6));
  CHECK(code_of([] { build_biregular_tree(1, 3, 4); }) == ErrorCode::InvalidParameters);
  CHECK(code_of([] { build_biregular_tree(3, 3, 1); }) == ErrorCode::InvalidParameters);
}

TEST_CASE("multi edge") {
  auto b = build_multi_edge(4, true);
  CHECK(require_valid(*b.graph) == QScalar(4));
  CHECK(validate_action(*b.graph, *b.oracle).ok());
  for (int e = 0; e < 4; ++e) CHECK(b.graph->edge(e).label == e + 1);
  CHECK(code_of([] { build_multi_edge(0); }) == ErrorCode::InvalidParameters);
  CHECK(build_multi_edge(2).oracle == nullptr);
}

}  // TEST_SUITE
