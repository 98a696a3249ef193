#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pa/hecke.hpp"

using namespace pa;
using namespace pa::testing;

namespace {

HeckeContext s3_s2() {
  auto S3 = PermGroup::named("S3");
  return build_hecke(S3, S3.subgroup({S3.index_of({1, 0, 2})}));
}

void check_constants_against_counting(const HeckeContext& ctx) {
  auto brute = oracle::brute_double_cosets(ctx.G, ctx.H);
  REQUIRE(brute.count == ctx.double_cosets());
  for (int a = 0; a < ctx.double_cosets(); ++a)
    for (int b = 0; b < ctx.double_cosets(); ++b) {
      auto c = hecke_structure_constants(ctx, a, b);
      for (int x = 0; x < ctx.G.order(); ++x)
        CHECK(c[ctx.dc_of[x]] ==
              oracle::convolution_count(ctx.G, brute, brute.dc_of[ctx.dc_rep[a]], brute.dc_of[ctx.dc_rep[b]], x));
    }
}

// The corrupted and clean coboundary examples share this A = M_2 ⊕ C.
MultiMatrix m2_plus_c() {
  MultiMatrix A;
  A.dims = {2, 1};
  A.weights = {QScalar::rational(1, 3), QScalar::rational(1, 3)};
  return A;
}

std::vector<MultiMatrix::Elem> rotations(const HeckeContext& ctx, const MultiMatrix& A) {
  std::vector<MultiMatrix::Elem> v;
  for (int s = 0; s < ctx.cosets(); ++s) {
    auto e = A.unit();
    if (s != ctx.identity_coset()) {
      QScalar c = QScalar::rational(3, 5), d = QScalar::rational(s % 2 ? 4 : -4, 5);
      e[0](0, 0) = c;
      e[0](0, 1) = -d;
      e[0](1, 0) = d;
      e[0](1, 1) = c;
    }
    v.push_back(e);
  }
  return v;
}

void check_cp(const CrossedProduct& cp) {
  auto r = verify_crossed_product(cp);
  CHECK_MESSAGE(r.equivariant, r.witness);
  CHECK_MESSAGE(r.associative, r.witness);
  CHECK(r.star_involutive);
  CHECK(r.star_antimultiplicative);
  CHECK(r.unit_ok);
  CHECK(r.omega_faithful);
  CHECK(r.rep_independent);
  auto p = verify_phi(cp);
  CHECK_MESSAGE(p.homomorphism, p.witness);
  CHECK(p.star_preserving);
  CHECK(p.injective);
  CHECK(p.invariant);
  CHECK(p.unit_to_identity);
  CHECK(p.image_dimension == cp.dimension());
  CHECK(QScalar(static_cast<long>(p.image_dimension)) == p.fixed_point_dimension);
  if (p.diagonal_formula) CHECK(*p.diagonal_formula);
}

}  // namespace

TEST_SUITE("hecke") {

TEST_CASE("(S3, S2) tables") {
  auto ctx = s3_s2();
  CHECK(ctx.cosets() == 3);
  CHECK(ctx.double_cosets() == 2);
  int T = ctx.dc_of[ctx.G.index_of({0, 2, 1})];
  CHECK(T != ctx.dc_of[ctx.G.identity()]);
  CHECK(ctx.dc_index[T] == 2);
  CHECK(ctx.dc_size[T] == 4);
  auto c = hecke_structure_constants(ctx, T, T);
  int Hd = ctx.dc_of[ctx.G.identity()];
  CHECK(c[Hd] == 4);
  CHECK(c[T] == 2);
  check_constants_against_counting(ctx);
  auto alg = hecke_algebra(ctx);
  CHECK(alg.dimension == 2);
  CHECK(alg.associative);
  CHECK(alg.unit_ok);
  CHECK_FALSE(ctx.normal());
}

TEST_CASE("trivial H gives the group algebra") {
  auto S3 = PermGroup::named("S3");
  auto ctx = build_hecke(S3, {S3.identity()});
  CHECK(ctx.double_cosets() == 6);
  CHECK(ctx.cosets() == 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      auto c = hecke_structure_constants(ctx, a, b);
      int prod = ctx.dc_of[S3.mul(ctx.dc_rep[a], ctx.dc_rep[b])];
      for (int k = 0; k < 6; ++k) CHECK(c[k] == (k == prod ? 1 : 0));
    }
}

TEST_CASE("normal subgroup: quotient group algebra") {
  auto Z4 = PermGroup::named("Z4");
  int g = Z4.generator_ids()[0];
  auto ctx = build_hecke(Z4, Z4.subgroup({Z4.mul(g, g)}));
  CHECK(ctx.normal());
  auto alg = hecke_algebra(ctx);
  REQUIRE(alg.matches_quotient_group.has_value());
  CHECK(*alg.matches_quotient_group);
  check_constants_against_counting(ctx);
}

TEST_CASE("S4 over S3 and D4 constants") {
  auto S4 = PermGroup::named("S4");
  std::vector<int> fix3;
  for (int x = 0; x < S4.order(); ++x)
    if (S4.element(x)[3] == 3) fix3.push_back(x);
  auto ctx = build_hecke(S4, fix3);
  CHECK(ctx.cosets() == 4);
  CHECK(ctx.double_cosets() == 2);
  check_constants_against_counting(ctx);
  CHECK(hecke_algebra(ctx).associative);
  auto D4 = PermGroup::named("D4");
  auto c2 = build_hecke(D4, D4.subgroup({D4.generator_ids().back()}));
  check_constants_against_counting(c2);
  CHECK(hecke_algebra(c2).associative);
}

TEST_CASE("double cosets match G_o-orbits for a graph action") {
  auto bh = bh_s3();
  int o = bh.oracle->based_vertex(*bh.graph, Sign::Plus);
  auto ctx = build_hecke_from_action(*bh.graph, *bh.oracle, o);
  auto st = stabilizer_data(*bh.graph, *bh.oracle, o);
  CHECK(ctx.cosets() == static_cast<int>(bh.graph->vertices(Sign::Plus).size()));
  CHECK(ctx.double_cosets() == static_cast<int>(st.orbit_representatives.size()));
  auto d = build_diagonal_cyclic(2);
  auto cd = build_hecke_from_action(*d.graph, *d.oracle, d.oracle->based_vertex(*d.graph, Sign::Plus));
  CHECK(cd.H.size() == 1);
  CHECK(cd.cosets() == 2);
  auto t = build_biregular_tree(3, 3, 4);
  CHECK_THROWS_AS(build_hecke_from_action(*t.graph, *t.oracle, t.graph->ball()->center), Error);
}

TEST_CASE("cocycle axioms") {
  auto ctx = s3_s2();
  auto A = MultiMatrix::commutative(3);
  auto ord = ordinary_action(ctx, A, [&](int g) { return AutA::permutation(A, ctx.G.element(g)); });
  auto r = validate_cocycle(ord);
  CHECK(r.ok);
  CHECK(r.checks > 0);

  auto B = m2_plus_c();
  auto cob = coboundary_action(ctx, B, [&](int) { return AutA::identity(B); }, rotations(ctx, B));
  CHECK(validate_cocycle(cob).ok);
  auto bad = cob;
  bad.u[1][0][1] = B.scale(bad.u[1][0][1], QScalar(-1));
  auto rb = validate_cocycle(bad);
  CHECK_FALSE(rb.ok);
  CHECK(rb.axiom == 5);
  CHECK_FALSE(rb.witness.empty());
}

TEST_CASE("crossed products: ordinary, twisted, degenerate") {
  auto ctx = s3_s2();
  // A = C, trivial action: the Hecke algebra itself
  auto A1 = MultiMatrix::commutative(1);
  auto a1 = ordinary_action(ctx, A1, [&](int) { return AutA::identity(A1); });
  CrossedProduct h(a1, false);
  CHECK(h.dimension() == 2);
  check_cp(h);

  auto A = MultiMatrix::commutative(3);
  auto ord = ordinary_action(ctx, A, [&](int g) { return AutA::permutation(A, ctx.G.element(g)); });
  CrossedProduct cp(ord, false), tw(ord, true);
  CHECK(cp.dimension() == 5);
  check_cp(cp);
  for (const auto& x : cp.basis()) {
    CHECK(cp.equal(cp.star(x), tw.star(x)));
    for (const auto& y : cp.basis()) CHECK(cp.equal(cp.mul(x, y), tw.mul(x, y)));
  }
  // omega(f f*) = sum_s tau(f(s) f(s)*)
  for (const auto& f : cp.basis()) {
    QScalar want;
    for (const auto& v : f) want += A.tau(A.mul(v, A.adjoint(v)));
    CHECK(cp.omega(cp.mul(f, cp.star(f))) == want);
  }

  auto B = m2_plus_c();
  auto cob = coboundary_action(ctx, B, [&](int) { return AutA::identity(B); }, rotations(ctx, B));
  CrossedProduct ct(cob, true);
  check_cp(ct);
}

TEST_CASE("Hecke algebra from the crossed product matches the structure constants") {
  auto ctx = s3_s2();
  auto A1 = MultiMatrix::commutative(1);
  auto a1 = ordinary_action(ctx, A1, [&](int) { return AutA::identity(A1); });
  CrossedProduct h(a1, false);
  // indicator of each double coset as a function on cosets
  auto indicator = [&](int d) {
    auto f = h.zero();
    for (int s = 0; s < ctx.cosets(); ++s)
      if (ctx.dc_of[ctx.coset_rep[s]] == d) f[s] = A1.unit();
    return f;
  };
  const long H = static_cast<long>(ctx.H.size());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      auto c = hecke_structure_constants(ctx, a, b);
      auto want = h.zero();
      for (int k = 0; k < 2; ++k) want = h.add(want, h.scale(indicator(k), QScalar(mpq_class(static_cast<long>(c[k]), H))));
      CHECK(h.equal(h.mul(indicator(a), indicator(b)), want));
    }
}

TEST_CASE("group algebra of S4 and S4/S3 on C^4") {
  auto S4 = PermGroup::named("S4");
  auto A1 = MultiMatrix::commutative(1);
  auto c24 = build_hecke(S4, {S4.identity()});
  auto a24 = ordinary_action(c24, A1, [&](int) { return AutA::identity(A1); });
  CrossedProduct g24(a24, false);
  CHECK(g24.dimension() == 24);
  check_cp(g24);

  std::vector<int> fix3;
  for (int x = 0; x < S4.order(); ++x)
    if (S4.element(x)[3] == 3) fix3.push_back(x);
  auto c43 = build_hecke(S4, fix3);
  auto A4 = MultiMatrix::commutative(4);
  auto a43 = ordinary_action(c43, A4, [&](int g) { return AutA::permutation(A4, S4.element(g)); });
  CrossedProduct cp(a43, false);
  CHECK(cp.dimension() == 5);
  check_cp(cp);
}

TEST_CASE("exact linear algebra helpers") {
  using Row = std::vector<QScalar>;
  CHECK(positive_definite_exact({Row{2, 1}, Row{1, 2}}));
  CHECK_FALSE(positive_definite_exact({Row{1, 2}, Row{2, 1}}));
  CHECK_FALSE(positive_definite_exact({Row{1, 1}, Row{0, 1}}));
  CHECK(exact_rank({Row{1, 2, 3}, Row{2, 4, 6}, Row{0, 1, 1}}) == 2);
}

}  // TEST_SUITE
