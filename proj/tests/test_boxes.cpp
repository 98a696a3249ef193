#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pa/boxes.hpp"
#include "pa/symmetry.hpp"

using namespace pa;
using namespace pa::testing;

namespace {

using QBox = BoxElement<QScalar>;
using DBox = BoxElement<double>;

std::vector<Built> finite_builders() {
  return {build_diagonal_cyclic(2), bh_s3(), build_multi_edge(4)};
}

// tr values of the unit: 1 at every interior source (row sums)
void check_unit_trace(const SpacePtr& sp) {
  auto t = traces(QBox::unit(sp));
  for (int v : sp->sources()) CHECK(t.tr_m.at(v) == QScalar(1));
}

}  // namespace

TEST_SUITE("boxes") {

TEST_CASE("matrix units compose") {
  auto b = build_multi_edge(3);
  auto sp = PathSpace::make(*b.graph, 1, Sign::Plus);
  auto x = QBox::matrix_unit(sp, 0, 1) * QBox::matrix_unit(sp, 1, 0);
  CHECK(x == QBox::matrix_unit(sp, 0, 0));
  CHECK((QBox::matrix_unit(sp, 0, 1) * QBox::matrix_unit(sp, 0, 1)).is_zero());
  std::mt19937_64 rng(5);
  auto one = QBox::unit(sp);
  for (int i = 0; i < 20; ++i) {
    auto r = random_element<QScalar>(sp, rng);
    CHECK(one * r == r);
    CHECK(r * one == r);
  }
}

TEST_CASE("entries off ST are refused") {
  auto g = four_cycle();
  auto sp = PathSpace::make(*g, 2, Sign::Plus);
  // paths 0 and 2 start at v0 and end at different vertices or not; find a mismatch
  int a = -1, b = -1;
  for (int i = 0; i < sp->size() && a < 0; ++i)
    for (int j = 0; j < sp->size(); ++j)
      if (sp->target(i) != sp->target(j)) {
        a = i;
        b = j;
        break;
      }
  REQUIRE(a >= 0);
  QBox x(sp);
  CHECK_THROWS_AS(x.set(a, b, QScalar(1)), Error);
}

TEST_CASE("size and sign mismatches") {
  auto g = four_cycle();
  auto p1 = PathSpace::make(*g, 1, Sign::Plus), p2 = PathSpace::make(*g, 2, Sign::Plus);
  auto m1 = PathSpace::make(*g, 1, Sign::Minus);
  try {
    (void)(QBox::unit(p1) * QBox::unit(p2));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeMismatch);
  }
  try {
    (void)(QBox::unit(p1) * QBox::unit(m1));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SignMismatch);
  }
}

TEST_CASE("orbit sums multiply like dense block matrices") {
  auto b = build_diagonal_cyclic(2);
  auto basis = fixed_point_basis<QScalar>(*b.graph, *b.oracle, 2, Sign::Plus);
  REQUIRE(basis.size() == 8);
  for (const auto& x : basis)
    for (const auto& y : basis) {
      Eigen::MatrixXd want = oracle::dense(x) * oracle::dense(y);
      CHECK((oracle::dense(x * y) - want).norm() == 0.0);
    }
  std::mt19937_64 rng(9);
  auto sp = PathSpace::make(*b.graph, 3, Sign::Minus);
  for (int i = 0; i < 20; ++i) {
    auto x = random_element<QScalar>(sp, rng), y = random_element<QScalar>(sp, rng);
    CHECK((oracle::dense(x * y) - oracle::dense(x) * oracle::dense(y)).norm() == 0.0);
    CHECK((x * y).adjoint() == y.adjoint() * x.adjoint());
    CHECK(x.adjoint().adjoint() == x);
  }
}

TEST_CASE("block dimensions are path counts squared") {
  for (const auto& b : finite_builders())
    for (int n = 0; n <= 3; ++n)
      for (Sign s : {Sign::Plus, Sign::Minus}) {
        auto sp = PathSpace::make(*b.graph, n, s);
        long long sum = 0;
        for (const auto& [blk, ids] : sp->blocks()) sum += static_cast<long long>(ids.size()) * ids.size();
        CHECK(sum == sp->st_count());
        CHECK(static_cast<long long>(QBox::unit(sp).entries().size()) == sp->size());
      }
}

TEST_CASE("trace formulas on matrix units") {
  // (2,8) tree: mu = 2 on edges leaving even vertices
  auto b = build_biregular_tree(2, 8, 3);
  const auto& g = *b.graph;
  int o = g.ball()->center;
  auto sp = PathSpace::make(g, 1, Sign::Plus, std::vector<int>{o});
  auto t = traces(QBox::matrix_unit(sp, 0, 0));
  CHECK(t.tau_r.at(o) == QScalar(2));
  CHECK(t.tau_l.at(sp->target(0)) == QScalar(mpq_class(1, 2)));
  CHECK(t.tr_m.at(o) == QScalar(mpq_class(1, 2)));  // delta = 4

  auto m = build_multi_edge(3);
  auto sm = PathSpace::make(*m.graph, 1, Sign::Plus);
  auto off = traces(QBox::matrix_unit(sm, 0, 1));
  CHECK(off.tau_l.values.empty());
  CHECK(off.tau_r.values.empty());
}

TEST_CASE("traces agree with the vertex-weight oracle and are tracial") {
  std::mt19937_64 rng(21);
  for (const auto& b : finite_builders()) {
    auto muV = oracle::walk_weights(*b.graph);
    QScalar dinv = b.graph->delta()->inverse();
    for (Sign s : {Sign::Plus, Sign::Minus})
      for (int n = 0; n <= 3; ++n) {
        auto sp = PathSpace::make(*b.graph, n, s);
        check_unit_trace(sp);
        for (int i = 0; i < 10; ++i) {
          auto x = random_element<QScalar>(sp, rng), y = random_element<QScalar>(sp, rng);
          auto t = traces(x);
          auto want = oracle::traces_by_weights(x, muV);
          CHECK(oracle::same_function(t.tau_r, want.tau_r));
          CHECK(oracle::same_function(t.tau_l, want.tau_l));
          QScalar f(1);
          for (int k = 0; k < n; ++k) f *= dinv;
          for (const auto& [v, val] : want.tau_r) CHECK(t.tr_m.at(v) == val * f);
          auto xy = traces(x * y), yx = traces(y * x);
          CHECK(xy.tau_r.equals(yx.tau_r));
          CHECK(xy.tau_l.equals(yx.tau_l));
        }
      }
  }
}

TEST_CASE("unequal weights on an ST pair break traciality") {
  auto g = unbalanced_pair();
  auto sp = PathSpace::make(*g, 1, Sign::Plus);
  auto ab = QBox::matrix_unit(sp, 0, 1), ba = QBox::matrix_unit(sp, 1, 0);
  auto l = traces(ab * ba), r = traces(ba * ab);
  CHECK(l.tau_r.at(0) == QScalar(2));
  CHECK(r.tau_r.at(0) == QScalar(mpq_class(1, 2)));
  CHECK_FALSE(l.tau_r.equals(r.tau_r));
  CHECK_FALSE(l.tau_l.equals(r.tau_l));
  CHECK_FALSE(validate_weight(*g).ok());
}

TEST_CASE("include adds one term per extending edge") {
  auto g = four_cycle();
  auto sp = PathSpace::make(*g, 1, Sign::Plus);
  auto y = include(QBox::matrix_unit(sp, 0, 0));
  CHECK(y.entries().size() == 2);
  auto one = include(QBox::unit(sp));
  CHECK(one == QBox::unit(y.space()));
}

TEST_CASE("include preserves traces and products") {
  std::mt19937_64 rng(4);
  for (const auto& b : finite_builders())
    for (int n = 0; n <= 2; ++n) {
      auto sp = PathSpace::make(*b.graph, n, Sign::Plus);
      auto big = PathSpace::make(*b.graph, n + 1, Sign::Plus);
      for (int i = 0; i < 10; ++i) {
        auto x = random_element<QScalar>(sp, rng), y = random_element<QScalar>(sp, rng);
        CHECK(traces(include(x, big)).tr_m.equals(traces(x).tr_m));
        CHECK(include(x * y, big) == include(x, big) * include(y, big));
        CHECK(include(x.adjoint(), big) == include(x, big).adjoint());
      }
    }
}

TEST_CASE("conditional expectation pins") {
  std::mt19937_64 rng(8);
  for (const auto& b : finite_builders())
    for (int n = 0; n <= 2; ++n) {
      auto sp = PathSpace::make(*b.graph, n, Sign::Plus);
      auto big = PathSpace::make(*b.graph, n + 1, Sign::Plus);
      CHECK(cond_exp(QBox::unit(big), sp) == QBox::unit(sp));
      for (int i = 0; i < 10; ++i) {
        auto x = random_element<QScalar>(sp, rng);
        auto y = random_element<QScalar>(big, rng);
        CHECK(cond_exp(include(x, big), sp) == x);
        CHECK(traces(cond_exp(y, sp)).tr_m.equals(traces(y).tr_m));
        CHECK(cond_exp(include(x, big) * y, sp) == x * cond_exp(y, sp));
        CHECK(cond_exp(y * include(x, big), sp) == cond_exp(y, sp) * x);
      }
    }
}

TEST_CASE("conditional expectation value with mu = 2, delta = 4") {
  auto b = build_biregular_tree(2, 8, 3);
  const auto& g = *b.graph;
  int o = g.ball()->center;
  auto p0 = PathSpace::make(g, 0, Sign::Plus, std::vector<int>{o});
  auto p1 = PathSpace::make(g, 1, Sign::Plus, std::vector<int>{o});
  auto e = cond_exp(QBox::matrix_unit(p1, 0, 0), p0);
  CHECK(e == QBox::matrix_unit(p0, 0, 0, QScalar(mpq_class(1, 2))));
  // the same number from the trace pin: tr_0(E(y)) = tr_1(y)
  CHECK(traces(QBox::matrix_unit(p1, 0, 0)).tr_m.at(o) == QScalar(mpq_class(1, 2)));
}

TEST_CASE("Jones projections") {
  for (const auto& b : finite_builders()) {
    const auto& g = *b.graph;
    double d = g.delta()->to_double();
    for (Sign s : {Sign::Plus, Sign::Minus}) {
      auto sp3 = PathSpace::make(g, 3, s);
      auto e1 = jones_projection<double>(sp3, 1), e2 = jones_projection<double>(sp3, 2);
      CHECK(e1.adjoint().equals(e1));
      CHECK((e1 * e1).equals(e1, 1e-9));
      CHECK((e2 * e2).equals(e2, 1e-9));
      CHECK((e1 * e2 * e1).equals(e1 * (1.0 / (d * d)), 1e-9));
      CHECK((e2 * e1 * e2).equals(e2 * (1.0 / (d * d)), 1e-9));
      auto t = traces(e2);
      for (int v : sp3->sources()) CHECK(t.tr_m.at(v) == doctest::Approx(1.0 / (d * d)).epsilon(1e-12));
    }
  }
  // sqrt(mu) leaves Q(sqrt 6) on the BH graph
  auto bh = bh_s3();
  auto sp = PathSpace::make(*bh.graph, 2, Sign::Plus);
  try {
    (void)jones_projection<QScalar>(sp, 1);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ApproximateOnly);
  }
  // exact where mu = 1
  auto g = four_cycle();
  auto e = jones_projection<QScalar>(PathSpace::make(*g, 2, Sign::Plus), 1);
  CHECK(e * e == e);
}

TEST_CASE("Rev is an involution") {
  std::mt19937_64 rng(2);
  for (const auto& b : finite_builders())
    for (int n = 1; n <= 2; ++n) {
      auto sp = PathSpace::make(*b.graph, n, Sign::Plus);
      for (int i = 0; i < 10; ++i) {
        auto x = random_element<QScalar>(sp, rng);
        CHECK(rev(rev(x), sp) == x);
      }
    }
}

TEST_CASE("unitary towers") {
  auto g = four_cycle();
  auto p1 = PathSpace::make(*g, 1, Sign::Plus);
  auto one = QBox::unit(p1);
  for (int n = 1; n <= 4; ++n)
    for (Sign s : {Sign::Plus, Sign::Minus}) CHECK(unitary_tower(one, n, s) == QBox::unit(PathSpace::make(*g, n, s)));

  QBox u(p1);
  for (int a = 0; a < p1->size(); ++a) u.set(a, a, QScalar(a % 2 == 0 ? 1 : -1));
  std::mt19937_64 rng(12);
  for (Sign s : {Sign::Plus, Sign::Minus})
    for (int n = 1; n <= 3; ++n) {
      auto un = unitary_tower(u, n, s);
      CHECK(is_unitary(un));
      auto un1 = unitary_tower(u, n + 1, s);
      auto sp = un.space();
      auto big = un1.space();
      for (int i = 0; i < 5; ++i) {
        auto x = random_element<QScalar>(sp, rng);
        auto y = random_element<QScalar>(big, rng);
        auto ax = ad_action(un, x);
        CHECK(traces(ax).tr_m.equals(traces(x).tr_m));
        CHECK(ad_action(un1, include(x, big)) == include(ax, big));
        CHECK(cond_exp(ad_action(un1, y), sp) == ad_action(un, cond_exp(y, sp)));
      }
    }
  CHECK_THROWS_AS(unitary_tower(QBox::unit(p1) * QScalar(2), 2, Sign::Plus), Error);
}

TEST_CASE("unitary mixing parallel edges") {
  auto b = build_multi_edge(3);
  auto p1 = PathSpace::make(*b.graph, 1, Sign::Plus);
  QBox u(p1);  // cyclic permutation of the three edges
  for (int a = 0; a < 3; ++a) u.set(a, (a + 1) % 3, QScalar(1));
  REQUIRE(is_unitary(u));
  std::mt19937_64 rng(13);
  for (int n = 1; n <= 3; ++n) {
    auto un = unitary_tower(u, n, Sign::Plus);
    auto un1 = unitary_tower(u, n + 1, Sign::Plus);
    CHECK(is_unitary(un));
    auto y = random_element<QScalar>(un1.space(), rng);
    CHECK(cond_exp(ad_action(un1, y), un.space()) == ad_action(un, cond_exp(y, un.space())));
  }
}

TEST_CASE("trace Gram matrix on matrix units is diagonal and positive") {
  auto b = bh_s3();
  const auto& g = *b.graph;
  auto w = vertex_weights(g, 0);
  auto sp = PathSpace::make(g, 2, Sign::Plus);
  std::vector<QBox> units;
  for (const auto& [blk, ids] : sp->blocks())
    for (int a : ids)
      for (int c : ids) units.push_back(QBox::matrix_unit(sp, a, c));
  for (size_t i = 0; i < units.size(); ++i)
    for (size_t j = 0; j < units.size(); ++j) {
      auto t = traces(units[i] * units[j].adjoint()).tr_m;
      QScalar gram;
      for (const auto& [v, x] : t.values) gram += x * w.mu_V[v] * w.mu_V[v];
      if (i == j) CHECK(gram > QScalar(0));
      else CHECK(gram.is_zero());
    }
}

}  // TEST_SUITE
