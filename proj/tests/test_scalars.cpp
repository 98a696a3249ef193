#include <cmath>
#include <random>

#include "doctest.h"
#include "pa/scalars.hpp"

using namespace pa;

namespace {

QScalar random_q(std::mt19937_64& rng, long d) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  return QScalar(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)), d);
}

}  // namespace

TEST_SUITE("scalars") {

TEST_CASE("conjugate product and inverse") {
  QScalar s2 = QScalar::sqrt_of(2);
  CHECK((QScalar(1) + s2) * (QScalar(1) - s2) == QScalar(-1));
  CHECK(s2.inverse() == QScalar(mpq_class(0), mpq_class(1, 2), 2));
  CHECK(s2 * s2.inverse() == QScalar(1));
}

TEST_CASE("exact sign near zero") {
  QScalar x = QScalar(3) - QScalar(2) * QScalar::sqrt_of(2);  // 3 - 2.828...
  CHECK(x.sign() > 0);
  QScalar y = QScalar(mpq_class(99, 70)) - QScalar::sqrt_of(2);  // 1.414285.. - 1.414213..
  CHECK(y.sign() > 0);
  QScalar z = QScalar(mpq_class(140, 99)) - QScalar::sqrt_of(2);
  CHECK(z.sign() < 0);
  CHECK(compare(QScalar::sqrt_of(6), QScalar(mpq_class(5, 2))) < 0);
}

TEST_CASE("sqrt_of reduces to the square-free tag") {
  CHECK(QScalar::sqrt_of(8) == QScalar(2) * QScalar::sqrt_of(2));
  CHECK(QScalar::sqrt_of(16) == QScalar(4));
  CHECK(QScalar::sqrt_of(16).is_rational());
  CHECK(squarefree_part(72) == 2);
  CHECK(squarefree_part(6) == 6);
}

TEST_CASE("sqrt membership") {
  QScalar x = QScalar(3) + QScalar(2) * QScalar::sqrt_of(2);  // (1 + sqrt2)^2
  auto r = x.sqrt();
  REQUIRE(r.has_value());
  CHECK(*r == QScalar(1) + QScalar::sqrt_of(2));
  CHECK_FALSE(QScalar::sqrt_of(2).sqrt().has_value());
  CHECK(QScalar(mpq_class(9, 4)).sqrt() == QScalar(mpq_class(3, 2)));
  CHECK_FALSE(QScalar(mpq_class(3, 2)).sqrt().has_value());
  CHECK(QScalar(mpq_class(3, 2), mpq_class(0), 6).sqrt() == QScalar(mpq_class(0), mpq_class(1, 2), 6));
}

TEST_CASE("mixed fields are rejected") {
  QScalar a = QScalar::sqrt_of(2), b = QScalar::sqrt_of(3);
  CHECK_THROWS_AS(a + b, Error);
  try {
    (void)(a * b);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MixedField);
  }
  // rationals mix with anything
  CHECK(a + QScalar(1) == QScalar(mpq_class(1), mpq_class(1), 2));
}

TEST_CASE("division by zero") {
  try {
    (void)QScalar(0).inverse();
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(7);
  for (long d : {2L, 3L, 6L}) {
    for (int i = 0; i < 200; ++i) {
      QScalar x = random_q(rng, d), y = random_q(rng, d), z = random_q(rng, d);
      CHECK((x + y) + z == x + (y + z));
      CHECK((x * y) * z == x * (y * z));
      CHECK(x * (y + z) == x * y + x * z);
      CHECK(x * y == y * x);
      if (!x.is_zero()) CHECK(x * x.inverse() == QScalar(1));
      // sign agrees with the floating value away from zero
      double v = x.to_double();
      if (std::abs(v) > 1e-6) CHECK(x.sign() == (v > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("approximation round trip") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    QScalar x = random_q(rng, 5);
    double direct = x.a().get_d() + x.b().get_d() * std::sqrt(5.0);
    CHECK(ApproxScalar::from(x).near(direct));
    Extended e = ApproxScalar::extended(x);
    CHECK(std::abs(e.convert_to<double>() - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("text encoding") {
  QScalar x = QScalar::parse("1/2+3/4*sqrt(2)");
  CHECK(x == QScalar(mpq_class(1, 2), mpq_class(3, 4), 2));
  CHECK(QScalar::parse("-5/3") == QScalar(mpq_class(-5, 3)));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    QScalar y = random_q(rng, 6);
    CHECK(QScalar::parse(y.str()) == y);
  }
  CHECK_THROWS_AS(QScalar::parse("1/0"), Error);
  CHECK_THROWS_AS(QScalar::parse("abc"), Error);
}

}  // TEST_SUITE
