#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "pa/error.hpp"

namespace pa {

// a + b*sqrt(d) with d square-free. d == 1 is the rational tag and mixes
// freely with any other field; two different non-trivial tags never mix.
class QScalar {
 public:
  QScalar() : a_(0), b_(0), d_(1) {}
  QScalar(long v) : a_(v), b_(0), d_(1) {}  // NOLINT(implicit)
  QScalar(int v) : a_(v), b_(0), d_(1) {}   // NOLINT(implicit)
  QScalar(const mpq_class& a) : a_(a), b_(0), d_(1) { a_.canonicalize(); }  // NOLINT
  QScalar(const mpq_class& a, const mpq_class& b, long d);

  static QScalar rational(long num, long den = 1);
  static QScalar sqrt_of(long n);  // sqrt(n) for n >= 0, exact in Q(sqrt(sqfree(n)))

  const mpq_class& a() const { return a_; }
  const mpq_class& b() const { return b_; }
  long d() const { return d_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }
  int sign() const;

  QScalar operator-() const;
  QScalar& operator+=(const QScalar& o);
  QScalar& operator-=(const QScalar& o);
  QScalar& operator*=(const QScalar& o);
  QScalar& operator/=(const QScalar& o);
  friend QScalar operator+(QScalar x, const QScalar& y) { return x += y; }
  friend QScalar operator-(QScalar x, const QScalar& y) { return x -= y; }
  friend QScalar operator*(QScalar x, const QScalar& y) { return x *= y; }
  friend QScalar operator/(QScalar x, const QScalar& y) { return x /= y; }

  QScalar inverse() const;
  QScalar conj() const { return *this; }  // real field
  // Galois conjugate a - b*sqrt(d).
  QScalar galois() const;

  friend bool operator==(const QScalar& x, const QScalar& y);
  friend bool operator!=(const QScalar& x, const QScalar& y) { return !(x == y); }
  // Exact sign of x - y.
  friend int compare(const QScalar& x, const QScalar& y) { return (x - y).sign(); }
  friend bool operator<(const QScalar& x, const QScalar& y) { return compare(x, y) < 0; }
  friend bool operator<=(const QScalar& x, const QScalar& y) { return compare(x, y) <= 0; }
  friend bool operator>(const QScalar& x, const QScalar& y) { return compare(x, y) > 0; }
  friend bool operator>=(const QScalar& x, const QScalar& y) { return compare(x, y) >= 0; }

  // Positive square root when it lies in the same field.
  std::optional<QScalar> sqrt() const;

  double to_double() const;
  std::string str() const;
  static QScalar parse(const std::string& text, long field_d = 0);

 private:
  void normalize();
  long merged_field(const QScalar& o) const;

  mpq_class a_, b_;
  long d_;
};

std::ostream& operator<<(std::ostream& os, const QScalar& x);

long squarefree_part(long n);
std::optional<mpq_class> rational_sqrt(const mpq_class& q);

using Extended = boost::multiprecision::cpp_dec_float_50;

class ApproxScalar {
 public:
  static constexpr double kDefaultTol = 1e-9;

  ApproxScalar() = default;
  explicit ApproxScalar(double v, double tol = kDefaultTol) : value_(v), tol_(tol) {}
  static ApproxScalar from(const QScalar& q, double tol = kDefaultTol);
  static Extended extended(const QScalar& q);

  double value() const { return value_; }
  double tol() const { return tol_; }
  bool near(double other) const;
  bool near(const ApproxScalar& o) const { return near(o.value_); }

 private:
  double value_ = 0.0;
  double tol_ = kDefaultTol;
};

// Uniform scalar interface for templated algebra code.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<QScalar> {
  static constexpr bool exact = true;
  static QScalar from(const QScalar& q) { return q; }
  static bool is_zero(const QScalar& x) { return x.is_zero(); }
  static double to_double(const QScalar& x) { return x.to_double(); }
  static bool equal(const QScalar& x, const QScalar& y, double = 0) { return x == y; }
  static QScalar from_double(double) { throw Error(ErrorCode::ApproximateOnly, "no exact value"); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double from(const QScalar& q) { return q.to_double(); }
  static bool is_zero(double x) { return x == 0.0; }
  static double to_double(double x) { return x; }
  static bool equal(double x, double y, double tol = 1e-9) {
    double s = std::max({1.0, x < 0 ? -x : x, y < 0 ? -y : y});
    double d = x - y;
    return (d < 0 ? -d : d) <= tol * s;
  }
  static double from_double(double v) { return v; }
};

}  // namespace pa
