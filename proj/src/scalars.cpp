#include "pa/scalars.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

namespace pa {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::MixedField: return "MixedField";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InconsistentMu: return "InconsistentMu";
    case ErrorCode::RowSumMismatch: return "RowSumMismatch";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::NotTransitive: return "NotTransitive";
    case ErrorCode::EigenvectorNotInField: return "EigenvectorNotInField";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::SignMismatch: return "SignMismatch";
    case ErrorCode::ApproximateOnly: return "ApproximateOnly";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotAutomorphism: return "NotAutomorphism";
    case ErrorCode::WeightNotPreserved: return "WeightNotPreserved";
    case ErrorCode::CenterSplitFailure: return "CenterSplitFailure";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::KMismatch: return "KMismatch";
    case ErrorCode::KOverflow: return "KOverflow";
    case ErrorCode::ElementNotRepresentable: return "ElementNotRepresentable";
    case ErrorCode::NotBiInvariant: return "NotBiInvariant";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::OrbitNotRepresentable: return "OrbitNotRepresentable";
    case ErrorCode::IndexInfinite: return "IndexInfinite";
    case ErrorCode::ScopeTooSmall: return "ScopeTooSmall";
    case ErrorCode::AxiomFailure: return "AxiomFailure";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::NotSubfactorCandidate: return "NotSubfactorCandidate";
  }
  return "Unknown";
}

long squarefree_part(long n) {
  if (n <= 0) throw Error(ErrorCode::InvalidParameters, "square-free part of non-positive integer");
  long out = 1;
  for (long p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e % 2) out *= p;
  }
  return out * n;
}

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (sgn(q) == 0) return mpq_class(0);
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  mpq_class r(rn, rd);
  r.canonicalize();
  return r;
}

QScalar::QScalar(const mpq_class& a, const mpq_class& b, long d) : a_(a), b_(b), d_(d) {
  if (d <= 0) throw Error(ErrorCode::InvalidParameters, "field tag must be positive");
  if (squarefree_part(d) != d) throw Error(ErrorCode::InvalidParameters, "field tag not square-free");
  normalize();
}

void QScalar::normalize() {
  a_.canonicalize();
  b_.canonicalize();
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
}

QScalar QScalar::rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return QScalar(q);
}

QScalar QScalar::sqrt_of(long n) {
  if (n < 0) throw Error(ErrorCode::InvalidParameters, "sqrt of negative integer");
  if (n == 0) return QScalar();
  long s = squarefree_part(n);
  long f2 = n / s;
  long f = std::lround(std::sqrt(static_cast<double>(f2)));
  while (f * f > f2) --f;
  while ((f + 1) * (f + 1) <= f2) ++f;
  if (s == 1) return QScalar(f);
  return QScalar(mpq_class(0), mpq_class(f), s);
}

long QScalar::merged_field(const QScalar& o) const {
  if (d_ == o.d_) return d_;
  if (d_ == 1) return o.d_;
  if (o.d_ == 1) return d_;
  throw Error(ErrorCode::MixedField,
              "sqrt(" + std::to_string(d_) + ") vs sqrt(" + std::to_string(o.d_) + ")");
}

int QScalar::sign() const {
  int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: compare a^2 with b^2 d
  mpq_class lhs = a_ * a_;
  mpq_class rhs = b_ * b_ * d_;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // impossible for square-free d > 1, kept for safety
  return c > 0 ? sa : sb;
}

QScalar QScalar::operator-() const {
  QScalar r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QScalar& QScalar::operator+=(const QScalar& o) {
  d_ = merged_field(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QScalar& QScalar::operator-=(const QScalar& o) {
  d_ = merged_field(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QScalar& QScalar::operator*=(const QScalar& o) {
  long d = merged_field(o);
  mpq_class na = a_ * o.a_ + b_ * o.b_ * d;
  mpq_class nb = a_ * o.b_ + b_ * o.a_;
  a_ = na;
  b_ = nb;
  d_ = d;
  return *this;
}

QScalar QScalar::galois() const {
  QScalar r = *this;
  r.b_ = -r.b_;
  return r;
}

QScalar QScalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  mpq_class norm = a_ * a_ - b_ * b_ * d_;
  QScalar r;
  r.d_ = d_;
  r.a_ = a_ / norm;
  r.b_ = -b_ / norm;
  return r;
}

QScalar& QScalar::operator/=(const QScalar& o) {
  merged_field(o);
  return *this *= o.inverse();
}

bool operator==(const QScalar& x, const QScalar& y) {
  if (x.a_ != y.a_ || x.b_ != y.b_) return false;
  return sgn(x.b_) == 0 || x.d_ == y.d_;
}

std::optional<QScalar> QScalar::sqrt() const {
  int s = sign();
  if (s < 0) return std::nullopt;
  if (s == 0) return QScalar(mpq_class(0), mpq_class(0), d_);
  if (sgn(b_) == 0) {
    if (auto r = rational_sqrt(a_)) return QScalar(*r, mpq_class(0), d_);
    if (d_ > 1) {
      if (auto r = rational_sqrt(a_ / d_)) return QScalar(mpq_class(0), *r, d_);
    }
    return std::nullopt;
  }
  // (p + q sqrt d)^2 = a + b sqrt d  =>  p^2 = (a +- sqrt(a^2 - d b^2)) / 2
  auto disc = rational_sqrt(a_ * a_ - b_ * b_ * d_);
  if (!disc) return std::nullopt;
  for (int pm : {1, -1}) {
    mpq_class p2 = (a_ + pm * *disc) / 2;
    if (sgn(p2) <= 0) continue;
    auto p = rational_sqrt(p2);
    if (!p) continue;
    mpq_class q = b_ / (2 * *p);
    QScalar cand(*p, q, d_);
    if (cand * cand != *this) continue;
    if (cand.sign() < 0) cand = -cand;
    return cand;
  }
  return std::nullopt;
}

double QScalar::to_double() const {
  if (sgn(b_) == 0) return a_.get_d();
  return static_cast<double>(ApproxScalar::extended(*this));
}

std::string QScalar::str() const {
  if (sgn(b_) == 0) return a_.get_str();
  std::string out = sgn(a_) == 0 ? std::string("0") : a_.get_str();
  mpq_class ab = abs(b_);
  out += sgn(b_) > 0 ? "+" : "-";
  out += ab.get_str() + "*sqrt(" + std::to_string(d_) + ")";
  return out;
}

namespace {

mpq_class parse_rational(const std::string& s, const std::string& whole) {
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational in '" + whole + "'");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
  std::string t = s[0] == '+' ? s.substr(1) : s;
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
  if (sgn(q.get_den()) == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator in '" + whole + "'");
  q.canonicalize();
  return q;
}

}  // namespace

QScalar QScalar::parse(const std::string& text, long field_d) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty scalar");
  auto pos = s.find("sqrt(");
  if (pos == std::string::npos) {
    QScalar r(parse_rational(s, text));
    if (field_d > 1) r.d_ = field_d;
    return r;
  }
  auto close = s.find(')', pos);
  if (close == std::string::npos || close + 1 != s.size())
    throw Error(ErrorCode::ParseError, "malformed sqrt term in '" + text + "'");
  std::string radicand = s.substr(pos + 5, close - pos - 5);
  long n = 0;
  try {
    size_t used = 0;
    n = std::stol(radicand, &used);
    if (used != radicand.size() || n <= 0) throw std::invalid_argument("radicand");
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad radicand in '" + text + "'");
  }
  // split "<rational part><sign><coeff>*" before sqrt(
  std::string head = s.substr(0, pos);
  mpq_class coeff(1);
  mpq_class a(0);
  if (!head.empty() && head.back() == '*') head.pop_back();
  size_t split = std::string::npos;
  for (size_t i = head.size(); i-- > 1;)
    if (head[i] == '+' || head[i] == '-') {
      split = i;
      break;
    }
  std::string coeff_str = head;
  if (split != std::string::npos) {
    a = parse_rational(head.substr(0, split), text);
    coeff_str = head.substr(split);
  }
  if (coeff_str.empty() || coeff_str == "+") coeff = 1;
  else if (coeff_str == "-") coeff = -1;
  else coeff = parse_rational(coeff_str, text);

  QScalar root = sqrt_of(n);
  QScalar r = QScalar(a) + QScalar(coeff) * root;
  if (field_d > 1 && r.d_ != 1 && r.d_ != field_d)
    throw Error(ErrorCode::MixedField, "'" + text + "' not in Q(sqrt(" + std::to_string(field_d) + "))");
  if (field_d > 1) r.d_ = field_d;
  return r;
}

std::ostream& operator<<(std::ostream& os, const QScalar& x) { return os << x.str(); }

Extended ApproxScalar::extended(const QScalar& q) {
  Extended a(q.a().get_num().get_str());
  a /= Extended(q.a().get_den().get_str());
  if (sgn(q.b()) == 0) return a;
  Extended b(q.b().get_num().get_str());
  b /= Extended(q.b().get_den().get_str());
  return a + b * boost::multiprecision::sqrt(Extended(q.d()));
}

ApproxScalar ApproxScalar::from(const QScalar& q, double tol) {
  return ApproxScalar(q.to_double(), tol);
}

bool ApproxScalar::near(double other) const {
  double scale = std::max({1.0, std::fabs(value_), std::fabs(other)});
  return std::fabs(value_ - other) <= tol_ * scale;
}

}  // namespace pa
