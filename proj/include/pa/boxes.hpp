#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "pa/paths.hpp"

namespace pa {

// Function on V^sign, i.e. an element of P_0^sign.
template <class S>
struct P0Element {
  Sign sign = Sign::Plus;
  std::map<int, S> values;

  S at(int v) const {
    auto it = values.find(v);
    return it == values.end() ? S(0) : it->second;
  }
  void add(int v, const S& x) {
    S& slot = values[v];
    slot += x;
  }
  P0Element scaled(const S& c) const {
    P0Element r{sign, {}};
    for (const auto& [v, x] : values) r.values[v] = x * c;
    return r;
  }
  bool equals(const P0Element& o, double tol = 1e-9) const {
    for (const auto& [v, x] : values)
      if (!ScalarTraits<S>::equal(x, o.at(v), tol)) return false;
    for (const auto& [v, x] : o.values)
      if (!ScalarTraits<S>::equal(x, at(v), tol)) return false;
    return true;
  }
};

// Element of P_n^sign in the matrix-unit basis e_{a,b}, (a,b) in ST_n.
template <class S>
class BoxElement {
 public:
  using Key = std::pair<int, int>;

  BoxElement() = default;
  explicit BoxElement(SpacePtr space) : space_(std::move(space)) {}

  static BoxElement unit(SpacePtr space) {
    BoxElement r(space);
    for (int a = 0; a < space->size(); ++a) r.entries_[{a, a}] = S(1);
    return r;
  }
  static BoxElement matrix_unit(SpacePtr space, int a, int b, const S& c = S(1)) {
    BoxElement r(std::move(space));
    r.set(a, b, c);
    return r;
  }

  const SpacePtr& space() const { return space_; }
  int n() const { return space_->n(); }
  Sign sign() const { return space_->sign(); }
  const std::map<Key, S>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  S get(int a, int b) const {
    auto it = entries_.find({a, b});
    return it == entries_.end() ? S(0) : it->second;
  }
  void set(int a, int b, const S& v) {
    check_st(a, b);
    if (ScalarTraits<S>::is_zero(v)) entries_.erase({a, b});
    else entries_[{a, b}] = v;
  }
  void add(int a, int b, const S& v) {
    if (ScalarTraits<S>::is_zero(v)) return;
    check_st(a, b);
    auto it = entries_.find({a, b});
    if (it == entries_.end()) {
      entries_.emplace(Key{a, b}, v);
    } else {
      it->second += v;
      if (ScalarTraits<S>::is_zero(it->second)) entries_.erase(it);
    }
  }

  BoxElement& operator+=(const BoxElement& o) {
    require_same(o);
    for (const auto& [k, v] : o.entries_) add(k.first, k.second, v);
    return *this;
  }
  BoxElement& operator-=(const BoxElement& o) {
    require_same(o);
    for (const auto& [k, v] : o.entries_) add(k.first, k.second, -v);
    return *this;
  }
  BoxElement& operator*=(const S& c) {
    if (ScalarTraits<S>::is_zero(c)) {
      entries_.clear();
      return *this;
    }
    for (auto& [k, v] : entries_) v *= c;
    return *this;
  }
  friend BoxElement operator+(BoxElement x, const BoxElement& y) { return x += y; }
  friend BoxElement operator-(BoxElement x, const BoxElement& y) { return x -= y; }
  friend BoxElement operator*(BoxElement x, const S& c) { return x *= c; }
  friend BoxElement operator*(const S& c, BoxElement x) { return x *= c; }

  // (x*)_{a,b} = conj(x_{b,a}); scalars are real so conj is the identity.
  BoxElement adjoint() const {
    BoxElement r(space_);
    for (const auto& [k, v] : entries_) r.entries_[{k.second, k.first}] = v;
    return r;
  }

  bool equals(const BoxElement& o, double tol = 1e-9) const {
    for (const auto& [k, v] : entries_)
      if (!ScalarTraits<S>::equal(v, o.get(k.first, k.second), tol)) return false;
    for (const auto& [k, v] : o.entries_)
      if (!ScalarTraits<S>::equal(v, get(k.first, k.second), tol)) return false;
    return true;
  }
  friend bool operator==(const BoxElement& x, const BoxElement& y) { return x.equals(y); }

  void require_same(const BoxElement& o) const {
    if (space_->n() != o.space_->n()) throw Error(ErrorCode::SizeMismatch, "box sizes differ");
    if (space_->sign() != o.space_->sign()) throw Error(ErrorCode::SignMismatch, "box signs differ");
    if (!space_->same_space(*o.space_)) throw Error(ErrorCode::SizeMismatch, "different path spaces");
  }

 private:
  void check_st(int a, int b) const {
    if (space_->source(a) != space_->source(b) || space_->target(a) != space_->target(b))
      throw Error(ErrorCode::InvalidParameters, "entry outside ST_n");
  }

  SpacePtr space_;
  std::map<Key, S> entries_;
};

template <class S>
BoxElement<S> box_mul(const BoxElement<S>& x, const BoxElement<S>& y) {
  x.require_same(y);
  BoxElement<S> r(x.space());
  const auto& ye = y.entries();
  for (const auto& [k, v] : x.entries()) {
    auto it = ye.lower_bound({k.second, -1});
    for (; it != ye.end() && it->first.first == k.second; ++it) r.add(k.first, it->first.second, v * it->second);
  }
  return r;
}

template <class S>
BoxElement<S> operator*(const BoxElement<S>& x, const BoxElement<S>& y) {
  return box_mul(x, y);
}

template <class S>
S scalar_delta(const WeightedGraph& g) {
  if (!g.delta()) throw Error(ErrorCode::InvalidParameters, "graph has no modulus");
  return ScalarTraits<S>::from(*g.delta());
}

template <class S>
struct Traces {
  P0Element<S> tau_l, tau_r, tr_m;
};

// tau_l(e_{a,b}) = [a=b] mu(abar) e_{t(a)}, tau_r(e_{a,b}) = [a=b] mu(a) e_{s(a)},
// tr_m = delta^{-m} tau_r.
template <class S>
Traces<S> traces(const BoxElement<S>& x) {
  const PathSpace& sp = *x.space();
  const WeightedGraph& g = sp.graph();
  Traces<S> t;
  t.tau_r.sign = sp.sign();
  t.tr_m.sign = sp.sign();
  t.tau_l.sign = (sp.n() % 2 == 0) ? sp.sign() : flip(sp.sign());
  for (const auto& [k, v] : x.entries()) {
    if (k.first != k.second) continue;
    S m = ScalarTraits<S>::from(sp.mu(k.first));
    t.tau_r.add(sp.source(k.first), v * m);
    t.tau_l.add(sp.target(k.first), v / m);
  }
  S dinv = S(1) / scalar_delta<S>(g);
  S f(1);
  for (int i = 0; i < sp.n(); ++i) f *= dinv;
  t.tr_m = t.tau_r.scaled(f);
  t.tr_m.sign = sp.sign();
  return t;
}

// P_n -> P_{n+1}: e_{a,b} -> sum_c e_{ac,bc}.
template <class S>
BoxElement<S> include(const BoxElement<S>& x, const SpacePtr& bigger) {
  const PathSpace& sp = *x.space();
  if (bigger->n() != sp.n() + 1 || bigger->sign() != sp.sign())
    throw Error(ErrorCode::SizeMismatch, "include needs P_{n+1} of the same sign");
  const WeightedGraph& g = sp.graph();
  BoxElement<S> r(bigger);
  for (const auto& [k, v] : x.entries()) {
    int t = sp.target(k.first);
    for (int e : g.incident(t)) {
      auto ia = bigger->extend_index(sp.path(k.first), e);
      auto ib = bigger->extend_index(sp.path(k.second), e);
      if (!ia || !ib) throw Error(ErrorCode::TruncationTooSmall, "extended path outside the enumerated space");
      r.add(*ia, *ib, v);
    }
  }
  return r;
}

template <class S>
BoxElement<S> include(const BoxElement<S>& x) {
  const PathSpace& sp = *x.space();
  return include(x, PathSpace::make(sp.graph(), sp.n() + 1, sp.sign(), sp.sources()));
}

// E_P: P_{n+1} -> P_n, e_{ac,bd} -> delta^{-1} [c=d] mu(c) e_{a,b}.
template <class S>
BoxElement<S> cond_exp(const BoxElement<S>& y, const SpacePtr& smaller) {
  const PathSpace& big = *y.space();
  if (smaller->n() + 1 != big.n() || smaller->sign() != big.sign())
    throw Error(ErrorCode::SizeMismatch, "cond_exp needs P_n below P_{n+1}");
  const WeightedGraph& g = big.graph();
  S dinv = S(1) / scalar_delta<S>(g);
  BoxElement<S> r(smaller);
  for (const auto& [k, v] : y.entries()) {
    const Path& pa = big.path(k.first);
    const Path& pb = big.path(k.second);
    int c = pa.edges.back();
    if (c != pb.edges.back()) continue;
    Path a{pa.start, {pa.edges.begin(), pa.edges.end() - 1}};
    Path b{pb.start, {pb.edges.begin(), pb.edges.end() - 1}};
    auto ia = smaller->index_of(a);
    auto ib = smaller->index_of(b);
    if (!ia || !ib) throw Error(ErrorCode::TruncationTooSmall, "prefix outside the enumerated space");
    int from = smaller->target(*ia);
    r.add(*ia, *ib, v * dinv * ScalarTraits<S>::from(g.weight_from(c, from)));
  }
  return r;
}

template <class S>
BoxElement<S> cond_exp(const BoxElement<S>& y) {
  const PathSpace& sp = *y.space();
  if (sp.n() == 0) throw Error(ErrorCode::SizeMismatch, "cond_exp from P_0");
  return cond_exp(y, PathSpace::make(sp.graph(), sp.n() - 1, sp.sign(), sp.sources()));
}

// sqrt of a weight in the scalar type (exact only when the root stays in the field).
template <class S>
S scalar_sqrt(const QScalar& q) {
  if constexpr (ScalarTraits<S>::exact) {
    auto r = q.sqrt();
    if (!r) throw Error(ErrorCode::ApproximateOnly, "sqrt(" + q.str() + ") is outside the field");
    return *r;
  } else {
    return std::sqrt(q.to_double());
  }
}

// Jones projection e_i in P_m (1 <= i <= m-1) acting on strands i, i+1:
// e[(p c cbar q), (p c' c'bar q)] = delta^{-1} sqrt(mu(c) mu(c')).
template <class S>
BoxElement<S> jones_projection(const SpacePtr& space, int i) {
  const PathSpace& sp = *space;
  const WeightedGraph& g = sp.graph();
  int m = sp.n();
  if (i < 1 || i >= m) throw Error(ErrorCode::InvalidParameters, "Jones index out of range");
  S dinv = S(1) / scalar_delta<S>(g);
  BoxElement<S> e(space);
  for (int a = 0; a < sp.size(); ++a) {
    const Path& p = sp.path(a);
    if (p.edges[i - 1] != p.edges[i]) continue;  // strands i, i+1 must form a cap
    auto verts = path_vertices(g, p);
    int v = verts[i - 1];
    S mc = scalar_sqrt<S>(g.weight_from(p.edges[i - 1], v));
    for (int c2 : g.incident(v)) {
      Path q = p;
      q.edges[i - 1] = c2;
      q.edges[i] = c2;
      auto b = sp.index_of(q);
      if (!b) throw Error(ErrorCode::TruncationTooSmall, "cap partner outside the enumerated space");
      e.add(a, *b, dinv * mc * scalar_sqrt<S>(g.weight_from(c2, v)));
    }
  }
  return e;
}

// Rev(e_{a,b}) = e_{abar,bbar}; the target space is built on the path ends.
template <class S>
BoxElement<S> rev(const BoxElement<S>& x, SpacePtr target = nullptr) {
  const PathSpace& sp = *x.space();
  const WeightedGraph& g = sp.graph();
  Sign ts = sp.n() % 2 == 0 ? sp.sign() : flip(sp.sign());
  if (!target) {
    std::vector<int> ends;
    for (int i = 0; i < sp.size(); ++i) ends.push_back(sp.target(i));
    target = PathSpace::make(g, sp.n(), ts, ends);
  }
  BoxElement<S> r(target);
  for (const auto& [k, v] : x.entries()) {
    auto ia = target->index_of(reversed(g, sp.path(k.first)));
    auto ib = target->index_of(reversed(g, sp.path(k.second)));
    if (!ia || !ib) throw Error(ErrorCode::TruncationTooSmall, "reversed path outside target space");
    r.add(*ia, *ib, v);
  }
  return r;
}

// sh: P_n -> P_{n+2}, e_{a,b} -> sum_{c in C_2, t(c) = s(a)} e_{ca,cb}.
template <class S>
BoxElement<S> shift(const BoxElement<S>& x, const SpacePtr& target) {
  const PathSpace& sp = *x.space();
  if (target->n() != sp.n() + 2 || target->sign() != sp.sign())
    throw Error(ErrorCode::SizeMismatch, "shift needs P_{n+2} of the same sign");
  BoxElement<S> r(target);
  for (int P = 0; P < target->size(); ++P) {
    const Path& p = target->path(P);
    Path tail{target->graph().other_end(p.edges[1], target->graph().other_end(p.edges[0], p.start)),
              {p.edges.begin() + 2, p.edges.end()}};
    auto ia = sp.index_of(tail);
    if (!ia) continue;
    for (const auto& [k, v] : x.entries()) {
      if (k.first != *ia) continue;
      Path q{p.start, {p.edges[0], p.edges[1]}};
      const Path& b = sp.path(k.second);
      q.edges.insert(q.edges.end(), b.edges.begin(), b.edges.end());
      auto ib = target->index_of(q);
      if (!ib) throw Error(ErrorCode::TruncationTooSmall, "shifted path outside target space");
      r.add(P, *ib, v);
    }
  }
  return r;
}

// Place y in P_1^s on strand j (1-based) of P_m: e_{c,d} -> sum_{p,q} e_{pcq,pdq}.
template <class S>
BoxElement<S> on_strand(const BoxElement<S>& y, int j, const SpacePtr& target) {
  const PathSpace& ys = *y.space();
  if (ys.n() != 1) throw Error(ErrorCode::SizeMismatch, "strand factor must lie in P_1");
  const int m = target->n();
  if (j < 1 || j > m) throw Error(ErrorCode::InvalidParameters, "strand out of range");
  const WeightedGraph& g = target->graph();
  BoxElement<S> r(target);
  for (int P = 0; P < target->size(); ++P) {
    const Path& p = target->path(P);
    auto verts = path_vertices(g, p);
    int v = verts[j - 1];
    if (!g.has_parity(v, ys.sign())) throw Error(ErrorCode::SignMismatch, "strand parity mismatch");
    auto ic = ys.index_of(Path{v, {p.edges[j - 1]}});
    if (!ic) continue;
    for (const auto& [k, val] : y.entries()) {
      if (k.first != *ic) continue;
      Path q = p;
      q.edges[j - 1] = ys.path(k.second).edges[0];
      auto iq = target->index_of(q);
      if (!iq) throw Error(ErrorCode::TruncationTooSmall, "strand image outside target space");
      r.add(P, *iq, val);
    }
  }
  return r;
}

template <class S>
bool is_unitary(const BoxElement<S>& u, double tol = 1e-9) {
  auto one = BoxElement<S>::unit(u.space());
  return box_mul(u, u.adjoint()).equals(one, tol) && box_mul(u.adjoint(), u).equals(one, tol);
}

// u_n^sign for u unitary in P_1^+: strand j carries u or Rev(u) alternately
// (plus tower starts with u, minus tower with Rev(u)), built by the recursion
// x_m = x_{m-1} * (factor on strand m).
template <class S>
BoxElement<S> unitary_tower(const BoxElement<S>& u, int n, Sign sign, std::optional<std::vector<int>> sources = std::nullopt) {
  if (u.n() != 1 || u.sign() != Sign::Plus) throw Error(ErrorCode::SizeMismatch, "u must lie in P_1^+");
  if (!is_unitary(u)) throw Error(ErrorCode::NotUnitary, "u is not unitary");
  const WeightedGraph& g = u.space()->graph();
  auto minus1 = PathSpace::make(g, 1, Sign::Minus);
  BoxElement<S> ru = rev(u, minus1);
  auto space = PathSpace::make(g, n, sign, sources);
  if (n == 0) return BoxElement<S>::unit(space);
  BoxElement<S> x = BoxElement<S>::unit(PathSpace::make(g, 0, sign, sources));
  for (int m = 1; m <= n; ++m) {
    auto sp_m = m == n ? space : PathSpace::make(g, m, sign, sources);
    bool odd = m % 2 == 1;
    const BoxElement<S>& factor = (sign == Sign::Plus) == odd ? u : ru;
    x = box_mul(include(x, sp_m), on_strand(factor, m, sp_m));
  }
  return x;
}

template <class S>
BoxElement<S> ad_action(const BoxElement<S>& un, const BoxElement<S>& x) {
  return box_mul(box_mul(un, x), un.adjoint());
}

// Random element of a path space with small integer entries on ST pairs.
template <class S>
BoxElement<S> random_element(const SpacePtr& space, std::mt19937_64& rng, double density = 0.5, int range = 3) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> val(-range, range);
  BoxElement<S> r(space);
  for (const auto& [blk, ids] : space->blocks())
    for (int a : ids)
      for (int b : ids)
        if (coin(rng) < density) r.add(a, b, S(val(rng)));
  return r;
}

}  // namespace pa
