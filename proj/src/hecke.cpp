#include "pa/hecke.hpp"

#include <algorithm>
#include <sstream>

#include "pa/graph.hpp"
#include "pa/symmetry.hpp"

namespace pa {

namespace {

// Incremental row echelon over the field; rows normalized to pivot 1.
struct Echelon {
  std::vector<std::vector<QScalar>> rows;
  std::vector<size_t> pivots;

  bool add(std::vector<QScalar> v) {
    for (size_t r = 0; r < rows.size(); ++r) {
      const QScalar c = v[pivots[r]];
      if (c.is_zero()) continue;
      for (size_t j = 0; j < v.size(); ++j)
        if (!rows[r][j].is_zero()) v[j] -= c * rows[r][j];
    }
    size_t p = 0;
    while (p < v.size() && v[p].is_zero()) ++p;
    if (p == v.size()) return false;
    QScalar inv = v[p].inverse();
    for (auto& x : v)
      if (!x.is_zero()) x *= inv;
    rows.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  }
};

// Gauss-Jordan inverse; throws if singular.
std::vector<std::vector<QScalar>> invert(std::vector<std::vector<QScalar>> m) {
  const size_t n = m.size();
  std::vector<std::vector<QScalar>> inv(n, std::vector<QScalar>(n));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c].is_zero()) ++p;
    if (p == n) throw Error(ErrorCode::InvalidParameters, "singular coordinate system");
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    QScalar d = m[c][c].inverse();
    for (size_t j = 0; j < n; ++j) {
      m[c][j] *= d;
      inv[c][j] *= d;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c].is_zero()) continue;
      QScalar f = m[r][c];
      for (size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

QMat mat_mul(const QMat& x, const QMat& y) {
  QMat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const QScalar& a = x(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < x.n; ++j)
        if (!y(k, j).is_zero()) r(i, j) += a * y(k, j);
    }
  return r;
}

QMat mat_transpose(const QMat& x) {
  QMat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) r(j, i) = x(i, j);
  return r;
}

}  // namespace

// ---------------- Hecke pairs ----------------

HeckeContext build_hecke(const PermGroup& G, const std::vector<int>& Hin) {
  HeckeContext c;
  c.G = G;
  const int n = G.order();
  c.in_H.assign(n, false);
  for (int h : Hin) {
    if (h < 0 || h >= n) throw Error(ErrorCode::InvalidParameters, "subgroup element out of range");
    c.in_H[h] = true;
  }
  if (!c.in_H[G.identity()]) throw Error(ErrorCode::InvalidParameters, "subgroup lacks the identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (c.in_H[a] && c.in_H[b] && !c.in_H[G.mul(a, G.inv(b))])
        throw Error(ErrorCode::InvalidParameters, "H is not a subgroup");
  for (int g = 0; g < n; ++g)
    if (c.in_H[g]) c.H.push_back(g);

  c.coset_of.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    if (c.coset_of[g] >= 0) continue;
    int id = static_cast<int>(c.coset_rep.size());
    c.coset_rep.push_back(g);
    for (int h : c.H) c.coset_of[G.mul(g, h)] = id;
  }
  c.dc_of.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    if (c.dc_of[g] >= 0) continue;
    int id = static_cast<int>(c.dc_rep.size());
    c.dc_rep.push_back(g);
    long long size = 0;
    for (int h : c.H)
      for (int k : c.H) {
        int x = G.mul(G.mul(h, g), k);
        if (c.dc_of[x] < 0) {
          c.dc_of[x] = id;
          ++size;
        }
      }
    c.dc_size.push_back(size);
    c.dc_index.push_back(size / static_cast<long long>(c.H.size()));
  }
  return c;
}

bool HeckeContext::normal() const {
  for (int g = 0; g < G.order(); ++g)
    for (int h : H)
      if (!in_H[G.mul(G.mul(g, h), G.inv(g))]) return false;
  return true;
}

HeckeContext HeckeContext::with_random_representatives(std::mt19937_64& rng) const {
  HeckeContext c = *this;
  std::vector<std::vector<int>> members(cosets());
  for (int g = 0; g < G.order(); ++g) members[coset_of[g]].push_back(g);
  for (int s = 0; s < cosets(); ++s) {
    std::uniform_int_distribution<size_t> d(0, members[s].size() - 1);
    c.coset_rep[s] = members[s][d(rng)];
  }
  return c;
}

HeckeContext build_hecke_from_action(const WeightedGraph& g, const SymmetryOracle& s, int o) {
  if (s.is_tree())
    throw Error(ErrorCode::ScopeTooSmall, "Hecke data needs an explicit finite group; the tree oracle has infinite stabilizers");
  if (o < 0 || o >= g.num_vertices()) throw Error(ErrorCode::InvalidParameters, "base vertex out of range");
  const int V = g.num_vertices(), E = g.num_edges();
  auto to_perm = [&](const GraphAutomorphism& a) {
    Perm p(V + E);
    for (int v = 0; v < V; ++v) p[v] = a.vmap[v];
    for (int e = 0; e < E; ++e) p[V + e] = V + a.emap[e];
    return p;
  };
  std::vector<Perm> gens;
  for (const auto& a : s.generators()) gens.push_back(to_perm(a));
  PermGroup G(V + E, gens);
  std::vector<int> H;
  for (int i = 0; i < G.order(); ++i)
    if (G.element(i)[o] == o) H.push_back(i);
  auto c = build_hecke(G, H);
  c.scope = "graph-action";
  return c;
}

std::vector<long long> hecke_structure_constants(const HeckeContext& ctx, int d1, int d2) {
  const auto& G = ctx.G;
  std::vector<long long> out(ctx.double_cosets(), 0);
  for (int c = 0; c < ctx.double_cosets(); ++c) {
    int x = ctx.dc_rep[c];
    long long cnt = 0;
    for (int y = 0; y < G.order(); ++y)
      if (ctx.dc_of[y] == d1 && ctx.dc_of[G.mul(G.inv(y), x)] == d2) ++cnt;
    out[c] = cnt;
  }
  return out;
}

HeckeAlgebraReport hecke_algebra(const HeckeContext& ctx) {
  HeckeAlgebraReport r;
  const int n = ctx.double_cosets();
  r.dimension = n;
  r.constants.assign(n, {});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r.constants[a].push_back(hecke_structure_constants(ctx, a, b));
  const auto& C = r.constants;
  for (int a = 0; a < n && r.associative; ++a)
    for (int b = 0; b < n && r.associative; ++b)
      for (int c = 0; c < n && r.associative; ++c)
        for (int e = 0; e < n; ++e) {
          long long lhs = 0, rhs = 0;
          for (int d = 0; d < n; ++d) {
            lhs += C[a][b][d] * C[d][c][e];
            rhs += C[b][c][d] * C[a][d][e];
          }
          if (lhs != rhs) {
            r.associative = false;
            break;
          }
        }
  const int hd = ctx.dc_of[ctx.G.identity()];
  const long long hs = static_cast<long long>(ctx.H.size());
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      long long want = a == c ? hs : 0;
      if (C[hd][a][c] != want || C[a][hd][c] != want) r.unit_ok = false;
    }
  if (ctx.normal()) {
    // double cosets are cosets; 1_{aH} * 1_{bH} = |H| 1_{abH}
    bool ok = true;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        int ab = ctx.dc_of[ctx.G.mul(ctx.dc_rep[a], ctx.dc_rep[b])];
        for (int c = 0; c < n; ++c)
          if (C[a][b][c] != (c == ab ? hs : 0)) ok = false;
      }
    r.matches_quotient_group = ok;
  }
  return r;
}

// ---------------- coefficient algebra ----------------

QMat QMat::identity(int n) {
  QMat m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

MultiMatrix MultiMatrix::commutative(int k) {
  MultiMatrix A;
  A.dims.assign(k, 1);
  A.weights.assign(k, QScalar::rational(1, k));
  return A;
}

int MultiMatrix::dimension() const {
  int d = 0;
  for (int n : dims) d += n * n;
  return d;
}

MultiMatrix::Elem MultiMatrix::zero() const {
  Elem e;
  for (int n : dims) e.emplace_back(n);
  return e;
}

MultiMatrix::Elem MultiMatrix::unit() const {
  Elem e;
  for (int n : dims) e.push_back(QMat::identity(n));
  return e;
}

MultiMatrix::Elem MultiMatrix::basis(int i) const {
  Elem e = zero();
  for (size_t b = 0; b < dims.size(); ++b) {
    int sq = dims[b] * dims[b];
    if (i < sq) {
      e[b].a[i] = 1;
      return e;
    }
    i -= sq;
  }
  throw Error(ErrorCode::InvalidParameters, "basis index out of range");
}

std::vector<QScalar> MultiMatrix::coords(const Elem& x) const {
  std::vector<QScalar> out;
  for (const auto& m : x) out.insert(out.end(), m.a.begin(), m.a.end());
  return out;
}

MultiMatrix::Elem MultiMatrix::mul(const Elem& x, const Elem& y) const {
  Elem r;
  r.reserve(x.size());
  for (size_t b = 0; b < x.size(); ++b) r.push_back(mat_mul(x[b], y[b]));
  return r;
}

MultiMatrix::Elem MultiMatrix::add(const Elem& x, const Elem& y) const {
  Elem r = x;
  for (size_t b = 0; b < x.size(); ++b)
    for (size_t i = 0; i < r[b].a.size(); ++i) r[b].a[i] += y[b].a[i];
  return r;
}

MultiMatrix::Elem MultiMatrix::scale(const Elem& x, const QScalar& c) const {
  Elem r = x;
  for (auto& m : r)
    for (auto& v : m.a) v *= c;
  return r;
}

MultiMatrix::Elem MultiMatrix::adjoint(const Elem& x) const {
  Elem r;
  for (const auto& m : x) r.push_back(mat_transpose(m));
  return r;
}

QScalar MultiMatrix::tau(const Elem& x) const {
  QScalar t;
  for (size_t b = 0; b < x.size(); ++b) {
    QScalar tr;
    for (int i = 0; i < x[b].n; ++i) tr += x[b](i, i);
    t += weights[b] * tr;
  }
  return t;
}

bool MultiMatrix::equal(const Elem& x, const Elem& y) const {
  for (size_t b = 0; b < x.size(); ++b)
    if (x[b].a != y[b].a) return false;
  return true;
}

bool MultiMatrix::is_zero(const Elem& x) const {
  for (const auto& m : x)
    for (const auto& v : m.a)
      if (!v.is_zero()) return false;
  return true;
}

bool MultiMatrix::is_unitary(const Elem& u) const {
  return equal(mul(u, adjoint(u)), unit()) && equal(mul(adjoint(u), u), unit());
}

AutA AutA::identity(const MultiMatrix& A) {
  AutA a;
  for (size_t b = 0; b < A.dims.size(); ++b) a.perm.push_back(static_cast<int>(b));
  a.U = A.unit();
  return a;
}

AutA AutA::inner(const MultiMatrix& A, const MultiMatrix::Elem& u) {
  if (!A.is_unitary(u)) throw Error(ErrorCode::NotUnitary, "inner automorphism needs a unitary");
  AutA a = identity(A);
  a.U = u;
  return a;
}

AutA AutA::permutation(const MultiMatrix& A, const std::vector<int>& perm) {
  if (perm.size() != A.dims.size()) throw Error(ErrorCode::SizeMismatch, "block permutation size");
  for (size_t b = 0; b < perm.size(); ++b)
    if (A.dims[perm[b]] != A.dims[b]) throw Error(ErrorCode::InvalidParameters, "block permutation must preserve sizes");
  AutA a = identity(A);
  a.perm = perm;
  return a;
}

MultiMatrix::Elem AutA::apply(const MultiMatrix& A, const MultiMatrix::Elem& x) const {
  MultiMatrix::Elem r = A.zero();
  for (size_t b = 0; b < x.size(); ++b) {
    int t = perm[b];
    r[t] = mat_mul(mat_mul(U[t], x[b]), mat_transpose(U[t]));
  }
  return r;
}

AutA AutA::compose(const MultiMatrix& A, const AutA& in) const {
  AutA c = identity(A);
  for (size_t i = 0; i < perm.size(); ++i) {
    int j = in.perm[i];
    int k = perm[j];
    c.perm[i] = k;
    c.U[k] = mat_mul(U[k], in.U[j]);
  }
  return c;
}

bool AutA::equals(const MultiMatrix& A, const AutA& o) const {
  for (int i = 0; i < A.dimension(); ++i) {
    auto e = A.basis(i);
    if (!A.equal(apply(A, e), o.apply(A, e))) return false;
  }
  return true;
}

bool AutA::trace_preserving(const MultiMatrix& A) const {
  for (int i = 0; i < A.dimension(); ++i) {
    auto e = A.basis(i);
    if (A.tau(apply(A, e)) != A.tau(e)) return false;
  }
  return true;
}

// ---------------- cocycle actions ----------------

CocycleAction ordinary_action(const HeckeContext& ctx, const MultiMatrix& A, const std::function<AutA(int)>& alpha) {
  CocycleAction act;
  act.ctx = &ctx;
  act.A = A;
  act.ordinary = true;
  const int n = ctx.G.order(), N = ctx.cosets();
  act.gamma.resize(n);
  act.u.assign(n, std::vector<std::vector<MultiMatrix::Elem>>(N, std::vector<MultiMatrix::Elem>(N, A.unit())));
  for (int g = 0; g < n; ++g) act.gamma[g].assign(N, alpha(g));
  return act;
}

CocycleAction coboundary_action(const HeckeContext& ctx, const MultiMatrix& A, const std::function<AutA(int)>& alpha,
                                const std::vector<MultiMatrix::Elem>& v) {
  const int n = ctx.G.order(), N = ctx.cosets();
  if (static_cast<int>(v.size()) != N) throw Error(ErrorCode::SizeMismatch, "one unitary per coset");
  for (const auto& x : v)
    if (!A.is_unitary(x)) throw Error(ErrorCode::NotUnitary, "coboundary entries must be unitary");
  if (!A.equal(v[ctx.identity_coset()], A.unit()))
    throw Error(ErrorCode::InvalidParameters, "coboundary must be 1 at the identity coset");
  CocycleAction act;
  act.ctx = &ctx;
  act.A = A;
  act.gamma.resize(n);
  act.u.resize(n);
  for (int g = 0; g < n; ++g) {
    AutA a = alpha(g);
    for (int s = 0; s < N; ++s) {
      int gs = ctx.act(g, s);
      AutA in = AutA::inner(A, A.adjoint(v[s]));
      act.gamma[g].push_back(AutA::inner(A, v[gs]).compose(A, a.compose(A, in)));
    }
    act.u[g].resize(N);
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t) {
        auto mid = a.apply(A, A.mul(A.adjoint(v[s]), v[t]));
        act.u[g][s].push_back(A.mul(A.mul(v[ctx.act(g, s)], mid), A.adjoint(v[ctx.act(g, t)])));
      }
  }
  return act;
}

CocycleReport validate_cocycle(const CocycleAction& act) {
  const auto& ctx = *act.ctx;
  const auto& A = act.A;
  const auto& G = ctx.G;
  const int n = G.order(), N = ctx.cosets(), dA = A.dimension();
  const int one = G.identity();
  CocycleReport r;
  std::vector<MultiMatrix::Elem> basis;
  for (int i = 0; i < dA; ++i) basis.push_back(A.basis(i));
  auto fail = [&](int axiom, const std::string& w) {
    r.ok = false;
    r.axiom = axiom;
    r.witness = w;
    return r;
  };
  auto tag = [&](std::initializer_list<std::pair<const char*, int>> kv) {
    std::ostringstream os;
    bool first = true;
    for (auto [k, v] : kv) {
      os << (first ? "" : " ") << k << "=" << (std::string(k) == "g" || std::string(k) == "h" ? G.label(v) : std::to_string(v));
      first = false;
    }
    return os.str();
  };

  for (int g = 0; g < n; ++g)
    for (int s = 0; s < N; ++s) {
      ++r.checks;
      if (!act.gam(g, s).trace_preserving(A)) return fail(-1, "gamma not trace preserving at " + tag({{"g", g}, {"s", s}}));
      for (int t = 0; t < N; ++t)
        if (!A.is_unitary(act.uu(g, s, t))) return fail(-1, "u not unitary at " + tag({{"g", g}, {"s", s}, {"t", t}}));
    }
  // (1) gamma_{1,s} = id
  auto id = AutA::identity(A);
  for (int s = 0; s < N; ++s) {
    ++r.checks;
    if (!act.gam(one, s).equals(A, id)) return fail(1, tag({{"s", s}}));
  }
  // (2) gamma_{gh,s} = gamma_{g,hs} gamma_{h,s}
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int s = 0; s < N; ++s) {
        ++r.checks;
        const auto& lhs = act.gam(G.mul(g, h), s);
        const auto& a = act.gam(g, ctx.act(h, s));
        const auto& b = act.gam(h, s);
        for (const auto& e : basis)
          if (!A.equal(lhs.apply(A, e), a.apply(A, b.apply(A, e)))) return fail(2, tag({{"g", g}, {"h", h}, {"s", s}}));
      }
  // (3) gamma_{g,s} = Ad(u_{g,s,t}) gamma_{g,t}
  for (int g = 0; g < n; ++g)
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t) {
        ++r.checks;
        const auto& u = act.uu(g, s, t);
        auto ua = A.adjoint(u);
        for (const auto& e : basis) {
          auto rhs = A.mul(A.mul(u, act.gam(g, t).apply(A, e)), ua);
          if (!A.equal(act.gam(g, s).apply(A, e), rhs)) return fail(3, tag({{"g", g}, {"s", s}, {"t", t}}));
        }
      }
  // (4) u_{1,s,t} = u_{g,s,s} = 1
  auto unit = A.unit();
  for (int s = 0; s < N; ++s)
    for (int t = 0; t < N; ++t) {
      ++r.checks;
      if (!A.equal(act.uu(one, s, t), unit)) return fail(4, tag({{"g", one}, {"s", s}, {"t", t}}));
    }
  for (int g = 0; g < n; ++g)
    for (int s = 0; s < N; ++s) {
      ++r.checks;
      if (!A.equal(act.uu(g, s, s), unit)) return fail(4, tag({{"g", g}, {"s", s}, {"t", s}}));
    }
  // (5) u_{g,s,t} u_{g,t,r} = u_{g,s,r}
  for (int g = 0; g < n; ++g)
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t)
        for (int q = 0; q < N; ++q) {
          ++r.checks;
          if (!A.equal(A.mul(act.uu(g, s, t), act.uu(g, t, q)), act.uu(g, s, q)))
            return fail(5, tag({{"g", g}, {"s", s}, {"t", t}, {"r", q}}));
        }
  // (6) u_{gh,s,t} = gamma_{g,hs}(u_{h,s,t}) u_{g,hs,ht}
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int s = 0; s < N; ++s)
        for (int t = 0; t < N; ++t) {
          ++r.checks;
          int hs = ctx.act(h, s), ht = ctx.act(h, t);
          auto rhs = A.mul(act.gam(g, hs).apply(A, act.uu(h, s, t)), act.uu(g, hs, ht));
          if (!A.equal(act.uu(G.mul(g, h), s, t), rhs)) return fail(6, tag({{"g", g}, {"h", h}, {"s", s}, {"t", t}}));
        }
  return r;
}

// ---------------- crossed products ----------------

CrossedProduct::CrossedProduct(const CocycleAction& act, bool twisted) : act_(&act), twisted_(twisted) {
  if (!twisted && !act.ordinary)
    throw Error(ErrorCode::InvalidParameters, "the ordinary crossed product needs an ordinary action");
  const auto& ctx = *act.ctx;
  const auto& A = act.A;
  reps_ = ctx.coset_rep;
  const int one = ctx.identity_coset();
  Echelon ech;
  for (int d = 0; d < ctx.double_cosets(); ++d) {
    int cr = ctx.coset_of[ctx.dc_rep[d]];
    std::vector<int> K;
    for (int h : ctx.H)
      if (ctx.act(h, cr) == cr) K.push_back(h);
    QScalar w = QScalar::rational(1, static_cast<long>(K.size()));
    for (int i = 0; i < A.dimension(); ++i) {
      auto e = A.basis(i);
      auto val = A.zero();
      for (int h : K) {
        auto term = act.gam(h, one).apply(A, e);
        if (twisted_) term = A.mul(term, act.uu(h, one, cr));
        val = A.add(val, term);
      }
      val = A.scale(val, w);
      if (A.is_zero(val)) continue;
      CPElement f = zero();
      for (int h : ctx.H) {
        auto term = act.gam(h, one).apply(A, val);
        if (twisted_) term = A.mul(term, act.uu(h, one, cr));
        f[ctx.act(h, cr)] = term;
      }
      if (ech.add(flatten(f))) basis_.push_back(std::move(f));
    }
  }
}

CPElement CrossedProduct::zero() const { return CPElement(act_->ctx->cosets(), act_->A.zero()); }

CPElement CrossedProduct::unit() const {
  auto z = zero();
  z[act_->ctx->identity_coset()] = act_->A.unit();
  return z;
}

CPElement CrossedProduct::add(const CPElement& x, const CPElement& y) const {
  CPElement r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = act_->A.add(x[i], y[i]);
  return r;
}

CPElement CrossedProduct::scale(const CPElement& x, const QScalar& c) const {
  CPElement r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = act_->A.scale(x[i], c);
  return r;
}

CPElement CrossedProduct::mul(const CPElement& x, const CPElement& y) const {
  const auto& ctx = *act_->ctx;
  const auto& A = act_->A;
  const auto& G = ctx.G;
  const int N = ctx.cosets(), one = ctx.identity_coset();
  CPElement r = zero();
  for (int s = 0; s < N; ++s) {
    if (A.is_zero(x[s])) continue;
    int rs = reps_[s];
    for (int c = 0; c < N; ++c) {
      int q = ctx.coset_of[G.mul(G.inv(rs), reps_[c])];
      if (A.is_zero(y[q])) continue;
      auto term = A.mul(x[s], act_->gam(rs, one).apply(A, y[q]));
      if (twisted_) term = A.mul(term, act_->uu(rs, one, q));
      r[c] = A.add(r[c], term);
    }
  }
  return r;
}

CPElement CrossedProduct::star(const CPElement& x) const {
  const auto& ctx = *act_->ctx;
  const auto& A = act_->A;
  const auto& G = ctx.G;
  const int N = ctx.cosets(), one = ctx.identity_coset();
  CPElement r = zero();
  for (int c = 0; c < N; ++c) {
    int g = reps_[c];
    int gi = ctx.coset_of[G.inv(g)];
    if (A.is_zero(x[gi])) continue;
    if (twisted_)
      r[c] = A.mul(act_->gam(g, gi).apply(A, A.adjoint(x[gi])), act_->uu(g, gi, one));
    else
      r[c] = act_->gam(g, one).apply(A, A.adjoint(x[gi]));
  }
  return r;
}

QScalar CrossedProduct::omega(const CPElement& x) const { return act_->A.tau(x[act_->ctx->identity_coset()]); }

bool CrossedProduct::equal(const CPElement& x, const CPElement& y) const {
  for (size_t i = 0; i < x.size(); ++i)
    if (!act_->A.equal(x[i], y[i])) return false;
  return true;
}

bool CrossedProduct::equivariant(const CPElement& x) const {
  const auto& ctx = *act_->ctx;
  const auto& A = act_->A;
  const int one = ctx.identity_coset();
  for (int h : ctx.H)
    for (int t = 0; t < ctx.cosets(); ++t) {
      auto rhs = act_->gam(h, one).apply(A, x[t]);
      if (twisted_) rhs = A.mul(rhs, act_->uu(h, one, t));
      if (!A.equal(x[ctx.act(h, t)], rhs)) return false;
    }
  return true;
}

CPElement CrossedProduct::embed(const MultiMatrix::Elem& a) const {
  auto z = zero();
  z[act_->ctx->identity_coset()] = a;
  if (!equivariant(z)) throw Error(ErrorCode::InvalidParameters, "embedded element is not H-invariant");
  return z;
}

std::vector<QScalar> CrossedProduct::flatten(const CPElement& x) const {
  std::vector<QScalar> out;
  for (const auto& v : x) {
    auto c = act_->A.coords(v);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

CrossedProductReport verify_crossed_product(const CrossedProduct& cp, std::uint64_t seed) {
  CrossedProductReport r;
  const auto& B = cp.basis();
  const int n = cp.dimension();
  r.dimension = n;
  auto note = [&](const std::string& w) {
    if (r.witness.empty()) r.witness = w;
  };
  for (int i = 0; i < n; ++i)
    if (!cp.equivariant(B[i])) {
      r.equivariant = false;
      note("basis element " + std::to_string(i) + " not equivariant");
    }

  // coordinates in the basis via pivot columns
  Echelon ech;
  for (const auto& b : B) ech.add(cp.flatten(b));
  std::vector<std::vector<QScalar>> M(n, std::vector<QScalar>(n));
  std::vector<std::vector<QScalar>> flat;
  for (const auto& b : B) flat.push_back(cp.flatten(b));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) M[j][i] = flat[i][ech.pivots[j]];
  auto Minv = n ? invert(M) : M;
  auto coords = [&](const CPElement& x, bool& in_span) {
    auto v = cp.flatten(x);
    std::vector<QScalar> c(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!Minv[i][j].is_zero()) c[i] += Minv[i][j] * v[ech.pivots[j]];
    std::vector<QScalar> back(v.size());
    for (int i = 0; i < n; ++i)
      if (!c[i].is_zero())
        for (size_t k = 0; k < v.size(); ++k)
          if (!flat[i][k].is_zero()) back[k] += c[i] * flat[i][k];
    in_span = back == v;
    return c;
  };

  std::vector<std::vector<CPElement>> P(n, std::vector<CPElement>(n));
  std::vector<std::vector<std::vector<QScalar>>> C(n, std::vector<std::vector<QScalar>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      P[i][j] = cp.mul(B[i], B[j]);
      bool ok = true;
      C[i][j] = coords(P[i][j], ok);
      if (!ok) {
        r.associative = false;
        note("product leaves the span at " + std::to_string(i) + "," + std::to_string(j));
      }
    }
  // (b_i b_j) b_k = b_i (b_j b_k) through the structure constants
  for (int i = 0; i < n && r.associative; ++i)
    for (int j = 0; j < n && r.associative; ++j)
      for (int k = 0; k < n && r.associative; ++k) {
        std::vector<QScalar> lhs(n), rhs(n);
        for (int l = 0; l < n; ++l) {
          if (!C[i][j][l].is_zero())
            for (int m = 0; m < n; ++m)
              if (!C[l][k][m].is_zero()) lhs[m] += C[i][j][l] * C[l][k][m];
          if (!C[j][k][l].is_zero())
            for (int m = 0; m < n; ++m)
              if (!C[i][l][m].is_zero()) rhs[m] += C[j][k][l] * C[i][l][m];
        }
        if (lhs != rhs) {
          r.associative = false;
          note("associativity fails at " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k));
        }
      }

  std::vector<CPElement> S(n);
  for (int i = 0; i < n; ++i) {
    S[i] = cp.star(B[i]);
    if (!cp.equal(cp.star(S[i]), B[i])) {
      r.star_involutive = false;
      note("star not involutive at " + std::to_string(i));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!cp.equal(cp.star(P[i][j]), cp.mul(S[j], S[i]))) {
        r.star_antimultiplicative = false;
        note("(xy)* != y*x* at " + std::to_string(i) + "," + std::to_string(j));
      }
  auto one = cp.unit();
  for (int i = 0; i < n; ++i)
    if (!cp.equal(cp.mul(one, B[i]), B[i]) || !cp.equal(cp.mul(B[i], one), B[i])) r.unit_ok = false;

  std::vector<std::vector<QScalar>> gram(n, std::vector<QScalar>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram[i][j] = cp.omega(cp.mul(B[i], S[j]));
  r.omega_faithful = positive_definite_exact(gram);

  std::mt19937_64 rng(seed);
  auto other = cp.action().ctx->with_random_representatives(rng);
  CrossedProduct cp2 = cp;
  cp2.set_representatives(other.coset_rep);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!cp.equal(cp2.mul(B[i], B[j]), P[i][j]) || !cp.equal(cp2.star(B[i]), S[i])) {
        r.rep_independent = false;
        note("representative dependence at " + std::to_string(i) + "," + std::to_string(j));
      }
  return r;
}

AMatrix phi_embed(const CrossedProduct& cp, const CPElement& f) {
  const auto& act = cp.action();
  const auto& ctx = *act.ctx;
  const auto& A = act.A;
  const int N = ctx.cosets(), one = ctx.identity_coset();
  AMatrix m(N, std::vector<MultiMatrix::Elem>(N, A.zero()));
  for (int s = 0; s < N; ++s) {
    int rs = ctx.coset_rep[s];
    for (int t = 0; t < N; ++t) {
      if (A.is_zero(f[t])) continue;
      auto v = act.gam(rs, one).apply(A, f[t]);
      if (cp.twisted()) v = A.mul(v, act.uu(rs, one, t));
      int st = ctx.act(rs, t);
      m[s][st] = A.add(m[s][st], v);
    }
  }
  return m;
}

namespace {

AMatrix amat_mul(const MultiMatrix& A, const AMatrix& x, const AMatrix& y) {
  const size_t N = x.size();
  AMatrix r(N, std::vector<MultiMatrix::Elem>(N, A.zero()));
  for (size_t a = 0; a < N; ++a)
    for (size_t c = 0; c < N; ++c) {
      if (A.is_zero(x[a][c])) continue;
      for (size_t b = 0; b < N; ++b)
        if (!A.is_zero(y[c][b])) r[a][b] = A.add(r[a][b], A.mul(x[a][c], y[c][b]));
    }
  return r;
}

bool amat_equal(const MultiMatrix& A, const AMatrix& x, const AMatrix& y) {
  for (size_t a = 0; a < x.size(); ++a)
    for (size_t b = 0; b < x.size(); ++b)
      if (!A.equal(x[a][b], y[a][b])) return false;
  return true;
}

std::vector<QScalar> amat_flatten(const MultiMatrix& A, const AMatrix& x) {
  std::vector<QScalar> out;
  for (const auto& row : x)
    for (const auto& e : row) {
      auto c = A.coords(e);
      out.insert(out.end(), c.begin(), c.end());
    }
  return out;
}

}  // namespace

PhiReport verify_phi(const CrossedProduct& cp) {
  const auto& act = cp.action();
  const auto& ctx = *act.ctx;
  const auto& A = act.A;
  const auto& G = ctx.G;
  const int N = ctx.cosets();
  const auto& B = cp.basis();
  const int n = cp.dimension();
  PhiReport r;
  auto note = [&](const std::string& w) {
    if (r.witness.empty()) r.witness = w;
  };
  std::vector<AMatrix> img;
  for (const auto& b : B) img.push_back(phi_embed(cp, b));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!amat_equal(A, phi_embed(cp, cp.mul(B[i], B[j])), amat_mul(A, img[i], img[j]))) {
        r.homomorphism = false;
        note("phi(xy) != phi(x)phi(y) at " + std::to_string(i) + "," + std::to_string(j));
      }
  for (int i = 0; i < n; ++i) {
    auto ps = phi_embed(cp, cp.star(B[i]));
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (!A.equal(ps[a][b], A.adjoint(img[i][b][a]))) {
          r.star_preserving = false;
          note("phi(x*) != phi(x)* at " + std::to_string(i));
        }
  }
  Echelon ech;
  for (const auto& m : img)
    if (ech.add(amat_flatten(A, m))) ++r.image_dimension;
  r.injective = r.image_dimension == n;

  auto id = phi_embed(cp, cp.unit());
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      if (!A.equal(id[a][b], a == b ? A.unit() : A.zero())) r.unit_to_identity = false;

  // pi_g(a ⊗ e_{s,t}) = gamma_{g,s}(a) u_{g,s,t} ⊗ e_{gs,gt}
  auto pi = [&](int g, const AMatrix& m) {
    AMatrix out(N, std::vector<MultiMatrix::Elem>(N, A.zero()));
    for (int s = 0; s < N; ++s)
      for (int t = 0; t < N; ++t) {
        if (A.is_zero(m[s][t])) continue;
        auto v = act.gam(g, s).apply(A, m[s][t]);
        if (cp.twisted()) v = A.mul(v, act.uu(g, s, t));
        out[ctx.act(g, s)][ctx.act(g, t)] = v;
      }
    return out;
  };
  for (int g = 0; g < G.order(); ++g)
    for (int i = 0; i < n; ++i)
      if (!amat_equal(A, pi(g, img[i]), img[i])) {
        r.invariant = false;
        note("pi_g moves phi(b_" + std::to_string(i) + ") for g=" + G.label(g));
      }

  // dimension of the fixed points: average of tr(pi_g)
  QScalar total;
  for (int g = 0; g < G.order(); ++g)
    for (int s = 0; s < N; ++s) {
      if (ctx.act(g, s) != s) continue;
      for (int t = 0; t < N; ++t) {
        if (ctx.act(g, t) != t) continue;
        for (int i = 0; i < A.dimension(); ++i) {
          auto v = act.gam(g, s).apply(A, A.basis(i));
          if (cp.twisted()) v = A.mul(v, act.uu(g, s, t));
          total += A.coords(v)[i];
        }
      }
    }
  r.fixed_point_dimension = total / QScalar(G.order());

  if (!cp.twisted()) {
    // A^H by averaging the matrix units over H
    bool ok = true;
    const int one = ctx.identity_coset();
    for (int i = 0; i < A.dimension(); ++i) {
      auto a = A.zero();
      for (int h : ctx.H) a = A.add(a, act.gam(h, one).apply(A, A.basis(i)));
      auto m = phi_embed(cp, cp.embed(a));
      for (int s = 0; s < N; ++s)
        for (int t = 0; t < N; ++t) {
          auto want = s == t ? act.gam(ctx.coset_rep[s], one).apply(A, a) : A.zero();
          if (!A.equal(m[s][t], want)) ok = false;
        }
    }
    r.diagonal_formula = ok;
  }
  return r;
}

bool positive_definite_exact(std::vector<std::vector<QScalar>> m) {
  const size_t n = m.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) return false;
  for (size_t k = 0; k < n; ++k) {
    if (m[k][k].sign() <= 0) return false;
    for (size_t i = k + 1; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      QScalar f = m[i][k] / m[k][k];
      for (size_t j = k; j < n; ++j)
        if (!m[k][j].is_zero()) m[i][j] -= f * m[k][j];
    }
  }
  return true;
}

int exact_rank(std::vector<std::vector<QScalar>> rows) {
  Echelon e;
  int r = 0;
  for (auto& v : rows)
    if (e.add(std::move(v))) ++r;
  return r;
}

}  // namespace pa
