#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "pa/boxes.hpp"
#include "pa/graph.hpp"
#include "pa/symmetry.hpp"

namespace pa {

// A basis element of D_k(n,m) is a closed loop of length 2n+2m+4k read
// clockwise from the top-left corner region:
//   T: 2n top strands, left to right
//   R: 2k right strands, top to bottom
//   B: 2m bottom strands, right to left
//   L: 2k left strands, bottom to top
// Corners TL, TR, BR, BL all share the corner parity; the side middles
// (after k side strands) have the opposite parity when k is odd.
//
// Product x·y: y is glued to the right of x along the 2k middle strands,
// t top strands are capped at the junction and b bottom strands cupped.
// A run of nested caps with innermost region p and outermost q carries
// sqrt(mu_V(p)/mu_V(q)); straight strands carry 1.
// E closes the right side onto the left (k arcs over, k under) and keeps
// delta^{-2k} mu_V(TR) mu_V(BR) / mu_V(mid)^2 at the middle vertex, so
// Tr = tau_V∘E = delta^{-2k} mu_V(TR) mu_V(BR) on closable loops.
// Dagger is the left-right mirror: T,R,B,L -> rev T, rev L, rev B, rev R
// based at the old TR corner.

struct LoopFrame {
  int n = 0, m = 0, k = 0;
  int tl() const { return 0; }
  int tr() const { return 2 * n; }
  int br() const { return 2 * n + 2 * k; }
  int bl() const { return 2 * n + 2 * k + 2 * m; }
  int mid_right() const { return 2 * n + k; }
  int mid_left() const { return 2 * n + 3 * k + 2 * m; }
  int length() const { return 2 * n + 2 * m + 4 * k; }
};

// Closed walks of the given length from v (edges only, start = v).
std::vector<Path> closed_walks(const WeightedGraph& g, int v, int length);
// Basis loops of D_k(n,m) starting at the given corner vertices.
std::vector<Path> graded_basis_loops(const WeightedGraph& g, int k, int n, int m, const std::vector<int>& corners);

template <class S>
class GradedSpace {
 public:
  GradedSpace(std::shared_ptr<const WeightedGraph> g, int base, int nmax = 6, int k_max = 2)
      : g_(std::move(g)), nmax_(nmax), k_max_(k_max) {
    if (!g_->delta()) throw Error(ErrorCode::InvalidParameters, "graded algebra needs a modulus");
    mu_V_ = vertex_weights(*g_, base);
    delta_ = ScalarTraits<S>::from(*g_->delta());
    for (const auto& q : mu_V_.mu_V) mu_.push_back(ScalarTraits<S>::from(q));
  }
  static std::shared_ptr<const GradedSpace> make(std::shared_ptr<const WeightedGraph> g, int base, int nmax = 6,
                                                 int k_max = 2) {
    return std::make_shared<const GradedSpace>(std::move(g), base, nmax, k_max);
  }

  const WeightedGraph& graph() const { return *g_; }
  const std::shared_ptr<const WeightedGraph>& graph_ptr() const { return g_; }
  int nmax() const { return nmax_; }
  int k_max() const { return k_max_; }
  const S& delta() const { return delta_; }
  const S& mu_V(int v) const { return mu_.at(v); }
  const QScalar& mu_V_exact(int v) const { return mu_V_.mu_V.at(v); }
  S tau_V(int v) const { return mu_V(v) * mu_V(v); }
  int base() const { return mu_V_.base; }

  // sqrt(mu_V(inner)/mu_V(outer)); outside the field in exact mode this throws ApproximateOnly.
  S cap_weight(int inner, int outer) const {
    if (inner == outer) return S(1);
    auto key = std::make_pair(inner, outer);
    auto it = cap_cache_.find(key);
    if (it != cap_cache_.end()) return it->second;
    S w = scalar_sqrt<S>(mu_V_.mu_V[inner] / mu_V_.mu_V[outer]);
    cap_cache_.emplace(key, w);
    return w;
  }

 private:
  std::shared_ptr<const WeightedGraph> g_;
  int nmax_, k_max_;
  VertexWeight mu_V_;
  std::vector<S> mu_;
  S delta_;
  mutable std::map<std::pair<int, int>, S> cap_cache_;
};

template <class S>
using GradedSpacePtr = std::shared_ptr<const GradedSpace<S>>;

template <class S>
class GradedElement {
 public:
  using Degree = std::pair<int, int>;
  using Component = std::map<Path, S>;

  GradedElement() = default;
  GradedElement(GradedSpacePtr<S> space, int k, Sign corner = Sign::Plus)
      : space_(std::move(space)), k_(k), corner_(corner) {
    if (k < 0 || k > space_->k_max()) throw Error(ErrorCode::KOverflow, "k outside 0.." + std::to_string(space_->k_max()));
  }

  const GradedSpacePtr<S>& space() const { return space_; }
  int k() const { return k_; }
  Sign corner() const { return corner_; }
  // Parity of the side middles (the sign of E's target P_0).
  Sign middle_sign() const { return k_ % 2 == 0 ? corner_ : flip(corner_); }
  bool lost() const { return lost_; }
  void mark_lost() { lost_ = true; }
  const std::map<Degree, Component>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }
  int max_degree() const {
    int d = -1;
    for (const auto& [deg, c] : comps_) d = std::max(d, deg.first + deg.second);
    return d;
  }

  S get(int n, int m, const Path& loop) const {
    auto it = comps_.find({n, m});
    if (it == comps_.end()) return S(0);
    auto jt = it->second.find(loop);
    return jt == it->second.end() ? S(0) : jt->second;
  }

  // Adds c·x_loop to D_k(n,m); components beyond N_max are dropped and flagged.
  void add(int n, int m, const Path& loop, const S& c) {
    if (ScalarTraits<S>::is_zero(c)) return;
    if (n + m > space_->nmax()) {
      lost_ = true;
      return;
    }
    check_loop(n, m, loop);
    auto& comp = comps_[{n, m}];
    auto it = comp.find(loop);
    if (it == comp.end()) {
      comp.emplace(loop, c);
    } else {
      it->second += c;
      if (ScalarTraits<S>::is_zero(it->second)) {
        comp.erase(it);
        if (comp.empty()) comps_.erase({n, m});
      }
    }
  }

  GradedElement& operator+=(const GradedElement& o) {
    require_compatible(o);
    for (const auto& [deg, comp] : o.comps_)
      for (const auto& [l, c] : comp) add(deg.first, deg.second, l, c);
    lost_ = lost_ || o.lost_;
    return *this;
  }
  GradedElement& operator-=(const GradedElement& o) {
    require_compatible(o);
    for (const auto& [deg, comp] : o.comps_)
      for (const auto& [l, c] : comp) add(deg.first, deg.second, l, -c);
    lost_ = lost_ || o.lost_;
    return *this;
  }
  GradedElement& operator*=(const S& c) {
    if (ScalarTraits<S>::is_zero(c)) {
      comps_.clear();
      return *this;
    }
    for (auto& [deg, comp] : comps_)
      for (auto& [l, v] : comp) v *= c;
    return *this;
  }
  friend GradedElement operator+(GradedElement x, const GradedElement& y) { return x += y; }
  friend GradedElement operator-(GradedElement x, const GradedElement& y) { return x -= y; }
  friend GradedElement operator*(GradedElement x, const S& c) { return x *= c; }
  friend GradedElement operator*(const S& c, GradedElement x) { return x *= c; }

  bool equals(const GradedElement& o, double tol = 1e-9) const {
    auto covered = [&](const GradedElement& a, const GradedElement& b) {
      for (const auto& [deg, comp] : a.comps_)
        for (const auto& [l, v] : comp)
          if (!ScalarTraits<S>::equal(v, b.get(deg.first, deg.second, l), tol)) return false;
      return true;
    };
    return k_ == o.k_ && covered(*this, o) && covered(o, *this);
  }
  friend bool operator==(const GradedElement& x, const GradedElement& y) { return x.equals(y); }

  void require_compatible(const GradedElement& o) const {
    if (k_ != o.k_) throw Error(ErrorCode::KMismatch, "graded elements at different k");
    if (space_ != o.space_) throw Error(ErrorCode::InvalidParameters, "graded elements over different spaces");
    if (corner_ != o.corner_) throw Error(ErrorCode::SignMismatch, "graded elements with different corner parity");
  }

  LoopFrame frame(int n, int m) const { return LoopFrame{n, m, k_}; }

 private:
  void check_loop(int n, int m, const Path& loop) const {
    const WeightedGraph& g = space_->graph();
    if (static_cast<int>(loop.edges.size()) != 2 * n + 2 * m + 4 * k_)
      throw Error(ErrorCode::SizeMismatch, "loop length does not match D_k(n,m)");
    if (!g.has_parity(loop.start, corner_)) throw Error(ErrorCode::SignMismatch, "loop corner has the wrong parity");
    if (path_end(g, loop) != loop.start) throw Error(ErrorCode::InvalidParameters, "loop is not closed");
  }

  GradedSpacePtr<S> space_;
  int k_ = 0;
  Sign corner_ = Sign::Plus;
  bool lost_ = false;
  std::map<Degree, Component> comps_;
};

namespace graded_detail {

inline std::vector<int> reversed_range(const std::vector<int>& e, int from, int to) {
  std::vector<int> r(e.begin() + from, e.begin() + to);
  std::reverse(r.begin(), r.end());
  return r;
}

inline void append(std::vector<int>& out, const std::vector<int>& e, int from, int to) {
  out.insert(out.end(), e.begin() + from, e.begin() + to);
}

}  // namespace graded_detail

// Bacher product, summed over all cap/cup counts (t, b).
template <class S>
GradedElement<S> graded_mul(const GradedElement<S>& x, const GradedElement<S>& y) {
  x.require_compatible(y);
  const auto& sp = *x.space();
  const WeightedGraph& g = sp.graph();
  const int k = x.k();
  GradedElement<S> z(x.space(), k, x.corner());
  if (x.lost() || y.lost()) z.mark_lost();
  for (const auto& [dx, cx] : x.components()) {
    const auto [n, m] = dx;
    const LoopFrame fx{n, m, k};
    for (const auto& [dy, cy] : y.components()) {
      const auto [i, j] = dy;
      const LoopFrame fy{i, j, k};
      for (const auto& [lx, ax] : cx) {
        auto vx = path_vertices(g, lx);
        const auto& ex = lx.edges;
        for (const auto& [ly, ay] : cy) {
          if (vx[fx.tr()] != ly.start) continue;
          const auto& ey = ly.edges;
          const int leny = fy.length();
          bool glued = true;
          for (int s = 0; s < 2 * k && glued; ++s) glued = ex[fx.tr() + s] == ey[leny - 1 - s];
          if (!glued) continue;
          S base = ax * ay;
          for (int t = 0; t <= std::min(2 * n, 2 * i); ++t) {
            if (t > 0 && ex[fx.tr() - t] != ey[t - 1]) break;
            for (int b = 0; b <= std::min(2 * m, 2 * j); ++b) {
              if (b > 0 && ex[fx.br() + b - 1] != ey[fy.bl() - b]) break;
              int nn = n + i - t, mm = m + j - b;
              if (nn + mm > sp.nmax()) {
                z.mark_lost();
                continue;
              }
              Path out{lx.start, {}};
              out.edges.reserve(2 * nn + 2 * mm + 4 * k);
              graded_detail::append(out.edges, ex, 0, fx.tr() - t);
              graded_detail::append(out.edges, ey, t, fy.tr());
              graded_detail::append(out.edges, ey, fy.tr(), fy.br());
              graded_detail::append(out.edges, ey, fy.br(), fy.bl() - b);
              graded_detail::append(out.edges, ex, fx.br() + b, fx.bl());
              graded_detail::append(out.edges, ex, fx.bl(), fx.length());
              S w = base * sp.cap_weight(vx[fx.tr()], vx[fx.tr() - t]) * sp.cap_weight(vx[fx.br()], vx[fx.br() + b]);
              z.add(nn, mm, out, w);
            }
          }
        }
      }
    }
  }
  return z;
}

template <class S>
GradedElement<S> operator*(const GradedElement<S>& x, const GradedElement<S>& y) {
  return graded_mul(x, y);
}

// Mirror loop of a D_k(n,m) basis loop.
inline Path mirror_loop(const WeightedGraph& g, const Path& l, const LoopFrame& f) {
  using graded_detail::reversed_range;
  auto v = path_vertices(g, l);
  Path out{v[f.tr()], {}};
  for (auto part : {reversed_range(l.edges, 0, f.tr()), reversed_range(l.edges, f.bl(), f.length()),
                    reversed_range(l.edges, f.br(), f.bl()), reversed_range(l.edges, f.tr(), f.br())})
    out.edges.insert(out.edges.end(), part.begin(), part.end());
  return out;
}

// Conjugate-linear; scalars are real so conj is the identity.
template <class S>
GradedElement<S> dagger(const GradedElement<S>& x) {
  const WeightedGraph& g = x.space()->graph();
  GradedElement<S> r(x.space(), x.k(), x.corner());
  if (x.lost()) r.mark_lost();
  for (const auto& [deg, comp] : x.components())
    for (const auto& [l, c] : comp) r.add(deg.first, deg.second, mirror_loop(g, l, x.frame(deg.first, deg.second)), c);
  return r;
}

// E: only D_k(0,0) loops whose left side retraces the right side survive.
template <class S>
P0Element<S> graded_E(const GradedElement<S>& x) {
  const auto& sp = *x.space();
  const WeightedGraph& g = sp.graph();
  const int k = x.k();
  P0Element<S> r{x.middle_sign(), {}};
  auto it = x.components().find({0, 0});
  if (it == x.components().end()) return r;
  S dk(1);
  for (int i = 0; i < 2 * k; ++i) dk = dk / sp.delta();
  for (const auto& [l, c] : it->second) {
    bool closable = true;
    for (int s = 0; s < 2 * k && closable; ++s) closable = l.edges[s] == l.edges[4 * k - 1 - s];
    if (!closable) continue;
    auto v = path_vertices(g, l);
    int mid = v[k];
    r.add(mid, c * dk * sp.mu_V(v[0]) * sp.mu_V(v[2 * k]) / (sp.mu_V(mid) * sp.mu_V(mid)));
  }
  return r;
}

template <class S>
S graded_trace(const GradedElement<S>& x) {
  const auto& sp = *x.space();
  S t(0);
  for (const auto& [v, c] : graded_E(x).values) t += c * sp.tau_V(v);
  return t;
}

// <x, y> = Tr(x y†)
template <class S>
S graded_inner(const GradedElement<S>& x, const GradedElement<S>& y) {
  return graded_trace(graded_mul(x, dagger(y)));
}

// Basis element x_l of D_k(n,m).
template <class S>
GradedElement<S> loop_element(const GradedSpacePtr<S>& sp, int k, int n, int m, const Path& loop,
                              Sign corner = Sign::Plus, const S& c = S(1)) {
  GradedElement<S> r(sp, k, corner);
  r.add(n, m, loop, c);
  return r;
}

// p_v = j_k(0,0)(e_v): identity on the side paths whose middle is v.
template <class S>
GradedElement<S> graded_projection(const GradedSpacePtr<S>& sp, int k, int v, Sign corner = Sign::Plus) {
  const WeightedGraph& g = sp->graph();
  Sign mid = k % 2 == 0 ? corner : flip(corner);
  if (!g.has_parity(v, mid)) throw Error(ErrorCode::SignMismatch, "p_v needs v in V^" + std::string(sign_str(mid)));
  GradedElement<S> r(sp, k, corner);
  // side path lambda = (upper half reversed) + (lower half), both of length k from v
  std::vector<Path> halves{Path{v, {}}};
  for (int step = 0; step < k; ++step) {
    std::vector<Path> next;
    for (const auto& h : halves) {
      int end = path_end(g, h);
      for (int e : g.incident(end)) {
        Path q = h;
        q.edges.push_back(e);
        next.push_back(std::move(q));
      }
    }
    halves = std::move(next);
  }
  for (const auto& up : halves) {
    Path top = reversed(g, up);
    for (const auto& low : halves) {
      Path side = concat(top, low);
      Path loop = concat(side, reversed(g, side));
      r.add(0, 0, loop, S(1));
    }
  }
  return r;
}

template <class S>
GradedElement<S> graded_unit(const GradedSpacePtr<S>& sp, int k, Sign corner = Sign::Plus) {
  Sign mid = k % 2 == 0 ? corner : flip(corner);
  GradedElement<S> r(sp, k, corner);
  for (int v : sp->graph().vertices(mid))
    if (sp->graph().is_interior(v)) r += graded_projection<S>(sp, k, v, corner);
  return r;
}

// j_k(n,m): e_{a,b} in P_{n+m+2k} goes to the loop a·b̄.
template <class S>
GradedElement<S> embed_box(const GradedSpacePtr<S>& sp, const BoxElement<S>& x, int k, int n, int m) {
  if (x.n() != n + m + 2 * k) throw Error(ErrorCode::SizeMismatch, "box size is not n+m+2k");
  const PathSpace& ps = *x.space();
  GradedElement<S> r(sp, k, x.sign());
  for (const auto& [key, c] : x.entries())
    r.add(n, m, concat(ps.path(key.first), reversed(ps.graph(), ps.path(key.second))), c);
  return r;
}

// Adds one through-line above and one below a D_k(0,0) element. The corner
// parity flips, the middle vertex is kept.
template <class S>
GradedElement<S> include_k(const GradedElement<S>& x) {
  const auto& sp = *x.space();
  const WeightedGraph& g = sp.graph();
  const int k = x.k();
  if (k + 1 > sp.k_max()) throw Error(ErrorCode::KOverflow, "include_k beyond k_max = " + std::to_string(sp.k_max()));
  GradedElement<S> r(x.space(), k + 1, flip(x.corner()));
  if (x.lost()) r.mark_lost();
  for (const auto& [deg, comp] : x.components()) {
    if (deg != std::make_pair(0, 0))
      throw Error(ErrorCode::ElementNotRepresentable, "include_k acts on D_k(0,0) only");
    for (const auto& [l, c] : comp) {
      auto v = path_vertices(g, l);
      int tr = v[0], br = v[2 * k];
      for (int e : g.incident(tr))
        for (int f : g.incident(br)) {
          Path out{g.other_end(e, tr), {}};
          out.edges.push_back(e);
          graded_detail::append(out.edges, l.edges, 0, 2 * k);
          out.edges.push_back(f);
          out.edges.push_back(f);
          graded_detail::append(out.edges, l.edges, 2 * k, 4 * k);
          out.edges.push_back(e);
          r.add(0, 0, out, c);
        }
    }
  }
  return r;
}

// sigma_g: the path action on every loop.
template <class S>
GradedElement<S> graded_sigma(const GraphAutomorphism& h, const GradedElement<S>& x) {
  GradedElement<S> r(x.space(), x.k(), x.corner());
  if (x.lost()) r.mark_lost();
  for (const auto& [deg, comp] : x.components())
    for (const auto& [l, c] : comp) r.add(deg.first, deg.second, h.apply(l), c);
  return r;
}

struct ScalingReport {
  QScalar c_g;
  bool constant = true;  // mu_V(g w)^2 / mu_V(w)^2 independent of w
  int witness = -1;      // first w where the ratio changes
};

// c_g over all interior vertices w whose image is interior.
template <class S>
ScalingReport scaling_factor(const GradedSpace<S>& sp, const GraphAutomorphism& h) {
  ScalingReport rep;
  bool first = true;
  const WeightedGraph& g = sp.graph();
  for (int w = 0; w < g.num_vertices(); ++w) {
    if (!g.is_interior(w) || !g.is_interior(h.vmap[w])) continue;
    QScalar r = sp.mu_V_exact(h.vmap[w]) / sp.mu_V_exact(w);
    r *= r;
    if (first) {
      rep.c_g = r;
      first = false;
    } else if (r != rep.c_g) {
      rep.constant = false;
      rep.witness = w;
      break;
    }
  }
  if (first) rep.c_g = QScalar(1);
  return rep;
}

template <class S>
GradedElement<S> graded_U(const GraphAutomorphism& h, const GradedElement<S>& x) {
  auto rep = scaling_factor(*x.space(), h);
  if (!rep.constant) throw Error(ErrorCode::WeightNotPreserved, "c_g depends on the vertex");
  return graded_sigma(h, x) * (S(1) / scalar_sqrt<S>(rep.c_g));
}

// Left and right block vertices (the side middles; the corners when k = 0).
inline std::pair<int, int> loop_blocks(const WeightedGraph& g, const Path& l, const LoopFrame& f) {
  auto v = path_vertices(g, l);
  return {v[f.mid_left()], v[f.mid_right()]};
}

// E^S_T(x) = sum_v p_v x p_v
template <class S>
GradedElement<S> expect_T(const GradedElement<S>& x) {
  const WeightedGraph& g = x.space()->graph();
  GradedElement<S> r(x.space(), x.k(), x.corner());
  if (x.lost()) r.mark_lost();
  for (const auto& [deg, comp] : x.components())
    for (const auto& [l, c] : comp) {
      auto [a, b] = loop_blocks(g, l, x.frame(deg.first, deg.second));
      if (a == b) r.add(deg.first, deg.second, l, c);
    }
  return r;
}

// Compression p_v x p_w.
template <class S>
GradedElement<S> compress(const GradedElement<S>& x, int v, int w) {
  const WeightedGraph& g = x.space()->graph();
  GradedElement<S> r(x.space(), x.k(), x.corner());
  if (x.lost()) r.mark_lost();
  for (const auto& [deg, comp] : x.components())
    for (const auto& [l, c] : comp) {
      auto [a, b] = loop_blocks(g, l, x.frame(deg.first, deg.second));
      if (a == v && b == w) r.add(deg.first, deg.second, l, c);
    }
  return r;
}

// A function on the group (indexed like SymmetryOracle::elements) read on
// pairs of vertices: F(g o, h o) = f(h^{-1} g).
template <class S>
struct BlockFunction {
  int o = -1;
  std::map<std::pair<int, int>, S> values;
  std::vector<int> cosets;  // one vertex per coset of G_o
  S at(int v, int w) const {
    auto it = values.find({v, w});
    if (it == values.end()) throw Error(ErrorCode::OrbitNotRepresentable, "block outside the coset table");
    return it->second;
  }
};

// Builds the block table from f on group elements; checks f(1) = 1 and
// G_o-bi-invariance.
template <class S>
BlockFunction<S> block_function(const WeightedGraph& g, const SymmetryOracle& s, int o, const std::vector<S>& f,
                                double tol = 1e-12) {
  if (s.is_tree()) throw Error(ErrorCode::OrbitNotRepresentable, "phi_f needs an explicit finite group");
  const auto& el = s.elements(g);
  if (f.size() != el.size()) throw Error(ErrorCode::SizeMismatch, "f must have one value per group element");
  std::map<GraphAutomorphism, int> index;
  for (size_t i = 0; i < el.size(); ++i) index[el[i]] = static_cast<int>(i);
  int id = index.at(GraphAutomorphism::identity(g));
  if (!ScalarTraits<S>::equal(f[id], S(1), tol)) throw Error(ErrorCode::NotUnital, "f(1) != 1");
  BlockFunction<S> bf;
  bf.o = o;
  std::map<int, int> rep;  // vertex -> element carrying o there
  for (size_t i = 0; i < el.size(); ++i) {
    int v = el[i].vmap[o];
    if (!rep.count(v)) {
      rep[v] = static_cast<int>(i);
      bf.cosets.push_back(v);
    }
  }
  for (size_t a = 0; a < el.size(); ++a)
    for (size_t b = 0; b < el.size(); ++b) {
      int q = index.at(el[b].inverse().compose(el[a]));
      auto key = std::make_pair(el[a].vmap[o], el[b].vmap[o]);
      auto it = bf.values.find(key);
      if (it == bf.values.end()) bf.values.emplace(key, f[q]);
      else if (!ScalarTraits<S>::equal(it->second, f[q], tol))
        throw Error(ErrorCode::NotBiInvariant, "f is not G_o-bi-invariant");
    }
  return bf;
}

// phi_f scales the (p_v, p_w) block by F(v, w).
template <class S>
GradedElement<S> phi_f(const BlockFunction<S>& f, const GradedElement<S>& x) {
  const WeightedGraph& g = x.space()->graph();
  GradedElement<S> r(x.space(), x.k(), x.corner());
  if (x.lost()) r.mark_lost();
  for (const auto& [deg, comp] : x.components())
    for (const auto& [l, c] : comp) {
      auto [a, b] = loop_blocks(g, l, x.frame(deg.first, deg.second));
      r.add(deg.first, deg.second, l, c * f.at(a, b));
    }
  return r;
}

struct PdReport {
  bool positive = false;
  double min_eigenvalue = 0;
  int size = 0;
};

// Gram matrix (F(g o, h o)) over the coset vertices, tested for PSD.
template <class S>
PdReport pd_check(const BlockFunction<S>& f, double tol = 1e-10);

struct ThetaBetaReport {
  long long index = 0;      // [G_o : G_{o,go}]
  double factor = 0;        // sqrt(index / Tr(p_o))
  bool beta_identity = false;
  bool norm_identity = false;
  bool exact = false;
};

template <class S>
struct ThetaBeta {
  GradedElement<S> theta, beta_theta;
  ThetaBetaReport report;
};

// Theta_g(y) = sum over G/G_{o,go} of sigma_s(y) for y in p_o S p_{go} (k = 0),
// and beta compressing back onto (p_o, p_{to}) blocks with t running over
// double coset representatives (g itself represents its own double coset).
template <class S>
ThetaBeta<S> theta_beta(const SymmetryOracle& s, int o, const GraphAutomorphism& gel, const GradedElement<S>& y) {
  const auto& sp = *y.space();
  const WeightedGraph& g = sp.graph();
  if (s.is_tree()) throw Error(ErrorCode::OrbitNotRepresentable, "Theta_g needs an explicit finite group");
  if (y.k() != 0) throw Error(ErrorCode::KMismatch, "Theta_g is implemented at k = 0");
  const int go = gel.vmap[o];
  if (!compress(y, o, go).equals(y)) throw Error(ErrorCode::InvalidParameters, "y is not supported in p_o S p_go");
  const auto& el = s.elements(g);
  // cosets of G_{o,go}: determined by (s o, s go)
  std::map<std::pair<int, int>, int> coset_rep;
  for (size_t i = 0; i < el.size(); ++i) coset_rep.emplace(std::make_pair(el[i].vmap[o], el[i].vmap[go]), static_cast<int>(i));
  long long idx = 0;
  for (const auto& [key, i] : coset_rep)
    if (key.first == o) ++idx;
  ThetaBeta<S> out{GradedElement<S>(y.space(), 0, y.corner()), GradedElement<S>(y.space(), 0, y.corner()), {}};
  for (const auto& [key, i] : coset_rep) out.theta += graded_sigma(el[i], y);

  // double coset representatives t (as vertices t o), g's own first
  std::vector<int> reps{go};
  std::vector<bool> seen(g.num_vertices(), false);
  auto mark = [&](int v) {
    for (const auto& h : el)
      if (h.vmap[o] == o) seen[h.vmap[v]] = true;
  };
  mark(go);
  for (int v : g.vertices(Sign::Plus))
    if (!seen[v]) {
      reps.push_back(v);
      mark(v);
    }
  S tr_po = graded_trace(graded_projection<S>(y.space(), 0, o, y.corner()));
  for (int to : reps) {
    std::set<int> orbit;  // G_o-orbit of t o, of size [G_o : G_{o,to}]
    for (const auto& h : el)
      if (h.vmap[o] == o) orbit.insert(h.vmap[to]);
    long long idx_t = static_cast<long long>(orbit.size());
    S f;
    if constexpr (ScalarTraits<S>::exact) {
      auto r = (QScalar(static_cast<long>(idx_t)) / tr_po).sqrt();
      if (!r) throw Error(ErrorCode::ApproximateOnly, "beta normalisation outside the field");
      f = *r;
    } else {
      f = std::sqrt(static_cast<double>(idx_t) / tr_po);
    }
    out.beta_theta += compress(out.theta, o, to) * f;
  }
  out.report.index = idx;
  out.report.factor = std::sqrt(static_cast<double>(idx) / ScalarTraits<S>::to_double(tr_po));
  S factor;
  if constexpr (ScalarTraits<S>::exact) {
    auto r = (QScalar(static_cast<long>(idx)) / tr_po).sqrt();
    if (!r) throw Error(ErrorCode::ApproximateOnly, "beta normalisation outside the field");
    factor = *r;
  } else {
    factor = std::sqrt(static_cast<double>(idx) / tr_po);
  }
  out.report.exact = ScalarTraits<S>::exact;
  out.report.beta_identity = out.beta_theta.equals(y * factor);
  // tr(Theta Theta†) with tr = Tr(· p_o)/Tr(p_o) against index/Tr(p_o) · Tr(y y†)
  auto po = graded_projection<S>(y.space(), 0, o, y.corner());
  S lhs = graded_trace(graded_mul(graded_mul(out.theta, dagger(out.theta)), po)) / tr_po;
  S rhs = S(static_cast<long>(idx)) / tr_po * graded_trace(graded_mul(y, dagger(y)));
  out.report.norm_identity = ScalarTraits<S>::equal(lhs, rhs, 1e-9);
  return out;
}

// Random element with integer coefficients on loops of degree n+m <= max_degree.
template <class S>
GradedElement<S> random_graded(const GradedSpacePtr<S>& sp, int k, int max_degree, std::mt19937_64& rng, int terms,
                               const std::vector<int>& corners, Sign corner = Sign::Plus, int range = 3) {
  GradedElement<S> r(sp, k, corner);
  std::uniform_int_distribution<int> val(-range, range);
  std::vector<std::tuple<int, int, Path>> pool;
  for (int d = 0; d <= max_degree; ++d)
    for (int n = 0; n <= d; ++n)
      for (auto& l : graded_basis_loops(sp->graph(), k, n, d - n, corners)) pool.emplace_back(n, d - n, std::move(l));
  if (pool.empty()) return r;
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < terms; ++i) {
    const auto& [n, m, l] = pool[pick(rng)];
    int c = val(rng);
    if (c != 0) r.add(n, m, l, S(c));
  }
  return r;
}

}  // namespace pa
