#include "pa/symmetry.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace pa {

const char* object_kind_str(ObjectKind k) {
  switch (k) {
    case ObjectKind::Vertices: return "vertices";
    case ObjectKind::Paths: return "paths";
    case ObjectKind::StPairs: return "st_pairs";
  }
  return "?";
}

GraphAutomorphism GraphAutomorphism::identity(const WeightedGraph& g) {
  GraphAutomorphism a;
  a.vmap.resize(g.num_vertices());
  a.emap.resize(g.num_edges());
  std::iota(a.vmap.begin(), a.vmap.end(), 0);
  std::iota(a.emap.begin(), a.emap.end(), 0);
  return a;
}

GraphAutomorphism GraphAutomorphism::compose(const GraphAutomorphism& inner) const {
  GraphAutomorphism r;
  r.vmap.resize(inner.vmap.size());
  r.emap.resize(inner.emap.size());
  for (size_t i = 0; i < inner.vmap.size(); ++i) r.vmap[i] = vmap[inner.vmap[i]];
  for (size_t i = 0; i < inner.emap.size(); ++i) r.emap[i] = emap[inner.emap[i]];
  return r;
}

GraphAutomorphism GraphAutomorphism::inverse() const {
  GraphAutomorphism r;
  r.vmap.resize(vmap.size());
  r.emap.resize(emap.size());
  for (size_t i = 0; i < vmap.size(); ++i) r.vmap[vmap[i]] = static_cast<int>(i);
  for (size_t i = 0; i < emap.size(); ++i) r.emap[emap[i]] = static_cast<int>(i);
  return r;
}

bool GraphAutomorphism::is_identity() const {
  for (size_t i = 0; i < vmap.size(); ++i)
    if (vmap[i] != static_cast<int>(i)) return false;
  for (size_t i = 0; i < emap.size(); ++i)
    if (emap[i] != static_cast<int>(i)) return false;
  return true;
}

SymmetryOracle SymmetryOracle::explicit_group(std::vector<GraphAutomorphism> generators, int base) {
  SymmetryOracle s;
  s.kind_ = Kind::Explicit;
  s.gens_ = std::move(generators);
  s.base_ = base;
  return s;
}

SymmetryOracle SymmetryOracle::rooted_tree(int root, int rplus, int rminus, TreeMode mode) {
  SymmetryOracle s;
  s.kind_ = Kind::RootedTree;
  s.base_ = root;
  s.rplus_ = rplus;
  s.rminus_ = rminus;
  s.mode_ = mode;
  return s;
}

const std::vector<GraphAutomorphism>& SymmetryOracle::elements(const WeightedGraph& g) const {
  if (is_tree()) throw Error(ErrorCode::InvalidParameters, "tree oracle has no finite element list");
  if (closure_) return *closure_;
  constexpr size_t kMax = 200000;
  auto out = std::make_shared<std::vector<GraphAutomorphism>>();
  std::set<GraphAutomorphism> seen;
  auto id = GraphAutomorphism::identity(g);
  out->push_back(id);
  seen.insert(id);
  for (size_t i = 0; i < out->size(); ++i) {
    for (const auto& gen : gens_) {
      auto y = gen.compose((*out)[i]);
      if (seen.insert(y).second) {
        if (out->size() >= kMax) throw Error(ErrorCode::InvalidParameters, "group closure too large");
        out->push_back(std::move(y));
      }
    }
  }
  closure_ = out;
  return *closure_;
}

std::vector<GraphAutomorphism> SymmetryOracle::stabilizer(const WeightedGraph& g, int v) const {
  std::vector<GraphAutomorphism> r;
  for (const auto& h : elements(g))
    if (h.vmap[v] == v) r.push_back(h);
  return r;
}

int SymmetryOracle::based_vertex(const WeightedGraph& g, Sign sign) const {
  int o = base_;
  if (o < 0) {
    if (g.ball()) o = g.ball()->center;
    else {
      auto ev = g.vertices(Sign::Plus);
      if (ev.empty()) throw Error(ErrorCode::InvalidParameters, "graph has no even vertex");
      o = ev.front();
    }
  }
  if (sign == Sign::Plus) return o;
  if (g.incident(o).empty()) throw Error(ErrorCode::InvalidParameters, "base vertex is isolated");
  return g.other_end(g.incident(o).front(), o);
}

namespace {

bool orbit_covers(const WeightedGraph& g, const std::vector<GraphAutomorphism>& gens, Sign sign) {
  auto vs = g.vertices(sign);
  if (vs.size() <= 1) return true;
  std::vector<bool> seen(g.num_vertices(), false);
  std::deque<int> q{vs.front()};
  seen[vs.front()] = true;
  size_t count = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (const auto& h : gens) {
      int y = h.vmap[x];
      if (!seen[y]) {
        seen[y] = true;
        ++count;
        q.push_back(y);
      }
    }
  }
  return count == vs.size();
}

bool is_permutation(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  for (int x : p) {
    if (x < 0 || x >= static_cast<int>(p.size()) || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

}  // namespace

ActionReport validate_action(const WeightedGraph& g, const SymmetryOracle& s) {
  ActionReport r;
  if (s.is_tree()) {
    // Aut of a biregular tree fixes nothing globally and is transitive on each class.
    r.transitive_plus = r.transitive_minus = true;
    return r;
  }
  for (size_t k = 0; k < s.generators().size(); ++k) {
    const auto& h = s.generators()[k];
    std::string gname = "generator " + std::to_string(k);
    if (static_cast<int>(h.vmap.size()) != g.num_vertices() || static_cast<int>(h.emap.size()) != g.num_edges() ||
        !is_permutation(h.vmap) || !is_permutation(h.emap)) {
      r.issues.push_back({ErrorCode::NotAutomorphism, gname + " is not a bijection of vertices and edges"});
      continue;
    }
    bool bad = false;
    for (int v = 0; v < g.num_vertices() && !bad; ++v)
      if (g.is_even(h.vmap[v]) != g.is_even(v)) {
        r.issues.push_back({ErrorCode::NotAutomorphism,
                            gname + " changes the parity of vertex '" + g.vertex_name(v) + "'", v});
        bad = true;
      }
    for (int e = 0; e < g.num_edges() && !bad; ++e) {
      const Edge& a = g.edge(e);
      const Edge& b = g.edge(h.emap[e]);
      if (h.vmap[a.source] != b.source || h.vmap[a.target] != b.target) {
        r.issues.push_back({ErrorCode::NotAutomorphism, gname + " breaks incidence at edge '" + a.name + "'", -1, e});
        bad = true;
      } else if (s.strict_labels() && a.label != b.label) {
        r.issues.push_back({ErrorCode::NotAutomorphism, gname + " changes the label of edge '" + a.name + "'", -1, e});
        bad = true;
      } else if (g.mu(e) != g.mu(h.emap[e])) {
        r.issues.push_back({ErrorCode::WeightNotPreserved, gname + " changes mu on edge '" + a.name + "'", -1, e});
        bad = true;
      }
    }
  }
  if (r.ok()) {
    r.transitive_plus = orbit_covers(g, s.generators(), Sign::Plus);
    r.transitive_minus = orbit_covers(g, s.generators(), Sign::Minus);
    r.group_order = static_cast<long long>(s.elements(g).size());
  }
  return r;
}

std::optional<int> OrbitTable::orbit_of_code(long long code) const {
  auto it = std::lower_bound(objects.begin(), objects.end(), code);
  if (it == objects.end() || *it != code) return std::nullopt;
  return orbit_of[it - objects.begin()];
}

std::vector<std::vector<int>> path_permutations(const SpacePtr& space, const std::vector<GraphAutomorphism>& elems) {
  std::vector<std::vector<int>> perms;
  perms.reserve(elems.size());
  for (const auto& h : elems) {
    std::vector<int> p(space->size());
    for (int i = 0; i < space->size(); ++i) {
      auto j = space->index_of(h.apply(space->path(i)));
      if (!j) throw Error(ErrorCode::TruncationTooSmall, "group element maps a path outside the enumerated space");
      p[i] = *j;
    }
    perms.push_back(std::move(p));
  }
  return perms;
}

namespace {

// Objects of the given kind in increasing code order.
std::vector<long long> object_codes(const WeightedGraph& g, ObjectKind kind, Sign sign, const SpacePtr& space) {
  std::vector<long long> codes;
  if (kind == ObjectKind::Vertices) {
    for (int v : g.vertices(sign)) codes.push_back(v);
  } else if (kind == ObjectKind::Paths) {
    codes.resize(space->size());
    std::iota(codes.begin(), codes.end(), 0LL);
  } else {
    const long long N = space->size();
    codes.reserve(static_cast<size_t>(space->st_count()));
    for (const auto& [blk, ids] : space->blocks())
      for (int a : ids)
        for (int b : ids) codes.push_back(a * N + b);
    std::sort(codes.begin(), codes.end());
  }
  return codes;
}

// Renumber classes so that orbit ids follow the order of minimal codes.
void finish_table(OrbitTable& t, const std::vector<int>& raw_class, int nclasses) {
  std::vector<int> order(nclasses, -1);
  int next = 0;
  t.orbit_of.assign(t.objects.size(), -1);
  t.sizes.clear();
  t.representatives.clear();
  for (size_t i = 0; i < t.objects.size(); ++i) {
    int c = raw_class[i];
    if (order[c] < 0) {
      order[c] = next++;
      t.representatives.push_back(t.objects[i]);
      t.sizes.push_back(0);
    }
    t.orbit_of[i] = order[c];
    ++t.sizes[order[c]];
  }
}

std::vector<int> loop_vertices(const WeightedGraph& g, const Path& a, const Path& b) {
  auto va = path_vertices(g, a);
  auto vb = path_vertices(g, b);
  for (int i = static_cast<int>(vb.size()) - 2; i >= 0; --i) va.push_back(vb[i]);
  return va;
}

std::vector<int> tree_key(const std::vector<int>& verts, const std::vector<int>& dist, SymmetryOracle::TreeMode mode) {
  std::vector<int> key(verts.size());
  if (mode == SymmetryOracle::TreeMode::Pattern) {
    for (size_t i = 0; i < verts.size(); ++i) key[i] = dist[verts[i]];
  } else {
    std::map<int, int> label;
    for (size_t i = 0; i < verts.size(); ++i) {
      auto it = label.emplace(verts[i], static_cast<int>(label.size())).first;
      key[i] = it->second;
    }
  }
  return key;
}

}  // namespace

OrbitTable orbits(const WeightedGraph& g, const SymmetryOracle& s, ObjectKind kind, int n, Sign sign, bool based) {
  OrbitTable t;
  t.kind = kind;
  t.n = n;
  t.sign = sign;
  t.based = based || s.is_tree();
  int bv = t.based ? s.based_vertex(g, sign) : -1;
  if (kind != ObjectKind::Vertices) {
    t.space = t.based ? PathSpace::make(g, n, sign, std::vector<int>{bv}) : PathSpace::make(g, n, sign);
  }
  t.objects = object_codes(g, kind, sign, t.space);
  const size_t M = t.objects.size();
  std::vector<int> raw(M, -1);
  int nclasses = 0;

  if (s.is_tree()) {
    auto dist = g.distances_from(bv);
    std::map<std::vector<int>, int> classes;
    for (size_t i = 0; i < M; ++i) {
      std::vector<int> key;
      if (kind == ObjectKind::Vertices) {
        int v = static_cast<int>(t.objects[i]);
        key = {dist[v]};
      } else if (kind == ObjectKind::Paths) {
        key = tree_key(path_vertices(g, t.space->path(static_cast<int>(t.objects[i]))), dist, s.tree_mode());
      } else {
        auto [a, b] = t.decode_pair(t.objects[i]);
        key = tree_key(loop_vertices(g, t.space->path(a), t.space->path(b)), dist, s.tree_mode());
      }
      auto it = classes.emplace(std::move(key), nclasses).first;
      if (it->second == nclasses) ++nclasses;
      raw[i] = it->second;
    }
    finish_table(t, raw, nclasses);
    return t;
  }

  std::vector<GraphAutomorphism> elems = t.based ? s.stabilizer(g, bv) : s.elements(g);
  std::vector<std::vector<int>> perms;
  if (kind != ObjectKind::Vertices) perms = path_permutations(t.space, elems);
  auto pos = [&](long long code) -> size_t {
    auto it = std::lower_bound(t.objects.begin(), t.objects.end(), code);
    if (it == t.objects.end() || *it != code)
      throw Error(ErrorCode::TruncationTooSmall, "orbit leaves the enumerated object set");
    return static_cast<size_t>(it - t.objects.begin());
  };
  const long long N = t.space ? t.space->size() : 0;
  for (size_t i = 0; i < M; ++i) {
    if (raw[i] >= 0) continue;
    int c = nclasses++;
    raw[i] = c;
    long long code = t.objects[i];
    for (size_t k = 0; k < elems.size(); ++k) {
      long long img;
      if (kind == ObjectKind::Vertices) img = elems[k].vmap[code];
      else if (kind == ObjectKind::Paths) img = perms[k][code];
      else img = perms[k][code / N] * N + perms[k][code % N];
      raw[pos(img)] = c;
    }
  }
  finish_table(t, raw, nclasses);
  return t;
}

template <class S>
BoxElement<S> orbit_sum(const OrbitTable& t, int orbit) {
  if (t.kind != ObjectKind::StPairs) throw Error(ErrorCode::InvalidParameters, "orbit sums need an ST-pair table");
  BoxElement<S> f(t.space);
  for (size_t i = 0; i < t.objects.size(); ++i)
    if (t.orbit_of[i] == orbit) {
      auto [a, b] = t.decode_pair(t.objects[i]);
      f.add(a, b, S(1));
    }
  return f;
}

std::vector<std::vector<int>> noncrossing_matchings(int n) {
  // Partner arrays on 2n points; built from the first point's partner.
  std::function<std::vector<std::vector<int>>(int, int)> rec = [&](int lo, int hi) {
    std::vector<std::vector<int>> out;
    if (lo >= hi) {
      out.emplace_back();
      return out;
    }
    for (int j = lo + 1; j < hi; j += 2) {
      auto inner = rec(lo + 1, j);
      auto outer = rec(j + 1, hi);
      for (const auto& a : inner)
        for (const auto& b : outer) {
          std::vector<int> m;
          m.push_back(j);
          m.insert(m.end(), a.begin(), a.end());
          m.push_back(lo);
          m.insert(m.end(), b.begin(), b.end());
          out.push_back(std::move(m));
        }
    }
    return out;
  };
  return rec(0, 2 * n);
}

template <class S>
BoxElement<S> tl_diagram(const SpacePtr& space, const std::vector<int>& matching) {
  const PathSpace& sp = *space;
  const WeightedGraph& g = sp.graph();
  const int n = sp.n();
  if (static_cast<int>(matching.size()) != 2 * n) throw Error(ErrorCode::SizeMismatch, "matching size != 2n");
  BoxElement<S> r(space);
  std::vector<int> steps(2 * n);
  for (const auto& [blk, ids] : sp.blocks()) {
    for (int a : ids) {
      const Path& pa = sp.path(a);
      for (int b : ids) {
        const Path& pb = sp.path(b);
        for (int i = 0; i < n; ++i) {
          steps[i] = pa.edges[i];
          steps[n + i] = pb.edges[n - 1 - i];
        }
        bool ok = true;
        for (int i = 0; i < 2 * n && ok; ++i) ok = steps[i] == steps[matching[i]];
        if (!ok) continue;
        auto verts = loop_vertices(g, pa, pb);
        S coeff(1);
        for (int i = 0; i < 2 * n; ++i) {
          int j = matching[i];
          if (j < i) continue;
          bool through = i < n && j >= n;
          if (!through) coeff *= scalar_sqrt<S>(g.weight_from(steps[i], verts[i]));
        }
        r.add(a, b, coeff);
      }
    }
  }
  return r;
}

template <class S>
std::vector<BoxElement<S>> fixed_point_basis(const WeightedGraph& g, const SymmetryOracle& s, int n, Sign sign, bool based) {
  std::vector<BoxElement<S>> out;
  if (s.is_tree()) {
    auto space = PathSpace::make(g, n, sign, std::vector<int>{s.based_vertex(g, sign)});
    for (const auto& m : noncrossing_matchings(n)) {
      auto x = tl_diagram<S>(space, m);
      if (!x.is_zero()) out.push_back(std::move(x));
    }
    return out;
  }
  OrbitTable t = orbits(g, s, ObjectKind::StPairs, n, sign, based);
  out.assign(t.count(), BoxElement<S>(t.space));
  for (size_t i = 0; i < t.objects.size(); ++i) {
    auto [a, b] = t.decode_pair(t.objects[i]);
    out[t.orbit_of[i]].add(a, b, S(1));
  }
  return out;
}

template <class S>
BoxElement<S> act(const GraphAutomorphism& h, const BoxElement<S>& x, const SpacePtr& target) {
  const SpacePtr& tgt = target ? target : x.space();
  const PathSpace& sp = *x.space();
  BoxElement<S> r(tgt);
  for (const auto& [k, v] : x.entries()) {
    auto a = tgt->index_of(h.apply(sp.path(k.first)));
    auto b = tgt->index_of(h.apply(sp.path(k.second)));
    if (!a || !b) throw Error(ErrorCode::TruncationTooSmall, "image path outside target space");
    r.add(*a, *b, v);
  }
  return r;
}

template BoxElement<QScalar> orbit_sum<QScalar>(const OrbitTable&, int);
template BoxElement<double> orbit_sum<double>(const OrbitTable&, int);
template BoxElement<QScalar> tl_diagram<QScalar>(const SpacePtr&, const std::vector<int>&);
template BoxElement<double> tl_diagram<double>(const SpacePtr&, const std::vector<int>&);
template std::vector<BoxElement<QScalar>> fixed_point_basis<QScalar>(const WeightedGraph&, const SymmetryOracle&, int, Sign, bool);
template std::vector<BoxElement<double>> fixed_point_basis<double>(const WeightedGraph&, const SymmetryOracle&, int, Sign, bool);
template BoxElement<QScalar> act<QScalar>(const GraphAutomorphism&, const BoxElement<QScalar>&, const SpacePtr&);
template BoxElement<double> act<double>(const GraphAutomorphism&, const BoxElement<double>&, const SpacePtr&);

SphericalityReport check_spherical(const WeightedGraph& g, const SymmetryOracle& s) {
  SphericalityReport r;
  auto ar = validate_action(g, s);
  if (!ar.ok()) throw Error(ar.issues.front().code, ar.issues.front().message);
  if (!ar.transitive_plus || !ar.transitive_minus) {
    r.candidate = false;
    r.note = "action is not transitive on both colour classes";
    return r;
  }
  r.v_plus = s.based_vertex(g, Sign::Plus);
  r.v_minus = s.based_vertex(g, Sign::Minus);

  // edge orbits
  std::vector<std::vector<int>> edge_orbits;
  if (s.is_tree()) {
    std::vector<int> all(g.num_edges());
    std::iota(all.begin(), all.end(), 0);
    edge_orbits.push_back(all);
  } else {
    std::vector<int> seen(g.num_edges(), -1);
    for (int e = 0; e < g.num_edges(); ++e) {
      if (seen[e] >= 0) continue;
      edge_orbits.emplace_back();
      for (const auto& h : s.elements(g)) {
        int f = h.emap[e];
        if (seen[f] < 0) {
          seen[f] = static_cast<int>(edge_orbits.size()) - 1;
          edge_orbits.back().push_back(f);
        }
      }
      std::sort(edge_orbits.back().begin(), edge_orbits.back().end());
    }
  }

  r.spherical = true;
  for (const auto& orb : edge_orbits) {
    SphericalEdgeCheck c;
    c.edge = orb.front();
    long cs = 0, ct = 0;
    QScalar tr, tl;
    for (int f : orb) {
      const Edge& ed = g.edge(f);
      if (ed.source == r.v_plus) {
        ++cs;
        tr += g.mu(f);  // tau_r(e_{α,α}) at s(α)
      }
      if (ed.target == r.v_minus) {
        ++ct;
        tl += g.weight_from(f, ed.target);  // tau_l(e_{α,α}) = mu(ᾱ) at t(α)
      }
    }
    c.lhs = g.mu(c.edge) * QScalar(cs);
    c.rhs = g.mu(c.edge).inverse() * QScalar(ct);
    c.tau_r = tr;
    c.tau_l = tl;
    c.pass = c.lhs == c.rhs;
    c.agrees = (c.tau_l == c.tau_r) == c.pass;
    r.spherical = r.spherical && c.pass;
    r.criterion_agrees = r.criterion_agrees && c.agrees;
    r.edges.push_back(c);
  }
  return r;
}

StabilizerReport stabilizer_data(const WeightedGraph& g, const SymmetryOracle& s, int o) {
  if (!g.is_even(o)) throw Error(ErrorCode::SignMismatch, "base vertex must be even");
  StabilizerReport r;
  r.base = o;
  auto dist = g.distances_from(o);
  if (s.is_tree()) {
    r.scoped = true;
    int maxd = 0;
    for (int v : g.vertices(Sign::Plus)) maxd = std::max(maxd, dist[v]);
    r.scope_radius = g.ball() ? g.ball()->radius : maxd;
    std::map<int, std::pair<int, long long>> spheres;
    for (int v : g.vertices(Sign::Plus)) {
      auto it = spheres.find(dist[v]);
      if (it == spheres.end()) spheres[dist[v]] = {v, 1};
      else ++it->second.second;
    }
    for (const auto& [d, rs] : spheres) {
      r.orbit_representatives.push_back(rs.first);
      r.orbit_sizes.push_back(rs.second);
      r.orbit_radius.push_back(d);
    }
    return r;
  }
  auto ar = validate_action(g, s);
  if (!ar.ok()) throw Error(ar.issues.front().code, ar.issues.front().message);
  if (!ar.transitive_plus) throw Error(ErrorCode::NotTransitive, "action is not transitive on V+");
  auto stab = s.stabilizer(g, o);
  std::vector<bool> seen(g.num_vertices(), false);
  for (int v : g.vertices(Sign::Plus)) {
    if (seen[v]) continue;
    long long size = 0;
    for (const auto& h : stab) {
      int w = h.vmap[v];
      if (!seen[w]) {
        seen[w] = true;
        ++size;
      }
    }
    r.orbit_representatives.push_back(v);
    r.orbit_sizes.push_back(size);
    r.orbit_radius.push_back(dist[v]);
  }
  return r;
}

WeightedGraph infer_unique_weight(const WeightedGraph& g, const SymmetryOracle& action) {
  int rp = 0, rm = 0;
  if (action.is_tree()) {
    rp = action.rplus();
    rm = action.rminus();
  } else {
    auto ar = validate_action(g, action);
    if (!ar.ok()) throw Error(ar.issues.front().code, ar.issues.front().message);
    if (!ar.transitive_plus || !ar.transitive_minus)
      throw Error(ErrorCode::NotTransitive, "action must be transitive on V+ and V-");
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!g.is_interior(v)) continue;
    int& r = g.is_even(v) ? rp : rm;
    if (r == 0) r = g.degree(v);
    if (r != g.degree(v)) throw Error(ErrorCode::NotTransitive, "degrees differ inside a colour class");
  }
  if (rp == 0 || rm == 0) throw Error(ErrorCode::InvalidParameters, "no interior vertex in some colour class");
  // Perron-Frobenius vector is constant on each class: r+ beta = delta alpha, r- alpha = delta beta.
  QScalar delta = QScalar::sqrt_of(static_cast<long>(rp) * rm);
  QScalar mu = delta / QScalar(rp);
  WeightedGraph out;
  for (int v = 0; v < g.num_vertices(); ++v) out.add_vertex(g.vertex_name(v), g.is_even(v));
  for (const auto& e : g.edges()) out.add_edge(e.name, e.source, e.target, e.label, mu);
  for (int b : g.boundary()) out.add_boundary(b);
  if (g.ball()) out.set_ball(*g.ball());
  out.set_delta(delta);
  out.set_field(squarefree_part(static_cast<long>(rp) * rm));
  return out;
}

}  // namespace pa
