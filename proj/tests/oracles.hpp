#pragma once

// Independent reference computations. Nothing here calls the routine it is
// used to check.

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "pa/boxes.hpp"
#include "pa/graph.hpp"
#include "pa/group.hpp"
#include "pa/paths.hpp"
#include "pa/symmetry.hpp"

namespace pa::oracle {

template <class S>
Eigen::MatrixXd dense(const BoxElement<S>& x) {
  const int N = x.space()->size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
  for (const auto& [k, v] : x.entries()) m(k.first, k.second) = ScalarTraits<S>::to_double(v);
  return m;
}

// mu_V by walking a spanning tree from the first even vertex; no validation.
inline std::vector<QScalar> walk_weights(const WeightedGraph& g) {
  int base = 0;
  while (!g.is_even(base)) ++base;
  std::vector<QScalar> w(g.num_vertices());
  std::vector<bool> seen(g.num_vertices(), false);
  std::vector<int> stack{base};
  w[base] = QScalar(1);
  seen[base] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int e : g.incident(v)) {
      int u = g.other_end(e, v);
      if (seen[u]) continue;
      seen[u] = true;
      w[u] = g.is_even(v) ? w[v] * g.mu(e) : w[v] / g.mu(e);
      stack.push_back(u);
    }
  }
  return w;
}

// tau_r, tau_l read off the diagonal with mu(path) = mu_V(t) / mu_V(s).
struct TraceValues {
  std::map<int, QScalar> tau_r, tau_l;
};
inline TraceValues traces_by_weights(const BoxElement<QScalar>& x, const std::vector<QScalar>& muV) {
  const PathSpace& sp = *x.space();
  TraceValues t;
  for (const auto& [k, v] : x.entries()) {
    if (k.first != k.second) continue;
    int s = sp.source(k.first), e = sp.target(k.first);
    t.tau_r[s] += v * muV[e] / muV[s];
    t.tau_l[e] += v * muV[s] / muV[e];
  }
  for (auto it = t.tau_r.begin(); it != t.tau_r.end();) it = it->second.is_zero() ? t.tau_r.erase(it) : std::next(it);
  for (auto it = t.tau_l.begin(); it != t.tau_l.end();) it = it->second.is_zero() ? t.tau_l.erase(it) : std::next(it);
  return t;
}

template <class S>
bool same_function(const P0Element<S>& p, const std::map<int, S>& m) {
  std::set<int> keys;
  for (const auto& [v, x] : p.values) keys.insert(v);
  for (const auto& [v, x] : m) keys.insert(v);
  for (int v : keys) {
    auto it = m.find(v);
    S rhs = it == m.end() ? S(0) : it->second;
    if (!ScalarTraits<S>::equal(p.at(v), rhs)) return false;
  }
  return true;
}

// Group closure by breadth-first search over compositions of the generators.
inline std::vector<GraphAutomorphism> closure(const std::vector<GraphAutomorphism>& gens, int nv, int ne) {
  GraphAutomorphism id;
  id.vmap.resize(nv);
  id.emap.resize(ne);
  std::iota(id.vmap.begin(), id.vmap.end(), 0);
  std::iota(id.emap.begin(), id.emap.end(), 0);
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen{{id.vmap, id.emap}};
  std::vector<GraphAutomorphism> out{id};
  for (size_t i = 0; i < out.size(); ++i)
    for (const auto& g : gens) {
      GraphAutomorphism h;
      h.vmap.resize(nv);
      h.emap.resize(ne);
      for (int v = 0; v < nv; ++v) h.vmap[v] = g.vmap[out[i].vmap[v]];
      for (int e = 0; e < ne; ++e) h.emap[e] = g.emap[out[i].emap[e]];
      if (seen.insert({h.vmap, h.emap}).second) out.push_back(h);
    }
  return out;
}

// Number of orbits on ST_n^sign pairs, by union-find over images under every element.
inline int st_orbit_count(const WeightedGraph& g, const std::vector<GraphAutomorphism>& gens, int n, Sign sign) {
  auto elems = closure(gens, g.num_vertices(), g.num_edges());
  auto sp = PathSpace::make(g, n, sign);
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [blk, ids] : sp->blocks())
    for (int a : ids)
      for (int b : ids) {
        id[{a, b}] = static_cast<int>(pairs.size());
        pairs.emplace_back(a, b);
      }
  std::vector<int> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& h : elems)
    for (size_t i = 0; i < pairs.size(); ++i) {
      const Path& pa = sp->path(pairs[i].first);
      const Path& pb = sp->path(pairs[i].second);
      Path qa{h.vmap[pa.start], {}}, qb{h.vmap[pb.start], {}};
      for (int e : pa.edges) qa.edges.push_back(h.emap[e]);
      for (int e : pb.edges) qb.edges.push_back(h.emap[e]);
      int j = id.at({*sp->index_of(qa), *sp->index_of(qb)});
      parent[find(static_cast<int>(i))] = find(j);
    }
  std::set<int> roots;
  for (size_t i = 0; i < pairs.size(); ++i) roots.insert(find(static_cast<int>(i)));
  return static_cast<int>(roots.size());
}

inline long long catalan(int n) {
  long long c = 1;  // C_{k+1} = C_k * 2(2k+1)/(k+2)
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

// 1_{D1} * 1_{D2} evaluated at every element by direct counting, with double
// cosets found by brute force.
struct BruteHecke {
  std::vector<int> dc_of;  // element -> double coset id, numbered by first element
  int count = 0;
};
inline BruteHecke brute_double_cosets(const PermGroup& G, const std::vector<int>& H) {
  BruteHecke b;
  b.dc_of.assign(G.order(), -1);
  for (int g = 0; g < G.order(); ++g) {
    if (b.dc_of[g] >= 0) continue;
    for (int h : H)
      for (int k : H) b.dc_of[G.mul(G.mul(h, g), k)] = b.count;
    ++b.count;
  }
  return b;
}
inline long long convolution_count(const PermGroup& G, const BruteHecke& b, int d1, int d2, int x) {
  long long c = 0;
  for (int y = 0; y < G.order(); ++y)
    if (b.dc_of[y] == d1 && b.dc_of[G.mul(G.inv(y), x)] == d2) ++c;
  return c;
}

}  // namespace pa::oracle
