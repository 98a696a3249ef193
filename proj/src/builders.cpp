#include "pa/builders.hpp"

#include <deque>
#include <functional>
#include <map>

namespace pa {

Built build_diagonal(const PermGroup& G, const std::vector<int>& steps) {
  if (steps.empty() || steps.back() != G.identity())
    throw Error(ErrorCode::InvalidParameters, "diagonal builder needs g_{n+1} = 1");
  for (int s : steps)
    if (s < 0 || s >= G.order()) throw Error(ErrorCode::InvalidParameters, "step is not a group element");
  const int N = G.order();
  auto g = std::make_shared<WeightedGraph>();
  for (int x = 0; x < N; ++x) g->add_vertex("p" + std::to_string(x), true);
  for (int x = 0; x < N; ++x) g->add_vertex("m" + std::to_string(x), false);
  // parallel edges appear when a step repeats; label them 1, 2, ...
  std::map<std::pair<int, int>, int> multiplicity;
  std::vector<std::vector<int>> edge_id(N, std::vector<int>(steps.size()));
  for (int x = 0; x < N; ++x)
    for (size_t i = 0; i < steps.size(); ++i) {
      int y = G.mul(x, steps[i]);
      int label = ++multiplicity[{x, y}];
      edge_id[x][i] = g->add_edge("e" + std::to_string(x) + "_" + std::to_string(i + 1), x, N + y, label, QScalar(1));
    }
  g->set_delta(QScalar(static_cast<long>(steps.size())));

  std::vector<GraphAutomorphism> gens;
  for (int h : G.generator_ids()) {
    GraphAutomorphism a;
    a.vmap.resize(2 * N);
    a.emap.resize(g->num_edges());
    for (int x = 0; x < N; ++x) {
      int hx = G.mul(h, x);
      a.vmap[x] = hx;
      a.vmap[N + x] = N + hx;
      for (size_t i = 0; i < steps.size(); ++i) a.emap[edge_id[x][i]] = edge_id[hx][i];
    }
    gens.push_back(std::move(a));
  }
  return Built{"diagonal", g, std::make_shared<SymmetryOracle>(SymmetryOracle::explicit_group(gens, 0))};
}

Built build_diagonal_cyclic(int m) {
  PermGroup G = PermGroup::named("Z" + std::to_string(m));
  int gen = m == 1 ? 0 : G.generator_ids().front();
  return build_diagonal(G, {gen, G.identity()});
}

Built build_bisch_haagerup(int degree, const std::vector<Perm>& H_gens, const std::vector<Perm>& K_gens,
                           bool force_unit_mu) {
  std::vector<Perm> all = H_gens;
  all.insert(all.end(), K_gens.begin(), K_gens.end());
  PermGroup G(degree, all);
  std::vector<int> hid, kid;
  for (const auto& p : H_gens) hid.push_back(G.index_of(p));
  for (const auto& p : K_gens) kid.push_back(G.index_of(p));
  auto H = G.subgroup(hid);
  auto K = G.subgroup(kid);
  std::vector<bool> inH(G.order(), false);
  for (int h : H) inH[h] = true;
  for (int k : K)
    if (k != G.identity() && inH[k]) throw Error(ErrorCode::InvalidParameters, "H and K intersect non-trivially");

  // left cosets gX, indexed by their minimal element
  auto cosets = [&](const std::vector<int>& X) {
    std::vector<int> label(G.order(), -1);
    int next = 0;
    for (int g = 0; g < G.order(); ++g) {
      if (label[g] >= 0) continue;
      for (int x : X) label[G.mul(g, x)] = next;
      ++next;
    }
    return std::make_pair(label, next);
  };
  auto [hc, nh] = cosets(H);
  auto [kc, nk] = cosets(K);

  const long hs = static_cast<long>(H.size()), ks = static_cast<long>(K.size());
  QScalar mu = force_unit_mu ? QScalar(1) : QScalar::sqrt_of(hs * ks) / QScalar(hs);  // sqrt(|K|/|H|)
  auto g = std::make_shared<WeightedGraph>();
  for (int i = 0; i < nh; ++i) g->add_vertex("gH" + std::to_string(i), true);
  for (int i = 0; i < nk; ++i) g->add_vertex("gK" + std::to_string(i), false);
  for (int x = 0; x < G.order(); ++x) g->add_edge("e" + std::to_string(x), hc[x], nh + kc[x], 1, mu);
  if (!force_unit_mu) g->set_delta(QScalar::sqrt_of(hs * ks));
  g->set_field(squarefree_part(hs * ks));

  std::vector<GraphAutomorphism> gens;
  for (int s : G.generator_ids()) {
    GraphAutomorphism a;
    a.vmap.assign(nh + nk, -1);
    a.emap.assign(G.order(), -1);
    for (int x = 0; x < G.order(); ++x) {
      int y = G.mul(s, x);
      a.emap[x] = y;
      a.vmap[hc[x]] = hc[y];
      a.vmap[nh + kc[x]] = nh + kc[y];
    }
    gens.push_back(std::move(a));
  }
  return Built{"bisch_haagerup", g, std::make_shared<SymmetryOracle>(SymmetryOracle::explicit_group(gens, hc[0]))};
}

Built build_biregular_tree(int rplus, int rminus, int radius, SymmetryOracle::TreeMode mode) {
  if (rplus < 2 || rminus < 2) throw Error(ErrorCode::InvalidParameters, "tree degrees must be >= 2");
  if (radius < 2) throw Error(ErrorCode::InvalidParameters, "tree radius must be >= 2");
  auto g = std::make_shared<WeightedGraph>();
  const long prod = static_cast<long>(rplus) * rminus;
  QScalar delta = QScalar::sqrt_of(prod);
  QScalar mu = delta / QScalar(rplus);  // sqrt(r-/r+)
  int root = g->add_vertex("t0", true);
  std::vector<int> depth{0};
  std::deque<int> q{root};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    int d = depth[v];
    if (d == radius) {
      g->add_boundary(v);
      continue;
    }
    bool even = g->is_even(v);
    int children = (even ? rplus : rminus) - (v == root ? 0 : 1);
    for (int c = 0; c < children; ++c) {
      int w = g->add_vertex("t" + std::to_string(g->num_vertices()), !even);
      depth.push_back(d + 1);
      std::string en = "e" + std::to_string(g->num_edges());
      if (even) g->add_edge(en, v, w, 1, mu);
      else g->add_edge(en, w, v, 1, mu);
      q.push_back(w);
    }
  }
  g->set_delta(delta);
  g->set_field(squarefree_part(prod));
  g->set_ball(BallInfo{root, radius});
  return Built{"biregular_tree", g, std::make_shared<SymmetryOracle>(SymmetryOracle::rooted_tree(root, rplus, rminus, mode))};
}

Built build_multi_edge(int n, bool with_group) {
  if (n < 1) throw Error(ErrorCode::InvalidParameters, "multi_edge needs n >= 1");
  auto g = std::make_shared<WeightedGraph>();
  int p = g->add_vertex("p", true);
  int q = g->add_vertex("q", false);
  for (int i = 1; i <= n; ++i) g->add_edge("e" + std::to_string(i), p, q, i, QScalar(1));
  g->set_delta(QScalar(n));
  std::shared_ptr<SymmetryOracle> oracle;
  if (with_group) {
    std::vector<GraphAutomorphism> gens;
    if (n >= 2) {
      PermGroup S = PermGroup::named("S" + std::to_string(n));
      for (int s : S.generator_ids()) gens.push_back(GraphAutomorphism{{0, 1}, S.element(s)});
    }
    oracle = std::make_shared<SymmetryOracle>(SymmetryOracle::explicit_group(gens, p));
    oracle->set_strict_labels(false);  // S_n permutes the labels by design
  }
  return Built{"multi_edge", g, oracle};
}

long long tl_dim_oracle(int n) {
  if (n < 0 || n > 12) throw Error(ErrorCode::InvalidParameters, "tl_dim_oracle supports 0 <= n <= 12");
  // enumerate cap/cup words: a diagram on 2n points is a balanced bracket word
  long long count = 0;
  std::function<void(int, int)> walk = [&](int pos, int open) {
    if (pos == 2 * n) {
      if (open == 0) ++count;
      return;
    }
    if (open < 2 * n - pos) walk(pos + 1, open + 1);
    if (open > 0) walk(pos + 1, open - 1);
  };
  walk(0, 0);
  return count;
}

}  // namespace pa
