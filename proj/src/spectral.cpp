#include "pa/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "pa/parallel.hpp"

namespace pa {

namespace {

using cd = std::complex<double>;
using MatC = Eigen::MatrixXcd;

double delta_of(const WeightedGraph& g) {
  auto r = validate_weight(g);
  if (!r.delta) throw Error(ErrorCode::InvalidParameters, "modulus unavailable");
  return r.delta->to_double();
}

// One level Q_n^+ of the based fixed-point tower, split block by block.
struct Level {
  int n = 0;
  int o = -1;
  SpacePtr space;
  bool orbit_mode = true;
  OrbitTable table;
  std::vector<BoxElement<double>> dense;

  std::vector<int> reps;                     // representative targets
  std::vector<long long> rep_size;           // |G_o . w0|
  // Groups of representative blocks that are split together. Orbit sums give
  // a direct sum over blocks (one group per block); the TL family does not,
  // so all its blocks form one block-diagonal group.
  std::vector<std::vector<int>> rep_paths;   // path ids per group
  std::vector<std::vector<int>> row_rep;     // representative index per row
  std::vector<std::vector<int>> block_oid;   // orbit mode: orbit id per entry (row major)
  std::vector<std::vector<Eigen::MatrixXd>> block_basis;  // dense mode
  std::vector<int> block_dim;

  struct Comp {
    int rep = 0;     // group index
    int target = -1; // representative carrying most of the trace
    int d = 0;
    int mult = 0;
    MatC V;                  // orthonormal columns spanning the range of z
    std::vector<cd> alpha;   // global coordinates of z
    double weight = 0;
  };
  std::vector<Comp> comps;
  bool numeric = true;
  int retries = 0;
  std::vector<std::string> warnings;

  int coeff_count() const { return orbit_mode ? table.count() : static_cast<int>(dense.size()); }

  MatC element(int b, const std::vector<cd>& coef) const {
    int m = static_cast<int>(rep_paths[b].size());
    MatC M = MatC::Zero(m, m);
    if (orbit_mode) {
      const auto& oid = block_oid[b];
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) M(i, j) = coef[oid[i * m + j]];
    } else {
      for (size_t c = 0; c < dense.size(); ++c)
        if (coef[c] != cd(0)) M += coef[c] * block_basis[b][c].cast<cd>();
    }
    return M;
  }

  // Value at (p, q) of the global element with coordinates alpha.
  cd global_value(const std::vector<cd>& alpha, int p, int q) const {
    if (orbit_mode) {
      auto id = table.orbit_of_code(table.pair_code(p, q));
      return id ? alpha[*id] : cd(0);
    }
    cd v = 0;
    for (size_t c = 0; c < dense.size(); ++c)
      if (alpha[c] != cd(0)) v += alpha[c] * dense[c].get(p, q);
    return v;
  }
};

std::vector<cd> random_coeffs(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<cd> c(k);
  for (auto& x : c) {
    double re = N(rng);
    double im = N(rng);
    x = cd(re, im);
  }
  return c;
}

int numeric_rank(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

Level build_level(const WeightedGraph& g, const SymmetryOracle& s, int n, int o) {
  Level L;
  L.n = n;
  L.o = o;
  if (s.is_tree()) {
    L.orbit_mode = false;
    L.dense = fixed_point_basis<double>(g, s, n, Sign::Plus);
    L.space = L.dense.empty() ? PathSpace::make(g, n, Sign::Plus, std::vector<int>{o}) : L.dense.front().space();
  } else {
    L.table = orbits(g, s, ObjectKind::StPairs, n, Sign::Plus, true);
    L.space = L.table.space;
  }
  const PathSpace& sp = *L.space;

  // classes of targets under G_o
  std::vector<int> cls(g.num_vertices(), -1);
  std::vector<int> targets;
  for (const auto& [blk, ids] : sp.blocks()) targets.push_back(blk.second);
  std::sort(targets.begin(), targets.end());
  if (s.is_tree()) {
    auto dist = g.distances_from(o);
    std::map<int, int> by_dist;
    for (int w : targets) {
      auto it = by_dist.emplace(dist[w], static_cast<int>(by_dist.size())).first;
      cls[w] = it->second;
    }
  } else {
    auto stab = s.stabilizer(g, o);
    int next = 0;
    for (int w : targets) {
      if (cls[w] >= 0) continue;
      for (const auto& h : stab) cls[h.vmap[w]] = next;
      ++next;
    }
  }
  std::map<int, int> rep_index;
  for (int w : targets) {
    auto it = rep_index.find(cls[w]);
    if (it == rep_index.end()) {
      rep_index[cls[w]] = static_cast<int>(L.reps.size());
      L.reps.push_back(w);
      L.rep_size.push_back(1);
    } else {
      ++L.rep_size[it->second];
    }
  }
  if (L.orbit_mode) {
    for (int r = 0; r < static_cast<int>(L.reps.size()); ++r) {
      L.rep_paths.push_back(sp.block_of(o, L.reps[r]));
      L.row_rep.emplace_back(L.rep_paths.back().size(), r);
    }
  } else {
    L.rep_paths.emplace_back();
    L.row_rep.emplace_back();
    for (int r = 0; r < static_cast<int>(L.reps.size()); ++r)
      for (int p : sp.block_of(o, L.reps[r])) {
        L.rep_paths[0].push_back(p);
        L.row_rep[0].push_back(r);
      }
  }

  const int B = static_cast<int>(L.rep_paths.size());
  L.block_dim.assign(B, 0);
  if (L.orbit_mode) {
    L.block_oid.resize(B);
    for (int b = 0; b < B; ++b) {
      const auto& P = L.rep_paths[b];
      int m = static_cast<int>(P.size());
      auto& oid = L.block_oid[b];
      oid.resize(static_cast<size_t>(m) * m);
      std::vector<int> ids;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          auto id = L.table.orbit_of_code(L.table.pair_code(P[i], P[j]));
          if (!id) throw Error(ErrorCode::CenterSplitFailure, "ST pair missing from orbit table");
          oid[i * m + j] = *id;
          ids.push_back(*id);
        }
      std::sort(ids.begin(), ids.end());
      L.block_dim[b] = static_cast<int>(std::unique(ids.begin(), ids.end()) - ids.begin());
    }
  } else {
    L.block_basis.resize(B);
    for (int b = 0; b < B; ++b) {
      const auto& P = L.rep_paths[b];
      int m = static_cast<int>(P.size());
      Eigen::MatrixXd stacked(m * m, L.dense.size());
      for (size_t c = 0; c < L.dense.size(); ++c) {
        Eigen::MatrixXd X(m, m);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) X(i, j) = L.dense[c].get(P[i], P[j]);
        for (int k = 0; k < m * m; ++k) stacked(k, c) = X(k % m, k / m);
        L.block_basis[b].push_back(std::move(X));
      }
      L.block_dim[b] = numeric_rank(stacked);
    }
  }
  return L;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// Numeric Wedderburn splitting of the block algebra: a generic Hermitian
// element separates the minimal projections, a generic element links the
// clusters that belong to one simple summand.
bool split_block(Level& L, int b, std::mt19937_64& rng, std::vector<Level::Comp>& out) {
  const int k = L.coeff_count();
  MatC x = L.element(b, random_coeffs(k, rng));
  MatC h = x + x.adjoint();
  const int m = static_cast<int>(h.rows());
  Eigen::SelfAdjointEigenSolver<MatC> es(h);
  if (es.info() != Eigen::Success) return false;
  const Eigen::VectorXd& ev = es.eigenvalues();
  const MatC& V = es.eigenvectors();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<std::pair<int, int>> clusters;
  for (int i = 0; i < m;) {
    int j = i + 1;
    while (j < m && ev(j) - ev(j - 1) <= 1e-7 * scale) ++j;
    clusters.push_back({i, j});
    i = j;
  }
  const int C = static_cast<int>(clusters.size());
  MatC r = L.element(b, random_coeffs(k, rng));
  double rscale = std::max(1.0, r.norm());
  UnionFind uf(C);
  for (int a = 0; a < C; ++a) {
    Eigen::VectorXcd y = r * V.col(clusters[a].first);
    Eigen::VectorXcd coeff = V.adjoint() * y;
    for (int c = 0; c < C; ++c) {
      if (c == a) continue;
      double nrm = coeff.segment(clusters[c].first, clusters[c].second - clusters[c].first).norm();
      if (nrm > 1e-8 * rscale) uf.unite(a, c);
    }
  }
  std::map<int, std::vector<int>> comp;
  for (int a = 0; a < C; ++a) comp[uf.find(a)].push_back(a);
  int sum_sq = 0;
  out.clear();
  for (const auto& [root, cl] : comp) {
    Level::Comp z;
    z.rep = b;
    z.d = static_cast<int>(cl.size());
    z.mult = clusters[cl.front()].second - clusters[cl.front()].first;
    for (int a : cl)
      if (clusters[a].second - clusters[a].first != z.mult) return false;
    z.V.resize(m, z.d * z.mult);
    int col = 0;
    for (int a : cl)
      for (int i = clusters[a].first; i < clusters[a].second; ++i) z.V.col(col++) = V.col(i);
    sum_sq += z.d * z.d;
    out.push_back(std::move(z));
  }
  return sum_sq == L.block_dim[b];
}

void decompose(Level& L, std::uint64_t seed, double delta, const VertexWeight& mw) {
  const int B = static_cast<int>(L.rep_paths.size());
  std::vector<std::vector<Level::Comp>> per_block(B);
  std::vector<int> tries(B, 0);
  parallel_for(B, [&](int b) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::mt19937_64 rng(seed + 7919ULL * static_cast<std::uint64_t>(L.n) + 104729ULL * static_cast<std::uint64_t>(b) +
                          1000003ULL * static_cast<std::uint64_t>(attempt));
      tries[b] = attempt;
      if (split_block(L, b, rng, per_block[b])) return;
    }
    throw Error(ErrorCode::CenterSplitFailure, "centre splitting failed at level " + std::to_string(L.n));
  });
  for (int b = 0; b < B; ++b) {
    L.retries += tries[b];
    for (auto& z : per_block[b]) L.comps.push_back(std::move(z));
  }

  // global coordinates of each central projection
  const int K = L.coeff_count();
  if (L.orbit_mode) {
    for (auto& z : L.comps) {
      z.alpha.assign(K, cd(0));
      const auto& oid = L.block_oid[z.rep];
      int m = static_cast<int>(L.rep_paths[z.rep].size());
      std::vector<bool> done(K, false);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          int id = oid[i * m + j];
          if (done[id]) continue;
          done[id] = true;
          z.alpha[id] = z.V.row(i).dot(z.V.row(j));  // conj(row i) . row j = conj(z(i,j))
          z.alpha[id] = std::conj(z.alpha[id]);
        }
    }
  } else {
    // stack all representative blocks: the element is determined by them
    int rows = 0;
    for (const auto& P : L.rep_paths) rows += static_cast<int>(P.size() * P.size());
    MatC A(rows, K);
    int off = 0;
    for (int b = 0; b < B; ++b) {
      int m = static_cast<int>(L.rep_paths[b].size());
      for (int c = 0; c < K; ++c)
        for (int k = 0; k < m * m; ++k) A(off + k, c) = L.block_basis[b][c](k % m, k / m);
      off += m * m;
    }
    auto cod = A.completeOrthogonalDecomposition();
    for (auto& z : L.comps) {
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(rows);
      off = 0;
      for (int b = 0; b < B; ++b) {
        int m = static_cast<int>(L.rep_paths[b].size());
        if (b == z.rep) {
          MatC Z = z.V * z.V.adjoint();
          for (int k = 0; k < m * m; ++k) rhs(off + k) = Z(k % m, k / m);
        }
        off += m * m;
      }
      Eigen::VectorXcd a = cod.solve(rhs);
      double res = (A * a - rhs).norm();
      if (res > 1e-7 * std::max(1.0, rhs.norm()))
        L.warnings.push_back("central projection not in the span at level " + std::to_string(L.n));
      z.alpha.assign(a.data(), a.data() + a.size());
    }
  }

  // tr_n of a minimal projection: delta^-n sum_w mu_V(w)/mu_V(o) (trace of z on block w) / d
  for (auto& z : L.comps) {
    double t = 0;
    std::vector<double> per_rep(L.reps.size(), 0.0);
    for (int i = 0; i < z.V.rows(); ++i) per_rep[L.row_rep[z.rep][i]] += z.V.row(i).squaredNorm();
    int best = 0;
    for (size_t r = 0; r < L.reps.size(); ++r) {
      t += static_cast<double>(L.rep_size[r]) * mw.mu_V[L.reps[r]].to_double() * per_rep[r];
      if (per_rep[r] > per_rep[best]) best = static_cast<int>(r);
    }
    z.weight = std::pow(delta, -L.n) * t / mw.mu_V[L.o].to_double() / z.d;
    z.target = L.reps[best];
  }
}

BratteliDiagram connect(const Level& lo, const Level& up) {
  BratteliDiagram D;
  D.n = lo.n;
  D.source = lo.o;
  D.approximate = true;
  D.retries = lo.retries + up.retries;
  D.warnings = lo.warnings;
  D.warnings.insert(D.warnings.end(), up.warnings.begin(), up.warnings.end());
  for (const auto& z : lo.comps) D.lower.push_back({z.target, z.d, z.mult, z.weight});
  for (const auto& z : up.comps) D.upper.push_back({z.target, z.d, z.mult, z.weight});
  const int I = static_cast<int>(lo.comps.size());
  const int J = static_cast<int>(up.comps.size());
  D.m.assign(I, std::vector<long long>(J, 0));
  const PathSpace& ls = *lo.space;
  const PathSpace& us = *up.space;

  const int B = static_cast<int>(up.rep_paths.size());
  for (int b = 0; b < B; ++b) {
    const auto& P = up.rep_paths[b];
    // rows grouped by last edge
    std::map<int, std::vector<int>> by_edge;
    for (int k = 0; k < static_cast<int>(P.size()); ++k) by_edge[us.path(P[k]).edges.back()].push_back(k);
    std::vector<int> prefix(P.size());
    for (int k = 0; k < static_cast<int>(P.size()); ++k) {
      Path p = us.path(P[k]);
      p.edges.pop_back();
      auto id = ls.index_of(p);
      if (!id) throw Error(ErrorCode::TruncationTooSmall, "prefix missing from level below");
      prefix[k] = *id;
    }
    // X_i restricted to each last-edge sub-block
    std::vector<std::vector<MatC>> X(I);
    for (int i = 0; i < I; ++i)
      for (const auto& [e, rows] : by_edge) {
        int s = static_cast<int>(rows.size());
        MatC Xi(s, s);
        for (int a = 0; a < s; ++a)
          for (int c = 0; c < s; ++c) Xi(a, c) = lo.global_value(lo.comps[i].alpha, prefix[rows[a]], prefix[rows[c]]);
        X[i].push_back(std::move(Xi));
      }
    for (int j = 0; j < J; ++j) {
      const auto& zj = up.comps[j];
      if (zj.rep != b) continue;
      int t = 0;
      std::vector<cd> tr(I, cd(0));
      for (const auto& [e, rows] : by_edge) {
        int s = static_cast<int>(rows.size());
        MatC Vs(s, zj.V.cols());
        for (int a = 0; a < s; ++a) Vs.row(a) = zj.V.row(rows[a]);
        MatC Zs = Vs * Vs.adjoint();
        for (int i = 0; i < I; ++i) tr[i] += (X[i][t].array() * Zs.transpose().array()).sum();
        ++t;
      }
      for (int i = 0; i < I; ++i) {
        double val = tr[i].real() / (static_cast<double>(lo.comps[i].d) * zj.mult);
        long long r = std::llround(val);
        if (std::abs(val - static_cast<double>(r)) > 1e-6 || std::abs(tr[i].imag()) > 1e-6)
          D.warnings.push_back("non-integral multiplicity " + std::to_string(val) + " at level " + std::to_string(lo.n));
        D.m[i][j] = std::max(0LL, r);
      }
    }
  }
  for (int j = 0; j < J; ++j) {
    long long sum = 0;
    for (int i = 0; i < I; ++i) sum += D.m[i][j] * D.lower[i].dim;
    if (sum != D.upper[j].dim) D.dims_consistent = false;
  }
  for (int i = 0; i < I; ++i) {
    double sum = 0;
    for (int j = 0; j < J; ++j) sum += static_cast<double>(D.m[i][j]) * D.upper[j].trace_weight;
    if (std::abs(sum - D.lower[i].trace_weight) > 1e-9 * std::max(1.0, D.lower[i].trace_weight))
      D.trace_consistent = false;
  }
  D.norm = multiplicity_norm(D.m);
  return D;
}

}  // namespace

double multiplicity_norm(const std::vector<std::vector<long long>>& m) {
  if (m.empty() || m.front().empty()) return 0.0;
  Eigen::MatrixXd A(m.size(), m.front().size());
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) A(i, j) = static_cast<double>(m[i][j]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues()(0);
}

BratteliDiagram bratteli_P(const WeightedGraph& g, int n, int source) {
  auto lo = PathSpace::make(g, n, Sign::Plus, std::vector<int>{source});
  auto up = PathSpace::make(g, n + 1, Sign::Plus, std::vector<int>{source});
  double delta = delta_of(g);
  VertexWeight mw = vertex_weights(g, source);
  BratteliDiagram D;
  D.n = n;
  D.source = source;
  std::map<int, int> lo_idx, up_idx;
  for (const auto& [blk, ids] : lo->blocks()) {
    lo_idx[blk.second] = static_cast<int>(D.lower.size());
    D.lower.push_back({blk.second, static_cast<int>(ids.size()), 1, std::pow(delta, -n) * mw.mu_V[blk.second].to_double()});
  }
  for (const auto& [blk, ids] : up->blocks()) {
    up_idx[blk.second] = static_cast<int>(D.upper.size());
    D.upper.push_back(
        {blk.second, static_cast<int>(ids.size()), 1, std::pow(delta, -n - 1) * mw.mu_V[blk.second].to_double()});
  }
  D.m.assign(D.lower.size(), std::vector<long long>(D.upper.size(), 0));
  for (const auto& [w, i] : lo_idx)
    for (int e : g.incident(w)) {
      int w2 = g.other_end(e, w);
      auto it = up_idx.find(w2);
      if (it != up_idx.end()) ++D.m[i][it->second];
    }
  for (size_t j = 0; j < D.upper.size(); ++j) {
    long long s = 0;
    for (size_t i = 0; i < D.lower.size(); ++i) s += D.m[i][j] * D.lower[i].dim;
    if (s != D.upper[j].dim) D.dims_consistent = false;
  }
  for (size_t i = 0; i < D.lower.size(); ++i) {
    double s = 0;
    for (size_t j = 0; j < D.upper.size(); ++j) s += static_cast<double>(D.m[i][j]) * D.upper[j].trace_weight;
    if (std::abs(s - D.lower[i].trace_weight) > 1e-9 * std::max(1.0, D.lower[i].trace_weight)) D.trace_consistent = false;
  }
  D.norm = multiplicity_norm(D.m);
  return D;
}

std::vector<BratteliDiagram> bratteli_Q_tower(const WeightedGraph& g, const SymmetryOracle& s, int max_n,
                                              std::uint64_t seed) {
  if (!s.is_tree()) {
    auto ar = validate_action(g, s);
    if (!ar.ok()) throw Error(ar.issues.front().code, ar.issues.front().message);
    if (!ar.transitive_plus) throw Error(ErrorCode::NotTransitive, "Q_n is computed on one source orbit; action must be transitive on V+");
  }
  const int o = s.based_vertex(g, Sign::Plus);
  const double delta = delta_of(g);
  VertexWeight mw = vertex_weights(g, o);
  std::vector<BratteliDiagram> out;
  Level prev = build_level(g, s, 0, o);
  decompose(prev, seed, delta, mw);
  for (int n = 0; n <= max_n; ++n) {
    Level next = build_level(g, s, n + 1, o);
    decompose(next, seed, delta, mw);
    out.push_back(connect(prev, next));
    prev = std::move(next);
  }
  return out;
}

BratteliDiagram bratteli_Q(const WeightedGraph& g, const SymmetryOracle& s, int n, std::uint64_t seed) {
  if (!s.is_tree()) {
    auto ar = validate_action(g, s);
    if (!ar.ok()) throw Error(ar.issues.front().code, ar.issues.front().message);
    if (!ar.transitive_plus) throw Error(ErrorCode::NotTransitive, "action must be transitive on V+");
  }
  const int o = s.based_vertex(g, Sign::Plus);
  const double delta = delta_of(g);
  VertexWeight mw = vertex_weights(g, o);
  Level lo = build_level(g, s, n, o);
  decompose(lo, seed, delta, mw);
  Level up = build_level(g, s, n + 1, o);
  decompose(up, seed, delta, mw);
  return connect(lo, up);
}

NormEstimate matrix_norm(const std::vector<std::vector<double>>& a, int, double) {
  NormEstimate r;
  r.method = "svd";
  if (a.empty() || a.front().empty()) {
    r.upper = 0.0;
    return r;
  }
  Eigen::MatrixXd A(a.size(), a.front().size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) {
      if (a[i][j] < 0) throw Error(ErrorCode::NotNonnegative, "matrix has a negative entry");
      A(i, j) = a[i][j];
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  r.lower = svd.singularValues()(0);
  r.upper = r.lower;
  return r;
}

double tree_norm_closed_form(int rplus, int rminus) {
  return std::sqrt(static_cast<double>(rplus - 1)) + std::sqrt(static_cast<double>(rminus - 1));
}

NormEstimate graph_norm(const WeightedGraph& g, const SymmetryOracle* s, int max_iter, double tol) {
  NormEstimate r;
  auto even = g.vertices(Sign::Plus);
  auto odd = g.vertices(Sign::Minus);
  std::vector<int> pos(g.num_vertices(), -1);
  for (size_t i = 0; i < even.size(); ++i) pos[even[i]] = static_cast<int>(i);
  for (size_t i = 0; i < odd.size(); ++i) pos[odd[i]] = static_cast<int>(i);
  // y = B^T x, z = B y over the edge list (multiplicities counted)
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y, std::vector<double>& z) {
    std::fill(y.begin(), y.end(), 0.0);
    std::fill(z.begin(), z.end(), 0.0);
    for (const auto& e : g.edges()) y[pos[e.target]] += x[pos[e.source]];
    for (const auto& e : g.edges()) z[pos[e.source]] += y[pos[e.target]];
  };
  auto norm2 = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  std::vector<double> x(even.size(), 1.0), y(odd.size()), z(even.size());
  if (even.empty() || odd.empty()) return r;

  const bool finite = g.boundary().empty();
  if (!finite && g.ball()) {
    // radial warm start: the top eigenvector of a ball is radial
    auto dist = g.distances_from(g.ball()->center);
    int R = 0;
    for (int v = 0; v < g.num_vertices(); ++v) R = std::max(R, dist[v]);
    std::vector<double> sphere(R + 1, 0.0);
    for (int v = 0; v < g.num_vertices(); ++v) ++sphere[dist[v]];
    std::vector<double> f(R + 1, 1.0), fn(R + 1);
    for (int it = 0; it < 20000; ++it) {
      for (int d = 0; d <= R; ++d) {
        double v = d > 0 ? f[d - 1] : 0.0;
        if (d < R) v += sphere[d + 1] / sphere[d] * f[d + 1];
        fn[d] = v;
      }
      double mx = *std::max_element(fn.begin(), fn.end());
      for (int d = 0; d <= R; ++d) f[d] = fn[d] / mx;
    }
    for (int v : even) x[pos[v]] = std::max(f[dist[v]], 1e-300);
    r.radius_used = g.ball()->radius;
  }
  double nx = norm2(x);
  for (double& v : x) v /= nx;
  double best_lower = 0;
  int it = 0;
  for (; it < max_iter; ++it) {
    apply(x, y, z);
    double lower = norm2(y);  // ||B^T x|| with ||x|| = 1
    best_lower = std::max(best_lower, lower);
    if (finite) {
      double cw = 0;
      for (size_t i = 0; i < x.size(); ++i) cw = std::max(cw, z[i] / x[i]);
      double upper = std::sqrt(cw);
      if (!r.upper || upper < *r.upper) r.upper = upper;
      if (*r.upper - best_lower <= tol * std::max(1.0, *r.upper)) {
        ++it;
        break;
      }
    } else if (it >= 200) {
      break;
    }
    double nz = norm2(z);
    if (nz == 0) break;
    for (size_t i = 0; i < x.size(); ++i) x[i] = z[i] / nz;
  }
  r.lower = best_lower;
  r.iterations = it;
  r.method = finite ? "power+collatz_wielandt" : "power(ball lower bound)";
  if (s && s->is_tree()) {
    double cf = tree_norm_closed_form(s->rplus(), s->rminus());
    r.upper = cf;
    r.method += "+tree_closed_form";
  }
  return r;
}

const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::NonAmenableCertified: return "NonAmenableCertified";
    case Verdict::AmenableObserved: return "AmenableObserved";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::NotSubfactorPA: return "NotSubfactorPA";
  }
  return "?";
}

AmenabilityReport amenability_verdict(const WeightedGraph& g, const SymmetryOracle& s, int max_n, std::uint64_t seed) {
  AmenabilityReport rep;
  auto vr = validate_weight(g);
  bool only_rows = std::all_of(vr.issues.begin(), vr.issues.end(),
                               [](const Issue& i) { return i.code == ErrorCode::RowSumMismatch; });
  if (!only_rows) throw Error(vr.issues.front().code, vr.issues.front().message);
  // sphericality does not involve delta, so it is decided first
  auto sph = check_spherical(g, s);
  if (!sph.candidate || !sph.spherical) {
    rep.verdict = Verdict::NotSubfactorPA;
    rep.explanation = sph.candidate ? "fixed points are not spherical" : sph.note;
    return rep;
  }
  if (!vr.ok()) {
    rep.verdict = Verdict::Inconclusive;
    rep.explanation = "modulus does not match the row sums (" + vr.issues.front().message + "); no certificate possible";
    return rep;
  }
  rep.delta = vr.delta;
  const double delta = vr.delta->to_double();
  rep.gamma = graph_norm(g, &s);
  const int o = s.based_vertex(g, Sign::Plus);
  try {
    rep.levels = bratteli_Q_tower(g, s, max_n, seed);
  } catch (const Error& e) {
    rep.explanation = std::string("Bratteli tower stopped: ") + e.what() + "; ";
  }
  const double gamma_bound = rep.gamma.upper.value_or(rep.gamma.lower);
  for (const auto& D : rep.levels) {
    double dn = bratteli_P(g, D.n, o).norm;
    if (!rep.gamma_q.empty() && D.norm + 1e-9 < rep.gamma_q.back()) rep.monotone = false;
    rep.gamma_q.push_back(D.norm);
    rep.delta_n.push_back(dn);
    if (D.norm > dn + 1e-9) rep.chain_ok = false;
    if (rep.gamma.upper && dn > gamma_bound + 1e-9) rep.chain_ok = false;
  }
  std::ostringstream os;
  os.precision(12);
  if (rep.gamma.upper && *rep.gamma.upper < delta - 1e-12) {
    rep.verdict = Verdict::NonAmenableCertified;
    os << "certified ||Gamma|| <= " << *rep.gamma.upper << " < delta = " << delta
       << "; ||Gamma(Q)|| <= ||Gamma|| by the commuting-square inequality";
  } else if (g.boundary().empty() && !rep.gamma_q.empty() && std::abs(rep.gamma_q.back() - delta) <= 1e-6) {
    rep.verdict = Verdict::AmenableObserved;
    os << "finite graph; ||Gamma(Q)_n|| reaches delta = " << delta << " at n = " << rep.levels.back().n;
  } else {
    rep.verdict = Verdict::Inconclusive;
    os << "best bounds: " << rep.gamma.lower << " <= ||Gamma||";
    if (rep.gamma.upper) os << " <= " << *rep.gamma.upper;
    if (!rep.gamma_q.empty()) os << "; last ||Gamma(Q)_n|| = " << rep.gamma_q.back();
    os << "; delta = " << delta;
  }
  rep.explanation += os.str();
  return rep;
}

FiniteDepthReport finite_depth_check(const WeightedGraph& g, const SymmetryOracle& s, int o) {
  FiniteDepthReport r;
  auto sd = stabilizer_data(g, s, o);
  r.double_cosets = static_cast<long long>(sd.orbit_representatives.size());
  r.radii = sd.orbit_radius;
  r.sizes = sd.orbit_sizes;
  r.finite_graph = g.boundary().empty();
  r.finite_depth = r.finite_graph;
  r.scope_radius = sd.scope_radius;
  if (r.finite_graph)
    r.note = "finite graph: " + std::to_string(r.double_cosets) + " double cosets G_o\\G/G_o";
  else
    r.note = "truncated ball of radius " + std::to_string(sd.scope_radius) + ": " + std::to_string(r.double_cosets) +
             " spheres seen, count grows with the radius (infinite-depth evidence)";
  return r;
}

}  // namespace pa
