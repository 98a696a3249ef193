#include "pa/graded.hpp"

#include <Eigen/Dense>
#include <functional>

namespace pa {

std::vector<Path> closed_walks(const WeightedGraph& g, int v, int length) {
  std::vector<Path> out;
  Path cur{v, {}};
  // depth-first; prune walks that cannot get back in the remaining steps
  auto dist = g.distances_from(v);
  std::vector<int> at{v};
  std::function<void()> walk = [&] {
    int here = at.back();
    int left = length - static_cast<int>(cur.edges.size());
    if (left == 0) {
      if (here == v) out.push_back(cur);
      return;
    }
    for (int e : g.incident(here)) {
      int w = g.other_end(e, here);
      if (dist[w] > left - 1) continue;
      cur.edges.push_back(e);
      at.push_back(w);
      walk();
      at.pop_back();
      cur.edges.pop_back();
    }
  };
  walk();
  return out;
}

std::vector<Path> graded_basis_loops(const WeightedGraph& g, int k, int n, int m, const std::vector<int>& corners) {
  std::vector<Path> out;
  for (int v : corners) {
    auto w = closed_walks(g, v, 2 * n + 2 * m + 4 * k);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

template <class S>
PdReport pd_check(const BlockFunction<S>& f, double tol) {
  const int N = static_cast<int>(f.cosets.size());
  Eigen::MatrixXd gram(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) gram(a, b) = ScalarTraits<S>::to_double(f.at(f.cosets[a], f.cosets[b]));
  PdReport r;
  r.size = N;
  if (N == 0) {
    r.positive = true;
    return r;
  }
  // f(h^{-1} g) with real values; the Gram matrix is symmetric when f(g^{-1}) = f(g)
  if (!gram.isApprox(gram.transpose(), 1e-12)) {
    r.positive = false;
    r.min_eigenvalue = -1;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.positive = r.min_eigenvalue >= -tol;
  return r;
}

template PdReport pd_check<QScalar>(const BlockFunction<QScalar>&, double);
template PdReport pd_check<double>(const BlockFunction<double>&, double);

}  // namespace pa
