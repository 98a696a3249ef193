#include "pa/suite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>

#include "pa/graded.hpp"

namespace pa {

bool GradedSuiteReport::ok() const {
  bool base = lost == 0 && assoc_failures == 0 && trace_failures == 0 && dagger_failures == 0 && pv_failures == 0 &&
              factorization_failures == 0 && trace_oracle_failures == 0 && gram_min_eigenvalue >= -1e-8 &&
              sigma_failures == 0;
  if (!has_group) return base;
  return base && phi_ET_failures == 0 && phi_trace_failures == 0 && phi_pd && theta_beta_failures == 0 &&
         theta_norm_failures == 0;
}

namespace {

constexpr size_t kMaxCorners = 24;

template <class S>
bool same(const S& a, const S& b) {
  return ScalarTraits<S>::equal(a, b, 1e-9);
}

template <class S>
bool same_el(const GradedElement<S>& a, const GradedElement<S>& b) {
  if constexpr (ScalarTraits<S>::exact)
    return a.equals(b);
  else
    return a.equals(b, 1e-8);
}

template <class S>
void run(const Built& b, GradedSuiteReport& r) {
  const WeightedGraph& g = *b.graph;
  int base = b.oracle && b.oracle->base() >= 0 ? b.oracle->base() : g.vertices(Sign::Plus).front();
  auto sp = GradedSpace<S>::make(b.graph, base, r.nmax);
  std::mt19937_64 rng(r.seed);
  // corners: interior even vertices, nearest to the base first; large balls keep
  // the base neighbourhood only
  std::vector<int> corners;
  auto dist = g.distances_from(base);
  for (int v : g.vertices(Sign::Plus))
    if (g.is_interior(v) && dist[v] >= 0) corners.push_back(v);
  std::stable_sort(corners.begin(), corners.end(), [&](int a, int b) { return dist[a] < dist[b]; });
  if (corners.size() > kMaxCorners) {
    size_t keep = 0;
    while (keep < corners.size() && dist[corners[keep]] <= 2) ++keep;
    corners.resize(std::max<size_t>(keep, 1));
    r.corners_truncated = true;
  }
  r.corners = static_cast<int>(corners.size());
  // degree <= 2 keeps triple products inside N_max = 6
  const int deg = std::max(0, r.nmax / 3);

  for (int it = 0; it < r.samples; ++it) {
    auto x = random_graded<S>(sp, 0, deg, rng, 5, corners);
    auto y = random_graded<S>(sp, 0, deg, rng, 5, corners);
    auto z = random_graded<S>(sp, 0, deg, rng, 5, corners);
    auto xy = x * y;
    auto lhs = xy * z, rhs = x * (y * z);
    if (lhs.lost() || rhs.lost()) {
      ++r.lost;
      continue;
    }
    if (!same_el(lhs, rhs)) ++r.assoc_failures;
    if (!same(graded_trace(xy), graded_trace(y * x))) ++r.trace_failures;
    if (!same_el(dagger(xy), dagger(y) * dagger(x))) ++r.dagger_failures;
  }

  for (int v : corners)
    if (!same(graded_trace(graded_projection<S>(sp, 0, v)), sp->tau_V(v))) ++r.pv_failures;

  // x_l = x_{l1} x_{l2} when the loop passes through its start after 2n edges
  for (int n = 0; n <= 2; ++n) {
    int m = 2 - n;
    for (const auto& l : graded_basis_loops(g, 0, n, m, corners)) {
      auto v = path_vertices(g, l);
      if (v[2 * n] != v[0]) continue;
      Path l1{l.start, std::vector<int>(l.edges.begin(), l.edges.begin() + 2 * n)};
      Path l2{l.start, std::vector<int>(l.edges.begin() + 2 * n, l.edges.end())};
      auto prod = loop_element<S>(sp, 0, n, 0, l1) * loop_element<S>(sp, 0, 0, m, l2);
      ++r.factorization_checked;
      if (!same_el(prod, loop_element<S>(sp, 0, n, m, l))) ++r.factorization_failures;
    }
  }

  // Tr(x_l x_k) over loops of length <= 4: zero unless k mirrors l, and then
  // mu_V(v) mu_V(w) times the cap weights (all 1 when mu_V is constant)
  std::vector<std::tuple<int, int, Path>> loops;
  for (int d = 0; d <= 2; ++d)
    for (int n = 0; n <= d; ++n)
      for (auto& l : graded_basis_loops(g, 0, n, d - n, corners)) loops.emplace_back(n, d - n, std::move(l));
  bool flat = true;
  for (int v : corners)
    if (!same(sp->mu_V(v), sp->mu_V(corners.front()))) flat = false;
  for (const auto& [n1, m1, l1] : loops)
    for (const auto& [n2, m2, l2] : loops) {
      auto x = loop_element<S>(sp, 0, n1, m1, l1), y = loop_element<S>(sp, 0, n2, m2, l2);
      S t = graded_trace(x * y);
      ++r.trace_pairs_checked;
      bool mirror = n1 == n2 && m1 == m2 && mirror_loop(g, l1, LoopFrame{n1, m1, 0}) == l2;
      if (!same(t, graded_trace(y * x))) ++r.trace_oracle_failures;
      else if (!mirror && !ScalarTraits<S>::is_zero(t) && std::abs(ScalarTraits<S>::to_double(t)) > 1e-12)
        ++r.trace_oracle_failures;
      else if (mirror && flat && !same(t, sp->mu_V(l1.start) * sp->mu_V(l2.start)))
        ++r.trace_oracle_failures;
    }

  // Gram matrices of basis loops, one per (n, m)
  r.gram_min_eigenvalue = 1e300;
  for (int d = 0; d <= 2; ++d)
    for (int n = 0; n <= d; ++n) {
      auto ls = graded_basis_loops(g, 0, n, d - n, corners);
      if (ls.empty()) continue;
      std::vector<GradedElement<S>> xs;
      for (const auto& l : ls) xs.push_back(loop_element<S>(sp, 0, n, d - n, l));
      Eigen::MatrixXd G(xs.size(), xs.size());
      for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < xs.size(); ++j) G(i, j) = ScalarTraits<S>::to_double(graded_inner(xs[i], xs[j]));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
      r.gram_min_eigenvalue = std::min(r.gram_min_eigenvalue, es.eigenvalues().minCoeff());
      ++r.gram_blocks;
    }
  if (r.gram_blocks == 0) r.gram_min_eigenvalue = 0;

  if (!b.oracle || b.oracle->is_tree()) return;
  r.has_group = true;
  const auto& el = b.oracle->elements(g);
  for (const auto& h : el) {
    auto sc = scaling_factor(*sp, h);
    r.c_g.push_back(sc.constant ? sc.c_g.str() : "not constant");
    S c = ScalarTraits<S>::from(sc.c_g);
    for (int it = 0; it < 10; ++it) {
      auto x = random_graded<S>(sp, 0, deg, rng, 5, corners);
      ++r.sigma_checked;
      if (!sc.constant || !same(graded_trace(graded_sigma(h, x)), c * graded_trace(x))) ++r.sigma_failures;
    }
  }

  // phi_f: f = 1_{G_o} and a second unital positive definite f
  const int o = base;
  std::vector<S> ind(el.size()), soft(el.size());
  for (size_t i = 0; i < el.size(); ++i) {
    bool fix = el[i].vmap[o] == o;
    ind[i] = S(fix ? 1 : 0);
    soft[i] = fix ? S(1) : ScalarTraits<S>::from(QScalar::rational(1, 2));
  }
  auto f1 = block_function<S>(g, *b.oracle, o, ind);
  auto f2 = block_function<S>(g, *b.oracle, o, soft);
  r.phi_pd = pd_check(f1).positive && pd_check(f2).positive;
  for (int it = 0; it < 50; ++it) {
    auto x = random_graded<S>(sp, 0, deg, rng, 6, corners);
    ++r.phi_checked;
    if (!same_el(phi_f(f1, x), expect_T(x))) ++r.phi_ET_failures;
    if (!same(graded_trace(phi_f(f2, x)), graded_trace(x)) || !same(graded_trace(phi_f(f1, x)), graded_trace(x)))
      ++r.phi_trace_failures;
  }

  // Theta_g / beta on vectors in p_o S p_{go}
  for (const auto& h : el) {
    for (int it = 0; it < 5; ++it) {
      auto y = compress(random_graded<S>(sp, 0, deg, rng, 8, corners), o, h.vmap[o]);
      if (y.is_zero()) continue;
      auto tb = theta_beta(*b.oracle, o, h, y);
      ++r.theta_checked;
      if (it == 0) r.theta_index.push_back(tb.report.index);
      if (!tb.report.beta_identity) ++r.theta_beta_failures;
      if (!tb.report.norm_identity) ++r.theta_norm_failures;
    }
  }
}

}  // namespace

GradedSuiteReport graded_suite(const Built& b, std::uint64_t seed, int samples, int nmax, bool allow_exact) {
  auto t0 = std::chrono::steady_clock::now();
  GradedSuiteReport r;
  r.seed = seed;
  r.samples = samples;
  r.nmax = nmax;
  try {
    if (!allow_exact) throw Error(ErrorCode::ApproximateOnly, "approximate mode requested");
    r.exact = true;
    run<QScalar>(b, r);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ApproximateOnly && e.code() != ErrorCode::MixedField) throw;
    GradedSuiteReport d;
    d.seed = seed;
    d.samples = samples;
    d.nmax = nmax;
    d.exact = false;
    run<double>(b, d);
    r = d;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace pa
