#include "pa/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace pa {

int WeightedGraph::add_vertex(const std::string& name, bool even) {
  if (vindex_.count(name)) throw Error(ErrorCode::ParseError, "duplicate vertex '" + name + "'");
  int id = num_vertices();
  names_.push_back(name);
  even_.push_back(even);
  incident_.emplace_back();
  vindex_[name] = id;
  dist_cache_.clear();
  return id;
}

int WeightedGraph::add_edge(const std::string& name, int source, int target, int label,
                            std::optional<QScalar> mu) {
  if (eindex_.count(name)) throw Error(ErrorCode::ParseError, "duplicate edge '" + name + "'");
  if (source < 0 || source >= num_vertices() || target < 0 || target >= num_vertices())
    throw Error(ErrorCode::ParseError, "edge '" + name + "' has unknown endpoint");
  if (!is_even(source) || is_even(target))
    throw Error(ErrorCode::ParseError, "edge '" + name + "' must run from an even to an odd vertex");
  int id = num_edges();
  edges_.push_back(Edge{name, source, target, label});
  incident_[source].push_back(id);
  incident_[target].push_back(id);
  eindex_[name] = id;
  if (mu) {
    if (mu->sign() <= 0) throw Error(ErrorCode::InvalidParameters, "edge '" + name + "' has non-positive mu");
    mu_.push_back(*mu);
    mu_inv_.push_back(mu->inverse());
  } else {
    has_mu_ = false;
    mu_.push_back(QScalar(1));
    mu_inv_.push_back(QScalar(1));
  }
  dist_cache_.clear();
  return id;
}

void WeightedGraph::set_mu(int e, const QScalar& mu) {
  if (mu.sign() <= 0) throw Error(ErrorCode::InvalidParameters, "non-positive mu");
  mu_.at(e) = mu;
  mu_inv_.at(e) = mu.inverse();
}

int WeightedGraph::other_end(int e, int v) const {
  const Edge& ed = edges_.at(e);
  return ed.source == v ? ed.target : ed.source;
}

const QScalar& WeightedGraph::weight_from(int e, int v) const {
  return edges_.at(e).source == v ? mu_.at(e) : mu_inv_.at(e);
}

std::vector<int> WeightedGraph::vertices(Sign s) const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (has_parity(v, s)) out.push_back(v);
  return out;
}

std::optional<int> WeightedGraph::find_vertex(const std::string& name) const {
  auto it = vindex_.find(name);
  if (it == vindex_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> WeightedGraph::find_edge(const std::string& name) const {
  auto it = eindex_.find(name);
  if (it == eindex_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> WeightedGraph::distances_from(int v) const {
  std::vector<int> dist(num_vertices(), -1);
  std::deque<int> q{v};
  dist[v] = 0;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int e : incident_[x]) {
      int y = other_end(e, x);
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
    }
  }
  return dist;
}

int WeightedGraph::distance_to_boundary(int v) const {
  constexpr int kFar = std::numeric_limits<int>::max() / 4;
  if (boundary_.empty()) return kFar;
  if (dist_cache_.empty()) {
    dist_cache_.assign(num_vertices(), kFar);
    std::deque<int> q;
    for (int b : boundary_) {
      dist_cache_[b] = 0;
      q.push_back(b);
    }
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int e : incident_[x]) {
        int y = other_end(e, x);
        if (dist_cache_[y] > dist_cache_[x] + 1) {
          dist_cache_[y] = dist_cache_[x] + 1;
          q.push_back(y);
        }
      }
    }
  }
  return dist_cache_.at(v);
}

bool WeightedGraph::connected() const {
  if (num_vertices() == 0) return true;
  auto d = distances_from(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (ok()) {
    os << "valid";
    if (delta) os << ", delta = " << delta->str() << (delta_inferred ? " (inferred)" : "");
    return os.str();
  }
  os << issues.size() << " issue(s); first: " << to_string(issues.front().code) << " "
     << issues.front().message;
  return os.str();
}

namespace {

// mu_V by breadth-first propagation; records the first cycle inconsistency.
VertexWeight propagate(const WeightedGraph& g, int base, std::vector<Issue>* issues) {
  VertexWeight w;
  w.base = base;
  w.mu_V.assign(g.num_vertices(), QScalar());
  std::vector<bool> seen(g.num_vertices(), false);
  std::vector<bool> tree_edge(g.num_edges(), false);
  std::deque<int> q{base};
  seen[base] = true;
  w.mu_V[base] = QScalar(1);
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int e : g.incident(x)) {
      int y = g.other_end(e, x);
      if (!seen[y]) {
        seen[y] = true;
        tree_edge[e] = true;
        w.mu_V[y] = w.mu_V[x] * g.weight_from(e, x);
        q.push_back(y);
      }
    }
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    if (tree_edge[e]) continue;
    const Edge& ed = g.edge(e);
    if (!seen[ed.source]) continue;
    if (w.mu_V[ed.target] != w.mu_V[ed.source] * g.mu(e)) {
      Issue is{ErrorCode::InconsistentMu,
               "cycle through edge '" + ed.name + "' has mu-product != 1", -1, e};
      if (!issues) throw Error(is.code, is.message);
      issues->push_back(is);
    }
  }
  return w;
}

}  // namespace

ValidationReport validate_weight(const WeightedGraph& g) {
  ValidationReport r;
  if (g.num_vertices() == 0) {
    r.issues.push_back({ErrorCode::NotConnected, "empty graph"});
    return r;
  }
  if (!g.connected()) {
    r.issues.push_back({ErrorCode::NotConnected, "graph is not connected"});
    return r;
  }
  int base = 0;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.is_even(v)) {
      base = v;
      break;
    }
  if (g.ball()) base = g.ball()->center;
  r.vertex_weight = propagate(g, base, &r.issues);

  std::optional<QScalar> delta = g.delta();
  r.delta_inferred = !delta.has_value();
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!g.is_interior(v)) {
      ++r.boundary_vertices;
      continue;
    }
    ++r.interior_vertices;
    QScalar sum;
    for (int e : g.incident(v)) sum += g.weight_from(e, v);
    if (!delta) delta = sum;
    if (sum != *delta)
      r.issues.push_back({ErrorCode::RowSumMismatch,
                          "row sum at '" + g.vertex_name(v) + "' is " + sum.str() + ", expected " +
                              delta->str(),
                          v});
  }
  r.delta = delta;
  if (delta) {
    QScalar d2 = *delta * *delta;
    QScalar dinv = delta->inverse();
    for (int e = 0; e < g.num_edges(); ++e) {
      const QScalar& m = g.mu(e);
      if (m < dinv || m > *delta)
        r.issues.push_back({ErrorCode::InvalidParameters,
                            "mu('" + g.edge(e).name + "') outside [1/delta, delta]", -1, e});
    }
    for (int v = 0; v < g.num_vertices(); ++v)
      if (g.is_interior(v) && QScalar(g.degree(v)) > d2) r.degree_bound_ok = false;
  }
  return r;
}

VertexWeight vertex_weights(const WeightedGraph& g, int base) {
  if (!g.connected()) throw Error(ErrorCode::NotConnected, "graph is not connected");
  VertexWeight w = propagate(g, base, nullptr);
  if (g.delta()) {
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (!g.is_interior(v)) continue;
      QScalar s;
      for (int e : g.incident(v)) s += w.mu_V[g.other_end(e, v)];
      if (s != *g.delta() * w.mu_V[v])
        throw Error(ErrorCode::RowSumMismatch,
                    "A(mu_V) != delta mu_V at '" + g.vertex_name(v) + "'");
    }
  }
  return w;
}

QScalar require_valid(const WeightedGraph& g) {
  auto r = validate_weight(g);
  if (!r.ok()) throw Error(r.issues.front().code, r.issues.front().message);
  return *r.delta;
}

}  // namespace pa
