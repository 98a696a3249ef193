#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "pa/scalars.hpp"

namespace pa {

enum class Sign { Plus, Minus };
inline Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline const char* sign_str(Sign s) { return s == Sign::Plus ? "+" : "-"; }

struct Edge {
  std::string name;
  int source = -1;  // even vertex
  int target = -1;  // odd vertex
  int label = 1;
};

// Truncated ball of an infinite graph; paths from the center are trusted up to `radius`.
struct BallInfo {
  int center = -1;
  int radius = 0;
};

// Bipartite multigraph with optional weight data. Vertex ids are dense ints;
// names are kept for I/O and diagnostics.
class WeightedGraph {
 public:
  int add_vertex(const std::string& name, bool even);
  int add_edge(const std::string& name, int source, int target, int label = 1,
               std::optional<QScalar> mu = std::nullopt);
  void set_mu(int e, const QScalar& mu);
  void set_delta(const QScalar& delta) { delta_ = delta; }
  void clear_delta() { delta_.reset(); }
  void set_field(long d) { field_d_ = d; }
  void add_boundary(int v) { boundary_.insert(v); dist_cache_.clear(); }
  void set_ball(BallInfo b) { ball_ = b; }

  int num_vertices() const { return static_cast<int>(names_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::string& vertex_name(int v) const { return names_.at(v); }
  bool is_even(int v) const { return even_.at(v); }
  bool has_parity(int v, Sign s) const { return is_even(v) == (s == Sign::Plus); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& incident(int v) const { return incident_.at(v); }
  int other_end(int e, int v) const;
  int degree(int v) const { return static_cast<int>(incident_.at(v).size()); }
  std::vector<int> vertices(Sign s) const;
  std::optional<int> find_vertex(const std::string& name) const;
  std::optional<int> find_edge(const std::string& name) const;

  bool weighted() const { return has_mu_; }
  const QScalar& mu(int e) const { return mu_.at(e); }
  // Weight of edge e traversed starting from endpoint v (mu forward, 1/mu backward).
  const QScalar& weight_from(int e, int v) const;
  const std::optional<QScalar>& delta() const { return delta_; }
  long field() const { return field_d_; }

  const std::set<int>& boundary() const { return boundary_; }
  bool is_interior(int v) const { return !boundary_.count(v); }
  const std::optional<BallInfo>& ball() const { return ball_; }
  // Graph distance to the nearest boundary vertex (large when there is none).
  int distance_to_boundary(int v) const;
  std::vector<int> distances_from(int v) const;
  bool connected() const;

 private:
  std::vector<std::string> names_;
  std::vector<bool> even_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<QScalar> mu_, mu_inv_;
  bool has_mu_ = true;
  std::optional<QScalar> delta_;
  long field_d_ = 1;
  std::set<int> boundary_;
  std::optional<BallInfo> ball_;
  std::unordered_map<std::string, int> vindex_, eindex_;
  mutable std::vector<int> dist_cache_;
};

struct VertexWeight {
  std::vector<QScalar> mu_V;
  int base = 0;
};

struct Issue {
  ErrorCode code;
  std::string message;
  int vertex = -1;
  int edge = -1;
};

struct ValidationReport {
  bool ok() const { return issues.empty(); }
  std::vector<Issue> issues;
  std::optional<QScalar> delta;  // supplied or inferred
  bool delta_inferred = false;
  bool degree_bound_ok = true;
  int interior_vertices = 0;
  int boundary_vertices = 0;
  std::optional<VertexWeight> vertex_weight;
  std::string summary() const;
};

ValidationReport validate_weight(const WeightedGraph& g);
// Throws the first InconsistentMu / NotConnected issue.
VertexWeight vertex_weights(const WeightedGraph& g, int base);
// Apply validate_weight and throw on failure; returns delta.
QScalar require_valid(const WeightedGraph& g);

class SymmetryOracle;
// Unique weight for an action transitive on both colour classes.
WeightedGraph infer_unique_weight(const WeightedGraph& g, const SymmetryOracle& action);

}  // namespace pa
