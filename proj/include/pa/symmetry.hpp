#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pa/boxes.hpp"
#include "pa/graph.hpp"
#include "pa/paths.hpp"

namespace pa {

// Graph automorphism as a vertex permutation plus an edge permutation.
struct GraphAutomorphism {
  std::vector<int> vmap, emap;

  static GraphAutomorphism identity(const WeightedGraph& g);
  // (this ∘ inner): apply inner first.
  GraphAutomorphism compose(const GraphAutomorphism& inner) const;
  GraphAutomorphism inverse() const;
  bool is_identity() const;
  Path apply(const Path& p) const { return Path{vmap[p.start], map_edges(p.edges)}; }
  std::vector<int> map_edges(const std::vector<int>& es) const {
    std::vector<int> r(es.size());
    for (size_t i = 0; i < es.size(); ++i) r[i] = emap[es[i]];
    return r;
  }
  bool operator==(const GraphAutomorphism& o) const { return vmap == o.vmap && emap == o.emap; }
  bool operator<(const GraphAutomorphism& o) const {
    return vmap != o.vmap ? vmap < o.vmap : emap < o.emap;
  }
};

enum class ObjectKind { Vertices, Paths, StPairs };
const char* object_kind_str(ObjectKind k);

class SymmetryOracle {
 public:
  enum class Kind { Explicit, RootedTree };
  // Pattern: classes of the distance (backtrack/advance) pattern.
  // FirstVisit: exact Aut(T)_o orbits via first-visit relabelling.
  enum class TreeMode { Pattern, FirstVisit };

  static SymmetryOracle explicit_group(std::vector<GraphAutomorphism> generators, int base = -1);
  static SymmetryOracle rooted_tree(int root, int rplus, int rminus, TreeMode mode = TreeMode::Pattern);

  Kind kind() const { return kind_; }
  bool is_tree() const { return kind_ == Kind::RootedTree; }
  int base() const { return base_; }
  void set_base(int v) { base_ = v; }
  const std::vector<GraphAutomorphism>& generators() const { return gens_; }
  int rplus() const { return rplus_; }
  int rminus() const { return rminus_; }
  TreeMode tree_mode() const { return mode_; }
  void set_tree_mode(TreeMode m) { mode_ = m; }
  // Labels need not be preserved (e.g. S_n permuting parallel edges).
  bool strict_labels() const { return strict_labels_; }
  void set_strict_labels(bool s) { strict_labels_ = s; }

  // All group elements, by breadth-first closure (explicit oracles only).
  const std::vector<GraphAutomorphism>& elements(const WeightedGraph& g) const;
  std::vector<GraphAutomorphism> stabilizer(const WeightedGraph& g, int v) const;
  // Even base vertex for the given sign: base for +, its first neighbour for -.
  int based_vertex(const WeightedGraph& g, Sign sign) const;

 private:
  Kind kind_ = Kind::Explicit;
  int base_ = -1;
  std::vector<GraphAutomorphism> gens_;
  int rplus_ = 0, rminus_ = 0;
  TreeMode mode_ = TreeMode::Pattern;
  bool strict_labels_ = true;
  mutable std::shared_ptr<std::vector<GraphAutomorphism>> closure_;
};

struct ActionReport {
  std::vector<Issue> issues;
  bool transitive_plus = false;
  bool transitive_minus = false;
  long long group_order = -1;  // -1 for the tree oracle (infinite)
  bool ok() const { return issues.empty(); }
};

ActionReport validate_action(const WeightedGraph& g, const SymmetryOracle& s);

// Partition of vertices, paths or ST pairs into orbits. Objects are encoded as
// integers: vertex id, path id in `space`, or a*N + b for the pair (a, b).
struct OrbitTable {
  ObjectKind kind = ObjectKind::StPairs;
  int n = 0;
  Sign sign = Sign::Plus;
  bool based = false;  // restricted to paths from one source under its stabilizer
  SpacePtr space;
  std::vector<long long> objects;  // sorted
  std::vector<int> orbit_of;       // parallel to objects
  std::vector<long long> representatives;
  std::vector<int> sizes;

  int count() const { return static_cast<int>(representatives.size()); }
  std::optional<int> orbit_of_code(long long code) const;
  long long pair_code(int a, int b) const { return static_cast<long long>(a) * space->size() + b; }
  std::pair<int, int> decode_pair(long long code) const {
    return {static_cast<int>(code / space->size()), static_cast<int>(code % space->size())};
  }
};

// Explicit oracles: full orbits on the given sign (all trusted sources), or
// based at the oracle base under its stabilizer. Tree oracles are always based.
OrbitTable orbits(const WeightedGraph& g, const SymmetryOracle& s, ObjectKind kind, int n,
                  Sign sign = Sign::Plus, bool based = false);

// Permutation of path ids in `space` induced by each group element.
std::vector<std::vector<int>> path_permutations(const SpacePtr& space, const std::vector<GraphAutomorphism>& elems);

// Orbit sums f_{a,b} for explicit oracles; for tree oracles the Temperley-Lieb
// diagram elements indexed by the non-crossing pairings of the pattern classes.
template <class S>
std::vector<BoxElement<S>> fixed_point_basis(const WeightedGraph& g, const SymmetryOracle& s, int n,
                                             Sign sign = Sign::Plus, bool based = false);
template <class S>
BoxElement<S> orbit_sum(const OrbitTable& t, int orbit);

// Non-crossing perfect matchings of 2n points, as partner arrays.
std::vector<std::vector<int>> noncrossing_matchings(int n);
// TL diagram in P_n from a matching of the 2n positions of the loop a·b̄.
template <class S>
BoxElement<S> tl_diagram(const SpacePtr& space, const std::vector<int>& matching);

struct SphericalEdgeCheck {
  int edge = -1;        // orbit representative
  QScalar lhs, rhs;     // mu(a)|{s(α)=v+}| and mu(abar)|{t(α)=v-}|
  QScalar tau_l, tau_r; // direct evaluation on f_{a,a}
  bool pass = false;
  bool agrees = false;  // counting criterion == direct trace comparison
};

struct SphericalityReport {
  bool candidate = true;  // transitive on both colour classes
  bool spherical = false;
  bool criterion_agrees = true;
  int v_plus = -1, v_minus = -1;
  std::vector<SphericalEdgeCheck> edges;
  std::string note;
};

SphericalityReport check_spherical(const WeightedGraph& g, const SymmetryOracle& s);

struct StabilizerReport {
  int base = -1;
  std::vector<int> orbit_representatives;  // G_o-orbits on V+
  std::vector<long long> orbit_sizes;      // = [G_o : G_{o,go}]
  std::vector<int> orbit_radius;           // distance d(o, rep) (the sphere witness)
  bool scoped = false;                     // truncated ball
  int scope_radius = -1;
};

StabilizerReport stabilizer_data(const WeightedGraph& g, const SymmetryOracle& s, int o);

// Transitive actions: mu = sqrt(r-/r+), delta = sqrt(r+ r-). Always exact.
WeightedGraph infer_unique_weight(const WeightedGraph& g, const SymmetryOracle& action);

// Image of a box element under a group element (paths mapped edgewise).
template <class S>
BoxElement<S> act(const GraphAutomorphism& h, const BoxElement<S>& x, const SpacePtr& target = nullptr);

}  // namespace pa
