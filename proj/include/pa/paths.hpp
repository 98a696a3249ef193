#pragma once

#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pa/graph.hpp"

namespace pa {

// A path is a start vertex plus the edges it walks; the orientation of each
// step is implied by alternation (even -> odd uses the edge forward).
struct Path {
  int start = -1;
  std::vector<int> edges;
  bool operator==(const Path& o) const { return start == o.start && edges == o.edges; }
  bool operator<(const Path& o) const {
    return start != o.start ? start < o.start : edges < o.edges;
  }
};

struct PathHash {
  size_t operator()(const Path& p) const noexcept {
    size_t h = std::hash<int>()(p.start) * 0x9e3779b97f4a7c15ULL;
    for (int e : p.edges) h = (h ^ static_cast<size_t>(e + 1)) * 0x100000001b3ULL;
    return h;
  }
};

int path_end(const WeightedGraph& g, const Path& p);
std::vector<int> path_vertices(const WeightedGraph& g, const Path& p);
Path reversed(const WeightedGraph& g, const Path& p);
Path concat(const Path& a, const Path& b);
// Product of oriented weights along the path (= mu_V(t)/mu_V(s)).
QScalar path_mu(const WeightedGraph& g, const Path& p);

// Enumeration of C_n^sign restricted to a set of trusted source vertices,
// grouped into (source, target) blocks. The ST_n pairs are the pairs inside
// one block.
class PathSpace {
 public:
  using Block = std::pair<int, int>;

  // Sources default to every vertex of the given parity that is far enough
  // from the truncation frontier; `partial()` then reports whether some were
  // skipped. Explicit sources that are too close raise TruncationTooSmall.
  PathSpace(const WeightedGraph& g, int n, Sign sign,
            std::optional<std::vector<int>> sources = std::nullopt);

  static std::shared_ptr<const PathSpace> make(const WeightedGraph& g, int n, Sign sign,
                                               std::optional<std::vector<int>> sources = std::nullopt) {
    return std::make_shared<const PathSpace>(g, n, sign, std::move(sources));
  }

  const WeightedGraph& graph() const { return *g_; }
  int n() const { return n_; }
  Sign sign() const { return sign_; }
  bool partial() const { return partial_; }
  const std::vector<int>& sources() const { return sources_; }

  int size() const { return static_cast<int>(paths_.size()); }
  const Path& path(int i) const { return paths_.at(i); }
  int source(int i) const { return paths_[i].start; }
  int target(int i) const { return ends_[i]; }
  const QScalar& mu(int i) const { return mu_[i]; }
  double mu_d(int i) const { return mu_d_[i]; }
  std::optional<int> index_of(const Path& p) const;
  // Index here of p followed by edge e (p lives one level down).
  std::optional<int> extend_index(const Path& p, int e) const;

  const std::map<Block, std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block_of(int source, int target) const;
  long long st_count() const;
  bool same_space(const PathSpace& o) const {
    return g_ == o.g_ && n_ == o.n_ && sign_ == o.sign_ && sources_ == o.sources_;
  }

 private:
  const WeightedGraph* g_;
  int n_;
  Sign sign_;
  bool partial_ = false;
  std::vector<int> sources_;
  std::vector<Path> paths_;
  std::vector<int> ends_;
  std::vector<QScalar> mu_;
  std::vector<double> mu_d_;
  std::unordered_map<Path, int, PathHash> index_;
  std::map<Block, std::vector<int>> blocks_;
};

using SpacePtr = std::shared_ptr<const PathSpace>;

}  // namespace pa
