#include "pa/paths.hpp"

#include <algorithm>

namespace pa {

int path_end(const WeightedGraph& g, const Path& p) {
  int v = p.start;
  for (int e : p.edges) {
    const Edge& ed = g.edge(e);
    if (ed.source != v && ed.target != v) throw Error(ErrorCode::InvalidParameters, "path is not connected");
    v = g.other_end(e, v);
  }
  return v;
}

std::vector<int> path_vertices(const WeightedGraph& g, const Path& p) {
  std::vector<int> out{p.start};
  for (int e : p.edges) out.push_back(g.other_end(e, out.back()));
  return out;
}

Path reversed(const WeightedGraph& g, const Path& p) {
  Path r;
  r.start = path_end(g, p);
  r.edges.assign(p.edges.rbegin(), p.edges.rend());
  return r;
}

Path concat(const Path& a, const Path& b) {
  Path r = a;
  r.edges.insert(r.edges.end(), b.edges.begin(), b.edges.end());
  return r;
}

QScalar path_mu(const WeightedGraph& g, const Path& p) {
  QScalar m(1);
  int v = p.start;
  for (int e : p.edges) {
    m *= g.weight_from(e, v);
    v = g.other_end(e, v);
  }
  return m;
}

PathSpace::PathSpace(const WeightedGraph& g, int n, Sign sign, std::optional<std::vector<int>> sources)
    : g_(&g), n_(n), sign_(sign) {
  if (n < 0) throw Error(ErrorCode::InvalidParameters, "negative path length");
  if (sources) {
    for (int v : *sources) {
      if (!g.has_parity(v, sign))
        throw Error(ErrorCode::SignMismatch, "source '" + g.vertex_name(v) + "' has the wrong parity");
      if (g.distance_to_boundary(v) < n)
        throw Error(ErrorCode::TruncationTooSmall,
                    "paths of length " + std::to_string(n) + " from '" + g.vertex_name(v) +
                        "' can reach the truncation frontier");
    }
    sources_ = *sources;
    std::sort(sources_.begin(), sources_.end());
    sources_.erase(std::unique(sources_.begin(), sources_.end()), sources_.end());
  } else {
    for (int v : g.vertices(sign)) {
      if (g.distance_to_boundary(v) >= n) sources_.push_back(v);
      else partial_ = true;
    }
  }

  // depth-first, incident edges in id order: lexicographic output
  std::vector<int> stack_edges;
  for (int s : sources_) {
    struct Frame {
      int v;
      size_t next;
    };
    std::vector<Frame> frames{{s, 0}};
    stack_edges.clear();
    if (n == 0) {
      paths_.push_back(Path{s, {}});
      continue;
    }
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& inc = g.incident(f.v);
      if (f.next >= inc.size()) {
        frames.pop_back();
        if (!stack_edges.empty()) stack_edges.pop_back();
        continue;
      }
      int e = inc[f.next++];
      int w = g.other_end(e, f.v);
      stack_edges.push_back(e);
      if (static_cast<int>(stack_edges.size()) == n) {
        paths_.push_back(Path{s, stack_edges});
        stack_edges.pop_back();
      } else {
        frames.push_back({w, 0});
      }
    }
  }
  ends_.reserve(paths_.size());
  mu_.reserve(paths_.size());
  for (int i = 0; i < static_cast<int>(paths_.size()); ++i) {
    const Path& p = paths_[i];
    int t = path_end(g, p);
    ends_.push_back(t);
    mu_.push_back(path_mu(g, p));
    mu_d_.push_back(mu_.back().to_double());
    index_.emplace(p, i);
    blocks_[{p.start, t}].push_back(i);
  }
}

std::optional<int> PathSpace::index_of(const Path& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> PathSpace::extend_index(const Path& p, int e) const {
  Path q = p;
  q.edges.push_back(e);
  return index_of(q);
}

const std::vector<int>& PathSpace::block_of(int source, int target) const {
  static const std::vector<int> kEmpty;
  auto it = blocks_.find({source, target});
  return it == blocks_.end() ? kEmpty : it->second;
}

long long PathSpace::st_count() const {
  long long c = 0;
  for (const auto& [k, v] : blocks_) c += static_cast<long long>(v.size()) * static_cast<long long>(v.size());
  return c;
}

}  // namespace pa
