#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pa/builders.hpp"
#include "pa/graph.hpp"

namespace pa::testing {

// 4-cycle v0 - w0 - v1 - w1 - v0, mu = 1 except optionally one edge.
inline std::shared_ptr<WeightedGraph> four_cycle(QScalar last_mu = QScalar(1)) {
  auto g = std::make_shared<WeightedGraph>();
  int v0 = g->add_vertex("v0", true), v1 = g->add_vertex("v1", true);
  int w0 = g->add_vertex("w0", false), w1 = g->add_vertex("w1", false);
  g->add_edge("a", v0, w0, 1, QScalar(1));
  g->add_edge("b", v1, w0, 1, QScalar(1));
  g->add_edge("c", v1, w1, 1, QScalar(1));
  g->add_edge("d", v0, w1, 1, last_mu);
  g->set_delta(QScalar(2));
  return g;
}

// Two parallel edges with weights 2 and 1/2: row sums 5/2 both ways, but the
// path products disagree on the pair (a, b).
inline std::shared_ptr<WeightedGraph> unbalanced_pair() {
  auto g = std::make_shared<WeightedGraph>();
  int v = g->add_vertex("v", true), w = g->add_vertex("w", false);
  g->add_edge("a", v, w, 1, QScalar(2));
  g->add_edge("b", v, w, 2, QScalar(mpq_class(1, 2)));
  g->set_delta(QScalar(mpq_class(5, 2)));
  return g;
}

inline std::shared_ptr<WeightedGraph> single_edge() {
  auto g = std::make_shared<WeightedGraph>();
  int v = g->add_vertex("v", true), w = g->add_vertex("w", false);
  g->add_edge("a", v, w, 1, QScalar(1));
  g->set_delta(QScalar(1));
  return g;
}

inline Built bh_s3() { return build_bisch_haagerup(3, {{1, 0, 2}}, {{1, 2, 0}}); }

}  // namespace pa::testing
