#include "doctest.h"
#include "helpers.hpp"
#include "pa/io.hpp"
#include "pa/symmetry.hpp"

using namespace pa;
using namespace pa::testing;

namespace {

const char* kCycle = R"({
  "field_d": 1,
  "even_vertices": ["v0", "v1"],
  "odd_vertices": ["w0", "w1"],
  "edges": [
    {"id": "a", "source": "v0", "target": "w0", "mu": "1"},
    {"id": "b", "source": "v1", "target": "w0", "mu": "1"},
    {"id": "c", "source": "v1", "target": "w1", "mu": "1"},
    {"id": "d", "source": "v0", "target": "w1", "mu": "1"}
  ],
  "delta": "2",
  "group": {"generators": [{"vertex_map": {"v0": "v1", "v1": "v0", "w0": "w1", "w1": "w0"},
                            "edge_map": {"a": "c", "c": "a", "b": "d", "d": "b"}}],
            "base": "v0"}
})";

ErrorCode parse_code(const std::string& text) {
  try {
    read_graph_json(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::AxiomFailure;  // sentinel: parsed fine
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("reads a graph with a group") {
  auto b = read_graph_json(kCycle);
  CHECK(b.graph->num_vertices() == 4);
  CHECK(require_valid(*b.graph) == QScalar(2));
  REQUIRE(b.oracle);
  auto r = validate_action(*b.graph, *b.oracle);
  CHECK(r.ok());
  CHECK(r.transitive_plus);
  CHECK(b.oracle->base() == *b.graph->find_vertex("v0"));
}

TEST_CASE("unknown fields are parse errors") {
  CHECK(parse_code(replace(kCycle, "\"delta\"", "\"colour\": 1, \"delta\"")) == ErrorCode::ParseError);
  CHECK(parse_code(replace(kCycle, "\"mu\": \"1\"}", "\"mu\": \"1\", \"weight\": 2}")) == ErrorCode::ParseError);
  CHECK(parse_code(replace(kCycle, "\"base\"", "\"order\": 2, \"base\"")) == ErrorCode::ParseError);
  CHECK(parse_code("{not json") == ErrorCode::ParseError);
  CHECK(parse_code(replace(kCycle, "\"target\": \"w0\", \"mu\"", "\"target\": \"zz\", \"mu\"")) == ErrorCode::ParseError);
}

TEST_CASE("mu on some edges only is refused") {
  auto text = replace(kCycle, "\"target\": \"w0\", \"mu\": \"1\"}", "\"target\": \"w0\"}");
  CHECK(parse_code(text) == ErrorCode::ParseError);
}

TEST_CASE("missing mu is inferred from a transitive group") {
  auto bh = bh_s3();
  auto j = graph_to_json(*bh.graph, bh.oracle.get());
  for (auto& e : j["edges"]) e.erase("mu");
  j.erase("delta");
  auto b = read_graph_json(j.dump());
  CHECK(*b.graph->delta() == QScalar::sqrt_of(6));
  for (int e = 0; e < b.graph->num_edges(); ++e) CHECK(b.graph->mu(e) == bh.graph->mu(e));
}

TEST_CASE("round trip of builder output") {
  for (auto b : {build_diagonal_cyclic(2), bh_s3(), build_multi_edge(3, true), build_biregular_tree(2, 3, 3)}) {
    auto j = graph_to_json(*b.graph, b.oracle && !b.oracle->is_tree() ? b.oracle.get() : nullptr);
    auto back = read_graph_json(j.dump());
    CHECK(graph_to_json(*back.graph, back.oracle.get()).dump() == j.dump());
    CHECK(validate_weight(*back.graph).ok());
    CHECK(back.graph->boundary().size() == b.graph->boundary().size());
  }
}

TEST_CASE("broken row sum survives parsing and fails validation") {
  auto text = replace(kCycle, "\"delta\": \"2\"", "\"delta\": \"3\"");
  auto b = read_graph_json(text);
  auto r = validate_weight(*b.graph);
  REQUIRE_FALSE(r.ok());
  CHECK(r.issues.front().code == ErrorCode::RowSumMismatch);
}

TEST_CASE("group files") {
  auto gi = read_group_json(R"({"degree": 3, "generators": [[1,0,2],[1,2,0]], "subgroup": [[1,0,2]]})");
  CHECK(gi.G.order() == 6);
  CHECK(gi.H.size() == 2);
  auto z4 = read_group_json(R"({"table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]], "subgroup_elements": [0,2]})");
  CHECK(z4.G.order() == 4);
  CHECK(z4.H.size() == 2);
  auto code = [](const std::string& t) {
    try {
      read_group_json(t);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::AxiomFailure;
  };
  CHECK(code(R"({"degree": 3, "generators": [[1,2,0]], "subgroup": [[1,0,2]]})") == ErrorCode::ParseError);
  CHECK(code(R"({"table": [[0,1],[1,1]], "subgroup_elements": [0]})") == ErrorCode::ParseError);
  CHECK(code(R"({"degree": 3, "generators": [], "subgroup": [], "x": 1})") == ErrorCode::ParseError);
}

}  // TEST_SUITE
