#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pa/builders.hpp"
#include "pa/group.hpp"

namespace pa {

// Graph file format. Unknown fields anywhere are a ParseError.
//   field_d, even_vertices, odd_vertices, edges[{id, source, target, label, mu}],
//   delta, boundary?, group?{generators[{vertex_map, edge_map}], base?, strict_labels?}
// mu and delta may be omitted; a missing mu with a transitive group is inferred.
Built read_graph_json(const std::string& text);
Built load_graph_file(const std::string& path);
nlohmann::json graph_to_json(const WeightedGraph& g, const SymmetryOracle* s = nullptr);

// Finite group plus subgroup for Hecke computations, either
//   {"degree": n, "generators": [[...], ...], "subgroup": [[...], ...]}
// or {"table": [[...], ...], "subgroup_elements": [...]} with element 0 the identity.
struct GroupInput {
  PermGroup G;
  std::vector<int> H;
};
GroupInput read_group_json(const std::string& text);
GroupInput load_group_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace pa
