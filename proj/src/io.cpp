#include "pa/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace pa {

using nlohmann::json;

namespace {

void only_fields(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw Error(ErrorCode::ParseError, "unknown field '" + it.key() + "' in " + where);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "' in " + where);
  return j.at(key);
}

std::string scalar_text(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw Error(ErrorCode::ParseError, where + " must be a scalar string");
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Built read_graph_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  only_fields(j, {"field_d", "even_vertices", "odd_vertices", "edges", "delta", "boundary", "group"}, "graph");
  Built b;
  b.kind = "custom_file";
  b.graph = std::make_shared<WeightedGraph>();
  auto& g = *b.graph;
  try {
    long d = j.value("field_d", 1L);
    if (d < 1) throw Error(ErrorCode::ParseError, "field_d must be positive");
    g.set_field(d);
    for (const auto& v : need(j, "even_vertices", "graph")) g.add_vertex(v.get<std::string>(), true);
    for (const auto& v : need(j, "odd_vertices", "graph")) g.add_vertex(v.get<std::string>(), false);
    auto vertex = [&](const json& name, const std::string& where) {
      auto id = g.find_vertex(name.get<std::string>());
      if (!id) throw Error(ErrorCode::ParseError, "unknown vertex '" + name.get<std::string>() + "' in " + where);
      return *id;
    };
    bool any_mu = false, all_mu = true;
    for (const auto& e : need(j, "edges", "graph")) {
      only_fields(e, {"id", "source", "target", "label", "mu"}, "edge");
      std::string id = need(e, "id", "edge").get<std::string>();
      int s = vertex(need(e, "source", "edge " + id), "edge " + id);
      int t = vertex(need(e, "target", "edge " + id), "edge " + id);
      if (!g.is_even(s) || g.is_even(t))
        throw Error(ErrorCode::ParseError, "edge " + id + " must go from an even to an odd vertex");
      std::optional<QScalar> mu;
      if (e.contains("mu")) {
        mu = QScalar::parse(scalar_text(e.at("mu"), "mu of " + id), d);
        any_mu = true;
      } else {
        all_mu = false;
      }
      g.add_edge(id, s, t, e.value("label", 1), mu);
    }
    if (any_mu && !all_mu) throw Error(ErrorCode::ParseError, "mu must be given on every edge or on none");
    if (j.contains("delta")) g.set_delta(QScalar::parse(scalar_text(j.at("delta"), "delta"), d));
    if (j.contains("boundary"))
      for (const auto& v : j.at("boundary")) g.add_boundary(vertex(v, "boundary"));

    if (j.contains("group")) {
      const auto& grp = j.at("group");
      only_fields(grp, {"generators", "base", "strict_labels"}, "group");
      std::vector<GraphAutomorphism> gens;
      int k = 0;
      for (const auto& gen : need(grp, "generators", "group")) {
        std::string where = "generator " + std::to_string(k++);
        only_fields(gen, {"vertex_map", "edge_map"}, where);
        GraphAutomorphism a = GraphAutomorphism::identity(g);
        for (auto it = need(gen, "vertex_map", where).begin(); it != gen.at("vertex_map").end(); ++it)
          a.vmap[vertex(json(it.key()), where)] = vertex(it.value(), where);
        for (auto it = need(gen, "edge_map", where).begin(); it != gen.at("edge_map").end(); ++it) {
          auto from = g.find_edge(it.key());
          auto to = g.find_edge(it.value().get<std::string>());
          if (!from || !to) throw Error(ErrorCode::ParseError, "unknown edge in " + where);
          a.emap[*from] = *to;
        }
        gens.push_back(std::move(a));
      }
      int base = grp.contains("base") ? vertex(grp.at("base"), "group") : -1;
      b.oracle = std::make_shared<SymmetryOracle>(SymmetryOracle::explicit_group(std::move(gens), base));
      if (grp.contains("strict_labels")) b.oracle->set_strict_labels(grp.at("strict_labels").get<bool>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!g.weighted() && b.oracle) {
    auto w = std::make_shared<WeightedGraph>(infer_unique_weight(g, *b.oracle));
    b.graph = w;
  }
  return b;
}

Built load_graph_file(const std::string& path) { return read_graph_json(read_text_file(path)); }

json graph_to_json(const WeightedGraph& g, const SymmetryOracle* s) {
  json j;
  j["field_d"] = g.field();
  json ev = json::array(), od = json::array();
  for (int v = 0; v < g.num_vertices(); ++v) (g.is_even(v) ? ev : od).push_back(g.vertex_name(v));
  j["even_vertices"] = ev;
  j["odd_vertices"] = od;
  json edges = json::array();
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edge(e);
    json o{{"id", ed.name}, {"source", g.vertex_name(ed.source)}, {"target", g.vertex_name(ed.target)}, {"label", ed.label}};
    if (g.weighted()) o["mu"] = g.mu(e).str();
    edges.push_back(o);
  }
  j["edges"] = edges;
  if (g.delta()) j["delta"] = g.delta()->str();
  if (!g.boundary().empty()) {
    json bd = json::array();
    for (int v : g.boundary()) bd.push_back(g.vertex_name(v));
    j["boundary"] = bd;
  }
  if (s && !s->is_tree()) {
    json gens = json::array();
    for (const auto& a : s->generators()) {
      json vm = json::object(), em = json::object();
      for (int v = 0; v < g.num_vertices(); ++v) vm[g.vertex_name(v)] = g.vertex_name(a.vmap[v]);
      for (int e = 0; e < g.num_edges(); ++e) em[g.edge(e).name] = g.edge(a.emap[e]).name;
      gens.push_back({{"vertex_map", vm}, {"edge_map", em}});
    }
    json grp{{"generators", gens}};
    if (s->base() >= 0) grp["base"] = g.vertex_name(s->base());
    if (!s->strict_labels()) grp["strict_labels"] = false;
    j["group"] = grp;
  }
  return j;
}

GroupInput read_group_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  GroupInput in;
  try {
    if (j.contains("table")) {
      only_fields(j, {"table", "subgroup_elements"}, "group");
      auto tab = j.at("table").get<std::vector<std::vector<int>>>();
      const int n = static_cast<int>(tab.size());
      // left regular representation; the table must be a Latin square with identity 0
      std::vector<Perm> gens;
      for (int g = 0; g < n; ++g) {
        if (static_cast<int>(tab[g].size()) != n) throw Error(ErrorCode::ParseError, "table is not square");
        std::vector<int> row = tab[g];
        std::sort(row.begin(), row.end());
        for (int i = 0; i < n; ++i)
          if (row[i] != i) throw Error(ErrorCode::ParseError, "table is not a Latin square");
        gens.push_back(tab[g]);
      }
      for (int g = 0; g < n; ++g)
        if (tab[0][g] != g || tab[g][0] != g) throw Error(ErrorCode::ParseError, "element 0 must be the identity");
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            if (tab[tab[a][b]][c] != tab[a][tab[b][c]]) throw Error(ErrorCode::ParseError, "table is not associative");
      in.G = PermGroup(n, gens);
      if (in.G.order() != n) throw Error(ErrorCode::ParseError, "table does not define a group");
      for (int h : need(j, "subgroup_elements", "group").get<std::vector<int>>()) {
        if (h < 0 || h >= n) throw Error(ErrorCode::ParseError, "subgroup element out of range");
        in.H.push_back(in.G.index_of(gens[h]));
      }
    } else {
      only_fields(j, {"degree", "generators", "subgroup"}, "group");
      int deg = need(j, "degree", "group").get<int>();
      auto gens = need(j, "generators", "group").get<std::vector<Perm>>();
      in.G = PermGroup(deg, gens);
      std::vector<int> hid;
      for (const auto& p : need(j, "subgroup", "group").get<std::vector<Perm>>()) {
        try {
          hid.push_back(in.G.index_of(p));
        } catch (const Error&) {
          throw Error(ErrorCode::ParseError, "subgroup generator outside the group");
        }
      }
      in.H = in.G.subgroup(hid);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  std::sort(in.H.begin(), in.H.end());
  in.H.erase(std::unique(in.H.begin(), in.H.end()), in.H.end());
  if (in.H.empty() || in.H[0] != 0) in.H.insert(in.H.begin(), 0);
  return in;
}

GroupInput load_group_file(const std::string& path) { return read_group_json(read_text_file(path)); }

}  // namespace pa
