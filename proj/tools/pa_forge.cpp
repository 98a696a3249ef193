// pa-forge: command-line front end. Every command prints one JSON report.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pa/builders.hpp"
#include "pa/hecke.hpp"
#include "pa/io.hpp"
#include "pa/spectral.hpp"
#include "pa/suite.hpp"
#include "pa/symmetry.hpp"

using nlohmann::json;
using namespace pa;

namespace {

constexpr double kNormTol = 1e-9;

enum Exit { kOk = 0, kIo = 1, kDomain = 2, kInconclusive = 3 };

struct Options {
  std::string input;
  std::string builder;
  std::string group = "Z2";
  std::string steps;
  int degree = 3;
  std::string h_gens = "1,0,2";
  std::string k_gens = "1,2,0";
  bool force_unit_mu = false;
  int rplus = 3, rminus = 3, radius = 12;
  std::string tree_mode = "pattern";
  int edges = 4;
  bool with_group = true;
  std::string mode = "exact";
  int n = 4;
  std::uint64_t seed = 1;
  int samples = 200;
  int nmax = 6;
  std::string output;
  std::string emit_graph;
  std::string group_file;
  std::string base;
};

json tag_exact(const QScalar& q) { return {{"value", q.str()}, {"approx", q.to_double()}, {"tag", "exact"}}; }
json tag_count(long long v) { return {{"value", v}, {"tag", "exact"}}; }
json tag_approx(double v, double tol = kNormTol) {
  std::ostringstream os;
  os << "approx(" << tol << ")";
  return {{"value", v}, {"tag", os.str()}};
}
json tag_scalar(const QScalar& q, const Options& o) { return o.mode == "approx" ? tag_approx(q.to_double()) : tag_exact(q); }

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (...) {
      throw Error(ErrorCode::ParseError, "bad integer list '" + s + "'");
    }
  }
  return out;
}

// "1,0,2;2,1,0" -> two permutations
std::vector<Perm> parse_perms(const std::string& s) {
  std::vector<Perm> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';'))
    if (!tok.empty()) out.push_back(parse_ints(tok));
  return out;
}

Built make_input(const Options& o) {
  if (!o.input.empty() && !o.builder.empty()) throw Error(ErrorCode::InvalidParameters, "give either --input or --builder");
  if (!o.input.empty()) return load_graph_file(o.input);
  auto mode = o.tree_mode == "first-visit" ? SymmetryOracle::TreeMode::FirstVisit : SymmetryOracle::TreeMode::Pattern;
  if (o.builder == "diagonal") {
    PermGroup G = PermGroup::named(o.group);
    std::vector<int> steps = o.steps.empty() ? std::vector<int>{} : parse_ints(o.steps);
    if (steps.empty()) {
      steps = G.generator_ids();
      steps.push_back(G.identity());
    }
    return build_diagonal(G, steps);
  }
  if (o.builder == "bisch_haagerup" || o.builder == "bh")
    return build_bisch_haagerup(o.degree, parse_perms(o.h_gens), parse_perms(o.k_gens), o.force_unit_mu);
  if (o.builder == "tree" || o.builder == "biregular_tree") return build_biregular_tree(o.rplus, o.rminus, o.radius, mode);
  if (o.builder == "multi_edge") return build_multi_edge(o.edges, o.with_group);
  if (o.builder.empty()) throw Error(ErrorCode::InvalidParameters, "no input: use --input or --builder");
  throw Error(ErrorCode::InvalidParameters, "unknown builder '" + o.builder + "'");
}

int base_vertex(const Built& b, const Options& o) {
  const auto& g = *b.graph;
  if (!o.base.empty()) {
    auto v = g.find_vertex(o.base);
    if (!v) throw Error(ErrorCode::InvalidParameters, "unknown base vertex " + o.base);
    return *v;
  }
  if (b.oracle && b.oracle->base() >= 0) return b.oracle->base();
  return g.vertices(Sign::Plus).front();
}

const SymmetryOracle& need_oracle(const Built& b) {
  if (!b.oracle) throw Error(ErrorCode::NotTransitive, "this command needs a group action on the graph");
  return *b.oracle;
}

json input_json(const Built& b, const Options& o) {
  json j{{"kind", b.kind}, {"vertices", b.graph->num_vertices()}, {"edges", b.graph->num_edges()}};
  if (!o.input.empty()) j["file"] = o.input;
  if (b.graph->ball()) j["ball"] = {{"center", b.graph->vertex_name(b.graph->ball()->center)}, {"radius", b.graph->ball()->radius}};
  j["group"] = !b.oracle ? "none" : b.oracle->is_tree() ? "rooted-tree" : "explicit";
  return j;
}

// ---------------- commands ----------------

int cmd_validate(const Built& b, const Options& o, json& out) {
  const auto& g = *b.graph;
  auto rep = validate_weight(g);
  json issues = json::array();
  for (const auto& is : rep.issues) {
    json e{{"code", to_string(is.code)}, {"message", is.message}};
    if (is.vertex >= 0) e["vertex"] = g.vertex_name(is.vertex);
    if (is.edge >= 0) e["edge"] = g.edge(is.edge).name;
    issues.push_back(e);
  }
  out["ok"] = rep.ok();
  out["issues"] = issues;
  if (rep.delta) out["delta"] = tag_scalar(*rep.delta, o);
  out["delta_inferred"] = rep.delta_inferred;
  out["degree_bound_ok"] = rep.degree_bound_ok;
  out["interior_vertices"] = rep.interior_vertices;
  out["boundary_vertices"] = rep.boundary_vertices;
  int code = rep.ok() ? kOk : kDomain;
  if (b.oracle && rep.ok()) {
    auto ar = validate_action(g, *b.oracle);
    json ai = json::array();
    for (const auto& is : ar.issues) ai.push_back({{"code", to_string(is.code)}, {"message", is.message}});
    out["action"] = {{"ok", ar.ok()},
                     {"issues", ai},
                     {"transitive_plus", ar.transitive_plus},
                     {"transitive_minus", ar.transitive_minus},
                     {"group_order", ar.group_order < 0 ? json("infinite") : json(ar.group_order)}};
    if (!ar.ok()) code = kDomain;
    if (ar.ok() && ar.transitive_plus && ar.transitive_minus) {
      auto sr = check_spherical(g, *b.oracle);
      json edges = json::array();
      for (const auto& e : sr.edges)
        edges.push_back({{"edge", g.edge(e.edge).name},
                         {"lhs", tag_scalar(e.lhs, o)},
                         {"rhs", tag_scalar(e.rhs, o)},
                         {"pass", e.pass},
                         {"agrees", e.agrees}});
      out["spherical"] = {{"candidate", sr.candidate},
                          {"spherical", sr.spherical},
                          {"criterion_agrees", sr.criterion_agrees},
                          {"edges", edges},
                          {"note", sr.note}};
    }
  }
  return code;
}

int cmd_weights(const Built& b, const Options& o, json& out) {
  const auto& g = *b.graph;
  QScalar delta = require_valid(g);
  int base = base_vertex(b, o);
  auto vw = vertex_weights(g, base);
  json mv = json::object();
  for (int v = 0; v < g.num_vertices(); ++v) mv[g.vertex_name(v)] = tag_scalar(vw.mu_V[v], o);
  json me = json::object();
  for (int e = 0; e < g.num_edges(); ++e) me[g.edge(e).name] = tag_scalar(g.mu(e), o);
  out["base"] = g.vertex_name(vw.base);
  out["normalization"] = "mu_V(base) = 1";
  out["delta"] = tag_scalar(delta, o);
  out["mu_V"] = mv;
  out["mu"] = me;
  return kOk;
}

int cmd_dims(const Built& b, const Options& o, json& out) {
  const auto& g = *b.graph;
  require_valid(g);
  const auto& s = need_oracle(b);
  json levels = json::array();
  for (int n = 1; n <= o.n; ++n) {
    auto t = orbits(g, s, ObjectKind::StPairs, n, Sign::Plus, true);
    json l{{"n", n}, {"dim", tag_count(t.count())}};
    if (s.is_tree()) l["tl_oracle"] = tag_count(tl_dim_oracle(n));
    levels.push_back(l);
  }
  out["sign"] = "+";
  out["levels"] = levels;
  if (s.is_tree()) out["oracle"] = s.tree_mode() == SymmetryOracle::TreeMode::Pattern ? "pattern" : "first-visit";
  return kOk;
}

json bratteli_json(const WeightedGraph& g, const BratteliDiagram& d) {
  auto summands = [&](const std::vector<Summand>& ss) {
    json a = json::array();
    for (const auto& s : ss)
      a.push_back({{"target", s.target >= 0 ? json(g.vertex_name(s.target)) : json(nullptr)},
                   {"dim", s.dim},
                   {"mult", s.mult},
                   {"trace_weight", tag_approx(s.trace_weight)}});
    return a;
  };
  return {{"n", d.n},
          {"source", d.source >= 0 ? json(g.vertex_name(d.source)) : json(nullptr)},
          {"lower", summands(d.lower)},
          {"upper", summands(d.upper)},
          {"multiplicities", d.m},
          {"norm", tag_approx(d.norm)},
          {"dims_consistent", d.dims_consistent},
          {"trace_consistent", d.trace_consistent},
          {"approximate_split", d.approximate},
          {"warnings", d.warnings}};
}

int cmd_bratteli(const Built& b, const Options& o, json& out) {
  const auto& g = *b.graph;
  require_valid(g);
  auto tower = bratteli_Q_tower(g, need_oracle(b), o.n, o.seed);
  json levels = json::array();
  for (const auto& d : tower) levels.push_back(bratteli_json(g, d));
  out["levels"] = levels;
  return kOk;
}

json norm_json(const NormEstimate& e) {
  json j{{"lower", tag_approx(e.lower)}, {"iterations", e.iterations}, {"method", e.method}};
  j["upper"] = e.upper ? tag_approx(*e.upper) : json(nullptr);
  if (e.radius_used >= 0) j["radius"] = e.radius_used;
  return j;
}

int cmd_norms(const Built& b, const Options& o, json& out) {
  const auto& g = *b.graph;
  QScalar delta = require_valid(g);
  out["delta"] = tag_scalar(delta, o);
  out["graph_norm"] = norm_json(graph_norm(g, b.oracle.get()));
  if (b.oracle && b.oracle->is_tree())
    out["closed_form"] = tag_approx(tree_norm_closed_form(b.oracle->rplus(), b.oracle->rminus()));
  return kOk;
}

int cmd_amenability(const Built& b, const Options& o, json& out) {
  const auto& g = *b.graph;
  require_valid(g);
  auto r = amenability_verdict(g, need_oracle(b), o.n, o.seed);
  out["verdict"] = verdict_str(r.verdict);
  if (r.delta) out["delta"] = tag_scalar(*r.delta, o);
  out["bounds"] = norm_json(r.gamma);
  json gq = json::array(), dn = json::array();
  for (double v : r.gamma_q) gq.push_back(tag_approx(v));
  for (double v : r.delta_n) dn.push_back(tag_approx(v));
  out["gamma_q"] = gq;
  out["delta_n"] = dn;
  out["chain_ok"] = r.chain_ok;
  out["monotone"] = r.monotone;
  out["explanation"] = r.explanation;
  json levels = json::array();
  for (const auto& d : r.levels) levels.push_back(bratteli_json(g, d));
  out["levels"] = levels;
  return r.verdict == Verdict::Inconclusive ? kInconclusive : r.verdict == Verdict::NotSubfactorPA ? kDomain : kOk;
}

json hecke_json(const HeckeContext& ctx) {
  json dcs = json::array();
  for (int d = 0; d < ctx.double_cosets(); ++d)
    dcs.push_back({{"representative", ctx.G.label(ctx.dc_rep[d])},
                   {"size", tag_count(ctx.dc_size[d])},
                   {"index", tag_count(ctx.dc_index[d])}});
  auto alg = hecke_algebra(ctx);
  json j{{"scope", ctx.scope},
         {"group_order", tag_count(ctx.G.order())},
         {"subgroup_order", tag_count(static_cast<long long>(ctx.H.size()))},
         {"cosets", tag_count(ctx.cosets())},
         {"double_cosets", dcs},
         {"structure_constants", alg.constants},
         {"associative", alg.associative},
         {"unit_ok", alg.unit_ok},
         {"normal", ctx.normal()}};
  if (alg.matches_quotient_group) j["matches_quotient_group"] = *alg.matches_quotient_group;

  if (ctx.G.order() > 120) {
    j["crossed_products"] = "skipped: group order above 120";
    return j;
  }
  json cps = json::object();
  // A = C with the trivial action: indicators of double cosets multiply by C / |H|
  auto A1 = MultiMatrix::commutative(1);
  auto triv = ordinary_action(ctx, A1, [&](int) { return AutA::identity(A1); });
  CrossedProduct cp1(triv, false);
  bool matches = true;
  const long long hs = static_cast<long long>(ctx.H.size());
  auto indicator = [&](int d) {
    CPElement f = cp1.zero();
    for (int s = 0; s < ctx.cosets(); ++s)
      if (ctx.dc_of[ctx.coset_rep[s]] == d) f[s][0](0, 0) = 1;
    return f;
  };
  for (int a = 0; a < ctx.double_cosets(); ++a)
    for (int c = 0; c < ctx.double_cosets(); ++c) {
      CPElement want = cp1.zero();
      for (int d = 0; d < ctx.double_cosets(); ++d)
        want = cp1.add(want, cp1.scale(indicator(d), QScalar::rational(alg.constants[a][c][d], hs)));
      if (!cp1.equal(cp1.mul(indicator(a), indicator(c)), want)) matches = false;
    }
  auto v1 = verify_crossed_product(cp1);
  cps["trivial_C"] = {{"dimension", tag_count(v1.dimension)},
                      {"matches_structure_constants", matches},
                      {"associative", v1.associative},
                      {"star_antimultiplicative", v1.star_antimultiplicative},
                      {"omega_faithful", v1.omega_faithful}};

  // A = C^{G/H} with G permuting the coordinates
  auto AN = MultiMatrix::commutative(ctx.cosets());
  auto perm = [&](int g) {
    std::vector<int> p(ctx.cosets());
    for (int s = 0; s < ctx.cosets(); ++s) p[s] = ctx.act(g, s);
    return AutA::permutation(AN, p);
  };
  auto act = ordinary_action(ctx, AN, perm);
  auto cr = validate_cocycle(act);
  CrossedProduct ord(act, false), tw(act, true);
  auto vr = verify_crossed_product(ord);
  auto pr = verify_phi(ord);
  bool same = true;
  for (const auto& x : ord.basis())
    for (const auto& y : ord.basis())
      if (!ord.equal(ord.mul(x, y), tw.mul(x, y)) || !ord.equal(ord.star(x), tw.star(x))) same = false;
  cps["coset_algebra"] = {{"cocycle_ok", cr.ok},
                          {"dimension", tag_count(vr.dimension)},
                          {"equivariant", vr.equivariant},
                          {"associative", vr.associative},
                          {"star_involutive", vr.star_involutive},
                          {"star_antimultiplicative", vr.star_antimultiplicative},
                          {"unit_ok", vr.unit_ok},
                          {"omega_faithful", vr.omega_faithful},
                          {"representative_independent", vr.rep_independent},
                          {"twisted_with_trivial_u_equals_ordinary", same},
                          {"phi",
                           {{"homomorphism", pr.homomorphism},
                            {"star_preserving", pr.star_preserving},
                            {"injective", pr.injective},
                            {"invariant", pr.invariant},
                            {"unital", pr.unit_to_identity},
                            {"diagonal_formula", pr.diagonal_formula.value_or(false)},
                            {"image_dimension", tag_count(pr.image_dimension)},
                            {"fixed_point_dimension", tag_exact(pr.fixed_point_dimension)}}}};
  if (!vr.witness.empty()) cps["coset_algebra"]["witness"] = vr.witness;
  j["crossed_products"] = cps;
  return j;
}

int cmd_hecke(const Built* b, const Options& o, json& out) {
  if (!o.group_file.empty()) {
    auto in = load_group_file(o.group_file);
    auto ctx = build_hecke(in.G, in.H);
    ctx.scope = "finite-group";
    out["hecke"] = hecke_json(ctx);
    return kOk;
  }
  const auto& g = *b->graph;
  const auto& s = need_oracle(*b);
  int base = base_vertex(*b, o);
  auto ctx = build_hecke_from_action(g, s, base);  // ScopeTooSmall for trees
  auto st = stabilizer_data(g, s, base);
  out["base"] = g.vertex_name(base);
  out["hecke"] = hecke_json(ctx);
  out["orbit_count_matches"] = static_cast<size_t>(ctx.double_cosets()) == st.orbit_representatives.size();
  return kOk;
}

int cmd_graded(const Built& b, const Options& o, json& out) {
  require_valid(*b.graph);
  auto r = graded_suite(b, o.seed, o.samples, o.nmax, o.mode != "approx");
  out["arithmetic"] = r.exact ? "exact" : "approx(1e-9)";
  out["k"] = 0;
  out["nmax"] = r.nmax;
  out["samples"] = r.samples;
  out["corners"] = r.corners;
  out["corners_truncated"] = r.corners_truncated;
  out["ok"] = r.ok();
  out["lost"] = r.lost;
  out["associativity_failures"] = r.assoc_failures;
  out["trace_failures"] = r.trace_failures;
  out["dagger_failures"] = r.dagger_failures;
  out["projection_trace_failures"] = r.pv_failures;
  out["factorization"] = {{"checked", r.factorization_checked}, {"failures", r.factorization_failures}};
  out["trace_oracle"] = {{"pairs", r.trace_pairs_checked}, {"failures", r.trace_oracle_failures}};
  out["gram"] = {{"blocks", r.gram_blocks}, {"min_eigenvalue", tag_approx(r.gram_min_eigenvalue, 1e-8)}};
  out["sigma"] = {{"checked", r.sigma_checked}, {"failures", r.sigma_failures}, {"c_g", r.c_g}};
  if (r.has_group) {
    out["phi_f"] = {{"checked", r.phi_checked},
                    {"E_T_failures", r.phi_ET_failures},
                    {"trace_failures", r.phi_trace_failures},
                    {"positive_definite", r.phi_pd}};
    out["theta_beta"] = {{"checked", r.theta_checked},
                         {"beta_failures", r.theta_beta_failures},
                         {"norm_failures", r.theta_norm_failures},
                         {"indices", r.theta_index}};
  }
  return r.ok() ? kOk : kDomain;
}

// Runs one stage; domain errors become a diagnostic entry and an exit code.
int guarded(const std::function<int(json&)>& fn, json& slot) {
  try {
    return fn(slot);
  } catch (const Error& e) {
    slot["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    if (e.code() == ErrorCode::ParseError) return kIo;
    if (e.code() == ErrorCode::ScopeTooSmall || e.code() == ErrorCode::TruncationTooSmall) return kInconclusive;
    return kDomain;
  }
}

int cmd_report(const Built& b, const Options& o, json& out) {
  int code = kOk;
  auto worst = [&](int c) {
    if (c == kIo || code == kIo) code = kIo;
    else code = std::max(code, c);
  };
  json v;
  int vc = guarded([&](json& j) { return cmd_validate(b, o, j); }, v);
  out["validate"] = v;
  worst(vc);
  if (vc != kOk) return code;
  const std::vector<std::pair<const char*, std::function<int(json&)>>> stages{
      {"weights", [&](json& j) { return cmd_weights(b, o, j); }},
      {"dims", [&](json& j) { return cmd_dims(b, o, j); }},
      {"bratteli", [&](json& j) { return cmd_bratteli(b, o, j); }},
      {"norms", [&](json& j) { return cmd_norms(b, o, j); }},
      {"amenability", [&](json& j) { return cmd_amenability(b, o, j); }},
      {"hecke", [&](json& j) { return cmd_hecke(&b, o, j); }},
      {"graded", [&](json& j) { return cmd_graded(b, o, j); }},
  };
  for (const auto& [name, fn] : stages) {
    json j;
    int c = guarded(fn, j);
    // a tree has no finite Hecke pair; that is a scope note, not a failure
    if (std::string(name) == "hecke" && c == kInconclusive) c = kOk;
    worst(c);
    out[name] = j;
  }
  return code;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--input,-i", o.input, "graph JSON file");
  sub->add_option("--builder,-b", o.builder, "diagonal | bisch_haagerup | tree | multi_edge");
  sub->add_option("--group", o.group, "diagonal: named group (Z<n>, S<n>, D<n>)");
  sub->add_option("--steps", o.steps, "diagonal: element ids g_1..g_{n+1}, comma separated");
  sub->add_option("--degree", o.degree, "bisch_haagerup: permutation degree");
  sub->add_option("--H", o.h_gens, "bisch_haagerup: H generators, e.g. 1,0,2");
  sub->add_option("--K", o.k_gens, "bisch_haagerup: K generators, ';' between permutations");
  sub->add_flag("--force-unit-mu", o.force_unit_mu, "bisch_haagerup: set mu = 1");
  sub->add_option("--rplus", o.rplus, "tree: r+");
  sub->add_option("--rminus", o.rminus, "tree: r-");
  sub->add_option("--radius", o.radius, "tree: ball radius");
  sub->add_option("--tree-mode", o.tree_mode, "tree: pattern | first-visit")->check(CLI::IsMember({"pattern", "first-visit"}));
  sub->add_option("--edges", o.edges, "multi_edge: number of parallel edges");
  sub->add_option("--with-group", o.with_group, "multi_edge: attach S_n");
  sub->add_option("--mode", o.mode, "exact | approx")->check(CLI::IsMember({"exact", "approx"}));
  sub->add_option("--n", o.n, "largest level");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--samples", o.samples, "random samples in property suites");
  sub->add_option("--nmax", o.nmax, "graded truncation N_max");
  sub->add_option("--base", o.base, "base vertex name");
  sub->add_option("--output,-o", o.output, "write the report here instead of stdout");
  sub->add_option("--emit-graph", o.emit_graph, "also write the input graph as JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pa-forge: finite checks for planar algebras from weighted bipartite graphs"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> names{"validate", "weights",      "dims",  "bratteli", "norms",
                                       "amenability", "hecke", "graded-check", "report"};
  std::map<std::string, CLI::App*> subs;
  for (const auto& n : names) {
    subs[n] = app.add_subcommand(n);
    add_common(subs[n], o);
  }
  subs["hecke"]->add_option("--group-file", o.group_file, "finite group JSON (generators or table)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIo;
  }
  std::string cmd;
  for (const auto& n : names)
    if (subs[n]->parsed()) cmd = n;

  json report{{"schema", 1}, {"command", cmd}, {"seed", o.seed}, {"mode", o.mode}};
  int code = kOk;
  try {
    std::optional<Built> b;
    if (!(cmd == "hecke" && !o.group_file.empty())) {
      b = make_input(o);
      report["input"] = input_json(*b, o);
      if (!o.emit_graph.empty()) {
        std::ofstream gf(o.emit_graph);
        if (!gf) throw Error(ErrorCode::ParseError, "cannot write " + o.emit_graph);
        gf << graph_to_json(*b->graph, b->oracle.get()).dump(2) << "\n";
      }
    }
    json result;
    if (cmd == "validate") code = cmd_validate(*b, o, result);
    else if (cmd == "weights") code = cmd_weights(*b, o, result);
    else if (cmd == "dims") code = cmd_dims(*b, o, result);
    else if (cmd == "bratteli") code = cmd_bratteli(*b, o, result);
    else if (cmd == "norms") code = cmd_norms(*b, o, result);
    else if (cmd == "amenability") code = cmd_amenability(*b, o, result);
    else if (cmd == "hecke") code = cmd_hecke(b ? &*b : nullptr, o, result);
    else if (cmd == "graded-check") code = cmd_graded(*b, o, result);
    else code = cmd_report(*b, o, result);
    report["result"] = result;
  } catch (const Error& e) {
    report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    code = e.code() == ErrorCode::ParseError ? kIo
           : (e.code() == ErrorCode::ScopeTooSmall || e.code() == ErrorCode::TruncationTooSmall) ? kInconclusive
                                                                                                  : kDomain;
  } catch (const std::exception& e) {
    report["error"] = {{"code", "Internal"}, {"message", e.what()}};
    code = kDomain;
  }
  report["exit_code"] = code;
  std::string text = report.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.output);
    if (!f) {
      std::cerr << "cannot write " << o.output << "\n";
      return kIo;
    }
    f << text;
  }
  return code;
}
