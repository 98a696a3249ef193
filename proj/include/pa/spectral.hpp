#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pa/graph.hpp"
#include "pa/symmetry.hpp"

namespace pa {

struct Summand {
  int target = -1;    // representative endpoint w0 of the block (o, w0)
  int dim = 0;        // d_i: size of the simple matrix algebra
  int mult = 1;       // multiplicity in the path representation on C(o, w0)
  double trace_weight = 0;  // normalized trace of a minimal projection
};

struct BratteliDiagram {
  int n = 0;
  int source = -1;
  std::vector<Summand> lower, upper;
  std::vector<std::vector<long long>> m;  // lower x upper multiplicities
  double norm = 0;                        // largest singular value of m
  bool dims_consistent = true;            // sum_i m_ij d_i == d'_j
  bool trace_consistent = true;           // w_i == sum_j m_ij w'_j
  bool approximate = false;               // numeric centre splitting used
  int retries = 0;
  std::vector<std::string> warnings;
};

// Delta_n(o): blocks (o, w) of P_n^+ and their inclusion into P_{n+1}^+.
BratteliDiagram bratteli_P(const WeightedGraph& g, int n, int source);
// Gamma(Q)_n for Q = P^G, computed on the based algebra at the oracle base.
BratteliDiagram bratteli_Q(const WeightedGraph& g, const SymmetryOracle& s, int n, std::uint64_t seed = 1);
// Levels 0..max_n in one pass (shares the level decompositions).
std::vector<BratteliDiagram> bratteli_Q_tower(const WeightedGraph& g, const SymmetryOracle& s, int max_n,
                                              std::uint64_t seed = 1);

struct NormEstimate {
  double lower = 0;
  std::optional<double> upper;
  int iterations = 0;
  int radius_used = -1;
  std::string method;
};

// Largest singular value of a nonnegative multiplicity matrix.
double multiplicity_norm(const std::vector<std::vector<long long>>& m);
NormEstimate matrix_norm(const std::vector<std::vector<double>>& a, int max_iter = 20000, double tol = 1e-13);
// Norm of the adjacency operator. Finite graphs get Collatz-Wielandt upper
// bounds; balls get certified Rayleigh lower bounds, and the tree oracle adds
// the closed form sqrt(r+ - 1) + sqrt(r- - 1).
NormEstimate graph_norm(const WeightedGraph& g, const SymmetryOracle* s = nullptr, int max_iter = 20000,
                        double tol = 1e-13);
double tree_norm_closed_form(int rplus, int rminus);

enum class Verdict { NonAmenableCertified, AmenableObserved, Inconclusive, NotSubfactorPA };
const char* verdict_str(Verdict v);

struct AmenabilityReport {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<QScalar> delta;
  NormEstimate gamma;
  std::vector<double> gamma_q;   // ||Gamma(Q)_n||
  std::vector<double> delta_n;   // ||Delta_n||
  std::vector<BratteliDiagram> levels;
  bool chain_ok = true;          // ||Gamma(Q)_n|| <= ||Delta_n|| <= ||Gamma||
  bool monotone = true;
  std::string explanation;
};

AmenabilityReport amenability_verdict(const WeightedGraph& g, const SymmetryOracle& s, int max_n = 4,
                                      std::uint64_t seed = 1);

struct FiniteDepthReport {
  long long double_cosets = 0;
  bool finite_graph = true;
  bool finite_depth = true;
  int scope_radius = -1;
  std::vector<int> radii;          // d(o, go) over orbit representatives
  std::vector<long long> sizes;
  std::string note;
};

FiniteDepthReport finite_depth_check(const WeightedGraph& g, const SymmetryOracle& s, int o);

}  // namespace pa
