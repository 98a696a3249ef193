#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pa/graph.hpp"
#include "pa/group.hpp"
#include "pa/symmetry.hpp"

namespace pa {

// Graph and oracle live behind shared pointers so path spaces can keep raw
// references to the graph.
struct Built {
  std::string kind;
  std::shared_ptr<WeightedGraph> graph;
  std::shared_ptr<SymmetryOracle> oracle;  // may be null
};

// V± two copies of G, edges v_g+ -- v_{g g_i}-, mu = 1, left multiplication.
// `steps` lists g_1..g_{n+1} as element ids of G; the last must be the identity.
Built build_diagonal(const PermGroup& G, const std::vector<int>& steps);
// Convenience: G = Z/m with steps [generator, identity].
Built build_diagonal_cyclic(int m);

// V+ = G/H, V- = G/K, edge e_g between gH and gK, mu = sqrt(|K|/|H|).
// G is the closure of H and K inside the ambient permutation group.
Built build_bisch_haagerup(int degree, const std::vector<Perm>& H_gens, const std::vector<Perm>& K_gens,
                           bool force_unit_mu = false);

// Ball of the (r+, r-)-biregular tree around an even root.
Built build_biregular_tree(int rplus, int rminus, int radius,
                           SymmetryOracle::TreeMode mode = SymmetryOracle::TreeMode::Pattern);

// n parallel edges; optionally with S_n permuting them.
Built build_multi_edge(int n, bool with_group = false);

// Number of Temperley-Lieb diagrams on 2n points, counted by enumeration.
long long tl_dim_oracle(int n);

}  // namespace pa
