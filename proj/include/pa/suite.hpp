#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pa/builders.hpp"

namespace pa {

// Property checks on the graded algebra of a built example, at k = 0 and
// N_max = nmax. Exact when the weights allow it, otherwise in doubles.
struct GradedSuiteReport {
  bool exact = false;
  std::uint64_t seed = 0;
  int samples = 0;
  int nmax = 0;
  int corners = 0;
  bool corners_truncated = false;  // big balls: corners within distance 2 of the base
  int lost = 0;
  int assoc_failures = 0;
  int trace_failures = 0;       // Tr(xy) != Tr(yx)
  int dagger_failures = 0;      // (xy)† != y† x†
  int pv_failures = 0;          // Tr(p_v) != mu_V(v)^2
  int factorization_checked = 0;
  int factorization_failures = 0;
  int trace_pairs_checked = 0;
  int trace_oracle_failures = 0;  // Tr(x_l x_k) against the mirror-loop oracle
  int gram_blocks = 0;
  double gram_min_eigenvalue = 0;
  int sigma_checked = 0;
  int sigma_failures = 0;       // Tr(sigma_g x) != c_g Tr(x)
  std::vector<std::string> c_g;
  // phi_f and Theta/beta; only for explicit finite groups
  bool has_group = false;
  int phi_checked = 0;
  int phi_ET_failures = 0;      // f = 1_{G_o}: phi_f = E^S_T
  int phi_trace_failures = 0;   // Tr(phi_f(x)) = Tr(x)
  bool phi_pd = false;
  int theta_checked = 0;
  int theta_beta_failures = 0;
  int theta_norm_failures = 0;
  std::vector<long long> theta_index;
  double seconds = 0;
  bool ok() const;
};

// allow_exact = false forces double arithmetic.
GradedSuiteReport graded_suite(const Built& b, std::uint64_t seed = 1, int samples = 200, int nmax = 6,
                               bool allow_exact = true);

}  // namespace pa
