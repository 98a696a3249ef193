#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pa/group.hpp"
#include "pa/scalars.hpp"

namespace pa {

class WeightedGraph;
class SymmetryOracle;

// Hecke pair (G, H) with H < G finite. Cosets gH are numbered by their minimal
// element; double cosets HgH likewise.
struct HeckeContext {
  PermGroup G;
  std::vector<int> H;               // sorted element ids
  std::vector<bool> in_H;
  std::vector<int> coset_of;        // element -> coset id
  std::vector<int> coset_rep;       // coset id -> representative element
  std::vector<int> dc_of;           // element -> double coset id
  std::vector<int> dc_rep;          // double coset id -> minimal element
  std::vector<long long> dc_size;   // |HgH|
  std::vector<long long> dc_index;  // [H : H ∩ gHg^{-1}] = number of cosets in HgH
  std::string scope = "finite";

  int cosets() const { return static_cast<int>(coset_rep.size()); }
  int double_cosets() const { return static_cast<int>(dc_rep.size()); }
  int identity_coset() const { return coset_of[G.identity()]; }
  // coset of g·s
  int act(int g, int s) const { return coset_of[G.mul(g, coset_rep[s])]; }
  bool normal() const;
  // Same tables with the coset representatives redrawn at random.
  HeckeContext with_random_representatives(std::mt19937_64& rng) const;
};

HeckeContext build_hecke(const PermGroup& G, const std::vector<int>& H);
// H = stabilizer of o for an explicit finite action; cosets correspond to the orbit of o.
HeckeContext build_hecke_from_action(const WeightedGraph& g, const SymmetryOracle& s, int o);

// 1_{D1} * 1_{D2} = sum_c C[c] 1_{D_c}, with (f*g)(x) = sum_y f(y) g(y^{-1} x).
std::vector<long long> hecke_structure_constants(const HeckeContext& ctx, int d1, int d2);

struct HeckeAlgebraReport {
  int dimension = 0;
  std::vector<std::vector<std::vector<long long>>> constants;  // [a][b][c]
  bool associative = true;
  bool unit_ok = true;  // 1_H / |H| is a two-sided unit
  std::optional<bool> matches_quotient_group;  // set when H is normal
};
HeckeAlgebraReport hecke_algebra(const HeckeContext& ctx);

// ---- finite-dimensional coefficient algebras ----

struct QMat {
  int n = 0;
  std::vector<QScalar> a;
  QMat() = default;
  explicit QMat(int n_) : n(n_), a(static_cast<size_t>(n_) * n_) {}
  static QMat identity(int n);
  QScalar& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const QScalar& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

// A = ⊕ M_{d_i} with tau(a) = sum_i w_i tr(a_i). Real scalars: * is transpose.
struct MultiMatrix {
  std::vector<int> dims;
  std::vector<QScalar> weights;

  using Elem = std::vector<QMat>;
  static MultiMatrix commutative(int k);  // C^k with the uniform trace
  int dimension() const;
  Elem zero() const;
  Elem unit() const;
  Elem basis(int i) const;  // matrix units, block by block
  std::vector<QScalar> coords(const Elem& x) const;
  Elem mul(const Elem& x, const Elem& y) const;
  Elem add(const Elem& x, const Elem& y) const;
  Elem scale(const Elem& x, const QScalar& c) const;
  Elem adjoint(const Elem& x) const;
  QScalar tau(const Elem& x) const;
  bool equal(const Elem& x, const Elem& y) const;
  bool is_zero(const Elem& x) const;
  bool is_unitary(const Elem& u) const;
};

// Automorphism of A: block i goes to block perm[i] and is conjugated there by U.
struct AutA {
  std::vector<int> perm;
  MultiMatrix::Elem U;
  static AutA identity(const MultiMatrix& A);
  static AutA inner(const MultiMatrix& A, const MultiMatrix::Elem& u);  // Ad(u)
  static AutA permutation(const MultiMatrix& A, const std::vector<int>& perm);
  MultiMatrix::Elem apply(const MultiMatrix& A, const MultiMatrix::Elem& x) const;
  AutA compose(const MultiMatrix& A, const AutA& inner) const;  // this ∘ inner
  bool equals(const MultiMatrix& A, const AutA& o) const;
  bool trace_preserving(const MultiMatrix& A) const;
};

// Cocycle action (gamma, u) of (G, H) on A, tabulated on G × G/H (× G/H).
struct CocycleAction {
  const HeckeContext* ctx = nullptr;
  MultiMatrix A;
  std::vector<std::vector<AutA>> gamma;                       // [g][s]
  std::vector<std::vector<std::vector<MultiMatrix::Elem>>> u;  // [g][s][t]
  bool ordinary = false;  // gamma independent of s and u ≡ 1

  const AutA& gam(int g, int s) const { return gamma[g][s]; }
  const MultiMatrix::Elem& uu(int g, int s, int t) const { return u[g][s][t]; }
};

// Ordinary action from an action of G on A (given on generators' closure by a callback).
CocycleAction ordinary_action(const HeckeContext& ctx, const MultiMatrix& A, const std::function<AutA(int g)>& alpha);
// Coboundary twist of an ordinary action by unitaries v_s (v at the identity coset must be 1):
// gamma_{g,s} = Ad(v_{gs}) alpha_g Ad(v_s^*), u_{g,s,t} = v_{gs} alpha_g(v_s^* v_t) v_{gt}^*.
CocycleAction coboundary_action(const HeckeContext& ctx, const MultiMatrix& A, const std::function<AutA(int g)>& alpha,
                                const std::vector<MultiMatrix::Elem>& v);

struct CocycleReport {
  bool ok = true;
  int axiom = 0;  // first violated axiom (1..6), 0 if none; -1 for a non-unitary / trace issue
  std::string witness;
  long long checks = 0;
};
CocycleReport validate_cocycle(const CocycleAction& act);

// Element of C[A;G,H]: one value of A per coset (f is right H-invariant).
using CPElement = std::vector<MultiMatrix::Elem>;

class CrossedProduct {
 public:
  CrossedProduct(const CocycleAction& act, bool twisted);

  const CocycleAction& action() const { return *act_; }
  bool twisted() const { return twisted_; }
  CPElement zero() const;
  CPElement unit() const;
  CPElement add(const CPElement& x, const CPElement& y) const;
  CPElement scale(const CPElement& x, const QScalar& c) const;
  CPElement mul(const CPElement& x, const CPElement& y) const;
  CPElement star(const CPElement& x) const;
  QScalar omega(const CPElement& x) const;
  bool equal(const CPElement& x, const CPElement& y) const;
  // f(h t) = gamma_{h,1}(f(t)) u_{h,1,t} for h in H
  bool equivariant(const CPElement& x) const;
  // j(a) for a in A^H
  CPElement embed(const MultiMatrix::Elem& a) const;
  // Spanning set reduced to a basis: averaged matrix units on each double coset.
  const std::vector<CPElement>& basis() const { return basis_; }
  int dimension() const { return static_cast<int>(basis_.size()); }
  std::vector<QScalar> flatten(const CPElement& x) const;
  // Use a different representative system (must come from the same tables).
  void set_representatives(std::vector<int> reps) { reps_ = std::move(reps); }

 private:
  const CocycleAction* act_;
  bool twisted_;
  std::vector<int> reps_;
  std::vector<CPElement> basis_;
};

struct CrossedProductReport {
  int dimension = 0;
  bool equivariant = true;
  bool associative = true;
  bool star_involutive = true;
  bool star_antimultiplicative = true;
  bool unit_ok = true;
  bool omega_faithful = false;  // Gram matrix omega(f_i f_j^*) positive definite
  bool rep_independent = true;  // products unchanged under a second representative system
  std::string witness;
};
CrossedProductReport verify_crossed_product(const CrossedProduct& cp, std::uint64_t seed = 1);

// phi(f) = sum_{s,t} gamma_{s,1}(f(t)) u_{s,1,t} ⊗ e_{s,st}, as a matrix over A indexed by G/H.
using AMatrix = std::vector<std::vector<MultiMatrix::Elem>>;
AMatrix phi_embed(const CrossedProduct& cp, const CPElement& f);

struct PhiReport {
  bool homomorphism = true;
  bool star_preserving = true;
  bool injective = true;
  bool invariant = true;       // pi_g(phi(f)) = phi(f)
  bool unit_to_identity = true;
  std::optional<bool> diagonal_formula;  // ordinary actions: phi(A^H) = sum_s gamma_s(a) ⊗ e_{s,s}
  long long image_dimension = 0;
  QScalar fixed_point_dimension;  // (1/|G|) sum_g tr(pi_g) on A ⊗ M_{G/H}
  std::string witness;
};
PhiReport verify_phi(const CrossedProduct& cp);

// Exact LDL^T pivots of a symmetric matrix; positive definite iff all pivots > 0.
bool positive_definite_exact(std::vector<std::vector<QScalar>> m);
// Rank over the field.
int exact_rank(std::vector<std::vector<QScalar>> rows);

}  // namespace pa
