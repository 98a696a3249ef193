#pragma once

#include <map>
#include <string>
#include <vector>

#include "pa/error.hpp"

namespace pa {

using Perm = std::vector<int>;

Perm perm_compose(const Perm& outer, const Perm& inner);  // outer ∘ inner
Perm perm_inverse(const Perm& p);
Perm perm_identity(int n);

// Finite group given as permutations of {0..degree-1}, closed by BFS from the
// generators. Element 0 is always the identity.
class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(int degree, const std::vector<Perm>& generators, size_t max_order = 100000);

  // "Z<n>", "S<n>", "D<n>" (dihedral of order 2n), "trivial".
  static PermGroup named(const std::string& name);
  // Generated subgroup, elements listed in the parent's order.
  std::vector<int> subgroup(const std::vector<int>& generator_ids) const;

  int order() const { return static_cast<int>(elements_.size()); }
  int degree() const { return degree_; }
  const Perm& element(int i) const { return elements_.at(i); }
  const std::vector<Perm>& elements() const { return elements_; }
  const std::vector<int>& generator_ids() const { return gens_; }
  int index_of(const Perm& p) const;
  int mul(int g, int h) const { return table_[g][h]; }  // g·h = g ∘ h
  int inv(int g) const { return inverse_[g]; }
  int identity() const { return 0; }
  std::string label(int g) const;  // cycle notation

 private:
  int degree_ = 0;
  std::vector<Perm> elements_;
  std::vector<int> gens_;
  std::map<Perm, int> index_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
};

}  // namespace pa
