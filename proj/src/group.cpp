#include "pa/group.hpp"

#include <deque>
#include <numeric>
#include <set>

namespace pa {

Perm perm_compose(const Perm& outer, const Perm& inner) {
  Perm r(inner.size());
  for (size_t i = 0; i < inner.size(); ++i) r[i] = outer[inner[i]];
  return r;
}

Perm perm_inverse(const Perm& p) {
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

Perm perm_identity(int n) {
  Perm r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

PermGroup::PermGroup(int degree, const std::vector<Perm>& generators, size_t max_order) : degree_(degree) {
  for (const auto& g : generators) {
    if (static_cast<int>(g.size()) != degree) throw Error(ErrorCode::InvalidParameters, "generator degree mismatch");
    std::set<int> seen(g.begin(), g.end());
    if (static_cast<int>(seen.size()) != degree || *seen.begin() != 0 || *seen.rbegin() != degree - 1)
      throw Error(ErrorCode::InvalidParameters, "generator is not a permutation");
  }
  elements_.push_back(perm_identity(degree));
  index_[elements_[0]] = 0;
  std::deque<int> q{0};
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (const auto& g : generators) {
      Perm y = perm_compose(g, elements_[x]);
      if (index_.count(y)) continue;
      if (elements_.size() >= max_order) throw Error(ErrorCode::InvalidParameters, "group closure too large");
      index_[y] = static_cast<int>(elements_.size());
      elements_.push_back(std::move(y));
      q.push_back(static_cast<int>(elements_.size()) - 1);
    }
  }
  for (const auto& g : generators) gens_.push_back(index_.at(g));
  int n = order();
  table_.assign(n, std::vector<int>(n));
  inverse_.assign(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table_[i][j] = index_.at(perm_compose(elements_[i], elements_[j]));
  for (int i = 0; i < n; ++i) inverse_[i] = index_.at(perm_inverse(elements_[i]));
}

PermGroup PermGroup::named(const std::string& name) {
  auto num = [&](size_t pos) {
    try {
      return std::stoi(name.substr(pos));
    } catch (...) {
      throw Error(ErrorCode::ParseError, "bad group name '" + name + "'");
    }
  };
  if (name == "trivial") return PermGroup(1, {});
  if (name.size() < 2) throw Error(ErrorCode::ParseError, "bad group name '" + name + "'");
  int n = num(1);
  if (n < 1) throw Error(ErrorCode::InvalidParameters, "group parameter must be positive");
  switch (name[0]) {
    case 'Z': {
      Perm c(n);
      for (int i = 0; i < n; ++i) c[i] = (i + 1) % n;
      return PermGroup(n, {c});
    }
    case 'S': {
      if (n == 1) return PermGroup(1, {});
      Perm t = perm_identity(n), c(n);
      std::swap(t[0], t[1]);
      for (int i = 0; i < n; ++i) c[i] = (i + 1) % n;
      return PermGroup(n, {t, c});
    }
    case 'D': {
      if (n < 3) throw Error(ErrorCode::InvalidParameters, "dihedral D<n> needs n >= 3");
      Perm c(n), r(n);
      for (int i = 0; i < n; ++i) {
        c[i] = (i + 1) % n;
        r[i] = (n - i) % n;
      }
      return PermGroup(n, {c, r});
    }
    default:
      throw Error(ErrorCode::ParseError, "unknown group '" + name + "'");
  }
}

std::vector<int> PermGroup::subgroup(const std::vector<int>& generator_ids) const {
  std::vector<bool> in(order(), false);
  std::vector<int> out{0};
  in[0] = true;
  for (size_t i = 0; i < out.size(); ++i)
    for (int g : generator_ids) {
      int y = mul(g, out[i]);
      if (!in[y]) {
        in[y] = true;
        out.push_back(y);
      }
    }
  std::vector<int> sorted;
  for (int i = 0; i < order(); ++i)
    if (in[i]) sorted.push_back(i);
  return sorted;
}

int PermGroup::index_of(const Perm& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) throw Error(ErrorCode::InvalidParameters, "permutation not in group");
  return it->second;
}

std::string PermGroup::label(int g) const {
  const Perm& p = elements_.at(g);
  std::vector<bool> seen(p.size(), false);
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == static_cast<int>(i)) continue;
    s += "(";
    for (size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      if (j != i) s += " ";
      s += std::to_string(j + 1);
    }
    s += ")";
  }
  return s.empty() ? "()" : s;
}

}  // namespace pa
