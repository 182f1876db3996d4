#pragma once

// Slow reference implementations used to cross-check the library.

#include <vector>

#include "uag/congruence.hpp"
#include "uag/galois.hpp"

namespace testing {

// Least congruence on the subterm universe containing `pairs`, by naive
// fixpoint iteration over a boolean matrix.
class FixpointClosure {
 public:
  FixpointClosure(const std::vector<uag::TermPair>& pairs, const std::vector<uag::Term>& extra) {
    std::vector<uag::Term> roots;
    for (const auto& [a, b] : pairs) {
      roots.push_back(a);
      roots.push_back(b);
    }
    roots.insert(roots.end(), extra.begin(), extra.end());
    u_ = uag::subterm_universe(roots);
    const std::size_t n = u_.size();
    rel_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) rel_[i][i] = true;
    for (const auto& [a, b] : pairs) {
      rel_[index(a)][index(b)] = true;
      rel_[index(b)][index(a)] = true;
    }
    std::vector<std::vector<std::size_t>> kids(n);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& c : u_[i].children()) kids[i].push_back(index(c));
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          if (rel_[i][k])
            for (std::size_t j = 0; j < n; ++j)
              if (rel_[k][j] && !rel_[i][j]) rel_[i][j] = changed = true;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (rel_[i][j]) continue;
          const auto& a = u_[i];
          const auto& b = u_[j];
          if (a.is_var() || b.is_var() || a.op() != b.op()) continue;
          bool all = true;
          for (std::size_t c = 0; c < kids[i].size() && all; ++c) all = rel_[kids[i][c]][kids[j][c]];
          if (all) rel_[i][j] = changed = true;
        }
    }
  }

  bool related(const uag::Term& a, const uag::Term& b) const { return rel_[index(a)][index(b)]; }
  const std::vector<uag::Term>& universe() const { return u_; }

 private:
  std::size_t index(const uag::Term& t) const {
    for (std::size_t i = 0; i < u_.size(); ++i)
      if (u_[i] == t) return i;
    return 0;
  }
  std::vector<uag::Term> u_;
  std::vector<std::vector<bool>> rel_;
};

// Points of the space satisfying every pair, by direct evaluation.
inline std::vector<std::size_t> brute_variety(const uag::PairSet& t, const uag::GeoPtr& geo) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < geo->size(); ++i) {
    auto p = geo->space.point(i);
    bool ok = true;
    for (const auto& [a, b] : t)
      if (uag::eval(a, geo->ctx, p, *geo->g) != uag::eval(b, geo->ctx, p, *geo->g)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(i);
  }
  return out;
}

// Pair in A' iff it holds at every point of A.
inline bool brute_in_congruence(const uag::TermPair& q, const uag::PointSet& a) {
  const auto& geo = a.geo();
  for (auto i : a.indices()) {
    auto p = geo->space.point(i);
    if (uag::eval(q.first, geo->ctx, p, *geo->g) != uag::eval(q.second, geo->ctx, p, *geo->g)) return false;
  }
  return true;
}

}  // namespace testing
