#pragma once

// Clauses built from equalities (identities, pseudoidentities, universal
// clauses, quasi-identities), their validity in finite algebras, the
// composition membership tests and bounded rule saturation.

#include <set>
#include <string>
#include <vector>

#include "uag/congruence.hpp"

namespace uag {

enum class ClauseKind { Identity, Pseudo, Quasi, Universal };

const char* clause_kind_name(ClauseKind k);

/// A disjunction of equalities and disequalities. A quasi-identity u0 -> q is
/// stored with the conjuncts of u0 as negatives and q as the single positive;
/// with no positive it reads u0 -> false (implicative classes only).
struct Clause {
  ClauseKind kind = ClauseKind::Identity;
  std::vector<TermPair> positives;  // canonical, sorted, no duplicates
  std::vector<TermPair> negatives;

  static Clause identity(Term a, Term b);
  static Clause pseudo(std::vector<TermPair> pairs);
  static Clause universal(std::vector<TermPair> pos, std::vector<TermPair> neg);
  static Clause quasi(std::vector<TermPair> antecedent, TermPair consequent);
  static Clause quasi_false(std::vector<TermPair> antecedent);

  const std::vector<TermPair>& antecedent() const { return negatives; }
  const TermPair& consequent() const { return positives.at(0); }
  std::size_t width() const { return positives.size() + negatives.size(); }
  std::size_t depth() const;
  /// Valid everywhere by shape: a reflexive positive or a positive that is
  /// also a negative.
  bool is_tautology() const;

  bool operator==(const Clause& o) const;
  bool operator<(const Clause& o) const;
};

std::string to_string(const Clause& c, const Signature& sig);

/// Sorts and deduplicates both lists; checks per-kind shape. Throws Invalid.
Clause normalized(Clause c);

bool holds_clause(const FiniteAlgebra& g, const Clause& c);

bool rho_membership(const TermPair& query, const PairSet& gens);

/// |V| is capped at 10^6.
bool circ_pseudo_member(const Clause& u, const std::vector<Clause>& us);
bool circ_universal_member(const Clause& u, const std::vector<Clause>& us);

struct SaturationBounds {
  std::size_t max_depth = 2;       // clause terms deeper than this are dropped
  std::size_t max_width = 3;       // pairs per clause
  std::size_t max_iterations = 4;
  std::size_t max_clauses = 2000;
  std::size_t subst_depth = 1;     // replacement terms for the End W generators
  std::size_t circ_arity = 3;      // largest subset composed at once
  std::size_t circ_pool = 24;      // compositions use the narrowest clauses only
  bool implicative = false;        // quasi only: u0 -> false gives u0 -> anything
};

struct DeriveResult {
  std::set<Clause> clauses;
  std::size_t iterations = 0;
  bool fixpoint = false;   // no new clause within bounds
  bool truncated = false;  // clause or iteration bound hit
};

/// Bounded least fixed point of the rules of the given kind over the variables
/// and signature occurring in t.
DeriveResult derive_closure(ClauseKind kind, const std::vector<Clause>& t, const Signature& sig,
                            const SaturationBounds& bounds = {});

struct SoundnessReport {
  std::size_t models_checked = 0;  // pool algebras satisfying t
  std::size_t clauses_checked = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

SoundnessReport soundness_check(const std::vector<Clause>& derived, const std::vector<Clause>& t,
                                const std::vector<AlgebraPtr>& pool);

}  // namespace uag
