#pragma once

// Seeded random generation of algebras, terms, pair sets, substitutions and
// formulas. All draws go through pick() so sequences depend only on the seed.

#include <cstdint>
#include <random>
#include <vector>

#include "uag/closure_rules.hpp"
#include "uag/congruence.hpp"
#include "uag/halmos.hpp"

namespace uag {

using Rng = std::mt19937_64;

/// Uniform-ish index in [0, n); n must be positive.
inline std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

AlgebraPtr random_algebra(const SignaturePtr& sig, const std::vector<std::size_t>& carrier, Rng& rng,
                          std::string name = {});

/// Random term of the given sort with depth at most `depth`; leaves are
/// context variables and nullary operations. Throws when the sort has no leaf.
Term random_term(const Signature& sig, const VarContext& ctx, SortId sort, std::size_t depth, Rng& rng);
Term random_term(const Signature& sig, const VarContext& ctx, std::size_t depth, Rng& rng);
TermPair random_pair(const Signature& sig, const VarContext& ctx, std::size_t depth, Rng& rng);
PairSet random_pairs(const Signature& sig, const VarContext& ctx, std::size_t count, std::size_t depth, Rng& rng);

/// Each variable of ctx mapped to a random term of depth <= depth over ctx.
Substitution random_substitution(const Signature& sig, const VarContext& ctx, std::size_t depth, Rng& rng);

Point random_point(const VarContext& ctx, const FiniteAlgebra& g, Rng& rng);

struct FormulaShape {
  std::size_t term_depth = 1;
  std::size_t connective_depth = 3;
  bool open = false;      // no quantifiers
  bool positive = false;  // no negation
};

Formula random_formula(const Signature& sig, const RelSignature& rels, const VarContext& ctx,
                       const FormulaShape& shape, Rng& rng);

Clause random_clause(ClauseKind kind, const Signature& sig, const VarContext& ctx, std::size_t depth,
                     std::size_t width, Rng& rng);

/// Random subset of a model's relation tuples, each tuple kept with p = 1/2.
Model random_model(const AlgebraPtr& g, const RelSignaturePtr& rels, Rng& rng);

}  // namespace uag
