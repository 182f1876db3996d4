#pragma once

// Signatures extended by one nullary operation per carrier element, so that
// equations may carry coefficients from a fixed algebra.

#include <string>
#include <vector>

#include "uag/algebra.hpp"

namespace uag {

struct AdjoinedConstants {
  SignaturePtr signature;
  /// The original algebra with each new constant interpreted as its element.
  AlgebraPtr algebra;
  /// One ground equation per table entry (nullary tables included):
  /// op(c_a1, ..., c_an) = c_result.
  std::vector<TermPair> ground_pairs;
  /// constant[s][a] is the op id of the constant for element a of sort s.
  std::vector<std::vector<OpId>> constant;

  Term constant_term(SortId s, Element a) const;
};

/// Constant names are c<a> for one-sorted signatures, c_<sort>_<a> otherwise.
/// Throws when a generated name clashes with an existing operation.
AdjoinedConstants adjoin_constants(const FiniteAlgebra& g);

}  // namespace uag
