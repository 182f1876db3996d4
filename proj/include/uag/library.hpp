#pragma once

// Built-in signatures, algebras and contexts, plus exhaustive enumeration of
// small groups and semilattices.

#include <optional>
#include <string>
#include <vector>

#include "uag/algebra.hpp"

namespace uag {

/// Sort g; mul(g g) g, inv(g) g, e g, in that order.
SignaturePtr group_signature();
/// Sort s; meet(s s) s.
SignaturePtr semilattice_signature();
/// Sort r; add, mul, neg, zero, one, two.
SignaturePtr ring_signature();

AlgebraPtr cyclic_group(std::size_t n);
AlgebraPtr symmetric_group3();
/// The chain 0 < 1 under meet.
AlgebraPtr semilattice2();
AlgebraPtr zn_ring(std::size_t n);

/// Z2 Z3 Z4 Z5 S3 Z2xZ2 Z2xZ4 SL2 Z5R.
std::optional<AlgebraPtr> builtin_algebra(std::string_view name);
std::vector<std::string> builtin_algebra_names();

/// X1 = {x}, X2 = {x, y}, X3 = {x, y, z}, all over sort 0 of `sig`.
std::optional<VarContext> builtin_context(std::string_view name, const Signature& sig);
VarContext standard_context(const Signature& sig, std::size_t n);

/// Every group structure on {0..n-1} (any identity element), in table order.
std::vector<AlgebraPtr> all_groups(std::size_t n);
/// Every meet-semilattice structure on {0..n-1}, in table order.
std::vector<AlgebraPtr> all_semilattices(std::size_t n);

}  // namespace uag
