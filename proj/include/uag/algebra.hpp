#pragma once

// Finite algebras with total operation tables, points, evaluation, generated
// subalgebras with witness terms, homomorphisms, products and quotients.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "uag/terms.hpp"

namespace uag {

using Element = std::uint32_t;

class FiniteAlgebra {
 public:
  /// `tables[o]` lists results for argument tuples in mixed-radix order with
  /// the first argument most significant. Throws on any malformed table.
  FiniteAlgebra(SignaturePtr sig, std::vector<std::size_t> carrier, std::vector<std::vector<Element>> tables,
                std::string name = {});

  const SignaturePtr& signature_ptr() const { return sig_; }
  const Signature& signature() const { return *sig_; }
  const std::string& name() const { return name_; }
  std::size_t carrier_size(SortId s) const { return carrier_.at(s); }
  const std::vector<std::size_t>& carrier() const { return carrier_; }
  /// Sum of carrier sizes over all sorts.
  std::size_t total_size() const;

  Element apply(OpId op, std::span<const Element> args) const { return tables_[op][table_index(op, args)]; }
  std::size_t table_index(OpId op, std::span<const Element> args) const {
    std::size_t idx = 0;
    const auto& a = sig_->op(op).args;
    for (std::size_t i = 0; i < args.size(); ++i) idx = idx * carrier_[a[i]] + args[i];
    return idx;
  }
  const std::vector<Element>& table(OpId op) const { return tables_.at(op); }
  const std::vector<std::vector<Element>>& tables() const { return tables_; }

  bool operator==(const FiniteAlgebra& o) const {
    return same_signature(sig_, o.sig_) && carrier_ == o.carrier_ && tables_ == o.tables_;
  }

 private:
  SignaturePtr sig_;
  std::vector<std::size_t> carrier_;
  std::vector<std::vector<Element>> tables_;
  std::string name_;
};

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

/// Number of argument tuples of `op` in `g`.
std::size_t table_size(const FiniteAlgebra& g, OpId op);

/// Decodes a mixed-radix table index into the argument tuple.
std::vector<Element> decode_args(const FiniteAlgebra& g, OpId op, std::size_t index);

/// Point = assignment of a carrier element to each context variable, indexed
/// by the variable's position in the context.
using Point = std::vector<Element>;

/// The finite set Hom(W(ctx), G) in lexicographic order of the variable list
/// (first variable most significant).
class PointSpace {
 public:
  PointSpace(const VarContext& ctx, const FiniteAlgebra& g);

  std::size_t size() const { return size_; }
  Point point(std::size_t index) const;
  std::size_t index(std::span<const Element> p) const;
  std::size_t radix(std::size_t var) const { return radix_[var]; }
  std::size_t num_vars() const { return radix_.size(); }

 private:
  std::vector<std::size_t> radix_;
  std::size_t size_ = 1;
};

/// Postfix program for evaluating a term with variables resolved to context
/// positions.
class TermProgram {
 public:
  TermProgram(const Term& t, const VarContext& ctx);

  Element run(const FiniteAlgebra& g, std::span<const Element> point) const;
  SortId sort() const { return sort_; }

 private:
  struct Instr {
    bool is_var;
    std::uint32_t id;     // var index or op id
    std::uint32_t arity;  // ops only
  };
  std::vector<Instr> code_;
  SortId sort_ = 0;
  std::size_t max_stack_ = 0;
};

/// Steps p to the next point in canonical order; false after the last one.
bool advance(Point& p, const PointSpace& space);

Element eval(const Term& t, const VarContext& ctx, std::span<const Element> point, const FiniteAlgebra& g);

std::vector<Point> enumerate_points(const VarContext& ctx, const FiniteAlgebra& g);

/// The subalgebra of a finite product of algebras generated by the images of
/// context variables, built breadth first in rounds: round 0 holds the
/// generators in variable order; each later round applies operations in
/// declaration order to argument tuples (lexicographic in discovery order)
/// that use at least one element found in the previous round. The first
/// derivation of an element is its witness.
class Generated {
 public:
  struct Derivation {
    bool is_generator;
    std::uint32_t id;                 // generator variable index or op id
    std::vector<std::uint32_t> args;  // member indices, per argument sort
  };

  /// `components` are the product factors, `assignments[c]` the point in
  /// factor c. No factors means the one-element product.
  Generated(SignaturePtr sig, VarContext ctx, std::vector<AlgebraPtr> components,
            std::vector<Point> assignments);

  const VarContext& context() const { return ctx_; }
  const Signature& signature() const { return *sig_; }
  const SignaturePtr& signature_ptr() const { return sig_; }
  std::size_t num_components() const { return components_.size(); }
  const std::vector<AlgebraPtr>& components() const { return components_; }
  const std::vector<Point>& assignments() const { return assignments_; }

  /// Members of a sort; each is a tuple with one coordinate per component.
  std::size_t member_count(SortId s) const { return members_[s].size(); }
  std::size_t total_members() const;
  const std::vector<Element>& member(SortId s, std::uint32_t m) const { return members_[s][m]; }
  std::optional<std::uint32_t> find(SortId s, std::span<const Element> tuple) const;
  const Derivation& derivation(SortId s, std::uint32_t m) const { return derivs_[s][m]; }
  /// Member index of each context variable.
  const Point& generators() const { return generators_; }
  /// Discovery order as (sort, member) across all sorts.
  const std::vector<std::pair<SortId, std::uint32_t>>& order() const { return order_; }

  const Term& witness(SortId s, std::uint32_t m) const { return witnesses_[s][m]; }

  /// Member-indexed copy of the generated algebra with full tables.
  const AlgebraPtr& algebra() const { return algebra_; }

 private:
  struct TupleHash {
    std::size_t operator()(const std::vector<Element>& v) const;
  };

  SignaturePtr sig_;
  VarContext ctx_;
  std::vector<AlgebraPtr> components_;
  std::vector<Point> assignments_;
  std::vector<std::vector<std::vector<Element>>> members_;
  std::vector<std::vector<Derivation>> derivs_;
  std::vector<std::unordered_map<std::vector<Element>, std::uint32_t, TupleHash>> index_;
  std::vector<std::pair<SortId, std::uint32_t>> order_;
  Point generators_;
  AlgebraPtr algebra_;
  std::vector<std::vector<Term>> witnesses_;
};

/// Subalgebra of one algebra generated by the images of context variables.
class GeneratedSubalgebra {
 public:
  GeneratedSubalgebra(AlgebraPtr parent, VarContext ctx, Point assignment);

  const FiniteAlgebra& parent() const { return *parent_; }
  const AlgebraPtr& parent_ptr() const { return parent_; }
  const Generated& structure() const { return gen_; }
  const VarContext& context() const { return gen_.context(); }
  const Point& assignment() const { return gen_.assignments()[0]; }

  /// Parent elements of a sort, in discovery order.
  std::vector<Element> members(SortId s) const;
  bool contains(SortId s, Element e) const;
  std::optional<Term> witness(SortId s, Element e) const;
  /// Member-indexed algebra; member m corresponds to members(s)[m].
  const AlgebraPtr& algebra() const { return gen_.algebra(); }

 private:
  AlgebraPtr parent_;
  Generated gen_;
};

/// Closure of a seed set (single-sorted parents only when seeds are given as
/// plain elements). Generator variables are named x for one seed, else x1..xn.
GeneratedSubalgebra subalgebra_generated(AlgebraPtr g, std::span<const Element> seed);

/// Homomorphism as a per-sort element map.
struct Hom {
  std::vector<std::vector<Element>> map;
  bool operator==(const Hom&) const = default;
  auto operator<=>(const Hom&) const = default;
};

/// The homomorphism from the generated algebra (member indices) to `b`
/// sending generator variable i to images[i], if one exists. The returned
/// map is indexed by member index.
std::optional<Hom> hom_extension(const Generated& src, std::span<const Element> images, const FiniteAlgebra& b);
/// Same, for a subalgebra; the returned map is indexed by parent element and
/// holds b's element for members (non-members map to 0).
std::optional<Hom> hom_extension(const GeneratedSubalgebra& src, std::span<const Element> images,
                                 const FiniteAlgebra& b);

bool is_hom(const FiniteAlgebra& a, const FiniteAlgebra& b, const Hom& h);

/// All homomorphisms a -> b in lexicographic order of their maps.
std::vector<Hom> enumerate_homs(const FiniteAlgebra& a, const FiniteAlgebra& b);

/// A small generating family: greedily add the element that enlarges the
/// closure most until the closure is everything. Returns (sort, element).
std::vector<std::pair<SortId, Element>> generating_family(const FiniteAlgebra& a);

AlgebraPtr product(std::span<const AlgebraPtr> gs, std::string name = {});

/// Class label per element, per sort.
struct Partition {
  std::vector<std::vector<std::uint32_t>> label;
  /// Relabels classes in order of first occurrence.
  void canonicalize();
  std::size_t num_classes(SortId s) const;
  bool same(SortId s, Element a, Element b) const { return label[s][a] == label[s][b]; }
  bool operator==(const Partition&) const = default;
};

bool is_congruence(const FiniteAlgebra& g, const Partition& p);
/// Quotient by a congruence partition; class k of sort s becomes element k
/// after canonicalization. Throws NotCongruence with a failing instance.
AlgebraPtr quotient(const FiniteAlgebra& g, Partition p, std::string name = {});
Partition kernel_partition(const FiniteAlgebra& a, const Hom& h);
Partition discrete_partition(const FiniteAlgebra& g);
Partition unit_partition(const FiniteAlgebra& g);
Partition meet(const Partition& a, const Partition& b);

/// g |= l = r, checked over the pair's own variables.
bool satisfies_identity(const FiniteAlgebra& g, const TermPair& pair);
/// First point (in the pair's minimal context) violating the identity.
std::optional<std::pair<VarContext, Point>> identity_counterexample(const FiniteAlgebra& g, const TermPair& pair);

/// The commutation law between two operations as a pair of terms, or nothing
/// when it is vacuous (two nullary operations of different sorts, or an
/// n-ary operation whose argument sorts do not match the other's result sort).
std::optional<TermPair> commutation_law(const Signature& sig, OpId a, OpId b);
/// First ordered pair of operations whose commutation law fails.
std::optional<std::pair<OpId, OpId>> first_noncommuting_pair(const FiniteAlgebra& g,
                                                             std::span<const OpId> ops);
bool is_commutative(const FiniteAlgebra& g);

/// Short content digest (hex) of signature + tables.
std::string digest(const FiniteAlgebra& g);

}  // namespace uag
