#pragma once

// Equational geometry over a finite algebra: varieties T', congruences A',
// closures, coordinate algebras, the Nullstellensatz check, verbal varieties,
// the End W action, morphisms and isomorphisms of varieties, and geometric
// equivalence of algebras.

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uag/congruence.hpp"

namespace uag {

/// The ambient data of one computation: signature, variables, algebra and the
/// canonical point list Hom(W(ctx), G).
struct GeoContext {
  SignaturePtr sig;
  VarContext ctx;
  AlgebraPtr g;
  PointSpace space;

  GeoContext(VarContext c, AlgebraPtr alg);
  std::size_t size() const { return space.size(); }
};

using GeoPtr = std::shared_ptr<const GeoContext>;

GeoPtr make_geo(VarContext ctx, AlgebraPtr g);

/// A subset of the point space of a GeoContext. Used both for algebraic
/// varieties and for value sets of formulas.
class PointSet {
 public:
  PointSet() = default;
  PointSet(GeoPtr geo, bool full = false);
  PointSet(GeoPtr geo, boost::dynamic_bitset<> bits);

  static PointSet full(GeoPtr geo) { return PointSet(std::move(geo), true); }
  static PointSet empty(GeoPtr geo) { return PointSet(std::move(geo), false); }

  const GeoPtr& geo() const { return geo_; }
  const boost::dynamic_bitset<>& bits() const { return bits_; }
  boost::dynamic_bitset<>& bits() { return bits_; }

  bool contains(std::size_t index) const { return bits_.test(index); }
  bool contains(std::span<const Element> p) const { return bits_.test(geo_->space.index(p)); }
  void insert(std::size_t index) { bits_.set(index); }
  std::size_t count() const { return bits_.count(); }
  bool is_empty() const { return bits_.none(); }
  bool is_full() const { return bits_.all(); }
  std::vector<std::size_t> indices() const;
  std::vector<Point> points() const;

  bool subset_of(const PointSet& o) const { return bits_.is_subset_of(o.bits_); }
  PointSet operator&(const PointSet& o) const { return PointSet(geo_, bits_ & o.bits_); }
  PointSet operator|(const PointSet& o) const { return PointSet(geo_, bits_ | o.bits_); }
  PointSet operator~() const { return PointSet(geo_, ~bits_); }
  bool operator==(const PointSet& o) const { return bits_ == o.bits_; }

 private:
  GeoPtr geo_;
  boost::dynamic_bitset<> bits_;
};

using Variety = PointSet;

Variety variety_of(const PairSet& t, const GeoPtr& geo);
KernelCongruence congruence_of(const Variety& a);
/// Points mu for which the generator assignment of k extends to a
/// homomorphism from k's coordinate algebra into G sending x to mu(x).
Variety variety_of_kernel(const KernelCongruence& k, const GeoPtr& geo);
/// Same set computed as mu0 composed with every homomorphism from the
/// coordinate algebra into G.
Variety variety_of_kernel_by_homs(const KernelCongruence& k, const GeoPtr& geo);
KernelCongruence closure_pairs(const PairSet& t, const GeoPtr& geo);
Variety closure_variety(const Variety& a);

struct NullstellensatzReport {
  KernelCongruence by_points;     // closure of T through its variety
  KernelCongruence by_h_kernel;   // preimage of (G-Ker)(A0)
  KernelCongruence by_injections;  // meet of kernels of nu o mu0, nu: A0 -> G
  std::size_t a0_size = 0;
  std::size_t h_ker_classes = 0;
  std::size_t homs = 0;
  bool points_leq_h = false;
  bool h_leq_points = false;
  bool injections_agree = false;
  bool passed() const { return points_leq_h && h_leq_points && injections_agree; }
};

NullstellensatzReport nullstellensatz_check(const KernelCongruence& k, const GeoPtr& geo);

/// Points whose image subalgebra satisfies every pair as an identity.
Variety verbal_variety(const PairSet& ids, const GeoPtr& geo);
Variety point_closure(const Point& p, const GeoPtr& geo);

/// sA = { mu : mu o s in A }.
Variety act_endo_variety(const Substitution& s, const Variety& a);
PairSet act_endo_pairs(const Substitution& s, const PairSet& t);
/// Point mu o s over the variables of `target` ctx: y -> eval(s(y), mu).
Point compose_point(const Substitution& s, const VarContext& source, const Point& mu, const VarContext& target,
                    const FiniteAlgebra& g);

/// s maps each variable of b's context to a term over a's context. True iff
/// nu o s lies in b for every nu in a; `failing` receives the first escape.
bool morphism_check(const Substitution& s, const Variety& a, const Variety& b, Point* failing = nullptr);

struct VarietyIso {
  Substitution s;        // b's variables -> terms over a's variables
  Substitution s_prime;  // a's variables -> terms over b's variables
};

/// Isomorphism of varieties through an isomorphism of coordinate algebras.
/// Absent when none exists or a coordinate algebra exceeds `bound` elements.
std::optional<VarietyIso> variety_iso(const Variety& a, const Variety& b, std::size_t bound = 64);
/// Verifies both substitutions are morphisms and mutually inverse on points.
bool verify_variety_iso(const VarietyIso& iso, const Variety& a, const Variety& b);

enum class EquivMode { Exact, Sampled };

struct EquivOptions {
  EquivMode mode = EquivMode::Exact;
  std::size_t exact_bound = 20;
  std::uint64_t seed = 1;
  std::size_t depth = 3;
  std::size_t samples = 200;
  std::size_t max_pairs = 3;
};

struct Equivalent {
  bool exact = true;
  std::size_t checked = 0;  // closed sets (exact) or samples (sampled)
};
struct NotEquivalent {
  PairSet witness;
  TermPair separating;
  /// 1 when the separating pair lies in the closure over g1 only, 2 for g2.
  int side = 1;
};
struct Inconclusive {
  std::size_t samples_tried = 0;
};

struct EquivVerdict {
  std::variant<Equivalent, NotEquivalent, Inconclusive> value;
  std::vector<std::string> notices;
};

EquivVerdict geometric_equiv(const AlgebraPtr& g1, const AlgebraPtr& g2, const VarContext& ctx,
                             const EquivOptions& opts = {});
/// Re-checks a NotEquivalent witness: the separating pair lies in exactly one
/// of the two closures of the witness set.
bool verify_not_equivalent(const NotEquivalent& v, const AlgebraPtr& g1, const AlgebraPtr& g2, const VarContext& ctx);

/// All closed varieties of a point space, ordered by size then bits.
std::vector<Variety> closed_varieties(const GeoPtr& geo);

/// Finite presentation of the coordinate algebra of k: one pair per table
/// entry plus identifications among generators. Its closure equals k's
/// closure over any algebra k embeds in.
PairSet presentation(const KernelCongruence& k);

/// Identity agreement over all terms of depth <= depth in ctx: true iff both
/// algebras split the term list into the same identity classes. Returns a
/// distinguishing pair in `witness` otherwise.
bool same_identities(const FiniteAlgebra& g1, const FiniteAlgebra& g2, const VarContext& ctx, std::size_t depth,
                     TermPair* witness = nullptr);

/// Closure of a variety under pointwise application of the listed operations
/// (one-sorted algebras only). Throws when two listed operations fail to
/// commute in G, naming the pair.
bool pointwise_closed(const Variety& a, std::span<const OpId> ops);

enum class Faithful { NotFaithful, FaithfulGround, Unknown };
struct FaithfulResult {
  Faithful verdict = Faithful::Unknown;
  std::optional<std::pair<Term, Term>> merged_constants;
};

/// `t` and `identity_instances` are over adjoin_constants(g).signature.
FaithfulResult faithful_solvable(const PairSet& t, const FiniteAlgebra& g, const PairSet& identity_instances);

}  // namespace uag
