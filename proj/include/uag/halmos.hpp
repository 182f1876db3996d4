#pragma once

// First-order formulas with equality over finite models, evaluated into value
// sets: subsets of Hom(W, G) with Boolean operations, cylindrification
// quantifiers and the End W action.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uag/constants.hpp"
#include "uag/galois.hpp"

namespace uag {

struct RelDecl {
  std::string name;
  std::vector<SortId> sorts;
  bool operator==(const RelDecl&) const = default;
};

class RelSignature {
 public:
  std::size_t add(std::string name, std::vector<SortId> sorts);
  std::optional<std::size_t> find(std::string_view name) const;
  const RelDecl& rel(std::size_t i) const { return rels_.at(i); }
  std::size_t size() const { return rels_.size(); }
  bool operator==(const RelSignature&) const = default;

 private:
  std::vector<RelDecl> rels_;
};

using RelSignaturePtr = std::shared_ptr<const RelSignature>;

class Formula {
 public:
  enum class Kind { Top, Bottom, Eq, Rel, Not, And, Or, Exists };

  Formula() = default;

  static Formula top();
  static Formula bottom();
  static Formula eq(Term a, Term b);
  static Formula rel(std::size_t r, std::vector<Term> args);
  static Formula negate(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  /// Quantified names are kept sorted and deduplicated.
  static Formula exists(std::vector<std::string> vars, Formula body);
  static Formula forall(std::vector<std::string> vars, Formula body);
  static Formula implies(Formula a, Formula b);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  const std::vector<Term>& terms() const { return node_->terms; }
  std::size_t relation() const { return node_->rel; }
  const std::vector<Formula>& children() const { return node_->children; }
  const std::vector<std::string>& bound() const { return node_->bound; }

  /// Free variable names, sorted.
  std::set<std::string> free_vars() const;
  /// Quantifier-free.
  bool is_open() const;
  /// Built from atoms with And, Or, Exists only.
  bool is_positive() const;
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind;
    std::vector<Term> terms;
    std::size_t rel = 0;
    std::vector<Formula> children;
    std::vector<std::string> bound;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Formula& f, const Signature& sig, const RelSignature& rels);

/// Substitution acting on free occurrences; throws when a bound variable would
/// capture a variable of a substituted term.
Formula apply_subst(const Substitution& s, const Formula& f);

struct Model {
  AlgebraPtr algebra;
  RelSignaturePtr rels;
  /// tuples[r] is f(r), a set of element tuples of r's type.
  std::vector<std::set<std::vector<Element>>> tuples;
  std::string name;

  bool holds(std::size_t r, const std::vector<Element>& t) const { return tuples[r].count(t) > 0; }
};

using ModelPtr = std::shared_ptr<const Model>;

/// Validates tuple types against the algebra's carriers.
void validate_model(const Model& m);

using ValueSet = PointSet;

/// Points of geo's space that agree off `vars` with some point of a.
ValueSet exists(const ValueSet& a, const std::vector<std::size_t>& vars);
ValueSet forall(const ValueSet& a, const std::vector<std::size_t>& vars);
/// Resolves variable names against the context; rejects outsiders.
std::vector<std::size_t> var_indices(const VarContext& ctx, const std::vector<std::string>& names);

ValueSet eval_formula(const Formula& u, const Model& m, const GeoPtr& geo);
ValueSet act_endo_value(const Substitution& s, const ValueSet& a);
/// Variables x with exists(x) a != a, in context order.
std::vector<std::size_t> support(const ValueSet& a);

ValueSet fo_variety(const std::vector<Formula>& t, const Model& m, const GeoPtr& geo);
bool fo_closure_member(const Formula& u, const ValueSet& a, const Model& m);

/// Sets of value sets as sorted bitsets.
using ValueFamily = std::set<boost::dynamic_bitset<>>;

/// Filter laws on the finite value algebra: contains the unit, closed under
/// meets, upward closed and closed under forall(Y) for every Y. Point spaces
/// above 16 points are rejected.
bool is_filter(const ValueFamily& s, const GeoPtr& geo);
ValueFamily filter_generated(const ValueFamily& s, const GeoPtr& geo);
/// {h in t : forall(X) h in t}.
ValueFamily universal_part(const ValueFamily& t, const GeoPtr& geo);

/// Submodel on a subalgebra: f_H(r) = f(r) restricted to H, in the
/// subalgebra's member indices.
Model restrict_submodel(const Model& m, const GeneratedSubalgebra& h);

enum class Fundamental { Equal, Inclusion, Reverse, Neither };
const char* fundamental_name(Fundamental f);

struct FundamentalReport {
  Fundamental relation = Fundamental::Equal;
  std::size_t sub_count = 0;     // |f_H * u| mapped into G's points
  std::size_t ambient_count = 0;  // |(f * u) cap Hom(W, H)|
};

/// Compares f_H * u with (f * u) restricted to points landing in H.
FundamentalReport fundamental_check(const Formula& u, const Model& m, const GeneratedSubalgebra& h,
                                    const GeoPtr& geo);

struct OpenVarietyReport {
  std::vector<std::string> audit_failures;  // s u missing from t
  std::size_t points = 0;
  std::size_t membership_mismatches = 0;  // statement 1
  std::size_t closure_mismatches = 0;     // statement 2 over the sample
  ValueSet variety;
  bool passed() const { return audit_failures.empty() && membership_mismatches == 0 && closure_mismatches == 0; }
};

/// t must be open and closed under `substitutions` (audited). `sample` lists
/// open formulas used to compare the closure of t with the open theory of
/// all qualifying submodels.
OpenVarietyReport open_variety_check(const std::vector<Formula>& t, const std::vector<Substitution>& substitutions,
                                     const std::vector<Formula>& sample, const Model& m, const GeoPtr& geo);

/// Model over the constant-adjoined algebra with the same relations.
Model adjoin_model(const Model& m, const AlgebraPtr& adjoined);

/// p in f*u iff f*(s_p u) is everything, s_p sending x to the constant of p(x).
/// `m` must be adjoin_model(original, adj.algebra) and geo over adj.algebra.
bool substitution_theorem_check(const Formula& u, const Point& p, const Model& m, const GeoPtr& geo,
                                const AdjoinedConstants& adj);

struct Ultrapower {
  Model power;       // G^n with f-bar(r) = tuples whose alpha0 column is in f(r)
  Partition agree;   // elements agreeing at alpha0
  Model collapsed;   // power / agree
  std::size_t alpha0 = 0;
  std::size_t n = 1;
};

Ultrapower ultrapower_principal(const Model& m, std::size_t n, std::size_t alpha0);
/// Element of the collapsed model corresponding to a power element.
Element collapse(const Ultrapower& u, SortId s, Element e);
/// Component alpha of a power element.
Element component(const Ultrapower& u, const Model& m, SortId s, Element e, std::size_t alpha);
/// For mu over the power: [mu] in f-bar * u iff nu_alpha0 in f * u.
bool los_check(const Formula& u, const Point& mu, const Ultrapower& up, const Model& m, const VarContext& ctx);
/// The map [g] -> g(alpha0) is an isomorphism collapsed -> m.
bool collapse_is_isomorphism(const Ultrapower& up, const Model& m);

}  // namespace uag
