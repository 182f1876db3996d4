#pragma once

// Many-sorted signatures, terms over a finite working variable set, and
// substitutions (endomorphisms of the absolutely free algebra).

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace uag {

using SortId = std::uint32_t;
using OpId = std::uint32_t;

struct OpDecl {
  std::string name;
  std::vector<SortId> args;
  SortId result = 0;

  std::size_t arity() const { return args.size(); }
  bool operator==(const OpDecl&) const = default;
};

class Signature {
 public:
  SortId add_sort(std::string name);
  OpId add_op(std::string name, std::vector<SortId> args, SortId result);

  std::optional<SortId> find_sort(std::string_view name) const;
  std::optional<OpId> find_op(std::string_view name) const;

  const std::string& sort_name(SortId s) const { return sorts_.at(s); }
  const OpDecl& op(OpId o) const { return ops_.at(o); }
  std::size_t num_sorts() const { return sorts_.size(); }
  std::size_t num_ops() const { return ops_.size(); }
  std::span<const std::string> sorts() const { return sorts_; }
  std::span<const OpDecl> ops() const { return ops_; }

  bool operator==(const Signature& other) const { return sorts_ == other.sorts_ && ops_ == other.ops_; }

 private:
  std::vector<std::string> sorts_;
  std::vector<OpDecl> ops_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

/// Same signature by identity or by structure.
bool same_signature(const SignaturePtr& a, const SignaturePtr& b);

/// An immutable term node. Terms share subterms through shared_ptr and carry
/// a structural hash so equality is usually a pointer or hash comparison.
class Term {
 public:
  enum class Kind : std::uint8_t { Var, App };

  Term() = default;

  static Term var(std::string name, SortId sort);
  /// Unchecked application; `sort` is the declared result sort of `op`.
  static Term app(OpId op, std::vector<Term> children, SortId sort);
  /// Checked application: arity and argument sorts validated, sort derived.
  static Term make(const Signature& sig, OpId op, std::vector<Term> children);
  static Term make(const Signature& sig, std::string_view op, std::vector<Term> children);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::Var; }
  const std::string& var_name() const { return node_->name; }
  OpId op() const { return node_->op; }
  SortId sort() const { return node_->sort; }
  std::span<const Term> children() const { return node_->children; }
  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    SortId sort;
    OpId op;
    std::string name;
    std::vector<Term> children;
    std::size_t hash;
    std::size_t size;
    std::size_t depth;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Deterministic total order: size, then variables before applications, then
/// name / op id, then children lexicographically.
int term_compare(const Term& a, const Term& b);
struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_compare(a, b) < 0; }
};

using TermPair = std::pair<Term, Term>;

/// Orders the two sides of a pair canonically (smaller first).
TermPair canonical_pair(Term a, Term b);

struct TermPairHash {
  std::size_t operator()(const TermPair& p) const { return p.first.hash() * 1000003u ^ p.second.hash(); }
};

/// Fully parenthesised prefix form; nullary operations and variables are bare.
std::string to_string(const Term& t, const Signature& sig);
std::string to_string(const TermPair& p, const Signature& sig);

/// Ordered working variable set.
class VarContext {
 public:
  VarContext() = default;
  VarContext(std::initializer_list<std::pair<std::string, SortId>> vars);

  std::size_t add(std::string name, SortId sort);
  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  const std::string& name(std::size_t i) const { return vars_.at(i).first; }
  SortId sort(std::size_t i) const { return vars_.at(i).second; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  Term var(std::size_t i) const { return Term::var(vars_.at(i).first, vars_.at(i).second); }
  Term var(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  bool operator==(const VarContext& other) const { return vars_ == other.vars_; }

 private:
  std::vector<std::pair<std::string, SortId>> vars_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Diagnostic-carrying well-sortedness check.
struct SortCheck {
  bool ok = true;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

SortCheck well_sorted(const Term& t, const Signature& sig, const VarContext& ctx);

/// Variables of t in first-occurrence order.
std::vector<Term> variables(const Term& t);
/// Context made of the variables occurring in `terms`, first-occurrence order.
VarContext minimal_context(std::span<const Term> terms);
VarContext minimal_context(std::span<const TermPair> pairs);

/// Smallest subterm-closed superset, preorder, first occurrence wins.
std::vector<Term> subterm_universe(std::span<const Term> terms);

/// Sort-preserving map from variable names to terms; identity elsewhere.
class Substitution {
 public:
  Substitution() = default;

  /// Binds the variable `var` (a Var term) to `value`; sorts must agree.
  Substitution& bind(const Term& var, Term value);
  const Term* lookup(std::string_view name) const;
  bool empty() const { return bindings_.empty(); }
  const std::map<std::string, Term, std::less<>>& bindings() const { return bindings_; }

  /// Image of the variable under the substitution (itself when unbound).
  Term image(const Term& var) const;
  /// Same substitution minus bindings for the given variable names.
  Substitution without(std::span<const std::string> names) const;

  bool operator==(const Substitution& other) const { return bindings_ == other.bindings_; }

 private:
  std::map<std::string, Term, std::less<>> bindings_;
};

Term apply_subst(const Substitution& s, const Term& t);
/// apply_subst(compose(s1, s2), t) == apply_subst(s1, apply_subst(s2, t)).
Substitution compose(const Substitution& s1, const Substitution& s2);
bool well_sorted(const Substitution& s, const Signature& sig, const VarContext& ctx);

/// All terms over `ctx` of depth at most `depth`, ordered by depth, then by op
/// declaration order and argument order. Throws CapExceeded past `limit`.
std::vector<Term> enumerate_terms(const Signature& sig, const VarContext& ctx, std::size_t depth,
                                  std::size_t limit);

}  // namespace uag
