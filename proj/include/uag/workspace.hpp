#pragma once

// Named signatures, algebras, contexts, pair sets, substitutions, formulas,
// models and clause sets loaded from s-expression documents.
//
//   (signature grp (sort g) (op mul (g g) g) (op inv (g) g) (op e () g)
//              (relation P (g)))
//   (algebra Z3 (carrier g 3) (table mul (0 0 0) (0 1 1) ...) ...)
//   (algebra K (product Z2 Z2))
//   (ctx XY (x g) (y g))
//   (pairs sq ((mul x x) e))
//   (subst s (y (mul x x)))
//   (formula q (exists (x) (rel P x)))
//   (model M Z4 (rel P (1) (3)))
//   (clauses c quasi (-> ((= x y)) (= (mul x z) (mul y z))))
//
// A bare (signature NAME) switches the current signature; documents are read
// over the current one, initially the built-in group signature.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "uag/closure_rules.hpp"
#include "uag/halmos.hpp"
#include "uag/sexpr.hpp"

namespace uag {

struct SignatureEntry {
  std::string name;
  std::shared_ptr<Signature> sig;
  std::shared_ptr<RelSignature> rels;
  bool builtin = false;
  bool ops_frozen = false;   // an algebra or term uses it
  bool rels_frozen = false;  // a model uses it
};

struct AlgebraDoc {
  std::string name;
  std::string signature;
  AlgebraPtr algebra;
  bool builtin = false;
};

struct ContextDoc {
  std::string name;
  std::vector<std::pair<std::string, std::string>> vars;  // name, sort name
  std::string signature;
};

struct PairsDoc {
  std::string name;
  std::string signature;
  PairSet pairs;
};

struct SubstDoc {
  std::string name;
  std::string signature;
  Substitution subst;
};

struct FormulaDoc {
  std::string name;
  std::string signature;
  Formula formula;
};

struct ModelDoc {
  std::string name;
  std::string algebra;
  std::shared_ptr<Model> model;
};

struct ClausesDoc {
  std::string name;
  std::string signature;
  ClauseKind kind = ClauseKind::Identity;
  std::vector<Clause> clauses;
};

class Workspace {
 public:
  Workspace();

  void load_text(std::string_view text, const std::string& source);
  void load_file(const std::string& path);

  const SignatureEntry& signature(std::string_view name) const;
  const AlgebraDoc& algebra(std::string_view name) const;
  const SignatureEntry& signature_of(const AlgebraDoc& a) const { return signature(a.signature); }
  /// Named or built-in (X1, X2, X3) context with sorts resolved in `sig`.
  VarContext context(std::string_view name, const Signature& sig) const;
  const PairsDoc& pairs(std::string_view name) const;
  const SubstDoc& subst(std::string_view name) const;
  const FormulaDoc& formula(std::string_view name) const;
  const ModelDoc& model(std::string_view name) const;
  const ClausesDoc& clauses(std::string_view name) const;

  bool has_algebra(std::string_view name) const { return algebras_.count(std::string(name)) > 0; }
  bool has_pairs(std::string_view name) const { return pairs_.count(std::string(name)) > 0; }
  bool has_subst(std::string_view name) const { return substs_.count(std::string(name)) > 0; }
  bool has_formula(std::string_view name) const { return formulas_.count(std::string(name)) > 0; }
  bool has_clauses(std::string_view name) const { return clauses_.count(std::string(name)) > 0; }
  bool has_context(std::string_view name) const;

  /// Parsers for inline command arguments, over `sig` and variables of `ctx`.
  Term read_term(const SExpr& e, const SignatureEntry& sig, const VarContext& ctx) const;
  PairSet read_pairs(const SExpr& e, const SignatureEntry& sig, const VarContext& ctx) const;
  Substitution read_subst(const SExpr& e, const SignatureEntry& sig, const VarContext& ctx) const;
  Formula read_formula(const SExpr& e, const SignatureEntry& sig, const VarContext& ctx) const;

  /// Every user document in load order, re-readable by load_text.
  std::string print() const;
  /// Names of loaded user documents, in load order, as "kind name".
  std::vector<std::string> summary() const;

  std::string print_signature(const SignatureEntry& s) const;
  std::string print_algebra(const AlgebraDoc& a) const;
  std::string print_context(const ContextDoc& c) const;
  std::string print_pairs(const PairsDoc& p) const;
  std::string print_subst(const SubstDoc& s) const;
  std::string print_formula(const FormulaDoc& f) const;
  std::string print_model(const ModelDoc& m) const;
  std::string print_clauses(const ClausesDoc& c) const;

 private:
  struct Reader;
  friend struct Reader;

  void add_builtin_signature(const std::string& name, SignaturePtr sig);
  SignatureEntry& mutable_signature(const std::string& name);

  std::map<std::string, SignatureEntry> signatures_;
  std::map<std::string, AlgebraDoc> algebras_;
  std::map<std::string, ContextDoc> contexts_;
  std::map<std::string, PairsDoc> pairs_;
  std::map<std::string, SubstDoc> substs_;
  std::map<std::string, FormulaDoc> formulas_;
  std::map<std::string, ModelDoc> models_;
  std::map<std::string, ClausesDoc> clauses_;
  std::vector<std::pair<std::string, std::string>> order_;  // kind, name
};

/// Term in s-expression form: bare variables and constants, (op args...).
std::string term_sexpr(const Term& t, const Signature& sig);
std::string formula_sexpr(const Formula& f, const Signature& sig, const RelSignature& rels);
std::string clause_sexpr(const Clause& c, const Signature& sig);

}  // namespace uag
