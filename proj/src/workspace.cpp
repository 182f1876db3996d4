#include "uag/workspace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "uag/error.hpp"
#include "uag/library.hpp"

namespace uag {

namespace {

const char* kDefaultSignature = "group";

// Variable sorts seen so far: fixed by a context, or inferred from first use.
struct VarScope {
  const VarContext* ctx = nullptr;
  std::map<std::string, SortId> seen;

  std::optional<SortId> lookup(const std::string& name) const {
    if (ctx) {
      if (auto i = ctx->index_of(name)) return ctx->sort(*i);
      return std::nullopt;
    }
    auto it = seen.find(name);
    if (it == seen.end()) return std::nullopt;
    return it->second;
  }
};

std::string rel_args(const RelDecl& d, const Signature& sig) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.sorts.size(); ++i) {
    if (i) out += ' ';
    out += sig.sort_name(d.sorts[i]);
  }
  return out + ")";
}

std::string pair_sexpr(const TermPair& p, const Signature& sig) {
  return "(" + term_sexpr(p.first, sig) + " " + term_sexpr(p.second, sig) + ")";
}

}  // namespace

std::string term_sexpr(const Term& t, const Signature& sig) {
  if (t.is_var()) return t.var_name();
  const auto& op = sig.op(t.op());
  if (op.arity() == 0) return op.name;
  std::string out = "(" + op.name;
  for (const auto& c : t.children()) out += " " + term_sexpr(c, sig);
  return out + ")";
}

std::string formula_sexpr(const Formula& f, const Signature& sig, const RelSignature& rels) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Top:
      return "true";
    case K::Bottom:
      return "false";
    case K::Eq:
      return "(= " + term_sexpr(f.terms()[0], sig) + " " + term_sexpr(f.terms()[1], sig) + ")";
    case K::Rel: {
      std::string out = "(rel " + rels.rel(f.relation()).name;
      for (const auto& t : f.terms()) out += " " + term_sexpr(t, sig);
      return out + ")";
    }
    case K::Not:
      return "(not " + formula_sexpr(f.children()[0], sig, rels) + ")";
    case K::And:
    case K::Or: {
      std::string out = f.kind() == K::And ? "(and" : "(or";
      for (const auto& c : f.children()) out += " " + formula_sexpr(c, sig, rels);
      return out + ")";
    }
    case K::Exists: {
      std::string out = "(exists (";
      for (std::size_t i = 0; i < f.bound().size(); ++i) out += (i ? " " : "") + f.bound()[i];
      return out + ") " + formula_sexpr(f.children()[0], sig, rels) + ")";
    }
  }
  return "false";
}

std::string clause_sexpr(const Clause& c, const Signature& sig) {
  auto lit = [&](const TermPair& p, bool positive) {
    return std::string(positive ? "(= " : "(!= ") + term_sexpr(p.first, sig) + " " + term_sexpr(p.second, sig) + ")";
  };
  if (c.kind == ClauseKind::Quasi) {
    std::string out = "(-> (";
    for (std::size_t i = 0; i < c.negatives.size(); ++i) out += (i ? " " : "") + lit(c.negatives[i], true);
    out += ") ";
    out += c.positives.empty() ? std::string("false") : lit(c.positives[0], true);
    return out + ")";
  }
  if (c.width() == 1) return c.positives.empty() ? lit(c.negatives[0], false) : lit(c.positives[0], true);
  std::string out = "(or";
  for (const auto& p : c.positives) out += " " + lit(p, true);
  for (const auto& p : c.negatives) out += " " + lit(p, false);
  return out + ")";
}

// ---- reader -----------------------------------------------------------------

struct Workspace::Reader {
  Workspace& ws;
  std::string source;
  std::string current = kDefaultSignature;

  std::string where(const SExpr& e) const {
    return source + ":" + std::to_string(e.line) + ":" + std::to_string(e.col);
  }
  [[noreturn]] void fail(ErrorKind k, const SExpr& e, const std::string& msg) const { throw Error(k, msg, where(e)); }

  const std::string& atom(const SExpr& e, const char* what) const {
    if (!e.is_atom()) fail(ErrorKind::Syntax, e, std::string("expected ") + what);
    return e.atom;
  }

  std::size_t number(const SExpr& e, const char* what) const {
    const auto& a = atom(e, what);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
    if (ec != std::errc() || p != a.data() + a.size()) fail(ErrorKind::Syntax, e, std::string("expected ") + what);
    return v;
  }

  SortId sort_of(const Signature& sig, const SExpr& e) const {
    const auto& n = atom(e, "sort name");
    auto s = sig.find_sort(n);
    if (!s) fail(ErrorKind::Reference, e, "unknown sort '" + n + "'");
    return *s;
  }

  void fresh_name(const std::string& kind, const SExpr& e, bool taken) const {
    if (taken) fail(ErrorKind::Invalid, e, kind + " '" + e.atom + "' already defined");
  }

  // ---- terms ----

  std::optional<SortId> guess_sort(const SExpr& e, const Signature& sig, const VarScope& scope) const {
    if (e.is_list()) {
      if (e.items.empty() || !e.items[0].is_atom()) return std::nullopt;
      if (auto o = sig.find_op(e.items[0].atom)) return sig.op(*o).result;
      return std::nullopt;
    }
    if (auto o = sig.find_op(e.atom)) return sig.op(*o).result;
    return scope.lookup(e.atom);
  }

  Term term(const SExpr& e, const Signature& sig, std::optional<SortId> expected, VarScope& scope) const {
    if (e.is_atom()) {
      if (auto o = sig.find_op(e.atom)) {
        const auto& op = sig.op(*o);
        if (op.arity() != 0)
          fail(ErrorKind::Arity, e, "operation '" + e.atom + "' takes " + std::to_string(op.arity()) + " arguments");
        if (expected && *expected != op.result) fail(ErrorKind::Sort, e, "constant '" + e.atom + "' has wrong sort");
        return Term::app(*o, {}, op.result);
      }
      if (e.atom.empty() || std::isdigit(static_cast<unsigned char>(e.atom[0])))
        fail(ErrorKind::Syntax, e, "bad variable name '" + e.atom + "'");
      auto known = scope.lookup(e.atom);
      if (scope.ctx && !known) fail(ErrorKind::Reference, e, "variable '" + e.atom + "' not in context");
      SortId s = known ? *known : expected ? *expected : 0;
      if (s >= sig.num_sorts()) fail(ErrorKind::Sort, e, "signature has no sorts");
      if (expected && *expected != s)
        fail(ErrorKind::Sort, e, "variable '" + e.atom + "' used at sort " + sig.sort_name(*expected) +
                                     " but has sort " + sig.sort_name(s));
      if (!scope.ctx) scope.seen.emplace(e.atom, s);
      return Term::var(e.atom, s);
    }
    if (e.items.empty()) fail(ErrorKind::Syntax, e, "empty term");
    const auto& name = atom(e.items[0], "operation name");
    auto o = sig.find_op(name);
    if (!o) fail(ErrorKind::Reference, e.items[0], "unknown operation '" + name + "'");
    const auto& op = sig.op(*o);
    if (e.items.size() - 1 != op.arity())
      fail(ErrorKind::Arity, e, "operation '" + name + "' takes " + std::to_string(op.arity()) + " arguments, got " +
                                    std::to_string(e.items.size() - 1));
    if (expected && *expected != op.result) fail(ErrorKind::Sort, e, "'" + name + "' has wrong result sort");
    std::vector<Term> kids;
    for (std::size_t i = 1; i < e.items.size(); ++i) kids.push_back(term(e.items[i], sig, op.args[i - 1], scope));
    return Term::app(*o, std::move(kids), op.result);
  }

  TermPair pair(const SExpr& e, const Signature& sig, VarScope& scope) const {
    if (!e.is_list() || e.items.size() != 2) fail(ErrorKind::Syntax, e, "expected a pair (lhs rhs)");
    return equation(e.items[0], e.items[1], sig, scope);
  }

  TermPair equation(const SExpr& a, const SExpr& b, const Signature& sig, VarScope& scope) const {
    auto s = guess_sort(a, sig, scope);
    if (!s) s = guess_sort(b, sig, scope);
    Term l = term(a, sig, s, scope);
    Term r = term(b, sig, l.sort(), scope);
    return canonical_pair(std::move(l), std::move(r));
  }

  PairSet pair_list(const std::vector<SExpr>& items, std::size_t from, const Signature& sig, VarScope& scope) const {
    PairSet out;
    for (std::size_t i = from; i < items.size(); ++i) {
      auto p = pair(items[i], sig, scope);
      out.insert(p.first, p.second);
    }
    return out;
  }

  Substitution subst(const std::vector<SExpr>& items, std::size_t from, const Signature& sig,
                     VarScope& scope) const {
    Substitution s;
    for (std::size_t i = from; i < items.size(); ++i) {
      const auto& b = items[i];
      if (!b.is_list() || b.items.size() != 2) fail(ErrorKind::Syntax, b, "expected a binding (var term)");
      const auto& v = atom(b.items[0], "variable");
      if (sig.find_op(v)) fail(ErrorKind::Syntax, b.items[0], "'" + v + "' is an operation, not a variable");
      auto val = guess_sort(b.items[1], sig, scope);
      auto vs = scope.lookup(v);
      if (!vs && scope.ctx) {
        // The bound variable may live outside the context of the image terms.
        vs = val;
      }
      Term rhs = term(b.items[1], sig, vs ? vs : val, scope);
      if (s.lookup(v)) fail(ErrorKind::Invalid, b, "variable '" + v + "' bound twice");
      s.bind(Term::var(v, rhs.sort()), rhs);
    }
    return s;
  }

  // ---- formulas ----

  Formula formula(const SExpr& e, const SignatureEntry& se, VarScope& scope) const {
    const auto& sig = *se.sig;
    if (e.is_atom()) {
      if (e.atom == "true") return Formula::top();
      if (e.atom == "false") return Formula::bottom();
      fail(ErrorKind::Syntax, e, "expected a formula, got '" + e.atom + "'");
    }
    if (e.items.empty() || !e.items[0].is_atom()) fail(ErrorKind::Syntax, e, "expected a formula");
    const auto& head = e.items[0].atom;
    auto need = [&](std::size_t n) {
      if (e.items.size() != n + 1) fail(ErrorKind::Arity, e, "'" + head + "' takes " + std::to_string(n) + " arguments");
    };
    if (head == "=") {
      need(2);
      auto p = equation(e.items[1], e.items[2], sig, scope);
      return Formula::eq(p.first, p.second);
    }
    if (head == "rel") {
      if (e.items.size() < 2) fail(ErrorKind::Syntax, e, "rel needs a relation name");
      const auto& name = atom(e.items[1], "relation name");
      auto r = se.rels->find(name);
      if (!r) fail(ErrorKind::Reference, e.items[1], "undeclared relation '" + name + "'");
      const auto& d = se.rels->rel(*r);
      if (e.items.size() - 2 != d.sorts.size())
        fail(ErrorKind::Arity, e, "relation '" + name + "' takes " + std::to_string(d.sorts.size()) + " arguments");
      std::vector<Term> args;
      for (std::size_t i = 2; i < e.items.size(); ++i) args.push_back(term(e.items[i], sig, d.sorts[i - 2], scope));
      return Formula::rel(*r, std::move(args));
    }
    if (head == "not") {
      need(1);
      return Formula::negate(formula(e.items[1], se, scope));
    }
    if (head == "and" || head == "or") {
      if (e.items.size() < 2) return head == "and" ? Formula::top() : Formula::bottom();
      Formula acc = formula(e.items[1], se, scope);
      for (std::size_t i = 2; i < e.items.size(); ++i) {
        Formula next = formula(e.items[i], se, scope);
        acc = head == "and" ? Formula::conj(acc, next) : Formula::disj(acc, next);
      }
      return acc;
    }
    if (head == "implies" || head == "->") {
      need(2);
      return Formula::implies(formula(e.items[1], se, scope), formula(e.items[2], se, scope));
    }
    if (head == "exists" || head == "forall") {
      need(2);
      if (!e.items[1].is_list()) fail(ErrorKind::Syntax, e.items[1], "expected a variable list");
      std::vector<std::string> vars;
      for (const auto& v : e.items[1].items) {
        vars.push_back(atom(v, "variable"));
        if (scope.ctx && !scope.ctx->contains(v.atom))
          fail(ErrorKind::Reference, v, "quantified variable '" + v.atom + "' not in context");
      }
      Formula body = formula(e.items[2], se, scope);
      return head == "exists" ? Formula::exists(std::move(vars), body) : Formula::forall(std::move(vars), body);
    }
    fail(ErrorKind::Syntax, e, "unknown connective '" + head + "'");
  }

  // ---- clauses ----

  std::pair<TermPair, bool> literal(const SExpr& e, const Signature& sig, VarScope& scope) const {
    if (!(e.is_form("=") || e.is_form("!=")) || e.items.size() != 3)
      fail(ErrorKind::Syntax, e, "expected (= a b) or (!= a b)");
    return {equation(e.items[1], e.items[2], sig, scope), e.items[0].atom == "="};
  }

  Clause clause(ClauseKind kind, const SExpr& e, const Signature& sig, VarScope& scope) const {
    try {
      if (kind == ClauseKind::Quasi) {
        if (!e.is_form("->") || e.items.size() != 3 || !e.items[1].is_list())
          fail(ErrorKind::Syntax, e, "expected (-> (antecedent...) consequent)");
        std::vector<TermPair> ante;
        for (const auto& l : e.items[1].items) {
          auto [p, pos] = literal(l, sig, scope);
          if (!pos) fail(ErrorKind::Syntax, l, "antecedent literals are equalities");
          ante.push_back(p);
        }
        if (e.items[2].is_atom() && e.items[2].atom == "false") return Clause::quasi_false(std::move(ante));
        auto [q, pos] = literal(e.items[2], sig, scope);
        if (!pos) fail(ErrorKind::Syntax, e.items[2], "consequent is an equality");
        return Clause::quasi(std::move(ante), q);
      }
      std::vector<SExpr> lits;
      if (e.is_form("or"))
        lits.assign(e.items.begin() + 1, e.items.end());
      else
        lits.push_back(e);
      std::vector<TermPair> pos, neg;
      for (const auto& l : lits) {
        auto [p, positive] = literal(l, sig, scope);
        (positive ? pos : neg).push_back(p);
      }
      switch (kind) {
        case ClauseKind::Identity:
          if (pos.size() != 1 || !neg.empty()) fail(ErrorKind::Invalid, e, "an identity is a single equality");
          return Clause::identity(pos[0].first, pos[0].second);
        case ClauseKind::Pseudo:
          if (!neg.empty()) fail(ErrorKind::Invalid, e, "pseudoidentities have no disequalities");
          return Clause::pseudo(std::move(pos));
        default:
          return Clause::universal(std::move(pos), std::move(neg));
      }
    } catch (const Error& err) {
      if (!err.location().empty()) throw;
      throw Error(err.kind(), err.what(), where(e));
    }
  }

  // ---- documents ----

  void signature_form(const SExpr& e) {
    if (e.size() < 2) fail(ErrorKind::Syntax, e, "signature needs a name");
    const auto& name = atom(e[1], "signature name");
    if (!ws.signatures_.count(name)) {
      SignatureEntry s;
      s.name = name;
      s.sig = std::make_shared<Signature>();
      s.rels = std::make_shared<RelSignature>();
      ws.signatures_.emplace(name, std::move(s));
      ws.order_.emplace_back("signature", name);
    }
    current = name;
    for (std::size_t i = 2; i < e.size(); ++i) member_form(e[i]);
  }

  void member_form(const SExpr& e) {
    auto& s = ws.mutable_signature(current);
    std::pair<std::string, std::string> entry{"signature", current};
    if (s.builtin && std::find(ws.order_.begin(), ws.order_.end(), entry) == ws.order_.end())
      ws.order_.push_back(entry);
    if (e.is_form("sort")) {
      if (e.size() != 2) fail(ErrorKind::Syntax, e, "expected (sort NAME)");
      if (s.ops_frozen) fail(ErrorKind::Invalid, e, "signature '" + current + "' is already in use");
      const auto& n = atom(e[1], "sort name");
      if (s.sig->find_sort(n)) fail(ErrorKind::Invalid, e, "sort '" + n + "' already declared");
      s.sig->add_sort(n);
      return;
    }
    if (e.is_form("op")) {
      if (e.size() != 4 || !e[2].is_list()) fail(ErrorKind::Syntax, e, "expected (op NAME (ARG-SORTS...) RESULT)");
      if (s.ops_frozen) fail(ErrorKind::Invalid, e, "signature '" + current + "' is already in use");
      const auto& n = atom(e[1], "operation name");
      if (s.sig->find_op(n)) fail(ErrorKind::Invalid, e, "operation '" + n + "' already declared");
      std::vector<SortId> args;
      for (const auto& a : e[2].items) args.push_back(sort_of(*s.sig, a));
      s.sig->add_op(n, std::move(args), sort_of(*s.sig, e[3]));
      return;
    }
    if (e.is_form("relation")) {
      if (e.size() != 3 || !e[2].is_list()) fail(ErrorKind::Syntax, e, "expected (relation NAME (SORTS...))");
      if (s.rels_frozen) fail(ErrorKind::Invalid, e, "relations of '" + current + "' are already in use");
      const auto& n = atom(e[1], "relation name");
      if (s.rels->find(n)) fail(ErrorKind::Invalid, e, "relation '" + n + "' already declared");
      std::vector<SortId> sorts;
      for (const auto& a : e[2].items) sorts.push_back(sort_of(*s.sig, a));
      s.rels->add(n, std::move(sorts));
      return;
    }
    fail(ErrorKind::Syntax, e, "expected sort, op or relation");
  }

  SignatureEntry& use_signature(const SExpr& at) {
    auto& s = ws.mutable_signature(current);
    if (s.sig->num_sorts() == 0) fail(ErrorKind::Invalid, at, "signature '" + current + "' has no sorts");
    s.ops_frozen = true;
    return s;
  }

  void algebra_form(const SExpr& e) {
    if (e.size() < 2) fail(ErrorKind::Syntax, e, "algebra needs a name");
    const auto& name = atom(e[1], "algebra name");
    fresh_name("algebra", e[1], ws.algebras_.count(name) > 0);
    if (e.size() == 3 && e[2].is_form("product")) {
      std::vector<AlgebraPtr> factors;
      std::string sig_name;
      for (std::size_t i = 1; i < e[2].size(); ++i) {
        const auto& f = atom(e[2][i], "algebra name");
        auto it = ws.algebras_.find(f);
        if (it == ws.algebras_.end()) fail(ErrorKind::Reference, e[2][i], "unknown algebra '" + f + "'");
        if (!sig_name.empty() && sig_name != it->second.signature)
          fail(ErrorKind::Sort, e[2][i], "factors over different signatures");
        sig_name = it->second.signature;
        factors.push_back(it->second.algebra);
      }
      if (factors.empty()) fail(ErrorKind::Syntax, e[2], "product needs factors");
      auto p = product(factors, name);
      ws.algebras_.emplace(name, AlgebraDoc{name, sig_name, p, false});
      ws.order_.emplace_back("algebra", name);
      return;
    }
    auto& se = use_signature(e);
    const auto& sig = *se.sig;
    std::vector<std::size_t> carrier(sig.num_sorts(), 0);
    std::vector<bool> have_carrier(sig.num_sorts(), false);
    std::vector<const SExpr*> tables(sig.num_ops(), nullptr);
    for (std::size_t i = 2; i < e.size(); ++i) {
      const auto& f = e[i];
      if (f.is_form("carrier")) {
        if (f.size() != 3) fail(ErrorKind::Syntax, f, "expected (carrier SORT SIZE)");
        SortId s = sort_of(sig, f[1]);
        carrier[s] = number(f[2], "carrier size");
        if (carrier[s] == 0) fail(ErrorKind::Invalid, f[2], "carriers are nonempty");
        have_carrier[s] = true;
      } else if (f.is_form("table")) {
        if (f.size() < 2) fail(ErrorKind::Syntax, f, "expected (table OP rows...)");
        const auto& on = atom(f[1], "operation name");
        auto o = sig.find_op(on);
        if (!o) fail(ErrorKind::Reference, f[1], "unknown operation '" + on + "'");
        if (tables[*o]) fail(ErrorKind::Invalid, f, "second table for '" + on + "'");
        tables[*o] = &f;
      } else {
        fail(ErrorKind::Syntax, f, "expected carrier or table");
      }
    }
    for (SortId s = 0; s < sig.num_sorts(); ++s)
      if (!have_carrier[s]) fail(ErrorKind::Invalid, e, "no carrier for sort '" + sig.sort_name(s) + "'");
    std::vector<std::vector<Element>> data(sig.num_ops());
    for (OpId o = 0; o < sig.num_ops(); ++o) {
      const auto& op = sig.op(o);
      if (!tables[o]) fail(ErrorKind::Invalid, e, "no table for operation '" + op.name + "'");
      const SExpr& t = *tables[o];
      std::size_t size = 1;
      for (auto s : op.args) size = saturating_mul(size, carrier[s]);
      check_cap(size, "table entries");
      std::vector<Element> table(size, 0);
      std::vector<bool> seen(size, false);
      for (std::size_t r = 2; r < t.size(); ++r) {
        const auto& row = t[r];
        if (!row.is_list() || row.size() != op.arity() + 1)
          fail(ErrorKind::Arity, row.is_list() ? row : t,
               "table '" + op.name + "' row " + std::to_string(r - 2) + " needs " + std::to_string(op.arity() + 1) +
                   " entries, got " + std::to_string(row.is_list() ? row.size() : 0));
        std::size_t idx = 0;
        for (std::size_t k = 0; k < op.arity(); ++k) {
          std::size_t v = number(row[k], "element");
          if (v >= carrier[op.args[k]]) fail(ErrorKind::Invalid, row[k], "element out of range");
          idx = idx * carrier[op.args[k]] + v;
        }
        std::size_t v = number(row[op.arity()], "element");
        if (v >= carrier[op.result]) fail(ErrorKind::Invalid, row[op.arity()], "element out of range");
        if (seen[idx] && table[idx] != v)
          fail(ErrorKind::Invalid, row, "table '" + op.name + "' row " + std::to_string(r - 2) + " conflicts");
        seen[idx] = true;
        table[idx] = static_cast<Element>(v);
      }
      for (std::size_t idx = 0; idx < size; ++idx)
        if (!seen[idx]) fail(ErrorKind::Invalid, t, "table '" + op.name + "' has no entry " + std::to_string(idx));
      data[o] = std::move(table);
    }
    auto g = std::make_shared<FiniteAlgebra>(se.sig, carrier, std::move(data), name);
    ws.algebras_.emplace(name, AlgebraDoc{name, current, g, false});
    ws.order_.emplace_back("algebra", name);
  }

  void ctx_form(const SExpr& e) {
    if (e.size() < 2) fail(ErrorKind::Syntax, e, "ctx needs a name");
    const auto& name = atom(e[1], "context name");
    fresh_name("context", e[1], ws.has_context(name));
    ContextDoc c{name, {}, current};
    const auto& sig = *use_signature(e).sig;
    for (std::size_t i = 2; i < e.size(); ++i) {
      const auto& v = e[i];
      if (!v.is_list() || v.size() != 2) fail(ErrorKind::Syntax, v, "expected (VAR SORT)");
      const auto& vn = atom(v[0], "variable");
      sort_of(sig, v[1]);
      for (const auto& [n, s] : c.vars)
        if (n == vn) fail(ErrorKind::Invalid, v, "variable '" + vn + "' repeated");
      c.vars.emplace_back(vn, v[1].atom);
    }
    ws.contexts_.emplace(name, std::move(c));
    ws.order_.emplace_back("ctx", name);
  }

  void pairs_form(const SExpr& e) {
    if (e.size() < 2) fail(ErrorKind::Syntax, e, "pairs needs a name");
    const auto& name = atom(e[1], "pair set name");
    fresh_name("pair set", e[1], ws.pairs_.count(name) > 0);
    const auto& sig = *use_signature(e).sig;
    VarScope scope;
    ws.pairs_.emplace(name, PairsDoc{name, current, pair_list(e.items, 2, sig, scope)});
    ws.order_.emplace_back("pairs", name);
  }

  void subst_form(const SExpr& e) {
    if (e.size() < 2) fail(ErrorKind::Syntax, e, "subst needs a name");
    const auto& name = atom(e[1], "substitution name");
    fresh_name("substitution", e[1], ws.substs_.count(name) > 0);
    const auto& sig = *use_signature(e).sig;
    VarScope scope;
    ws.substs_.emplace(name, SubstDoc{name, current, subst(e.items, 2, sig, scope)});
    ws.order_.emplace_back("subst", name);
  }

  void formula_form(const SExpr& e) {
    if (e.size() != 3) fail(ErrorKind::Syntax, e, "expected (formula NAME BODY)");
    const auto& name = atom(e[1], "formula name");
    fresh_name("formula", e[1], ws.formulas_.count(name) > 0);
    auto& se = use_signature(e);
    VarScope scope;
    ws.formulas_.emplace(name, FormulaDoc{name, current, formula(e[2], se, scope)});
    ws.order_.emplace_back("formula", name);
  }

  void model_form(const SExpr& e) {
    if (e.size() < 3) fail(ErrorKind::Syntax, e, "expected (model NAME ALGEBRA (rel ...)...)");
    const auto& name = atom(e[1], "model name");
    fresh_name("model", e[1], ws.models_.count(name) > 0);
    const auto& an = atom(e[2], "algebra name");
    auto it = ws.algebras_.find(an);
    if (it == ws.algebras_.end()) fail(ErrorKind::Reference, e[2], "unknown algebra '" + an + "'");
    auto& se = ws.mutable_signature(it->second.signature);
    se.rels_frozen = true;
    auto m = std::make_shared<Model>();
    m->algebra = it->second.algebra;
    m->rels = se.rels;
    m->name = name;
    m->tuples.resize(se.rels->size());
    for (std::size_t i = 3; i < e.size(); ++i) {
      const auto& r = e[i];
      if (!r.is_form("rel") || r.size() < 2) fail(ErrorKind::Syntax, r, "expected (rel NAME tuples...)");
      const auto& rn = atom(r[1], "relation name");
      auto ri = se.rels->find(rn);
      if (!ri) fail(ErrorKind::Reference, r[1], "undeclared relation '" + rn + "'");
      const auto& d = se.rels->rel(*ri);
      for (std::size_t k = 2; k < r.size(); ++k) {
        const auto& t = r[k];
        if (!t.is_list() || t.size() != d.sorts.size())
          fail(ErrorKind::Arity, t, "tuple for '" + rn + "' needs " + std::to_string(d.sorts.size()) + " entries");
        std::vector<Element> tuple;
        for (std::size_t j = 0; j < t.size(); ++j) {
          std::size_t v = number(t[j], "element");
          if (v >= m->algebra->carrier_size(d.sorts[j])) fail(ErrorKind::Invalid, t[j], "element out of range");
          tuple.push_back(static_cast<Element>(v));
        }
        m->tuples[*ri].insert(std::move(tuple));
      }
    }
    validate_model(*m);
    ws.models_.emplace(name, ModelDoc{name, an, m});
    ws.order_.emplace_back("model", name);
  }

  void clauses_form(const SExpr& e) {
    if (e.size() < 3) fail(ErrorKind::Syntax, e, "expected (clauses NAME KIND clause...)");
    const auto& name = atom(e[1], "clause set name");
    fresh_name("clause set", e[1], ws.clauses_.count(name) > 0);
    const auto& kn = atom(e[2], "clause kind");
    ClauseKind kind;
    if (kn == "identity") kind = ClauseKind::Identity;
    else if (kn == "pseudo") kind = ClauseKind::Pseudo;
    else if (kn == "quasi") kind = ClauseKind::Quasi;
    else if (kn == "universal") kind = ClauseKind::Universal;
    else fail(ErrorKind::Syntax, e[2], "clause kind is identity, pseudo, quasi or universal");
    const auto& sig = *use_signature(e).sig;
    ClausesDoc doc{name, current, kind, {}};
    for (std::size_t i = 3; i < e.size(); ++i) {
      VarScope scope;  // variables are local to each clause
      doc.clauses.push_back(clause(kind, e[i], sig, scope));
    }
    ws.clauses_.emplace(name, std::move(doc));
    ws.order_.emplace_back("clauses", name);
  }

  void top(const SExpr& e) {
    if (!e.is_list() || e.items.empty() || !e.items[0].is_atom()) fail(ErrorKind::Syntax, e, "expected a document form");
    const auto& head = e.items[0].atom;
    if (head == "signature") return signature_form(e);
    if (head == "sort" || head == "op" || head == "relation") return member_form(e);
    if (head == "algebra") return algebra_form(e);
    if (head == "ctx") return ctx_form(e);
    if (head == "pairs") return pairs_form(e);
    if (head == "subst") return subst_form(e);
    if (head == "formula") return formula_form(e);
    if (head == "model") return model_form(e);
    if (head == "clauses") return clauses_form(e);
    fail(ErrorKind::Syntax, e, "unknown document form '" + head + "'");
  }
};

// ---- workspace ----------------------------------------------------------------

void Workspace::add_builtin_signature(const std::string& name, SignaturePtr sig) {
  SignatureEntry s;
  s.name = name;
  s.sig = std::make_shared<Signature>(*sig);
  s.rels = std::make_shared<RelSignature>();
  s.builtin = true;
  s.ops_frozen = true;
  signatures_.emplace(name, std::move(s));
}

Workspace::Workspace() {
  add_builtin_signature("group", group_signature());
  add_builtin_signature("semilattice", semilattice_signature());
  add_builtin_signature("ring", ring_signature());
  for (const auto& n : builtin_algebra_names()) {
    auto g = *builtin_algebra(n);
    std::string sig = g->signature() == *group_signature()         ? "group"
                      : g->signature() == *semilattice_signature() ? "semilattice"
                                                                   : "ring";
    algebras_.emplace(n, AlgebraDoc{n, sig, g, true});
  }
}

SignatureEntry& Workspace::mutable_signature(const std::string& name) {
  auto it = signatures_.find(name);
  if (it == signatures_.end()) throw Error(ErrorKind::Reference, "unknown signature '" + name + "'");
  return it->second;
}

void Workspace::load_text(std::string_view text, const std::string& source) {
  // Staged so that a failing document leaves the workspace as it was.
  Workspace staged = *this;
  for (auto& [n, s] : staged.signatures_) {
    if (!s.ops_frozen) s.sig = std::make_shared<Signature>(*s.sig);
    if (!s.rels_frozen) s.rels = std::make_shared<RelSignature>(*s.rels);
  }
  Reader r{staged, source};
  for (const auto& e : parse_sexprs(text, source)) r.top(e);
  *this = std::move(staged);
}

void Workspace::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), path);
}

namespace {

template <class M>
const typename M::mapped_type& find_doc(const M& m, std::string_view name, const char* kind) {
  auto it = m.find(std::string(name));
  if (it == m.end()) throw Error(ErrorKind::Reference, std::string("unknown ") + kind + " '" + std::string(name) + "'");
  return it->second;
}

}  // namespace

const SignatureEntry& Workspace::signature(std::string_view name) const {
  return find_doc(signatures_, name, "signature");
}
const AlgebraDoc& Workspace::algebra(std::string_view name) const { return find_doc(algebras_, name, "algebra"); }
const PairsDoc& Workspace::pairs(std::string_view name) const { return find_doc(pairs_, name, "pair set"); }
const SubstDoc& Workspace::subst(std::string_view name) const { return find_doc(substs_, name, "substitution"); }
const FormulaDoc& Workspace::formula(std::string_view name) const { return find_doc(formulas_, name, "formula"); }
const ModelDoc& Workspace::model(std::string_view name) const { return find_doc(models_, name, "model"); }
const ClausesDoc& Workspace::clauses(std::string_view name) const { return find_doc(clauses_, name, "clause set"); }

bool Workspace::has_context(std::string_view name) const {
  return contexts_.count(std::string(name)) > 0 || name == "X1" || name == "X2" || name == "X3";
}

VarContext Workspace::context(std::string_view name, const Signature& sig) const {
  auto it = contexts_.find(std::string(name));
  if (it == contexts_.end()) {
    if (sig.num_sorts() > 0)
      if (auto c = builtin_context(name, sig)) return *c;
    throw Error(ErrorKind::Reference, "unknown context '" + std::string(name) + "'");
  }
  VarContext c;
  for (const auto& [v, s] : it->second.vars) {
    auto id = sig.find_sort(s);
    if (!id) throw Error(ErrorKind::Sort, "context '" + std::string(name) + "' uses sort '" + s + "' missing here");
    c.add(v, *id);
  }
  return c;
}

Term Workspace::read_term(const SExpr& e, const SignatureEntry& sig, const VarContext& ctx) const {
  Reader r{const_cast<Workspace&>(*this), "<arg>", sig.name};
  VarScope scope{&ctx, {}};
  return r.term(e, *sig.sig, std::nullopt, scope);
}

PairSet Workspace::read_pairs(const SExpr& e, const SignatureEntry& sig, const VarContext& ctx) const {
  Reader r{const_cast<Workspace&>(*this), "<arg>", sig.name};
  VarScope scope{&ctx, {}};
  if (!e.is_list()) throw Error(ErrorKind::Syntax, "expected a list of pairs", r.where(e));
  // ((a b) (c d)) is a list of pairs; anything else of length two, such as
  // ((mul x x) e), is one pair.
  auto pair_item = [&](const SExpr& i) {
    return i.is_list() && i.size() == 2 && !(i[0].is_atom() && sig.sig->find_op(i[0].atom));
  };
  if (!std::all_of(e.items.begin(), e.items.end(), pair_item)) return r.pair_list({e}, 0, *sig.sig, scope);
  return r.pair_list(e.items, 0, *sig.sig, scope);
}

Substitution Workspace::read_subst(const SExpr& e, const SignatureEntry& sig, const VarContext& ctx) const {
  Reader r{const_cast<Workspace&>(*this), "<arg>", sig.name};
  VarScope scope{&ctx, {}};
  if (!e.is_list()) throw Error(ErrorKind::Syntax, "expected a list of bindings", r.where(e));
  return r.subst(e.items, 0, *sig.sig, scope);
}

Formula Workspace::read_formula(const SExpr& e, const SignatureEntry& sig, const VarContext& ctx) const {
  Reader r{const_cast<Workspace&>(*this), "<arg>", sig.name};
  VarScope scope{&ctx, {}};
  return r.formula(e, sig, scope);
}

// ---- printing -------------------------------------------------------------------

std::string Workspace::print_signature(const SignatureEntry& s) const {
  const auto& sig = *s.sig;
  std::string out = "(signature " + s.name;
  for (const auto& n : sig.sorts()) {
    if (s.builtin) break;
    out += "\n  (sort " + n + ")";
  }
  for (const auto& op : sig.ops()) {
    if (s.builtin) break;
    out += "\n  (op " + op.name + " (";
    for (std::size_t i = 0; i < op.args.size(); ++i) out += (i ? " " : "") + sig.sort_name(op.args[i]);
    out += ") " + sig.sort_name(op.result) + ")";
  }
  for (std::size_t r = 0; r < s.rels->size(); ++r)
    out += "\n  (relation " + s.rels->rel(r).name + " " + rel_args(s.rels->rel(r), sig) + ")";
  return out + ")";
}

std::string Workspace::print_algebra(const AlgebraDoc& a) const {
  const auto& g = *a.algebra;
  const auto& sig = g.signature();
  std::string out = "(algebra " + a.name;
  for (SortId s = 0; s < sig.num_sorts(); ++s)
    out += "\n  (carrier " + sig.sort_name(s) + " " + std::to_string(g.carrier_size(s)) + ")";
  for (OpId o = 0; o < sig.num_ops(); ++o) {
    out += "\n  (table " + sig.op(o).name;
    for (std::size_t i = 0; i < table_size(g, o); ++i) {
      out += " (";
      for (auto v : decode_args(g, o, i)) out += std::to_string(v) + " ";
      out += std::to_string(g.table(o)[i]) + ")";
    }
    out += ")";
  }
  return out + ")";
}

std::string Workspace::print_context(const ContextDoc& c) const {
  std::string out = "(ctx " + c.name;
  for (const auto& [v, s] : c.vars) out += " (" + v + " " + s + ")";
  return out + ")";
}

std::string Workspace::print_pairs(const PairsDoc& p) const {
  const auto& sig = *signature(p.signature).sig;
  std::string out = "(pairs " + p.name;
  for (const auto& q : p.pairs) out += " " + pair_sexpr(q, sig);
  return out + ")";
}

std::string Workspace::print_subst(const SubstDoc& s) const {
  const auto& sig = *signature(s.signature).sig;
  std::string out = "(subst " + s.name;
  for (const auto& [v, t] : s.subst.bindings()) out += " (" + v + " " + term_sexpr(t, sig) + ")";
  return out + ")";
}

std::string Workspace::print_formula(const FormulaDoc& f) const {
  const auto& se = signature(f.signature);
  return "(formula " + f.name + " " + formula_sexpr(f.formula, *se.sig, *se.rels) + ")";
}

std::string Workspace::print_model(const ModelDoc& m) const {
  std::string out = "(model " + m.name + " " + m.algebra;
  const auto& rels = *m.model->rels;
  for (std::size_t r = 0; r < rels.size(); ++r) {
    out += " (rel " + rels.rel(r).name;
    for (const auto& t : m.model->tuples[r]) {
      out += " (";
      for (std::size_t i = 0; i < t.size(); ++i) out += (i ? " " : "") + std::to_string(t[i]);
      out += ")";
    }
    out += ")";
  }
  return out + ")";
}

std::string Workspace::print_clauses(const ClausesDoc& c) const {
  const auto& sig = *signature(c.signature).sig;
  std::string kind = c.kind == ClauseKind::Identity ? "identity"
                     : c.kind == ClauseKind::Pseudo ? "pseudo"
                     : c.kind == ClauseKind::Quasi  ? "quasi"
                                                    : "universal";
  std::string out = "(clauses " + c.name + " " + kind;
  for (const auto& cl : c.clauses) out += "\n  " + clause_sexpr(cl, sig);
  return out + ")";
}

std::string Workspace::print() const {
  std::string out;
  std::string current = kDefaultSignature;
  auto switch_to = [&](const std::string& s) {
    if (s == current) return;
    out += "(signature " + s + ")\n";
    current = s;
  };
  for (const auto& [kind, name] : order_) {
    if (kind == "signature") {
      out += print_signature(signatures_.at(name)) + "\n";
      current = name;
    } else if (kind == "algebra") {
      const auto& a = algebras_.at(name);
      switch_to(a.signature);
      out += print_algebra(a) + "\n";
    } else if (kind == "ctx") {
      switch_to(contexts_.at(name).signature);
      out += print_context(contexts_.at(name)) + "\n";
    } else if (kind == "pairs") {
      switch_to(pairs_.at(name).signature);
      out += print_pairs(pairs_.at(name)) + "\n";
    } else if (kind == "subst") {
      switch_to(substs_.at(name).signature);
      out += print_subst(substs_.at(name)) + "\n";
    } else if (kind == "formula") {
      switch_to(formulas_.at(name).signature);
      out += print_formula(formulas_.at(name)) + "\n";
    } else if (kind == "model") {
      out += print_model(models_.at(name)) + "\n";
    } else if (kind == "clauses") {
      switch_to(clauses_.at(name).signature);
      out += print_clauses(clauses_.at(name)) + "\n";
    }
  }
  return out;
}

std::vector<std::string> Workspace::summary() const {
  std::vector<std::string> out;
  for (const auto& [kind, name] : order_) out.push_back(kind + " " + name);
  return out;
}

}  // namespace uag
