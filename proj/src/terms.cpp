#include "uag/terms.hpp"

#include <algorithm>
#include <unordered_set>

#include "uag/error.hpp"

namespace uag {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  // boost::hash_combine constant, widened
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

SortId Signature::add_sort(std::string name) {
  if (find_sort(name)) throw Error(ErrorKind::Invalid, "duplicate sort '" + name + "'");
  sorts_.push_back(std::move(name));
  return static_cast<SortId>(sorts_.size() - 1);
}

OpId Signature::add_op(std::string name, std::vector<SortId> args, SortId result) {
  if (find_op(name)) throw Error(ErrorKind::Invalid, "duplicate operation '" + name + "'");
  for (SortId s : args)
    if (s >= sorts_.size()) throw Error(ErrorKind::Sort, "operation '" + name + "' uses an undeclared sort");
  if (result >= sorts_.size()) throw Error(ErrorKind::Sort, "operation '" + name + "' has an undeclared result sort");
  ops_.push_back(OpDecl{std::move(name), std::move(args), result});
  return static_cast<OpId>(ops_.size() - 1);
}

std::optional<SortId> Signature::find_sort(std::string_view name) const {
  for (std::size_t i = 0; i < sorts_.size(); ++i)
    if (sorts_[i] == name) return static_cast<SortId>(i);
  return std::nullopt;
}

std::optional<OpId> Signature::find_op(std::string_view name) const {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name == name) return static_cast<OpId>(i);
  return std::nullopt;
}

bool same_signature(const SignaturePtr& a, const SignaturePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

Term Term::var(std::string name, SortId sort) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->sort = sort;
  n->op = 0;
  n->hash = mix(mix(0x51ed27, std::hash<std::string>{}(name)), sort);
  n->name = std::move(name);
  n->size = 1;
  n->depth = 0;
  return Term(std::move(n));
}

Term Term::app(OpId op, std::vector<Term> children, SortId sort) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->sort = sort;
  n->op = op;
  std::size_t h = mix(0xa99, op);
  std::size_t size = 1;
  std::size_t depth = 0;
  for (const Term& c : children) {
    h = mix(h, c.hash());
    size += c.size();
    depth = std::max(depth, c.depth() + 1);
  }
  n->hash = h;
  n->size = size;
  n->depth = depth;
  n->children = std::move(children);
  return Term(std::move(n));
}

Term Term::make(const Signature& sig, OpId op, std::vector<Term> children) {
  if (op >= sig.num_ops()) throw Error(ErrorKind::Reference, "unknown operation id " + std::to_string(op));
  const OpDecl& d = sig.op(op);
  if (children.size() != d.arity())
    throw Error(ErrorKind::Arity, "operation '" + d.name + "' expects " + std::to_string(d.arity()) +
                                      " arguments, got " + std::to_string(children.size()));
  for (std::size_t i = 0; i < children.size(); ++i)
    if (children[i].sort() != d.args[i])
      throw Error(ErrorKind::Sort, "argument " + std::to_string(i + 1) + " of '" + d.name + "' has sort '" +
                                       sig.sort_name(children[i].sort()) + "', expected '" +
                                       sig.sort_name(d.args[i]) + "'");
  return app(op, std::move(children), d.result);
}

Term Term::make(const Signature& sig, std::string_view op, std::vector<Term> children) {
  auto id = sig.find_op(op);
  if (!id) throw Error(ErrorKind::Reference, "unknown operation '" + std::string(op) + "'");
  return make(sig, *id, std::move(children));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.size != y.size || x.kind != y.kind || x.sort != y.sort) return false;
  if (x.kind == Term::Kind::Var) return x.name == y.name;
  if (x.op != y.op || x.children.size() != y.children.size()) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!(x.children[i] == y.children[i])) return false;
  return true;
}

int term_compare(const Term& a, const Term& b) {
  if (a.identity() == b.identity()) return 0;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  if (a.kind() != b.kind()) return a.is_var() ? -1 : 1;
  if (a.is_var()) {
    int c = a.var_name().compare(b.var_name());
    if (c != 0) return c < 0 ? -1 : 1;
    if (a.sort() != b.sort()) return a.sort() < b.sort() ? -1 : 1;
    return 0;
  }
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  auto ca = a.children();
  auto cb = b.children();
  for (std::size_t i = 0; i < ca.size() && i < cb.size(); ++i) {
    int c = term_compare(ca[i], cb[i]);
    if (c != 0) return c;
  }
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  return 0;
}

TermPair canonical_pair(Term a, Term b) {
  if (term_compare(b, a) < 0) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

namespace {

void print(const Term& t, const Signature& sig, std::string& out) {
  if (t.is_var()) {
    out += t.var_name();
    return;
  }
  const std::string& name = sig.op(t.op()).name;
  if (t.children().empty()) {
    out += name;
    return;
  }
  out += name;
  out += '(';
  bool first = true;
  for (const Term& c : t.children()) {
    if (!first) out += ", ";
    first = false;
    print(c, sig, out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const Term& t, const Signature& sig) {
  std::string out;
  print(t, sig, out);
  return out;
}

std::string to_string(const TermPair& p, const Signature& sig) {
  return to_string(p.first, sig) + " = " + to_string(p.second, sig);
}

VarContext::VarContext(std::initializer_list<std::pair<std::string, SortId>> vars) {
  for (const auto& [n, s] : vars) add(n, s);
}

std::size_t VarContext::add(std::string name, SortId sort) {
  if (index_.count(name)) throw Error(ErrorKind::Invalid, "duplicate variable '" + name + "'");
  index_.emplace(name, vars_.size());
  vars_.emplace_back(std::move(name), sort);
  return vars_.size() - 1;
}

std::optional<std::size_t> VarContext::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Term VarContext::var(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw Error(ErrorKind::Reference, "unknown variable '" + std::string(name) + "'");
  return var(*i);
}

SortCheck well_sorted(const Term& t, const Signature& sig, const VarContext& ctx) {
  if (!t.valid()) return {false, "empty term"};
  if (t.is_var()) {
    auto i = ctx.index_of(t.var_name());
    if (!i) return {false, "unknown variable '" + t.var_name() + "'"};
    if (ctx.sort(*i) != t.sort())
      return {false, "variable '" + t.var_name() + "' used at the wrong sort"};
    return {};
  }
  if (t.op() >= sig.num_ops()) return {false, "unknown operation id " + std::to_string(t.op())};
  const OpDecl& d = sig.op(t.op());
  if (t.children().size() != d.arity())
    return {false, "operation '" + d.name + "' expects " + std::to_string(d.arity()) + " arguments, got " +
                       std::to_string(t.children().size())};
  if (t.sort() != d.result) return {false, "application of '" + d.name + "' carries the wrong sort"};
  for (std::size_t i = 0; i < d.arity(); ++i) {
    const Term& c = t.children()[i];
    if (SortCheck r = well_sorted(c, sig, ctx); !r) return r;
    if (c.sort() != d.args[i])
      return {false, "argument " + std::to_string(i + 1) + " of '" + d.name + "' has sort '" +
                         sig.sort_name(c.sort()) + "', expected '" + sig.sort_name(d.args[i]) + "'"};
  }
  return {};
}

namespace {

void collect_vars(const Term& t, std::vector<Term>& out, std::unordered_set<std::string>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.var_name()).second) out.push_back(t);
    return;
  }
  for (const Term& c : t.children()) collect_vars(c, out, seen);
}

}  // namespace

std::vector<Term> variables(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<std::string> seen;
  collect_vars(t, out, seen);
  return out;
}

VarContext minimal_context(std::span<const Term> terms) {
  std::vector<Term> vars;
  std::unordered_set<std::string> seen;
  for (const Term& t : terms) collect_vars(t, vars, seen);
  VarContext ctx;
  for (const Term& v : vars) ctx.add(v.var_name(), v.sort());
  return ctx;
}

VarContext minimal_context(std::span<const TermPair> pairs) {
  std::vector<Term> terms;
  terms.reserve(pairs.size() * 2);
  for (const auto& [a, b] : pairs) {
    terms.push_back(a);
    terms.push_back(b);
  }
  return minimal_context(std::span<const Term>(terms));
}

std::vector<Term> subterm_universe(std::span<const Term> terms) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  std::vector<Term> stack;
  for (const Term& root : terms) {
    stack.push_back(root);
    while (!stack.empty()) {
      Term t = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert(t).second) continue;
      out.push_back(t);
      auto ch = t.children();
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
  }
  return out;
}

Substitution& Substitution::bind(const Term& var, Term value) {
  if (!var.is_var()) throw Error(ErrorKind::Invalid, "substitution key must be a variable");
  if (var.sort() != value.sort())
    throw Error(ErrorKind::Sort, "substitution for '" + var.var_name() + "' changes sort");
  if (value.is_var() && value.var_name() == var.var_name())
    bindings_.erase(var.var_name());
  else
    bindings_.insert_or_assign(var.var_name(), std::move(value));
  return *this;
}

const Term* Substitution::lookup(std::string_view name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::image(const Term& var) const {
  const Term* t = lookup(var.var_name());
  return t ? *t : var;
}

Substitution Substitution::without(std::span<const std::string> names) const {
  Substitution s = *this;
  for (const auto& n : names) s.bindings_.erase(n);
  return s;
}

namespace {

Term apply_rec(const Substitution& s, const Term& t, std::unordered_map<const void*, Term>& memo) {
  if (t.is_var()) return s.image(t);
  if (t.children().empty()) return t;
  auto it = memo.find(t.identity());
  if (it != memo.end()) return it->second;
  std::vector<Term> ch;
  ch.reserve(t.children().size());
  bool changed = false;
  for (const Term& c : t.children()) {
    ch.push_back(apply_rec(s, c, memo));
    if (ch.back().identity() != c.identity()) changed = true;
  }
  Term r = changed ? Term::app(t.op(), std::move(ch), t.sort()) : t;
  memo.emplace(t.identity(), r);
  return r;
}

}  // namespace

Term apply_subst(const Substitution& s, const Term& t) {
  if (s.empty()) return t;
  std::unordered_map<const void*, Term> memo;
  return apply_rec(s, t, memo);
}

Substitution compose(const Substitution& s1, const Substitution& s2) {
  Substitution out;
  for (const auto& [name, t] : s2.bindings()) out.bind(Term::var(name, t.sort()), apply_subst(s1, t));
  for (const auto& [name, t] : s1.bindings())
    if (!s2.lookup(name)) out.bind(Term::var(name, t.sort()), t);
  return out;
}

bool well_sorted(const Substitution& s, const Signature& sig, const VarContext& ctx) {
  for (const auto& [name, t] : s.bindings()) {
    auto i = ctx.index_of(name);
    if (!i || ctx.sort(*i) != t.sort()) return false;
    if (!well_sorted(t, sig, ctx)) return false;
  }
  return true;
}

std::vector<Term> enumerate_terms(const Signature& sig, const VarContext& ctx, std::size_t depth,
                                  std::size_t limit) {
  std::vector<Term> all;
  // by_sort[s] holds indices into `all` of terms with sort s, in order.
  std::vector<std::vector<std::size_t>> by_sort(sig.num_sorts());
  auto push = [&](Term t) {
    if (all.size() >= limit)
      throw Error(ErrorKind::CapExceeded, "term enumeration exceeds " + std::to_string(limit) + " terms");
    by_sort[t.sort()].push_back(all.size());
    all.push_back(std::move(t));
  };
  for (std::size_t i = 0; i < ctx.size(); ++i) push(ctx.var(i));
  for (OpId o = 0; o < sig.num_ops(); ++o)
    if (sig.op(o).arity() == 0) push(Term::app(o, {}, sig.op(o).result));

  std::size_t prev_end = 0;  // terms with index < prev_end have depth < current level - 1
  for (std::size_t level = 1; level <= depth; ++level) {
    const std::size_t frontier_end = all.size();
    for (OpId o = 0; o < sig.num_ops(); ++o) {
      const OpDecl& d = sig.op(o);
      if (d.arity() == 0) continue;
      std::vector<const std::vector<std::size_t>*> pools;
      for (SortId s : d.args) pools.push_back(&by_sort[s]);
      // Snapshot pool sizes restricted to indices < frontier_end.
      std::vector<std::size_t> lens;
      bool empty = false;
      for (auto* p : pools) {
        std::size_t n = std::lower_bound(p->begin(), p->end(), frontier_end) - p->begin();
        lens.push_back(n);
        if (n == 0) empty = true;
      }
      if (empty) continue;
      std::vector<std::size_t> idx(d.arity(), 0);
      while (true) {
        bool has_new = false;
        for (std::size_t k = 0; k < idx.size(); ++k)
          if ((*pools[k])[idx[k]] >= prev_end) has_new = true;
        if (has_new) {
          std::vector<Term> ch;
          ch.reserve(idx.size());
          for (std::size_t k = 0; k < idx.size(); ++k) ch.push_back(all[(*pools[k])[idx[k]]]);
          push(Term::app(o, std::move(ch), d.result));
        }
        std::size_t k = idx.size();
        while (k > 0) {
          --k;
          if (++idx[k] < lens[k]) break;
          idx[k] = 0;
          if (k == 0) {
            k = SIZE_MAX;
            break;
          }
        }
        if (k == SIZE_MAX) break;
      }
    }
    prev_end = frontier_end;
  }
  return all;
}

}  // namespace uag
