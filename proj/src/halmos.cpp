#include "uag/halmos.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "uag/error.hpp"

namespace uag {

std::size_t RelSignature::add(std::string name, std::vector<SortId> sorts) {
  if (find(name)) throw Error(ErrorKind::Reference, "relation '" + name + "' declared twice");
  rels_.push_back({std::move(name), std::move(sorts)});
  return rels_.size() - 1;
}

std::optional<std::size_t> RelSignature::find(std::string_view name) const {
  for (std::size_t i = 0; i < rels_.size(); ++i)
    if (rels_[i].name == name) return i;
  return std::nullopt;
}

// ---- formulas ---------------------------------------------------------------

Formula Formula::top() { return Formula(std::make_shared<Node>(Node{Kind::Top, {}, 0, {}, {}})); }
Formula Formula::bottom() { return Formula(std::make_shared<Node>(Node{Kind::Bottom, {}, 0, {}, {}})); }

Formula Formula::eq(Term a, Term b) {
  if (a.sort() != b.sort()) throw Error(ErrorKind::Sort, "equality between terms of different sorts");
  auto p = canonical_pair(std::move(a), std::move(b));
  return Formula(std::make_shared<Node>(Node{Kind::Eq, {p.first, p.second}, 0, {}, {}}));
}

Formula Formula::rel(std::size_t r, std::vector<Term> args) {
  return Formula(std::make_shared<Node>(Node{Kind::Rel, std::move(args), r, {}, {}}));
}

Formula Formula::negate(Formula a) { return Formula(std::make_shared<Node>(Node{Kind::Not, {}, 0, {std::move(a)}, {}})); }

Formula Formula::conj(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(Node{Kind::And, {}, 0, {std::move(a), std::move(b)}, {}}));
}

Formula Formula::disj(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(Node{Kind::Or, {}, 0, {std::move(a), std::move(b)}, {}}));
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return Formula(std::make_shared<Node>(Node{Kind::Exists, {}, 0, {std::move(body)}, std::move(vars)}));
}

Formula Formula::forall(std::vector<std::string> vars, Formula body) {
  return negate(exists(std::move(vars), negate(std::move(body))));
}

Formula Formula::implies(Formula a, Formula b) { return disj(negate(std::move(a)), std::move(b)); }

std::set<std::string> Formula::free_vars() const {
  std::set<std::string> out;
  switch (kind()) {
    case Kind::Top:
    case Kind::Bottom:
      break;
    case Kind::Eq:
    case Kind::Rel:
      for (const auto& t : terms())
        for (const auto& v : variables(t)) out.insert(v.var_name());
      break;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (const auto& c : children()) {
        auto s = c.free_vars();
        out.insert(s.begin(), s.end());
      }
      break;
    case Kind::Exists: {
      out = children()[0].free_vars();
      for (const auto& b : bound()) out.erase(b);
      break;
    }
  }
  return out;
}

bool Formula::is_open() const {
  if (kind() == Kind::Exists) return false;
  return std::all_of(children().begin(), children().end(), [](const Formula& c) { return c.is_open(); });
}

bool Formula::is_positive() const {
  if (kind() == Kind::Not) return false;
  return std::all_of(children().begin(), children().end(), [](const Formula& c) { return c.is_positive(); });
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.rel == y.rel && x.terms == y.terms && x.bound == y.bound && x.children == y.children;
}

std::string to_string(const Formula& f, const Signature& sig, const RelSignature& rels) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Top:
      return "true";
    case K::Bottom:
      return "false";
    case K::Eq:
      return to_string(f.terms()[0], sig) + " = " + to_string(f.terms()[1], sig);
    case K::Rel: {
      std::string s = rels.rel(f.relation()).name + "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) s += ", ";
        s += to_string(f.terms()[i], sig);
      }
      return s + ")";
    }
    case K::Not:
      return "not(" + to_string(f.children()[0], sig, rels) + ")";
    case K::And:
      return "and(" + to_string(f.children()[0], sig, rels) + ", " + to_string(f.children()[1], sig, rels) + ")";
    case K::Or:
      return "or(" + to_string(f.children()[0], sig, rels) + ", " + to_string(f.children()[1], sig, rels) + ")";
    case K::Exists: {
      std::string s = "exists{";
      for (std::size_t i = 0; i < f.bound().size(); ++i) {
        if (i) s += ", ";
        s += f.bound()[i];
      }
      return s + "}(" + to_string(f.children()[0], sig, rels) + ")";
    }
  }
  return {};
}

Formula apply_subst(const Substitution& s, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Top:
    case K::Bottom:
      return f;
    case K::Eq:
      return Formula::eq(apply_subst(s, f.terms()[0]), apply_subst(s, f.terms()[1]));
    case K::Rel: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(apply_subst(s, t));
      return Formula::rel(f.relation(), std::move(args));
    }
    case K::Not:
      return Formula::negate(apply_subst(s, f.children()[0]));
    case K::And:
      return Formula::conj(apply_subst(s, f.children()[0]), apply_subst(s, f.children()[1]));
    case K::Or:
      return Formula::disj(apply_subst(s, f.children()[0]), apply_subst(s, f.children()[1]));
    case K::Exists: {
      Substitution inner = s.without(f.bound());
      const auto& body = f.children()[0];
      for (const auto& v : body.free_vars()) {
        if (std::binary_search(f.bound().begin(), f.bound().end(), v)) continue;
        const Term* img = inner.lookup(v);
        if (!img) continue;
        for (const auto& w : variables(*img))
          if (std::binary_search(f.bound().begin(), f.bound().end(), w.var_name()))
            throw Error(ErrorKind::Invalid, "substitution for '" + v + "' would be captured by bound '" +
                                                w.var_name() + "'");
      }
      return Formula::exists(f.bound(), apply_subst(inner, body));
    }
  }
  return f;
}

// ---- models -----------------------------------------------------------------

void validate_model(const Model& m) {
  if (!m.algebra || !m.rels) throw Error(ErrorKind::Invalid, "model without algebra or relations");
  if (m.tuples.size() != m.rels->size())
    throw Error(ErrorKind::Invalid, "model lists " + std::to_string(m.tuples.size()) + " relations, signature has " +
                                        std::to_string(m.rels->size()));
  for (std::size_t r = 0; r < m.rels->size(); ++r) {
    const auto& decl = m.rels->rel(r);
    for (const auto& t : m.tuples[r]) {
      if (t.size() != decl.sorts.size())
        throw Error(ErrorKind::Arity, "relation '" + decl.name + "' expects " + std::to_string(decl.sorts.size()) +
                                          " entries, got " + std::to_string(t.size()));
      for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= m.algebra->carrier_size(decl.sorts[i]))
          throw Error(ErrorKind::Invalid, "relation '" + decl.name + "' has element " + std::to_string(t[i]) +
                                              " outside its carrier");
    }
  }
}

// ---- value sets -------------------------------------------------------------

namespace {

std::vector<std::size_t> strides(const PointSpace& sp) {
  std::vector<std::size_t> st(sp.num_vars(), 1);
  for (std::size_t i = sp.num_vars(); i-- > 1;) st[i - 1] = st[i] * sp.radix(i);
  return st;
}

}  // namespace

ValueSet exists(const ValueSet& a, const std::vector<std::size_t>& vars) {
  if (vars.empty() || a.is_empty()) return a;
  const auto& geo = a.geo();
  const auto& sp = geo->space;
  auto st = strides(sp);
  ValueSet out(geo, false);
  auto& bits = out.bits();
  for (std::size_t idx = a.bits().find_first(); idx != boost::dynamic_bitset<>::npos; idx = a.bits().find_next(idx)) {
    std::size_t base = idx;
    for (auto v : vars) base -= ((idx / st[v]) % sp.radix(v)) * st[v];
    if (bits.test(base)) continue;  // this fibre is done
    std::vector<std::size_t> digit(vars.size(), 0);
    while (true) {
      std::size_t j = base;
      for (std::size_t k = 0; k < vars.size(); ++k) j += digit[k] * st[vars[k]];
      bits.set(j);
      std::size_t k = vars.size();
      while (k > 0) {
        --k;
        if (++digit[k] < sp.radix(vars[k])) break;
        digit[k] = 0;
        if (k == 0) goto done;
      }
    }
  done:;
  }
  return out;
}

ValueSet forall(const ValueSet& a, const std::vector<std::size_t>& vars) { return ~exists(~a, vars); }

std::vector<std::size_t> var_indices(const VarContext& ctx, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto i = ctx.index_of(n);
    if (!i) throw Error(ErrorKind::Reference, "quantified variable '" + n + "' is not in the context");
    out.push_back(*i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ValueSet eval_formula(const Formula& u, const Model& m, const GeoPtr& geo) {
  using K = Formula::Kind;
  switch (u.kind()) {
    case K::Top:
      return ValueSet::full(geo);
    case K::Bottom:
      return ValueSet::empty(geo);
    case K::Eq:
    case K::Rel: {
      std::vector<TermProgram> progs;
      for (const auto& t : u.terms()) {
        auto chk = well_sorted(t, *geo->sig, geo->ctx);
        if (!chk) throw Error(ErrorKind::Sort, chk.diagnostic);
        progs.emplace_back(t, geo->ctx);
      }
      if (u.kind() == K::Rel) {
        if (u.relation() >= m.rels->size()) throw Error(ErrorKind::Reference, "unknown relation index");
        const auto& decl = m.rels->rel(u.relation());
        if (decl.sorts.size() != progs.size())
          throw Error(ErrorKind::Arity, "relation '" + decl.name + "' expects " + std::to_string(decl.sorts.size()) +
                                            " arguments, got " + std::to_string(progs.size()));
        for (std::size_t i = 0; i < progs.size(); ++i)
          if (progs[i].sort() != decl.sorts[i])
            throw Error(ErrorKind::Sort, "argument " + std::to_string(i + 1) + " of '" + decl.name +
                                             "' has the wrong sort");
      }
      ValueSet out(geo, false);
      const auto& g = *geo->g;
      std::vector<Element> vals(progs.size());
      Point p(geo->ctx.size(), 0);
      std::size_t idx = 0;
      do {
        for (std::size_t i = 0; i < progs.size(); ++i) vals[i] = progs[i].run(g, p);
        bool hit = u.kind() == K::Eq ? vals[0] == vals[1] : m.holds(u.relation(), vals);
        if (hit) out.insert(idx);
        ++idx;
      } while (advance(p, geo->space));
      return out;
    }
    case K::Not:
      return ~eval_formula(u.children()[0], m, geo);
    case K::And:
      return eval_formula(u.children()[0], m, geo) & eval_formula(u.children()[1], m, geo);
    case K::Or:
      return eval_formula(u.children()[0], m, geo) | eval_formula(u.children()[1], m, geo);
    case K::Exists:
      return exists(eval_formula(u.children()[0], m, geo), var_indices(geo->ctx, u.bound()));
  }
  return ValueSet::empty(geo);
}

ValueSet act_endo_value(const Substitution& s, const ValueSet& a) { return act_endo_variety(s, a); }

std::vector<std::size_t> support(const ValueSet& a) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.geo()->ctx.size(); ++i)
    if (!(exists(a, {i}) == a)) out.push_back(i);
  return out;
}

ValueSet fo_variety(const std::vector<Formula>& t, const Model& m, const GeoPtr& geo) {
  ValueSet out = ValueSet::full(geo);
  for (const auto& u : t) {
    out = out & eval_formula(u, m, geo);
    if (out.is_empty()) break;
  }
  return out;
}

bool fo_closure_member(const Formula& u, const ValueSet& a, const Model& m) {
  return a.subset_of(eval_formula(u, m, a.geo()));
}

// ---- filters ----------------------------------------------------------------

namespace {

std::vector<std::vector<std::size_t>> all_var_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> y;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) y.push_back(i);
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<std::size_t> all_vars(const GeoPtr& geo) {
  std::vector<std::size_t> v(geo->ctx.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

}  // namespace

bool is_filter(const ValueFamily& s, const GeoPtr& geo) {
  const std::size_t n = geo->size();
  if (n > 16) throw Error(ErrorKind::CapExceeded, "filter checks need at most 16 points, got " + std::to_string(n));
  boost::dynamic_bitset<> unit(n);
  unit.set();
  if (!s.count(unit)) return false;
  for (const auto& a : s)
    for (std::size_t p = 0; p < n; ++p)
      if (!a.test(p)) {
        auto b = a;
        b.set(p);
        if (!s.count(b)) return false;
      }
  for (const auto& a : s)
    for (const auto& b : s)
      if (!s.count(a & b)) return false;
  auto subsets = all_var_subsets(geo->ctx.size());
  for (const auto& a : s)
    for (const auto& y : subsets)
      if (!s.count(forall(ValueSet(geo, a), y).bits())) return false;
  return true;
}

ValueFamily filter_generated(const ValueFamily& s, const GeoPtr& geo) {
  const std::size_t n = geo->size();
  if (n > 16) throw Error(ErrorKind::CapExceeded, "filter checks need at most 16 points, got " + std::to_string(n));
  // The least filter containing s is the up-set of the meet of forall(X) a.
  ValueSet core = ValueSet::full(geo);
  auto xs = all_vars(geo);
  for (const auto& a : s) core = core & forall(ValueSet(geo, a), xs);
  ValueFamily out;
  boost::dynamic_bitset<> free = ~core.bits();
  std::vector<std::size_t> holes;
  for (std::size_t p = 0; p < n; ++p)
    if (free.test(p)) holes.push_back(p);
  for (std::size_t mask = 0; mask < (std::size_t{1} << holes.size()); ++mask) {
    auto b = core.bits();
    for (std::size_t i = 0; i < holes.size(); ++i)
      if (mask >> i & 1) b.set(holes[i]);
    out.insert(b);
  }
  return out;
}

ValueFamily universal_part(const ValueFamily& t, const GeoPtr& geo) {
  ValueFamily out;
  auto xs = all_vars(geo);
  for (const auto& h : t)
    if (t.count(forall(ValueSet(geo, h), xs).bits())) out.insert(h);
  return out;
}

// ---- submodels --------------------------------------------------------------

Model restrict_submodel(const Model& m, const GeneratedSubalgebra& h) {
  Model out;
  out.algebra = h.algebra();
  out.rels = m.rels;
  out.name = m.name + "|sub";
  out.tuples.resize(m.tuples.size());
  const auto& gen = h.structure();
  for (std::size_t r = 0; r < m.tuples.size(); ++r) {
    const auto& decl = m.rels->rel(r);
    for (const auto& t : m.tuples[r]) {
      std::vector<Element> mapped;
      bool inside = true;
      for (std::size_t i = 0; i < t.size() && inside; ++i) {
        Element e = t[i];
        auto idx = gen.find(decl.sorts[i], std::span<const Element>(&e, 1));
        if (!idx) inside = false;
        else mapped.push_back(*idx);
      }
      if (inside) out.tuples[r].insert(std::move(mapped));
    }
  }
  return out;
}

const char* fundamental_name(Fundamental f) {
  switch (f) {
    case Fundamental::Equal:
      return "equal";
    case Fundamental::Inclusion:
      return "inclusion";
    case Fundamental::Reverse:
      return "reverse";
    case Fundamental::Neither:
      return "neither";
  }
  return "?";
}

FundamentalReport fundamental_check(const Formula& u, const Model& m, const GeneratedSubalgebra& h, const GeoPtr& geo) {
  Model sub = restrict_submodel(m, h);
  auto geo_h = make_geo(geo->ctx, sub.algebra);
  ValueSet local = eval_formula(u, sub, geo_h);
  const auto& gen = h.structure();

  ValueSet mapped(geo, false);
  for (const auto& p : local.points()) {
    Point q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = gen.member(geo->ctx.sort(i), p[i])[0];
    mapped.insert(geo->space.index(q));
  }

  ValueSet inside(geo, false);
  Point p(geo->ctx.size(), 0);
  std::size_t idx = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = h.contains(geo->ctx.sort(i), p[i]);
    if (ok) inside.insert(idx);
    ++idx;
  } while (advance(p, geo->space));
  ValueSet ambient = eval_formula(u, m, geo) & inside;

  FundamentalReport rep;
  rep.sub_count = mapped.count();
  rep.ambient_count = ambient.count();
  bool le = mapped.subset_of(ambient);
  bool ge = ambient.subset_of(mapped);
  rep.relation = le && ge ? Fundamental::Equal : le ? Fundamental::Inclusion : ge ? Fundamental::Reverse
                                                                               : Fundamental::Neither;
  return rep;
}

// ---- open formulas ----------------------------------------------------------

OpenVarietyReport open_variety_check(const std::vector<Formula>& t, const std::vector<Substitution>& substitutions,
                                     const std::vector<Formula>& sample, const Model& m, const GeoPtr& geo) {
  OpenVarietyReport rep;
  const auto& sig = *geo->sig;
  for (const auto& u : t) {
    if (!u.is_open()) {
      rep.audit_failures.push_back("not open: " + to_string(u, sig, *m.rels));
      continue;
    }
    for (const auto& s : substitutions) {
      Formula v = apply_subst(s, u);
      if (std::find(t.begin(), t.end(), v) == t.end())
        rep.audit_failures.push_back("substitution image missing: " + to_string(v, sig, *m.rels));
    }
  }
  rep.variety = fo_variety(t, m, geo);
  rep.points = geo->size();

  // Submodels on point images, cached by generator images.
  std::map<Point, bool> qualifies;
  std::vector<std::pair<Model, GeoPtr>> theory_models;
  Point p(geo->ctx.size(), 0);
  std::size_t idx = 0;
  do {
    bool ok;
    GeneratedSubalgebra h(geo->g, geo->ctx, p);
    // Subalgebras with the same member set give the same verdict; key by the
    // sorted members of every sort.
    Point key;
    for (SortId s = 0; s < sig.num_sorts(); ++s) {
      auto mem = h.members(s);
      std::sort(mem.begin(), mem.end());
      key.push_back(static_cast<Element>(mem.size()));
      key.insert(key.end(), mem.begin(), mem.end());
    }
    auto it = qualifies.find(key);
    if (it != qualifies.end()) {
      ok = it->second;
    } else {
      Model sub = restrict_submodel(m, h);
      auto geo_h = make_geo(geo->ctx, sub.algebra);
      ok = true;
      for (const auto& u : t)
        if (!eval_formula(u, sub, geo_h).is_full()) {
          ok = false;
          break;
        }
      qualifies.emplace(key, ok);
      if (ok) theory_models.emplace_back(std::move(sub), geo_h);
    }
    if (ok != rep.variety.contains(idx)) ++rep.membership_mismatches;
    ++idx;
  } while (advance(p, geo->space));

  for (const auto& v : sample) {
    bool in_closure = fo_closure_member(v, rep.variety, m);
    bool in_theory = true;
    for (const auto& [sub, geo_h] : theory_models)
      if (!eval_formula(v, sub, geo_h).is_full()) {
        in_theory = false;
        break;
      }
    if (in_closure != in_theory) ++rep.closure_mismatches;
  }
  return rep;
}

// ---- constants --------------------------------------------------------------

Model adjoin_model(const Model& m, const AlgebraPtr& adjoined) {
  Model out = m;
  out.algebra = adjoined;
  out.name = m.name + "+consts";
  return out;
}

bool substitution_theorem_check(const Formula& u, const Point& p, const Model& m, const GeoPtr& geo,
                                const AdjoinedConstants& adj) {
  Substitution s;
  for (std::size_t i = 0; i < geo->ctx.size(); ++i)
    s.bind(geo->ctx.var(i), adj.constant_term(geo->ctx.sort(i), p[i]));
  bool lhs = eval_formula(u, m, geo).contains(p);
  bool rhs = eval_formula(apply_subst(s, u), m, geo).is_full();
  return lhs == rhs;
}

// ---- ultrapowers ------------------------------------------------------------

Element component(const Ultrapower& u, const Model& m, SortId s, Element e, std::size_t alpha) {
  std::size_t c = m.algebra->carrier_size(s);
  for (std::size_t k = u.n; k-- > alpha + 1;) e /= static_cast<Element>(c);
  return static_cast<Element>(e % c);
}

Ultrapower ultrapower_principal(const Model& m, std::size_t n, std::size_t alpha0) {
  if (n == 0 || alpha0 >= n) throw Error(ErrorKind::Invalid, "principal index out of range");
  Ultrapower up;
  up.n = n;
  up.alpha0 = alpha0;
  std::vector<AlgebraPtr> factors(n, m.algebra);
  auto power = product(factors, m.name + "^" + std::to_string(n));
  up.power.algebra = power;
  up.power.rels = m.rels;
  up.power.name = power->name();
  up.power.tuples.resize(m.tuples.size());
  for (std::size_t r = 0; r < m.tuples.size(); ++r) {
    const auto& decl = m.rels->rel(r);
    std::size_t k = decl.sorts.size();
    std::vector<std::size_t> radix(k);
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
      radix[i] = power->carrier_size(decl.sorts[i]);
      total = saturating_mul(total, radix[i]);
    }
    check_cap(total, "ultrapower relation tuples");
    std::vector<Element> t(k, 0), col(k);
    for (std::size_t j = 0; j < total; ++j) {
      for (std::size_t i = 0; i < k; ++i) col[i] = component(up, m, decl.sorts[i], t[i], alpha0);
      if (m.holds(r, col)) up.power.tuples[r].insert(t);
      for (std::size_t i = k; i-- > 0;) {
        if (++t[i] < radix[i]) break;
        t[i] = 0;
      }
    }
  }

  std::vector<std::vector<Element>> labels(power->carrier().size());
  for (SortId s = 0; s < labels.size(); ++s)
    for (Element e = 0; e < power->carrier_size(s); ++e) labels[s].push_back(component(up, m, s, e, alpha0));
  up.agree.label = labels;
  up.agree.canonicalize();

  up.collapsed.algebra = quotient(*power, up.agree, m.name + "^" + std::to_string(n) + "/D");
  up.collapsed.rels = m.rels;
  up.collapsed.name = up.collapsed.algebra->name();
  up.collapsed.tuples.resize(m.tuples.size());
  for (std::size_t r = 0; r < m.tuples.size(); ++r) {
    const auto& decl = m.rels->rel(r);
    for (const auto& t : up.power.tuples[r]) {
      std::vector<Element> c(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) c[i] = collapse(up, decl.sorts[i], t[i]);
      up.collapsed.tuples[r].insert(std::move(c));
    }
  }
  return up;
}

Element collapse(const Ultrapower& u, SortId s, Element e) { return u.agree.label[s][e]; }

bool los_check(const Formula& u, const Point& mu, const Ultrapower& up, const Model& m, const VarContext& ctx) {
  auto geo_c = make_geo(ctx, up.collapsed.algebra);
  auto geo_m = make_geo(ctx, m.algebra);
  Point c(mu.size()), nu(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    c[i] = collapse(up, ctx.sort(i), mu[i]);
    nu[i] = component(up, m, ctx.sort(i), mu[i], up.alpha0);
  }
  bool lhs = eval_formula(u, up.collapsed, geo_c).contains(c);
  bool rhs = eval_formula(u, m, geo_m).contains(nu);
  return lhs == rhs;
}

bool collapse_is_isomorphism(const Ultrapower& up, const Model& m) {
  const auto& a = *up.collapsed.algebra;
  const auto& g = *m.algebra;
  if (a.carrier() != g.carrier()) return false;
  // [e] -> component(e, alpha0); collapsed classes are labelled in first
  // occurrence order, so build the map explicitly.
  const auto& power = *up.power.algebra;
  std::vector<std::vector<Element>> phi(a.carrier().size());
  for (SortId s = 0; s < phi.size(); ++s) {
    phi[s].assign(a.carrier_size(s), 0);
    std::vector<bool> seen(a.carrier_size(s), false);
    for (Element e = 0; e < power.carrier_size(s); ++e) {
      Element cls = collapse(up, s, e);
      Element v = component(up, m, s, e, up.alpha0);
      if (seen[cls] && phi[s][cls] != v) return false;
      seen[cls] = true;
      phi[s][cls] = v;
    }
    std::vector<Element> sorted = phi[s];
    std::sort(sorted.begin(), sorted.end());
    for (Element i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i) return false;
  }
  if (!is_hom(a, g, Hom{phi})) return false;
  for (std::size_t r = 0; r < m.tuples.size(); ++r) {
    const auto& decl = m.rels->rel(r);
    std::set<std::vector<Element>> img;
    for (const auto& t : up.collapsed.tuples[r]) {
      std::vector<Element> v(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) v[i] = phi[decl.sorts[i]][t[i]];
      img.insert(std::move(v));
    }
    if (img != m.tuples[r]) return false;
  }
  return true;
}

}  // namespace uag
