#include "uag/closure_rules.hpp"

#include <algorithm>
#include <map>

#include "uag/error.hpp"

namespace uag {

const char* clause_kind_name(ClauseKind k) {
  switch (k) {
    case ClauseKind::Identity:
      return "identity";
    case ClauseKind::Pseudo:
      return "pseudo";
    case ClauseKind::Quasi:
      return "quasi";
    case ClauseKind::Universal:
      return "universal";
  }
  return "?";
}

namespace {

int pair_compare(const TermPair& a, const TermPair& b) {
  if (int c = term_compare(a.first, b.first)) return c;
  return term_compare(a.second, b.second);
}

bool pair_less(const TermPair& a, const TermPair& b) { return pair_compare(a, b) < 0; }

void sort_pairs(std::vector<TermPair>& v) {
  for (auto& p : v) {
    if (p.first.sort() != p.second.sort()) throw Error(ErrorKind::Sort, "pair of terms with different sorts");
    p = canonical_pair(p.first, p.second);
  }
  std::sort(v.begin(), v.end(), pair_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

int list_compare(const std::vector<TermPair>& a, const std::vector<TermPair>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = pair_compare(a[i], b[i])) return c;
  return 0;
}

bool contains_pair(const std::vector<TermPair>& v, const TermPair& p) {
  return std::binary_search(v.begin(), v.end(), p, pair_less);
}

}  // namespace

Clause normalized(Clause c) {
  sort_pairs(c.positives);
  sort_pairs(c.negatives);
  switch (c.kind) {
    case ClauseKind::Identity:
      if (c.positives.size() != 1 || !c.negatives.empty())
        throw Error(ErrorKind::Invalid, "an identity has exactly one equality");
      break;
    case ClauseKind::Pseudo:
      if (c.positives.empty() || !c.negatives.empty())
        throw Error(ErrorKind::Invalid, "a pseudoidentity is a nonempty disjunction of equalities");
      break;
    case ClauseKind::Quasi:
      if (c.positives.size() > 1) throw Error(ErrorKind::Invalid, "a quasi-identity has one consequent");
      break;
    case ClauseKind::Universal:
      break;
  }
  return c;
}

Clause Clause::identity(Term a, Term b) { return normalized({ClauseKind::Identity, {{std::move(a), std::move(b)}}, {}}); }
Clause Clause::pseudo(std::vector<TermPair> pairs) { return normalized({ClauseKind::Pseudo, std::move(pairs), {}}); }
Clause Clause::universal(std::vector<TermPair> pos, std::vector<TermPair> neg) {
  return normalized({ClauseKind::Universal, std::move(pos), std::move(neg)});
}
Clause Clause::quasi(std::vector<TermPair> antecedent, TermPair consequent) {
  return normalized({ClauseKind::Quasi, {std::move(consequent)}, std::move(antecedent)});
}
Clause Clause::quasi_false(std::vector<TermPair> antecedent) {
  return normalized({ClauseKind::Quasi, {}, std::move(antecedent)});
}

std::size_t Clause::depth() const {
  std::size_t d = 0;
  for (const auto* v : {&positives, &negatives})
    for (const auto& p : *v) d = std::max({d, p.first.depth(), p.second.depth()});
  return d;
}

bool Clause::is_tautology() const {
  for (const auto& p : positives)
    if (p.first == p.second || contains_pair(negatives, p)) return true;
  return false;
}

bool Clause::operator==(const Clause& o) const {
  return kind == o.kind && positives == o.positives && negatives == o.negatives;
}

bool Clause::operator<(const Clause& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (int c = list_compare(positives, o.positives)) return c < 0;
  return list_compare(negatives, o.negatives) < 0;
}

std::string to_string(const Clause& c, const Signature& sig) {
  auto join = [&](const std::vector<TermPair>& v, const char* rel, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += sep;
      s += to_string(v[i].first, sig) + rel + to_string(v[i].second, sig);
    }
    return s;
  };
  if (c.kind == ClauseKind::Quasi) {
    std::string lhs = c.negatives.empty() ? "true" : join(c.negatives, " = ", " & ");
    std::string rhs = c.positives.empty() ? "false" : join(c.positives, " = ", "");
    return lhs + " -> " + rhs;
  }
  std::string s = join(c.positives, " = ", " | ");
  if (!c.negatives.empty()) {
    if (!s.empty()) s += " | ";
    s += join(c.negatives, " != ", " | ");
  }
  return s.empty() ? "false" : s;
}

bool holds_clause(const FiniteAlgebra& g, const Clause& c) {
  std::vector<TermPair> all = c.positives;
  all.insert(all.end(), c.negatives.begin(), c.negatives.end());
  VarContext ctx = minimal_context(std::span<const TermPair>(all));
  std::vector<std::pair<TermProgram, TermProgram>> pos, neg;
  for (const auto& p : c.positives) pos.emplace_back(TermProgram(p.first, ctx), TermProgram(p.second, ctx));
  for (const auto& p : c.negatives) neg.emplace_back(TermProgram(p.first, ctx), TermProgram(p.second, ctx));
  PointSpace space(ctx, g);
  Point pt(ctx.size(), 0);
  do {
    bool ok = false;
    for (const auto& [a, b] : pos)
      if (a.run(g, pt) == b.run(g, pt)) {
        ok = true;
        break;
      }
    if (!ok)
      for (const auto& [a, b] : neg)
        if (a.run(g, pt) != b.run(g, pt)) {
          ok = true;
          break;
        }
    if (!ok) return false;
  } while (advance(pt, space));
  return true;
}

bool rho_membership(const TermPair& query, const PairSet& gens) {
  Term extra[] = {query.first, query.second};
  auto gc = ground_closure(gens, extra);
  return gc.congruent_registered(query.first, query.second);
}

namespace {

struct Literal {
  TermPair pair;
  bool positive;
};

std::vector<std::vector<Literal>> literal_lists(const std::vector<Clause>& us) {
  std::vector<std::vector<Literal>> out;
  for (const auto& u : us) {
    std::vector<Literal> l;
    for (const auto& p : u.positives) l.push_back({p, true});
    for (const auto& p : u.negatives) l.push_back({p, false});
    out.push_back(std::move(l));
  }
  return out;
}

// Calls f(choice) for every p in V; stops early when f returns false.
template <class F>
bool for_each_choice(const std::vector<std::vector<Literal>>& lists, F&& f) {
  std::size_t total = 1;
  for (const auto& l : lists) {
    if (l.empty()) return true;  // V is empty
    total = saturating_mul(total, l.size());
  }
  if (total > 1000000) throw Error(ErrorKind::CapExceeded, "composition product has " + std::to_string(total) +
                                                               " choices, limit 1000000");
  std::vector<std::size_t> idx(lists.size(), 0);
  std::vector<const Literal*> choice(lists.size());
  while (true) {
    for (std::size_t k = 0; k < lists.size(); ++k) choice[k] = &lists[k][idx[k]];
    if (!f(choice)) return false;
    std::size_t k = lists.size();
    while (true) {
      if (k == 0) return true;
      --k;
      if (++idx[k] < lists[k].size()) break;
      idx[k] = 0;
    }
  }
}

bool choice_covered(const Clause& u, const std::vector<const Literal*>& p) {
  GroundCongruence gc;
  for (const auto& q : u.negatives) gc.merge(q.first, q.second);
  for (const auto* l : p)
    if (l->positive) gc.merge(l->pair.first, l->pair.second);
  for (const auto& q : u.positives)
    if (gc.congruent(q.first, q.second)) return true;
  for (const auto* l : p)
    if (!l->positive && gc.congruent(l->pair.first, l->pair.second)) return true;
  return false;
}

}  // namespace

bool circ_pseudo_member(const Clause& u, const std::vector<Clause>& us) {
  if (!u.negatives.empty()) throw Error(ErrorKind::Invalid, "pseudoidentity expected");
  for (const auto& v : us)
    if (!v.negatives.empty()) throw Error(ErrorKind::Invalid, "pseudoidentity expected");
  return circ_universal_member(u, us);
}

bool circ_universal_member(const Clause& u, const std::vector<Clause>& us) {
  auto lists = literal_lists(us);
  return for_each_choice(lists, [&](const std::vector<const Literal*>& p) { return choice_covered(u, p); });
}

// ---- saturation -------------------------------------------------------------

namespace {

class Saturator {
 public:
  Saturator(ClauseKind kind, const std::vector<Clause>& t, const Signature& sig, const SaturationBounds& b)
      : kind_(kind), sig_(sig), b_(b) {
    std::vector<TermPair> pairs;
    for (const auto& c : t) {
      if (c.kind != kind) throw Error(ErrorKind::Invalid, std::string("mixed clause kinds; expected ") +
                                                              clause_kind_name(kind));
      pairs.insert(pairs.end(), c.positives.begin(), c.positives.end());
      pairs.insert(pairs.end(), c.negatives.begin(), c.negatives.end());
      all_.insert(c);
    }
    ctx_ = minimal_context(std::span<const TermPair>(pairs));
    if (!ctx_.empty()) {
      auto terms = enumerate_terms(sig, ctx_, b.subst_depth, 1u << 16);
      for (std::size_t i = 0; i < ctx_.size(); ++i) {
        Term x = ctx_.var(i);
        for (const auto& w : terms)
          if (w.sort() == x.sort() && !(w == x)) {
            Substitution s;
            s.bind(x, w);
            substs_.push_back(std::move(s));
          }
      }
    }
    for (const auto& w : enumerate_terms(sig, ctx_, 0, 1u << 16)) leaves_.push_back(w);
  }

  DeriveResult run() {
    DeriveResult res;
    for (std::size_t it = 0; it < b_.max_iterations; ++it) {
      next_.clear();
      snapshot_.assign(all_.begin(), all_.end());
      end_rule();
      switch (kind_) {
        case ClauseKind::Identity:
          identity_rules();
          break;
        case ClauseKind::Pseudo:
        case ClauseKind::Universal:
          circ_rule();
          weakening_rule();
          break;
        case ClauseKind::Quasi:
          quasi_rules();
          break;
      }
      res.iterations = it + 1;
      if (next_.empty()) {
        res.fixpoint = !full_;
        break;
      }
      all_.insert(next_.begin(), next_.end());
      if (full_) break;
    }
    res.truncated = full_ || !res.fixpoint;
    res.clauses = all_;
    return res;
  }

 private:
  void add(Clause c, bool keep_tautology = false) {
    if (full_) return;
    c = normalized(std::move(c));
    if (c.width() > b_.max_width || c.depth() > b_.max_depth) return;
    if (c.is_tautology() && !keep_tautology) return;
    if (all_.count(c) || next_.count(c)) return;
    if (all_.size() + next_.size() >= b_.max_clauses) {
      full_ = true;
      return;
    }
    next_.insert(std::move(c));
  }

  Clause substituted(const Clause& c, const Substitution& s) const {
    Clause out{c.kind, {}, {}};
    for (const auto& p : c.positives) out.positives.emplace_back(apply_subst(s, p.first), apply_subst(s, p.second));
    for (const auto& p : c.negatives) out.negatives.emplace_back(apply_subst(s, p.first), apply_subst(s, p.second));
    return out;
  }

  void end_rule() {
    for (const auto& c : snapshot_)
      for (const auto& s : substs_) {
        Clause d = substituted(c, s);
        // An identity may collapse to a reflexive pair; drop it quietly.
        if (kind_ == ClauseKind::Identity && d.positives[0].first == d.positives[0].second) continue;
        add(std::move(d));
      }
  }

  static std::vector<TermPair> transitive_pairs(const std::vector<TermPair>& ps) {
    std::vector<TermPair> out;
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        const auto& [a, b] = ps[i];
        const auto& [c, d] = ps[j];
        if (a.sort() != c.sort()) continue;
        if (a == c && !(b == d)) out.emplace_back(b, d);
        if (a == d && !(b == c)) out.emplace_back(b, c);
        if (b == c && !(a == d)) out.emplace_back(a, d);
        if (b == d && !(a == c)) out.emplace_back(a, c);
      }
    return out;
  }

  // omega applied to argument pairs; each position takes a pair from `ps` or
  // a reflexive leaf, with at least one pair from `ps`.
  std::vector<TermPair> compatible_pairs(const std::vector<TermPair>& ps) const {
    std::vector<TermPair> out;
    for (OpId o = 0; o < sig_.num_ops(); ++o) {
      const auto& op = sig_.op(o);
      const std::size_t n = op.arity();
      if (n == 0 || n > 3) continue;
      std::vector<std::vector<std::pair<TermPair, bool>>> opts(n);
      for (std::size_t k = 0; k < n; ++k) {
        for (const auto& p : ps)
          if (p.first.sort() == op.args[k] && p.first.depth() < b_.max_depth && p.second.depth() < b_.max_depth)
            opts[k].push_back({p, true});
        for (const auto& l : leaves_)
          if (l.sort() == op.args[k]) opts[k].push_back({{l, l}, false});
      }
      std::vector<std::size_t> idx(n, 0);
      if (std::any_of(opts.begin(), opts.end(), [](const auto& v) { return v.empty(); })) continue;
      while (true) {
        std::size_t real = 0;
        std::vector<Term> lhs, rhs;
        for (std::size_t k = 0; k < n; ++k) {
          const auto& [p, r] = opts[k][idx[k]];
          real += r;
          lhs.push_back(p.first);
          rhs.push_back(p.second);
        }
        if (real > 0 && real <= 2) {
          Term a = Term::app(o, std::move(lhs), op.result);
          Term b = Term::app(o, std::move(rhs), op.result);
          if (!(a == b)) out.emplace_back(std::move(a), std::move(b));
        }
        std::size_t k = n;
        bool done = true;
        while (k > 0) {
          --k;
          if (++idx[k] < opts[k].size()) {
            done = false;
            break;
          }
          idx[k] = 0;
        }
        if (done) break;
      }
    }
    return out;
  }

  void identity_rules() {
    std::vector<TermPair> ps;
    for (const auto& c : snapshot_) ps.push_back(c.positives[0]);
    for (auto& p : transitive_pairs(ps)) add(Clause{ClauseKind::Identity, {p}, {}});
    for (auto& p : compatible_pairs(ps)) add(Clause{ClauseKind::Identity, {p}, {}});
  }

  // Candidate members of u1 o ... o ur, each verified before it is added.
  void circ_candidates(const std::vector<Clause>& us) {
    auto lists = literal_lists(us);
    Clause cand{kind_, {}, {}};
    bool ok = for_each_choice(lists, [&](const std::vector<const Literal*>& p) {
      GroundCongruence gc;
      std::vector<TermPair> plus;
      for (const auto* l : p) {
        gc.add_term(l->pair.first);
        gc.add_term(l->pair.second);
        if (l->positive) plus.push_back(canonical_pair(l->pair.first, l->pair.second));
      }
      for (const auto& q : plus) gc.merge(q.first, q.second);
      for (const auto* l : p)
        if (!l->positive && gc.congruent_registered(l->pair.first, l->pair.second)) return true;
      if (plus.empty()) {
        for (const auto* l : p) cand.negatives.push_back(l->pair);
        return true;
      }
      std::optional<TermPair> best;
      for (std::uint32_t i = 0; i < gc.num_nodes(); ++i)
        for (std::uint32_t j = i + 1; j < gc.num_nodes(); ++j) {
          if (gc.find(i) != gc.find(j)) continue;
          auto q = canonical_pair(gc.term(i), gc.term(j));
          if (std::find(plus.begin(), plus.end(), q) != plus.end()) continue;
          if (!best || pair_less(q, *best)) best = q;
        }
      if (!best) best = *std::min_element(plus.begin(), plus.end(), pair_less);
      cand.positives.push_back(*best);
      return cand.width() <= 4 * b_.max_width;
    });
    if (ok && !cand.positives.empty()) {
      Clause c = normalized(cand);
      if (circ_universal_member(c, us)) add(std::move(c));
    }
    if (us.size() != 2) return;
    const auto& u1 = us[0];
    const auto& u2 = us[1];
    // Resolution on a complementary literal.
    auto resolve = [&](const Clause& a, const Clause& b) {
      for (const auto& l : a.positives)
        if (contains_pair(b.negatives, l)) {
          Clause c{kind_, {}, {}};
          for (const auto& p : a.positives)
            if (!(p == l)) c.positives.push_back(p);
          c.negatives = a.negatives;
          c.positives.insert(c.positives.end(), b.positives.begin(), b.positives.end());
          for (const auto& p : b.negatives)
            if (!(p == l)) c.negatives.push_back(p);
          if (kind_ == ClauseKind::Pseudo && c.positives.empty()) continue;
          c = normalized(std::move(c));
          if (circ_universal_member(c, us)) add(std::move(c));
        }
    };
    resolve(u1, u2);
    resolve(u2, u1);
    // Chaining one positive of each through a shared term.
    for (const auto& l1 : u1.positives)
      for (const auto& l2 : u2.positives)
        for (auto& q : transitive_pairs({l1, l2})) {
          Clause c{kind_, {}, {}};
          for (const auto& p : u1.positives)
            if (!(p == l1)) c.positives.push_back(p);
          for (const auto& p : u2.positives)
            if (!(p == l2)) c.positives.push_back(p);
          c.positives.push_back(q);
          c.negatives = u1.negatives;
          c.negatives.insert(c.negatives.end(), u2.negatives.begin(), u2.negatives.end());
          c = normalized(std::move(c));
          if (circ_universal_member(c, us)) add(std::move(c));
        }
  }

  void circ_rule() {
    std::vector<Clause> pool = snapshot_;
    std::stable_sort(pool.begin(), pool.end(), [](const Clause& a, const Clause& b) {
      if (a.width() != b.width()) return a.width() < b.width();
      return a.depth() < b.depth();
    });
    if (pool.size() > b_.circ_pool) pool.resize(b_.circ_pool);
    const std::size_t n = pool.size();
    for (std::size_t i = 0; i < n && !full_; ++i) {
      if (b_.circ_arity >= 1) circ_candidates({pool[i]});
      for (std::size_t j = i + 1; j < n && b_.circ_arity >= 2; ++j) {
        circ_candidates({pool[i], pool[j]});
        for (std::size_t k = j + 1; k < n && b_.circ_arity >= 3; ++k) circ_candidates({pool[i], pool[j], pool[k]});
      }
    }
  }

  void weakening_rule() {
    std::vector<TermPair> pos, neg;
    for (const auto& c : snapshot_) {
      pos.insert(pos.end(), c.positives.begin(), c.positives.end());
      neg.insert(neg.end(), c.negatives.begin(), c.negatives.end());
    }
    sort_pairs(pos);
    sort_pairs(neg);
    for (const auto& c : snapshot_) {
      if (c.width() >= b_.max_width) continue;
      for (const auto& p : pos) {
        Clause d = c;
        d.positives.push_back(p);
        add(std::move(d));
      }
      if (kind_ == ClauseKind::Universal)
        for (const auto& p : neg) {
          Clause d = c;
          d.negatives.push_back(p);
          add(std::move(d));
        }
    }
  }

  void quasi_rules() {
    std::map<std::vector<TermPair>, std::vector<TermPair>, bool (*)(const std::vector<TermPair>&,
                                                                    const std::vector<TermPair>&)>
        groups([](const std::vector<TermPair>& a, const std::vector<TermPair>& b) { return list_compare(a, b) < 0; });
    std::vector<const Clause*> falsum;
    for (const auto& c : snapshot_) {
      auto& g = groups[c.negatives];
      if (c.positives.empty()) falsum.push_back(&c);
      else g.push_back(c.positives[0]);
    }
    for (auto& [u0, cons] : groups) {
      // Rule 2: a conjunct of the antecedent follows.
      for (const auto& p : u0) add(Clause{ClauseKind::Quasi, {p}, u0}, true);
      // Rule 2 consequents take part in the other rules of this group.
      std::vector<TermPair> known = cons;
      known.insert(known.end(), u0.begin(), u0.end());
      sort_pairs(known);
      for (auto& q : transitive_pairs(known)) add(Clause{ClauseKind::Quasi, {q}, u0});
      for (auto& q : compatible_pairs(known)) add(Clause{ClauseKind::Quasi, {q}, u0});
      // Rule 5: cut against every clause whose antecedent is already known.
      for (const auto& c : snapshot_) {
        if (c.positives.empty()) continue;
        bool all_known = std::all_of(c.negatives.begin(), c.negatives.end(), [&](const TermPair& p) {
          return p.first == p.second || contains_pair(known, p);
        });
        if (all_known) add(Clause{ClauseKind::Quasi, c.positives, u0});
      }
    }
    if (b_.implicative && !falsum.empty()) {
      std::vector<Term> terms;
      for (const auto& c : snapshot_)
        for (const auto* v : {&c.positives, &c.negatives})
          for (const auto& p : *v) {
            terms.push_back(p.first);
            terms.push_back(p.second);
          }
      terms = subterm_universe(terms);
      for (const auto* f : falsum)
        for (std::size_t i = 0; i < terms.size(); ++i)
          for (std::size_t j = i + 1; j < terms.size(); ++j)
            if (terms[i].sort() == terms[j].sort())
              add(Clause{ClauseKind::Quasi, {{terms[i], terms[j]}}, f->negatives});
    }
  }

  ClauseKind kind_;
  const Signature& sig_;
  SaturationBounds b_;
  VarContext ctx_;
  std::vector<Substitution> substs_;
  std::vector<Term> leaves_;
  std::set<Clause> all_;
  std::set<Clause> next_;
  std::vector<Clause> snapshot_;
  bool full_ = false;
};

}  // namespace

DeriveResult derive_closure(ClauseKind kind, const std::vector<Clause>& t, const Signature& sig,
                            const SaturationBounds& bounds) {
  if (bounds.max_depth == 0 || bounds.max_width == 0 || bounds.max_iterations == 0 || bounds.max_clauses == 0)
    throw Error(ErrorKind::Invalid, "saturation bounds must be positive");
  return Saturator(kind, t, sig, bounds).run();
}

SoundnessReport soundness_check(const std::vector<Clause>& derived, const std::vector<Clause>& t,
                                const std::vector<AlgebraPtr>& pool) {
  SoundnessReport rep;
  for (const auto& g : pool) {
    bool sat = std::all_of(t.begin(), t.end(), [&](const Clause& c) { return holds_clause(*g, c); });
    if (!sat) continue;
    ++rep.models_checked;
    for (const auto& c : derived) {
      ++rep.clauses_checked;
      if (!holds_clause(*g, c))
        rep.violations.push_back(to_string(c, g->signature()) + " fails in " +
                                 (g->name().empty() ? std::string("algebra") : g->name()));
    }
  }
  return rep;
}

}  // namespace uag
