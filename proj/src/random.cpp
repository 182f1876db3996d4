#include "uag/random.hpp"

#include "uag/error.hpp"

namespace uag {

AlgebraPtr random_algebra(const SignaturePtr& sig, const std::vector<std::size_t>& carrier, Rng& rng,
                          std::string name) {
  std::vector<std::vector<Element>> tables(sig->num_ops());
  for (OpId o = 0; o < sig->num_ops(); ++o) {
    const auto& op = sig->op(o);
    std::size_t n = 1;
    for (auto s : op.args) n *= carrier.at(s);
    for (std::size_t i = 0; i < n; ++i) tables[o].push_back(static_cast<Element>(pick(rng, carrier.at(op.result))));
  }
  return std::make_shared<const FiniteAlgebra>(sig, carrier, std::move(tables), std::move(name));
}

namespace {

std::vector<Term> leaves_of(const Signature& sig, const VarContext& ctx, SortId sort) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (ctx.sort(i) == sort) out.push_back(ctx.var(i));
  for (OpId o = 0; o < sig.num_ops(); ++o)
    if (sig.op(o).arity() == 0 && sig.op(o).result == sort) out.push_back(Term::app(o, {}, sort));
  return out;
}

}  // namespace

Term random_term(const Signature& sig, const VarContext& ctx, SortId sort, std::size_t depth, Rng& rng) {
  std::vector<OpId> ops;
  for (OpId o = 0; o < sig.num_ops(); ++o)
    if (sig.op(o).arity() > 0 && sig.op(o).result == sort) ops.push_back(o);
  auto leaves = leaves_of(sig, ctx, sort);
  bool leaf = depth == 0 || ops.empty() || (!leaves.empty() && pick(rng, 3) == 0);
  if (leaf) {
    if (leaves.empty()) throw Error(ErrorKind::Invalid, "sort '" + sig.sort_name(sort) + "' has no leaf terms");
    return leaves[pick(rng, leaves.size())];
  }
  OpId o = ops[pick(rng, ops.size())];
  std::vector<Term> kids;
  for (auto s : sig.op(o).args) kids.push_back(random_term(sig, ctx, s, depth - 1, rng));
  return Term::app(o, std::move(kids), sort);
}

Term random_term(const Signature& sig, const VarContext& ctx, std::size_t depth, Rng& rng) {
  SortId s = ctx.empty() ? 0 : ctx.sort(pick(rng, ctx.size()));
  return random_term(sig, ctx, s, depth, rng);
}

TermPair random_pair(const Signature& sig, const VarContext& ctx, std::size_t depth, Rng& rng) {
  SortId s = ctx.empty() ? 0 : ctx.sort(pick(rng, ctx.size()));
  Term a = random_term(sig, ctx, s, depth, rng);
  Term b = random_term(sig, ctx, s, depth, rng);
  return canonical_pair(a, b);
}

PairSet random_pairs(const Signature& sig, const VarContext& ctx, std::size_t count, std::size_t depth, Rng& rng) {
  PairSet out;
  for (std::size_t i = 0; i < count; ++i) out.insert(random_pair(sig, ctx, depth, rng));
  return out;
}

Substitution random_substitution(const Signature& sig, const VarContext& ctx, std::size_t depth, Rng& rng) {
  Substitution s;
  for (std::size_t i = 0; i < ctx.size(); ++i) s.bind(ctx.var(i), random_term(sig, ctx, ctx.sort(i), depth, rng));
  return s;
}

Point random_point(const VarContext& ctx, const FiniteAlgebra& g, Rng& rng) {
  Point p(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) p[i] = static_cast<Element>(pick(rng, g.carrier_size(ctx.sort(i))));
  return p;
}

namespace {

Formula random_atom(const Signature& sig, const RelSignature& rels, const VarContext& ctx, std::size_t td,
                    Rng& rng) {
  if (rels.size() > 0 && pick(rng, 2) == 0) {
    std::size_t r = pick(rng, rels.size());
    std::vector<Term> args;
    for (auto s : rels.rel(r).sorts) args.push_back(random_term(sig, ctx, s, td, rng));
    return Formula::rel(r, std::move(args));
  }
  auto p = random_pair(sig, ctx, td, rng);
  return Formula::eq(p.first, p.second);
}

Formula random_formula_rec(const Signature& sig, const RelSignature& rels, const VarContext& ctx,
                           const FormulaShape& shape, std::size_t depth, Rng& rng) {
  if (depth == 0 || pick(rng, 4) == 0) return random_atom(sig, rels, ctx, shape.term_depth, rng);
  std::size_t choices = 2;  // and, or
  if (!shape.positive) ++choices;
  if (!shape.open) ++choices;
  std::size_t c = pick(rng, choices);
  auto sub = [&] { return random_formula_rec(sig, rels, ctx, shape, depth - 1, rng); };
  if (c == 0) {
    Formula a = sub();
    return Formula::conj(a, sub());
  }
  if (c == 1) {
    Formula a = sub();
    return Formula::disj(a, sub());
  }
  if (c == 2 && !shape.positive) return Formula::negate(sub());
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (pick(rng, 2) == 0) vars.push_back(ctx.name(i));
  if (vars.empty() && !ctx.empty()) vars.push_back(ctx.name(pick(rng, ctx.size())));
  return Formula::exists(std::move(vars), sub());
}

}  // namespace

Formula random_formula(const Signature& sig, const RelSignature& rels, const VarContext& ctx,
                       const FormulaShape& shape, Rng& rng) {
  return random_formula_rec(sig, rels, ctx, shape, shape.connective_depth, rng);
}

Clause random_clause(ClauseKind kind, const Signature& sig, const VarContext& ctx, std::size_t depth,
                     std::size_t width, Rng& rng) {
  auto nontrivial = [&] {
    for (int tries = 0; tries < 64; ++tries) {
      auto p = random_pair(sig, ctx, depth, rng);
      if (!(p.first == p.second)) return p;
    }
    return random_pair(sig, ctx, depth, rng);
  };
  std::size_t w = 1 + pick(rng, std::max<std::size_t>(width, 1));
  switch (kind) {
    case ClauseKind::Identity: {
      auto p = nontrivial();
      return Clause::identity(p.first, p.second);
    }
    case ClauseKind::Pseudo: {
      std::vector<TermPair> ps;
      for (std::size_t i = 0; i < w; ++i) ps.push_back(nontrivial());
      return Clause::pseudo(std::move(ps));
    }
    case ClauseKind::Quasi: {
      std::vector<TermPair> ante;
      for (std::size_t i = 0; i + 1 < w; ++i) ante.push_back(nontrivial());
      return Clause::quasi(std::move(ante), nontrivial());
    }
    case ClauseKind::Universal: {
      std::vector<TermPair> pos, neg;
      for (std::size_t i = 0; i < w; ++i) (pick(rng, 2) ? pos : neg).push_back(nontrivial());
      return Clause::universal(std::move(pos), std::move(neg));
    }
  }
  return Clause::identity(ctx.var(0), ctx.var(0));
}

Model random_model(const AlgebraPtr& g, const RelSignaturePtr& rels, Rng& rng) {
  Model m;
  m.algebra = g;
  m.rels = rels;
  m.name = g->name();
  m.tuples.resize(rels->size());
  for (std::size_t r = 0; r < rels->size(); ++r) {
    const auto& sorts = rels->rel(r).sorts;
    std::vector<Element> t(sorts.size(), 0);
    while (true) {
      if (pick(rng, 2)) m.tuples[r].insert(t);
      std::size_t k = sorts.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (++t[k] < g->carrier_size(sorts[k])) {
          done = false;
          break;
        }
        t[k] = 0;
      }
      if (done) break;
    }
  }
  return m;
}

}  // namespace uag
