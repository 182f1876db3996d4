#include "uag/galois.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "uag/constants.hpp"
#include "uag/error.hpp"

namespace uag {

GeoContext::GeoContext(VarContext c, AlgebraPtr alg)
    : sig(alg->signature_ptr()), ctx(std::move(c)), g(std::move(alg)), space(ctx, *g) {}

GeoPtr make_geo(VarContext ctx, AlgebraPtr g) { return std::make_shared<const GeoContext>(std::move(ctx), std::move(g)); }

PointSet::PointSet(GeoPtr geo, bool full) : geo_(std::move(geo)), bits_(geo_->size()) {
  if (full) bits_.set();
}

PointSet::PointSet(GeoPtr geo, boost::dynamic_bitset<> bits) : geo_(std::move(geo)), bits_(std::move(bits)) {
  if (bits_.size() != geo_->size()) throw Error(ErrorKind::Invalid, "point set size does not match its space");
}

std::vector<std::size_t> PointSet::indices() const {
  std::vector<std::size_t> out;
  for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i)) out.push_back(i);
  return out;
}

std::vector<Point> PointSet::points() const {
  std::vector<Point> out;
  for (auto i : indices()) out.push_back(geo_->space.point(i));
  return out;
}

namespace {

void require_same_ctx(const VarContext& a, const VarContext& b) {
  if (!(a == b)) throw Error(ErrorKind::Invalid, "objects live over different variable contexts");
}

}  // namespace

Variety variety_of(const PairSet& t, const GeoPtr& geo) {
  std::vector<std::pair<TermProgram, TermProgram>> progs;
  for (const auto& [a, b] : t) progs.emplace_back(TermProgram(a, geo->ctx), TermProgram(b, geo->ctx));
  Variety out(geo);
  Point p(geo->ctx.size(), 0);
  std::size_t i = 0;
  do {
    bool ok = true;
    for (const auto& [pa, pb] : progs)
      if (pa.run(*geo->g, p) != pb.run(*geo->g, p)) {
        ok = false;
        break;
      }
    if (ok) out.insert(i);
    ++i;
  } while (advance(p, geo->space));
  return out;
}

KernelCongruence congruence_of(const Variety& a) {
  const GeoPtr& geo = a.geo();
  std::vector<KernelComponent> comps;
  for (auto i : a.indices()) comps.push_back({geo->g, geo->space.point(i)});
  return KernelCongruence(geo->sig, geo->ctx, std::move(comps));
}

Variety variety_of_kernel(const KernelCongruence& k, const GeoPtr& geo) {
  require_same_ctx(k.context(), geo->ctx);
  const Generated& ca = k.coordinate();
  Variety out(geo);
  Point p(geo->ctx.size(), 0);
  std::size_t i = 0;
  do {
    if (hom_extension(ca, p, *geo->g)) out.insert(i);
    ++i;
  } while (advance(p, geo->space));
  return out;
}

Variety variety_of_kernel_by_homs(const KernelCongruence& k, const GeoPtr& geo) {
  require_same_ctx(k.context(), geo->ctx);
  const Generated& ca = k.coordinate();
  Variety out(geo);
  for (const Hom& h : enumerate_homs(*ca.algebra(), *geo->g)) {
    Point p(geo->ctx.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = h.map[geo->ctx.sort(i)][ca.generators()[i]];
    out.insert(geo->space.index(p));
  }
  return out;
}

KernelCongruence closure_pairs(const PairSet& t, const GeoPtr& geo) { return congruence_of(variety_of(t, geo)); }

Variety closure_variety(const Variety& a) { return variety_of_kernel(congruence_of(a), a.geo()); }

NullstellensatzReport nullstellensatz_check(const KernelCongruence& k, const GeoPtr& geo) {
  require_same_ctx(k.context(), geo->ctx);
  const Generated& ca = k.coordinate();
  const AlgebraPtr& a0 = ca.algebra();
  const VarContext& ctx = geo->ctx;

  FinitePartitionCongruence hk = h_ker(*a0, *geo->g);
  AlgebraPtr q = quotient(*a0, hk.partition);
  Partition labels = hk.partition;
  labels.canonicalize();
  Point qa(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) qa[i] = labels.label[ctx.sort(i)][ca.generators()[i]];

  std::vector<KernelComponent> inj;
  auto homs = enumerate_homs(*a0, *geo->g);
  for (const Hom& h : homs) {
    Point p(ctx.size());
    for (std::size_t i = 0; i < ctx.size(); ++i) p[i] = h.map[ctx.sort(i)][ca.generators()[i]];
    inj.push_back({geo->g, std::move(p)});
  }

  NullstellensatzReport r{
      congruence_of(variety_of_kernel(k, geo)),
      KernelCongruence::of_point(geo->sig, ctx, q, qa),
      KernelCongruence(geo->sig, ctx, std::move(inj)),
  };
  r.a0_size = a0->total_size();
  r.h_ker_classes = q->total_size();
  r.homs = homs.size();
  r.points_leq_h = kernel_leq(r.by_points, r.by_h_kernel);
  r.h_leq_points = kernel_leq(r.by_h_kernel, r.by_points);
  r.injections_agree = kernel_equal(r.by_injections, r.by_h_kernel);
  return r;
}

Variety verbal_variety(const PairSet& ids, const GeoPtr& geo) {
  Variety out(geo);
  std::map<std::vector<std::pair<SortId, Element>>, bool> cache;
  Point p(geo->ctx.size(), 0);
  std::size_t i = 0;
  do {
    std::vector<std::pair<SortId, Element>> key;
    for (std::size_t v = 0; v < p.size(); ++v) key.emplace_back(geo->ctx.sort(v), p[v]);
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    auto it = cache.find(key);
    if (it == cache.end()) {
      GeneratedSubalgebra h(geo->g, geo->ctx, p);
      bool ok = true;
      for (const auto& pair : ids)
        if (!satisfies_identity(*h.algebra(), pair)) {
          ok = false;
          break;
        }
      it = cache.emplace(std::move(key), ok).first;
    }
    if (it->second) out.insert(i);
    ++i;
  } while (advance(p, geo->space));
  return out;
}

Variety point_closure(const Point& p, const GeoPtr& geo) {
  return variety_of_kernel(kernel_of_point(geo->sig, geo->ctx, geo->g, p), geo);
}

Point compose_point(const Substitution& s, const VarContext& source, const Point& mu, const VarContext& target,
                    const FiniteAlgebra& g) {
  Point out(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) out[i] = eval(s.image(target.var(i)), source, mu, g);
  return out;
}

Variety act_endo_variety(const Substitution& s, const Variety& a) {
  const GeoPtr& geo = a.geo();
  std::vector<TermProgram> progs;
  for (std::size_t v = 0; v < geo->ctx.size(); ++v) progs.emplace_back(s.image(geo->ctx.var(v)), geo->ctx);
  Variety out(geo);
  Point p(geo->ctx.size(), 0), q(geo->ctx.size());
  std::size_t i = 0;
  do {
    for (std::size_t v = 0; v < progs.size(); ++v) q[v] = progs[v].run(*geo->g, p);
    if (a.contains(q)) out.insert(i);
    ++i;
  } while (advance(p, geo->space));
  return out;
}

PairSet act_endo_pairs(const Substitution& s, const PairSet& t) {
  PairSet out;
  for (const auto& [a, b] : t) out.insert(apply_subst(s, a), apply_subst(s, b));
  return out;
}

bool morphism_check(const Substitution& s, const Variety& a, const Variety& b, Point* failing) {
  if (!(*a.geo()->g == *b.geo()->g)) throw Error(ErrorKind::Invalid, "morphism between varieties over different algebras");
  for (const Point& nu : a.points()) {
    Point mu = compose_point(s, a.geo()->ctx, nu, b.geo()->ctx, *a.geo()->g);
    if (!b.contains(mu)) {
      if (failing) *failing = nu;
      return false;
    }
  }
  return true;
}

std::optional<VarietyIso> variety_iso(const Variety& a, const Variety& b, std::size_t bound) {
  if (!(*a.geo()->g == *b.geo()->g)) throw Error(ErrorKind::Invalid, "isomorphism between varieties over different algebras");
  KernelCongruence ka = congruence_of(a), kb = congruence_of(b);
  const Generated& ca = ka.coordinate();
  const Generated& cb = kb.coordinate();
  const Signature& S = *a.geo()->sig;
  if (ca.total_members() > bound || cb.total_members() > bound) return std::nullopt;
  for (SortId s = 0; s < S.num_sorts(); ++s)
    if (ca.member_count(s) != cb.member_count(s)) return std::nullopt;

  const VarContext& X = a.geo()->ctx;
  const VarContext& Y = b.geo()->ctx;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < Y.size(); ++i) combos = saturating_mul(combos, ca.member_count(Y.sort(i)));
  check_cap(combos, "isomorphism search");
  Point images(Y.size(), 0);
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    for (std::size_t i = Y.size(); i-- > 0;) {
      std::size_t r = ca.member_count(Y.sort(i));
      images[i] = static_cast<Element>(rest % r);
      rest /= r;
    }
    auto h = hom_extension(cb, images, *ca.algebra());
    if (!h) continue;
    bool bijective = true;
    std::vector<std::vector<std::uint32_t>> inverse(S.num_sorts());
    for (SortId s = 0; s < S.num_sorts() && bijective; ++s) {
      inverse[s].assign(ca.member_count(s), ~std::uint32_t{0});
      for (std::uint32_t m = 0; m < h->map[s].size(); ++m) {
        if (inverse[s][h->map[s][m]] != ~std::uint32_t{0}) {
          bijective = false;
          break;
        }
        inverse[s][h->map[s][m]] = m;
      }
    }
    if (!bijective) continue;
    VarietyIso iso;
    for (std::size_t i = 0; i < Y.size(); ++i) iso.s.bind(Y.var(i), ca.witness(Y.sort(i), images[i]));
    for (std::size_t i = 0; i < X.size(); ++i) {
      SortId s = X.sort(i);
      iso.s_prime.bind(X.var(i), cb.witness(s, inverse[s][ca.generators()[i]]));
    }
    return iso;
  }
  return std::nullopt;
}

bool verify_variety_iso(const VarietyIso& iso, const Variety& a, const Variety& b) {
  const FiniteAlgebra& g = *a.geo()->g;
  const VarContext& X = a.geo()->ctx;
  const VarContext& Y = b.geo()->ctx;
  if (!morphism_check(iso.s, a, b) || !morphism_check(iso.s_prime, b, a)) return false;
  for (const Point& nu : a.points()) {
    Point mu = compose_point(iso.s, X, nu, Y, g);
    if (compose_point(iso.s_prime, Y, mu, X, g) != nu) return false;
  }
  for (const Point& mu : b.points()) {
    Point nu = compose_point(iso.s_prime, Y, mu, X, g);
    if (compose_point(iso.s, X, nu, Y, g) != mu) return false;
  }
  return true;
}

std::vector<Variety> closed_varieties(const GeoPtr& geo) {
  std::set<boost::dynamic_bitset<>> seen;
  std::vector<Variety> out;
  std::vector<Variety> queue{closure_variety(Variety::empty(geo))};
  seen.insert(queue[0].bits());
  while (!queue.empty()) {
    Variety c = std::move(queue.back());
    queue.pop_back();
    for (std::size_t i = 0; i < geo->size(); ++i) {
      if (c.contains(i)) continue;
      Variety d = c;
      d.insert(i);
      d = closure_variety(d);
      if (seen.insert(d.bits()).second) queue.push_back(d);
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Variety& x, const Variety& y) {
    if (x.count() != y.count()) return x.count() < y.count();
    return x.bits() < y.bits();
  });
  return out;
}

PairSet presentation(const KernelCongruence& k) {
  const Generated& ca = k.coordinate();
  const Signature& S = ca.signature();
  const VarContext& ctx = k.context();
  PairSet out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    Term w = ca.witness(ctx.sort(i), ca.generators()[i]);
    Term x = ctx.var(i);
    if (w != x) out.insert(x, w);
  }
  const FiniteAlgebra& A = *ca.algebra();
  for (OpId o = 0; o < S.num_ops(); ++o) {
    const OpDecl& d = S.op(o);
    for (std::size_t t = 0; t < A.table(o).size(); ++t) {
      auto args = decode_args(A, o, t);
      std::vector<Term> ch;
      for (std::size_t j = 0; j < args.size(); ++j) ch.push_back(ca.witness(d.args[j], args[j]));
      Term lhs = Term::app(o, std::move(ch), d.result);
      Term rhs = ca.witness(d.result, A.table(o)[t]);
      if (lhs != rhs) out.insert(lhs, rhs);
    }
  }
  return out;
}

namespace {

/// Smallest pair of witness terms lying in exactly one of k1, k2.
std::optional<std::pair<TermPair, int>> separating_pair(const KernelCongruence& k1, const KernelCongruence& k2,
                                                         const SignaturePtr& sig, const VarContext& ctx) {
  const std::size_t n1 = k1.components().size();
  std::vector<KernelComponent> comps = k1.components();
  comps.insert(comps.end(), k2.components().begin(), k2.components().end());
  KernelCongruence both(sig, ctx, std::move(comps));
  const Generated& ca = both.coordinate();
  std::optional<std::pair<TermPair, int>> best;
  std::size_t best_size = SIZE_MAX;
  for (SortId s = 0; s < sig->num_sorts(); ++s) {
    const std::size_t n = ca.member_count(s);
    for (std::uint32_t j = 0; j < n; ++j)
      for (std::uint32_t i = 0; i < j; ++i) {
        const auto& a = ca.member(s, i);
        const auto& b = ca.member(s, j);
        bool eq1 = std::equal(a.begin(), a.begin() + n1, b.begin());
        bool eq2 = std::equal(a.begin() + n1, a.end(), b.begin() + n1);
        if (eq1 == eq2) continue;
        const Term& wi = ca.witness(s, i);
        const Term& wj = ca.witness(s, j);
        std::size_t size = wi.size() + wj.size();
        if (size < best_size) {
          best_size = size;
          best = std::make_pair(canonical_pair(wi, wj), eq1 ? 1 : 2);
        }
      }
  }
  return best;
}

bool closures_differ(const PairSet& t, const GeoPtr& g1, const GeoPtr& g2) {
  return !kernel_equal(closure_pairs(t, g1), closure_pairs(t, g2));
}

NotEquivalent build_witness(PairSet t, const GeoPtr& g1, const GeoPtr& g2) {
  // Greedy removal keeps the closures apart while shrinking T.
  auto pairs = t.pairs();
  for (std::size_t i = pairs.size(); i-- > 0;) {
    PairSet trial = t;
    trial.erase(pairs[i]);
    if (closures_differ(trial, g1, g2)) t = std::move(trial);
  }
  auto k1 = closure_pairs(t, g1);
  auto k2 = closure_pairs(t, g2);
  auto sep = separating_pair(k1, k2, g1->sig, g1->ctx);
  if (!sep) throw Error(ErrorKind::Invalid, "closures differ but no separating pair was found");
  return NotEquivalent{std::move(t), sep->first, sep->second};
}

}  // namespace

bool verify_not_equivalent(const NotEquivalent& v, const AlgebraPtr& g1, const AlgebraPtr& g2, const VarContext& ctx) {
  auto geo1 = make_geo(ctx, g1);
  auto geo2 = make_geo(ctx, g2);
  bool in1 = closure_pairs(v.witness, geo1).contains(v.separating);
  bool in2 = closure_pairs(v.witness, geo2).contains(v.separating);
  return in1 != in2 && (in1 ? v.side == 1 : v.side == 2);
}

EquivVerdict geometric_equiv(const AlgebraPtr& g1, const AlgebraPtr& g2, const VarContext& ctx,
                             const EquivOptions& opts) {
  if (!same_signature(g1->signature_ptr(), g2->signature_ptr()))
    throw Error(ErrorKind::Invalid, "geometric equivalence needs a common signature");
  auto geo1 = make_geo(ctx, g1);
  auto geo2 = make_geo(ctx, g2);
  EquivVerdict verdict{Inconclusive{}, {}};
  EquivMode mode = opts.mode;
  if (mode == EquivMode::Exact && (geo1->size() > opts.exact_bound || geo2->size() > opts.exact_bound)) {
    verdict.notices.push_back("point space exceeds the exact bound of " + std::to_string(opts.exact_bound) +
                              "; using sampled mode");
    mode = EquivMode::Sampled;
  }

  if (mode == EquivMode::Exact) {
    std::size_t checked = 0;
    const GeoPtr sides[2] = {geo1, geo2};
    for (int side = 0; side < 2; ++side) {
      const GeoPtr& here = sides[side];
      const GeoPtr& there = sides[1 - side];
      for (const Variety& c : closed_varieties(here)) {
        ++checked;
        KernelCongruence k = congruence_of(c);
        KernelCongruence other = congruence_of(variety_of_kernel(k, there));
        if (kernel_leq(other, k)) continue;
        verdict.value = build_witness(presentation(k), geo1, geo2);
        return verdict;
      }
    }
    verdict.value = Equivalent{true, checked};
    return verdict;
  }

  const Signature& S = *g1->signature_ptr();
  std::size_t depth = opts.depth;
  std::vector<Term> terms;
  while (true) {
    try {
      terms = enumerate_terms(S, ctx, depth, 20000);
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CapExceeded || depth == 0) throw;
      --depth;
    }
  }
  if (depth != opts.depth)
    verdict.notices.push_back("term universe reduced to depth " + std::to_string(depth));
  std::vector<std::vector<std::size_t>> by_sort(S.num_sorts());
  for (std::size_t i = 0; i < terms.size(); ++i) by_sort[terms[i].sort()].push_back(i);
  std::vector<SortId> usable;
  for (SortId s = 0; s < S.num_sorts(); ++s)
    if (by_sort[s].size() >= 2) usable.push_back(s);

  std::mt19937_64 rng(opts.seed);
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::size_t ok = 0;
  for (std::size_t n = 0; n < opts.samples && !usable.empty(); ++n) {
    PairSet t;
    std::size_t count = 1 + below(std::max<std::size_t>(opts.max_pairs, 1));
    for (std::size_t j = 0; j < count; ++j) {
      const auto& pool = by_sort[usable[below(usable.size())]];
      t.insert(terms[pool[below(pool.size())]], terms[pool[below(pool.size())]]);
    }
    try {
      if (closures_differ(t, geo1, geo2)) {
        verdict.value = build_witness(std::move(t), geo1, geo2);
        return verdict;
      }
      ++ok;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CapExceeded) throw;
    }
  }
  if (ok == 0)
    verdict.value = Inconclusive{opts.samples};
  else
    verdict.value = Equivalent{false, ok};
  return verdict;
}

bool same_identities(const FiniteAlgebra& g1, const FiniteAlgebra& g2, const VarContext& ctx, std::size_t depth,
                     TermPair* witness) {
  auto terms = enumerate_terms(g1.signature(), ctx, depth, 1u << 18);
  auto classes = [&](const FiniteAlgebra& g) {
    PointSpace space(ctx, g);
    std::vector<std::uint32_t> label(terms.size());
    std::map<std::pair<SortId, std::vector<Element>>, std::uint32_t> ids;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      TermProgram prog(terms[i], ctx);
      std::vector<Element> values;
      values.reserve(space.size());
      Point p(ctx.size(), 0);
      do values.push_back(prog.run(g, p));
      while (advance(p, space));
      auto [it, fresh] = ids.try_emplace({terms[i].sort(), std::move(values)}, static_cast<std::uint32_t>(i));
      label[i] = it->second;  // index of the first term in the class
    }
    return label;
  };
  auto l1 = classes(g1);
  auto l2 = classes(g2);
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (l1[j] == l2[j]) continue;
    if (witness) {
      std::size_t i = std::min(l1[j], l2[j]);
      *witness = canonical_pair(terms[i], terms[j]);
    }
    return false;
  }
  return true;
}

bool pointwise_closed(const Variety& a, std::span<const OpId> ops) {
  const GeoPtr& geo = a.geo();
  const FiniteAlgebra& g = *geo->g;
  const Signature& S = g.signature();
  if (S.num_sorts() != 1) throw Error(ErrorKind::Invalid, "pointwise operations need a one-sorted algebra");
  if (auto bad = first_noncommuting_pair(g, ops))
    throw Error(ErrorKind::Invalid, "operations '" + S.op(bad->first).name + "' and '" + S.op(bad->second).name +
                                        "' do not commute in " + (g.name().empty() ? std::string("G") : g.name()));
  auto pts = a.points();
  const std::size_t nv = geo->ctx.size();
  for (OpId o : ops) {
    const std::size_t ar = S.op(o).arity();
    std::size_t combos = 1;
    for (std::size_t k = 0; k < ar; ++k) combos = saturating_mul(combos, pts.size());
    check_cap(combos, "pointwise closure check");
    std::vector<std::size_t> idx(ar, 0);
    std::vector<Element> args(ar);
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t rest = c;
      for (std::size_t k = ar; k-- > 0;) {
        idx[k] = rest % pts.size();
        rest /= pts.size();
      }
      Point r(nv);
      for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t k = 0; k < ar; ++k) args[k] = pts[idx[k]][v];
        r[v] = g.apply(o, args);
      }
      if (!a.contains(r)) return false;
    }
  }
  return true;
}

FaithfulResult faithful_solvable(const PairSet& t, const FiniteAlgebra& g, const PairSet& identity_instances) {
  AdjoinedConstants adj = adjoin_constants(g);
  GroundCongruence gc;
  for (std::size_t s = 0; s < adj.constant.size(); ++s)
    for (Element a = 0; a < adj.constant[s].size(); ++a) gc.add_term(adj.constant_term(static_cast<SortId>(s), a));
  for (const auto& [a, b] : t) gc.merge(a, b);
  for (const auto& [a, b] : adj.ground_pairs) gc.merge(a, b);
  for (const auto& [a, b] : identity_instances) gc.merge(a, b);
  FaithfulResult r;
  for (std::size_t s = 0; s < adj.constant.size(); ++s)
    for (Element a = 0; a < adj.constant[s].size(); ++a)
      for (Element b = a + 1; b < adj.constant[s].size(); ++b) {
        Term ca = adj.constant_term(static_cast<SortId>(s), a);
        Term cb = adj.constant_term(static_cast<SortId>(s), b);
        if (gc.congruent_registered(ca, cb)) {
          r.verdict = Faithful::NotFaithful;
          r.merged_constants = std::make_pair(ca, cb);
          return r;
        }
      }
  r.verdict = identity_instances.empty() ? Faithful::FaithfulGround : Faithful::Unknown;
  return r;
}

}  // namespace uag
