// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "helpers.hpp"
#include "oracles.hpp"
#include "uag/closure_rules.hpp"
#include "uag/constants.hpp"
#include "uag/error.hpp"
#include "uag/halmos.hpp"
#include "uag/random.hpp"

using namespace uag;
using testing::alg;
using testing::gp;
using testing::gt;

namespace {

struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  bool ok() const { return failures == 0 && checks > 0; }
  std::string summary() const {
    std::string s = std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks";
    if (!first.empty()) s += "; first failure: " + first;
    return s;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PointSet from_mask(const GeoPtr& geo, unsigned mask) {
  PointSet a(geo, false);
  for (std::size_t i = 0; i < geo->size(); ++i)
    if (mask >> i & 1) a.insert(i);
  return a;
}

// ---------------------------------------------------------------------------

Tally galois_laws() {
  Tally t;
  const auto& sig = *group_signature();
  auto geo = make_geo(testing::X2(), alg("Z2"));
  auto terms = enumerate_terms(sig, geo->ctx, 2, 100000);
  for (unsigned mask = 0; mask < 16; ++mask) {
    auto a = from_mask(geo, mask);
    auto cl = closure_variety(a);
    t.expect(a.subset_of(cl), "A not inside A'' for mask " + std::to_string(mask));
    t.expect(closure_variety(cl) == cl, "A'''' != A'' for mask " + std::to_string(mask));
    // Pairs of bounded depth holding on A cut out a superset of A''.
    PairSet held;
    for (const auto& s : terms)
      if (testing::brute_in_congruence(canonical_pair(s, gt("e")), a)) held.insert(s, gt("e"));
    t.expect(cl.subset_of(variety_of(held, geo)), "A'' escapes the oracle bound");
    for (unsigned m2 = 0; m2 < 16; ++m2)
      if ((mask & m2) == mask)
        t.expect(kernel_leq(congruence_of(from_mask(geo, m2)), congruence_of(a)), "A' not antitone");
  }

  Rng rng(101);
  std::vector<AlgebraPtr> gs{alg("Z2"), alg("Z4"), alg("Z2xZ2")};
  for (int i = 0; i < 200; ++i) {
    auto g = gs[pick(rng, gs.size())];
    auto geo2 = make_geo(testing::X2(), g);
    auto t1 = random_pairs(sig, geo2->ctx, 1 + pick(rng, 3), 3, rng);
    auto t2 = random_pairs(sig, geo2->ctx, 1 + pick(rng, 2), 3, rng);
    auto v1 = variety_of(t1, geo2);
    t.expect(v1.indices() == testing::brute_variety(t1, geo2), "T' differs from direct evaluation");
    auto k = closure_pairs(t1, geo2);
    for (const auto& p : t1) t.expect(k.contains(p), "pair of T missing from T''");
    t.expect(variety_of_kernel(k, geo2) == v1, "T''' != T'");
    t.expect(variety_of(t1.united(t2), geo2).subset_of(v1), "T' not antitone");
    t.expect(kernel_leq(closure_pairs(t1, geo2), closure_pairs(t1.united(t2), geo2)), "T'' not monotone");
  }
  return t;
}

// ---------------------------------------------------------------------------

Tally nullstellensatz() {
  Tally t;
  Rng rng(202);
  struct Target {
    AlgebraPtr g;
    std::vector<AlgebraPtr> sources;
  };
  std::vector<AlgebraPtr> groups{alg("Z2"), alg("Z3"), alg("Z4"), alg("Z2xZ2"), alg("S3")};
  std::vector<AlgebraPtr> sls;
  for (std::size_t n = 2; n <= 3; ++n)
    for (auto& s : all_semilattices(n)) sls.push_back(s);
  std::vector<Target> targets{{alg("Z2"), groups}, {alg("Z3"), groups}, {alg("Z4"), groups}, {alg("SL2"), sls}};
  std::size_t done = 0;
  while (done < 100) {
    const auto& tg = targets[done % targets.size()];
    auto sig = tg.g->signature_ptr();
    auto ctx = standard_context(*sig, 1 + pick(rng, 2));
    auto h = tg.sources[pick(rng, tg.sources.size())];
    auto k = kernel_of_point(sig, ctx, h, random_point(ctx, *h, rng));
    if (k.coordinate().total_members() > 4) continue;
    ++done;
    auto rep = nullstellensatz_check(k, make_geo(ctx, tg.g));
    t.expect(rep.points_leq_h && rep.h_leq_points,
             "closure and h-kernel preimage differ over " + tg.g->name() + " from " + h->name());
    t.expect(rep.injections_agree, "kernel meet over A0 -> G differs");
  }
  return t;
}

// ---------------------------------------------------------------------------

// Meet of kernels of all homomorphisms g -> h, by trying every map.
Partition brute_h_ker(const FiniteAlgebra& g, const FiniteAlgebra& h) {
  const auto& sig = g.signature();
  std::size_t n = g.carrier_size(0), m = h.carrier_size(0);
  std::vector<std::vector<bool>> same(n, std::vector<bool>(n, true));
  std::vector<Element> f(n, 0);
  while (true) {
    bool hom = true;
    for (std::size_t o = 0; o < sig.num_ops() && hom; ++o)
      for (std::size_t i = 0; i < table_size(g, o) && hom; ++i) {
        auto args = decode_args(g, o, i);
        std::vector<Element> img;
        for (auto a : args) img.push_back(f[a]);
        hom = f[g.table(o)[i]] == h.apply(o, img);
      }
    if (hom)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (f[a] != f[b]) same[a][b] = false;
    std::size_t i = 0;
    while (i < n && ++f[i] == m) f[i++] = 0;
    if (i == n) break;
  }
  Partition p;
  p.label.resize(1);
  for (std::size_t a = 0; a < n; ++a) {
    Element l = static_cast<Element>(a);
    for (std::size_t b = 0; b < a; ++b)
      if (same[a][b]) {
        l = p.label[0][b];
        break;
      }
    p.label[0].push_back(l);
  }
  return p;
}

bool same_classes(const Partition& a, const Partition& b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.same(0, i, j) != b.same(0, i, j)) return false;
  return true;
}

Tally kernel_products() {
  Tally t;
  std::vector<std::vector<AlgebraPtr>> families(2);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (auto& g : all_groups(n)) families[0].push_back(g);
    for (auto& s : all_semilattices(n)) families[1].push_back(s);
  }
  for (const auto& fam : families)
    for (const auto& g : fam) {
      std::size_t n = g->carrier_size(0);
      for (const auto& h : fam) {
        auto hk = h_ker(*g, *h);
        t.expect(same_classes(hk.partition, brute_h_ker(*g, *h), n), "h_ker differs from brute force");
        std::vector<AlgebraPtr> hh{h, h};
        auto sq = h_ker(*g, *product(hh));
        t.expect(same_classes(sq.partition, hk.partition, n), "h_ker(G, HxH) != h_ker(G, H)");
        for (const auto& h2 : fam) {
          std::vector<AlgebraPtr> ab{h, h2};
          auto prod = h_ker(*g, *product(ab));
          auto met = meet(hk.partition, h_ker(*g, *h2).partition);
          t.expect(same_classes(prod.partition, met, n), "h_ker(G, H1xH2) != meet");
        }
      }
    }
  return t;
}

// ---------------------------------------------------------------------------

struct EquivCase {
  const char* g1;
  const char* g2;
  bool equivalent;
};
const EquivCase kEquivCases[] = {
    {"Z2", "Z4", false}, {"Z2", "Z2xZ2", true}, {"Z4", "Z2xZ4", true}, {"Z2xZ2", "Z4", false}};

Tally equivalence_verdicts() {
  Tally t;
  auto ctx = testing::X1();
  for (const auto& c : kEquivCases) {
    auto t0 = std::chrono::steady_clock::now();
    auto v = geometric_equiv(alg(c.g1), alg(c.g2), ctx);
    double secs = seconds_since(t0);
    std::string label = std::string(c.g1) + " vs " + c.g2;
    t.expect(secs < 10.0, label + " took " + std::to_string(secs) + "s");
    if (c.equivalent) {
      auto* e = std::get_if<Equivalent>(&v.value);
      t.expect(e && e->exact, label + " not exactly Equivalent");
    } else {
      auto* ne = std::get_if<NotEquivalent>(&v.value);
      t.expect(ne != nullptr, label + " not NotEquivalent");
      if (ne) t.expect(verify_not_equivalent(*ne, alg(c.g1), alg(c.g2), ctx), label + " witness fails");
    }
  }
  return t;
}

Tally identity_agreement() {
  Tally t;
  Rng rng(505);
  for (const auto& c : kEquivCases) {
    if (!c.equivalent) continue;
    auto g1 = alg(c.g1), g2 = alg(c.g2);
    for (const auto& ctx : {testing::X1(), testing::X2()}) {
      TermPair w;
      std::size_t depth = ctx.size() == 1 ? 3 : 2;
      bool same = same_identities(*g1, *g2, ctx, depth, &w);
      t.expect(same, same ? "" : std::string(c.g1) + " and " + c.g2 + " split on " + to_string(w, *group_signature()));
    }
    // independent spot check through satisfies_identity
    auto terms = enumerate_terms(*group_signature(), testing::X1(), 3, 100000);
    for (int i = 0; i < 400; ++i) {
      auto p = canonical_pair(terms[pick(rng, terms.size())], terms[pick(rng, terms.size())]);
      t.expect(satisfies_identity(*g1, p) == satisfies_identity(*g2, p), "identity split on a sampled pair");
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

Tally end_action() {
  Tally t;
  const auto& sig = *group_signature();
  auto rels = std::make_shared<RelSignature>();
  rels->add("P", {0});
  rels->add("R", {0, 0});
  Rng rng(606);
  std::vector<AlgebraPtr> gs{alg("Z2"), alg("Z3"), alg("Z4"), alg("S3")};
  std::size_t fo = 0;
  for (int i = 0; i < 200; ++i) {
    auto g = gs[pick(rng, gs.size())];
    auto geo = make_geo(testing::X2(), g);
    auto s = random_substitution(sig, geo->ctx, 2, rng);
    auto tp = random_pairs(sig, geo->ctx, 1 + pick(rng, 2), 2, rng);
    auto a = variety_of(tp, geo);
    // equational level: s acting on T' is the variety of sT
    auto sa = act_endo_variety(s, a);
    t.expect(sa == variety_of(act_endo_pairs(s, tp), geo), "sT' != (sT)'");
    PointSet by_def(geo, false);
    for (std::size_t k = 0; k < geo->size(); ++k)
      if (a.contains(compose_point(s, geo->ctx, geo->space.point(k), geo->ctx, *g))) by_def.insert(k);
    t.expect(sa == by_def, "sA differs from {mu : mu o s in A}");
    // FO level on a random model, retrying on variable capture
    auto m = random_model(g, rels, rng);
    for (int tries = 0; tries < 20; ++tries) {
      auto u = random_formula(sig, *rels, geo->ctx, {}, rng);
      Formula su;
      try {
        su = apply_subst(s, u);
      } catch (const Error&) {
        continue;
      }
      ++fo;
      t.expect(eval_formula(su, m, geo) == act_endo_value(s, eval_formula(u, m, geo)),
               "f*(su) != s(f*u) for " + to_string(u, sig, *rels));
      break;
    }
  }
  t.expect(fo == 200, "only " + std::to_string(fo) + " FO instances without capture");
  return t;
}

// ---------------------------------------------------------------------------

Tally closure_soundness() {
  Tally t;
  const auto& sig = *group_signature();
  auto ctx = testing::X2();
  std::vector<AlgebraPtr> pool;
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto& g : all_groups(n)) pool.push_back(g);
  Rng rng(707);
  SaturationBounds b{.max_depth = 2, .max_width = 3, .max_iterations = 2, .max_clauses = 200, .circ_pool = 10};
  for (auto kind : {ClauseKind::Identity, ClauseKind::Pseudo, ClauseKind::Quasi, ClauseKind::Universal}) {
    for (int i = 0; i < 20; ++i) {
      std::vector<Clause> seeds;
      while (seeds.size() < 2) {
        auto c = random_clause(kind, sig, ctx, 2, 2, rng);
        auto trial = seeds;
        trial.push_back(c);
        bool some = std::any_of(pool.begin(), pool.end(), [&](const AlgebraPtr& g) {
          return std::all_of(trial.begin(), trial.end(), [&](const Clause& k) { return holds_clause(*g, k); });
        });
        if (some) seeds.push_back(c);
      }
      auto res = derive_closure(kind, seeds, sig, b);
      auto rep = soundness_check(std::vector<Clause>(res.clauses.begin(), res.clauses.end()), seeds, pool);
      t.expect(rep.models_checked > 0, "no pool algebra satisfies the seeds");
      t.expect(rep.passed(), rep.passed() ? "" : rep.violations.front());
    }
  }
  std::vector<Clause> chain{Clause::pseudo({gp("x", "y")}), Clause::pseudo({gp("y", "z")})};
  t.expect(circ_pseudo_member(Clause::pseudo({gp("x", "z")}), chain), "(x=y) o (y=z) misses x=z");
  return t;
}

// ---------------------------------------------------------------------------

// Closure of a family of value sets under meet, complement and every
// cylindrification.
std::vector<ValueSet> generated_family(std::vector<ValueSet> seeds, const std::vector<std::vector<std::size_t>>& ys) {
  std::set<boost::dynamic_bitset<>> seen;
  std::vector<ValueSet> out;
  auto add = [&](const ValueSet& v) {
    if (seen.insert(v.bits()).second) out.push_back(v);
  };
  for (const auto& s : seeds) add(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    add(~out[i]);
    for (const auto& y : ys) add(exists(out[i], y));
    for (std::size_t j = 0; j < i; ++j) add(out[i] & out[j]);
  }
  return out;
}

Tally halmos_axioms() {
  Tally t;
  const auto& sig = *group_signature();
  auto rels = std::make_shared<RelSignature>();
  rels->add("P", {0});
  rels->add("R", {0, 0});
  Rng rng(808);
  auto ctx = testing::X2();
  auto m = random_model(alg("Z2"), rels, rng);
  auto geo = make_geo(ctx, m.algebra);
  std::vector<std::vector<std::size_t>> ys{{}, {0}, {1}, {0, 1}};
  std::vector<ValueSet> seeds;
  for (int i = 0; i < 50; ++i) seeds.push_back(eval_formula(random_formula(sig, *rels, ctx, {}, rng), m, geo));
  auto vals = generated_family(seeds, ys);
  auto zero = PointSet::empty(geo);
  for (const auto& y : ys) {
    t.expect(exists(zero, y).is_empty(), "exists 0 != 0");
    for (const auto& a : vals) {
      t.expect(a.subset_of(exists(a, y)), "a not inside exists a");
      t.expect(forall(a, y) == ~exists(~a, y), "forall is not dual to exists");
      for (const auto& b : vals)
        t.expect(exists(a & exists(b, y), y) == (exists(a, y) & exists(b, y)), "exists(a and exists b) law");
      for (const auto& z : ys)
        t.expect(exists(exists(a, y), z) == exists(exists(a, z), y), "quantifiers do not commute");
    }
  }
  // substitution scheme: End W acts by Boolean homomorphisms, compatibly with
  // composition and with quantifiers over variables it does not touch
  for (int i = 0; i < 40; ++i) {
    auto s1 = random_substitution(sig, ctx, 2, rng);
    auto s2 = random_substitution(sig, ctx, 2, rng);
    Substitution fix_y;
    fix_y.bind(ctx.var(0), random_term(sig, standard_context(sig, 1), 2, rng));
    for (const auto& a : vals) {
      t.expect(act_endo_value(s1, ~a) == ~act_endo_value(s1, a), "s does not commute with complement");
      t.expect(act_endo_value(compose(s1, s2), a) == act_endo_value(s1, act_endo_value(s2, a)),
               "action does not respect composition");
      t.expect(act_endo_value(fix_y, exists(a, {1})) == exists(act_endo_value(fix_y, a), {1}),
               "s does not commute with exists over an untouched variable");
      for (const auto& b : vals)
        t.expect(act_endo_value(s1, a & b) == (act_endo_value(s1, a) & act_endo_value(s1, b)),
                 "s does not commute with meet");
    }
  }

  // substitution theorem over the constant-adjoined algebra
  std::size_t st = 0;
  std::vector<AlgebraPtr> gs{alg("Z2"), alg("Z3"), alg("S3")};
  auto unary = std::make_shared<RelSignature>();
  unary->add("P", {0});
  for (int i = 0; i < 100; ++i) {
    auto g = gs[i % gs.size()];
    auto adj = adjoin_constants(*g);
    auto bm = random_model(g, unary, rng);
    auto am = adjoin_model(bm, adj.algebra);
    auto actx = standard_context(*adj.signature, 2);
    auto ageo = make_geo(actx, adj.algebra);
    auto u = random_formula(*adj.signature, *unary, actx, {}, rng);
    st += substitution_theorem_check(u, random_point(actx, *g, rng), am, ageo, adj);
  }
  t.expect(st == 100, "substitution theorem held on " + std::to_string(st) + "/100");
  return t;
}

// ---------------------------------------------------------------------------

Tally open_geometry() {
  Tally t;
  const auto& sig = *group_signature();
  auto rels = std::make_shared<RelSignature>();
  rels->add("P", {0});
  rels->add("R", {0, 0});
  Rng rng(909);
  std::vector<AlgebraPtr> gs{alg("Z4"), alg("S3"), alg("Z2xZ2"), alg("Z2xZ4")};
  for (int i = 0; i < 200; ++i) {
    auto g = gs[pick(rng, gs.size())];
    auto m = random_model(g, rels, rng);
    auto geo = make_geo(testing::X2(), g);
    auto hctx = standard_context(sig, 1 + pick(rng, 2));
    GeneratedSubalgebra h(g, hctx, random_point(hctx, *g, rng));
    auto u = random_formula(sig, *rels, testing::X2(), {.open = true}, rng);
    auto rep = fundamental_check(u, m, h, geo);
    t.expect(rep.relation == Fundamental::Equal,
             std::string("open formula gives ") + fundamental_name(rep.relation) + ": " + to_string(u, sig, *rels));
  }

  // the trivial subgroup of Z4 and "some y differs from x"
  auto unary = std::make_shared<RelSignature>();
  unary->add("P", {0});
  Model z4{alg("Z4"), unary, {std::set<std::vector<Element>>{{1}}}, "M"};
  auto geo = make_geo(testing::X2(), z4.algebra);
  GeneratedSubalgebra trivial(z4.algebra, testing::X1(), Point{0});
  auto ex = Formula::exists({"y"}, Formula::negate(Formula::eq(gt("x"), gt("y"))));
  auto rep = fundamental_check(ex, z4, trivial, geo);
  t.expect(rep.relation != Fundamental::Equal && rep.sub_count == 0 && rep.ambient_count == 1,
           "trivial-subgroup instance did not fail as documented");

  // commutator-free images in S3
  Model s3{alg("S3"), std::make_shared<RelSignature>(), {}, "S3"};
  auto sgeo = make_geo(testing::X2(), s3.algebra);
  auto terms = enumerate_terms(sig, testing::X2(), 1, 1000);
  std::vector<Formula> comm;
  for (const auto& a : terms)
    for (const auto& b : terms) {
      Substitution s;
      s.bind(gt("x"), a).bind(gt("y"), b);
      comm.push_back(Formula::eq(apply_subst(s, gt("mul(x, y)")), apply_subst(s, gt("mul(y, x)"))));
    }
  Substitution swap, xx, yy;
  swap.bind(gt("x"), gt("y")).bind(gt("y"), gt("x"));
  xx.bind(gt("y"), gt("x"));
  yy.bind(gt("x"), gt("y"));
  std::vector<Formula> sample{Formula::eq(gt("x"), gt("y")), Formula::eq(gt("mul(x, x)"), gt("e")),
                              Formula::eq(gt("mul(x, y)"), gt("mul(y, x)"))};
  auto ov = open_variety_check(comm, {swap, xx, yy}, sample, s3, sgeo);
  t.expect(ov.passed(), "open variety check failed on the S3 instance");
  auto verbal = verbal_variety(PairSet{gp("mul(x, y)", "mul(y, x)")}, sgeo);
  t.expect(ov.variety == verbal, "open variety differs from the verbal variety");
  t.expect(verbal.count() == 18, "verbal variety has " + std::to_string(verbal.count()) + " points, expected 18");
  return t;
}

// ---------------------------------------------------------------------------

Tally pointwise_structure() {
  Tally t;
  auto ring = alg("Z5R");
  const auto& rs = *ring_signature();
  auto geo = make_geo(standard_context(rs, 2), ring);
  auto rt = [&](std::string_view s) { return testing::term(rs, s); };
  std::vector<OpId> mul_one{*rs.find_op("mul"), *rs.find_op("one")};
  std::vector<OpId> add_zero{*rs.find_op("add"), *rs.find_op("zero")};
  auto parabola = variety_of(PairSet{canonical_pair(rt("mul(y, y)"), rt("x"))}, geo);
  auto shifted = variety_of(PairSet{canonical_pair(rt("mul(y, y)"), rt("mul(two, x)"))}, geo);
  auto line = variety_of(PairSet{canonical_pair(rt("add(x, y)"), rt("zero"))}, geo);
  t.expect(pointwise_closed(parabola, mul_one), "y^2 = x not closed under pointwise multiplication");
  t.expect(!pointwise_closed(shifted, mul_one), "y^2 = 2x reported closed under pointwise multiplication");
  t.expect(pointwise_closed(line, add_zero), "x + y = 0 not closed under pointwise addition");
  // oracle: closure of the parabola by direct products of points
  bool closed = true;
  for (const auto& p : parabola.points())
    for (const auto& q : parabola.points()) {
      Point r{ring->apply(mul_one[0], std::vector<Element>{p[0], q[0]}),
              ring->apply(mul_one[0], std::vector<Element>{p[1], q[1]})};
      closed = closed && parabola.contains(r);
    }
  t.expect(closed, "direct check of the parabola disagrees");
  return t;
}

// ---------------------------------------------------------------------------

Tally variety_isomorphism() {
  Tally t;
  auto z2 = alg("Z2");
  auto t0 = std::chrono::steady_clock::now();
  auto diag = variety_of(PairSet{gp("x", "y")}, make_geo(testing::X2(), z2));
  VarContext zs{{"z", 0}};
  auto line = Variety::full(make_geo(zs, z2));
  auto iso = variety_iso(diag, line);
  t.expect(iso.has_value(), "diagonal and line not isomorphic");
  if (iso) {
    t.expect(verify_variety_iso(*iso, diag, line), "found isomorphism fails verification");
    // pointwise: s' o s and s o s' fix every point
    for (const auto& p : diag.points()) {
      auto q = compose_point(iso->s, diag.geo()->ctx, p, zs, *z2);
      auto back = compose_point(iso->s_prime, zs, q, diag.geo()->ctx, *z2);
      t.expect(line.contains(q) && back == p, "s' o s moves a point of the diagonal");
    }
  }
  t.expect(seconds_since(t0) < 1.0, "positive instance over 1s");

  auto t1 = std::chrono::steady_clock::now();
  auto plane = Variety::full(make_geo(testing::X2(), z2));
  t.expect(!variety_iso(diag, plane).has_value(), "diagonal reported isomorphic to the plane");
  t.expect(seconds_since(t1) < 1.0, "negative instance over 1s");
  return t;
}

// ---------------------------------------------------------------------------

Tally ground_closure_oracle() {
  Tally t;
  const auto& sig = *group_signature();
  auto ctx = testing::X3();
  Rng rng(1212);
  std::size_t instances = 0;
  while (instances < 300) {
    PairSet pairs = random_pairs(sig, ctx, 1 + pick(rng, 4), 3, rng);
    std::vector<Term> extra;
    for (int i = 0; i < 6; ++i) extra.push_back(random_term(sig, ctx, 3, rng));
    std::vector<Term> roots(extra);
    for (const auto& [a, b] : pairs) {
      roots.push_back(a);
      roots.push_back(b);
    }
    if (subterm_universe(roots).size() > 200) continue;
    ++instances;
    testing::FixpointClosure oracle(pairs.pairs(), extra);
    auto gc = ground_closure(pairs, extra);
    std::size_t bad = 0;
    const auto& u = oracle.universe();
    for (const auto& a : u)
      for (const auto& b : u) bad += gc.congruent_registered(a, b) != oracle.related(a, b);
    t.expect(bad == 0, "instance " + std::to_string(instances) + " disagrees on " + std::to_string(bad) + " pairs");
  }
  return t;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Tally()> run;
  };
  const Criterion criteria[] = {
      {"galois-laws", galois_laws},
      {"nullstellensatz", nullstellensatz},
      {"kernel-products", kernel_products},
      {"equivalence-verdicts", equivalence_verdicts},
      {"identity-agreement", identity_agreement},
      {"end-action", end_action},
      {"closure-soundness", closure_soundness},
      {"value-algebra-axioms", halmos_axioms},
      {"open-formula-geometry", open_geometry},
      {"pointwise-structure", pointwise_structure},
      {"variety-isomorphism", variety_isomorphism},
      {"ground-closure-oracle", ground_closure_oracle},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      auto t = c.run();
      ok = t.ok();
      detail = t.summary();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2d %-22s %s (%.2fs)\n", ok ? "PASS" : "FAIL", index, c.name, detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += !ok;
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
