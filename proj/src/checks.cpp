#include "uag/checks.hpp"

#include <functional>

#include "uag/error.hpp"
#include "uag/library.hpp"
#include "uag/random.hpp"

namespace uag {

namespace {

class Recorder {
 public:
  explicit Recorder(std::string name) { r_.name = std::move(name); }

  void expect(bool ok, const std::function<std::string()>& what) {
    ++r_.checks;
    if (ok) return;
    ++r_.failure_count;
    if (r_.failures.size() < 5) r_.failures.push_back(what());
  }

  SuiteResult done() { return std::move(r_); }

 private:
  SuiteResult r_;
};

std::vector<AlgebraPtr> small_groups() { return {cyclic_group(2), cyclic_group(4), *builtin_algebra("Z2xZ2")}; }

SuiteResult terms_suite(Rng& rng) {
  Recorder rec("terms");
  const auto& sig = *group_signature();
  auto ctx = standard_context(sig, 3);
  auto s3 = symmetric_group3();
  for (int i = 0; i < 200; ++i) {
    auto a = random_substitution(sig, ctx, 2, rng);
    auto b = random_substitution(sig, ctx, 2, rng);
    auto c = random_substitution(sig, ctx, 2, rng);
    rec.expect(compose(compose(a, b), c) == compose(a, compose(b, c)), [] { return "composition not associative"; });
    auto t = random_term(sig, ctx, 3, rng);
    rec.expect(apply_subst(compose(a, b), t) == apply_subst(a, apply_subst(b, t)),
               [&] { return "composition disagrees on " + to_string(t, sig); });
    Point p = random_point(ctx, *s3, rng);
    Point ps(ctx.size());
    for (std::size_t k = 0; k < ctx.size(); ++k) ps[k] = eval(a.image(ctx.var(k)), ctx, p, *s3);
    rec.expect(eval(apply_subst(a, t), ctx, p, *s3) == eval(t, ctx, ps, *s3),
               [&] { return "substituted evaluation differs on " + to_string(t, sig); });
  }
  return rec.done();
}

SuiteResult congruence_suite(Rng& rng) {
  Recorder rec("congruence");
  const auto& sig = *group_signature();
  auto sp = group_signature();
  auto ctx = standard_context(sig, 3);
  auto gs = small_groups();
  for (int i = 0; i < 150; ++i) {
    auto pairs = random_pairs(sig, ctx, 1 + pick(rng, 3), 3, rng);
    auto gc = ground_closure(pairs);
    for (const auto& [a, b] : pairs)
      rec.expect(gc.congruent(a, b), [&] { return "generator not congruent: " + to_string(TermPair{a, b}, sig); });
    // Soundness: a point satisfying the pairs identifies everything derived.
    auto g = gs[pick(rng, gs.size())];
    Point p = random_point(ctx, *g, rng);
    bool sat = true;
    for (const auto& [a, b] : pairs) sat = sat && eval(a, ctx, p, *g) == eval(b, ctx, p, *g);
    if (!sat) continue;
    for (int k = 0; k < 10; ++k) {
      auto t = random_term(sig, ctx, 2, rng);
      auto u = random_term(sig, ctx, 2, rng);
      if (!gc.congruent(t, u)) continue;
      rec.expect(eval(t, ctx, p, *g) == eval(u, ctx, p, *g),
                 [&] { return "derived pair fails at a model: " + to_string(TermPair{t, u}, sig); });
    }
  }
  for (int i = 0; i < 60; ++i) {
    auto g = gs[pick(rng, gs.size())];
    auto h = gs[pick(rng, gs.size())];
    auto a = kernel_of_point(sp, ctx, g, random_point(ctx, *g, rng));
    auto b = kernel_of_point(sp, ctx, h, random_point(ctx, *h, rng));
    std::vector<KernelCongruence> ab{a, b};
    auto m = meet_kernels(ab, sp, ctx);
    rec.expect(kernel_leq(m, a) && kernel_leq(m, b), [] { return "meet above an argument"; });
    if (kernel_leq(a, b)) {
      auto t = random_pair(sig, ctx, 2, rng);
      rec.expect(!a.contains(t) || b.contains(t), [&] { return "order disagrees with membership"; });
    }
  }
  return rec.done();
}

SuiteResult galois_suite(Rng& rng) {
  Recorder rec("galois");
  const auto& sig = *group_signature();
  auto ctx = standard_context(sig, 2);
  auto gs = small_groups();
  for (int i = 0; i < 60; ++i) {
    auto geo = make_geo(ctx, gs[pick(rng, gs.size())]);
    auto t = random_pairs(sig, ctx, 1 + pick(rng, 3), 3, rng);
    auto a = variety_of(t, geo);
    auto cl = closure_pairs(t, geo);
    for (const auto& p : t) rec.expect(cl.contains(p), [&] { return "pair missing from T'': " + to_string(p, sig); });
    rec.expect(variety_of_kernel(cl, geo) == a, [] { return "T''' differs from T'"; });
    PointSet b(geo, false);
    for (std::size_t k = 0; k < geo->size(); ++k)
      if (pick(rng, 3) == 0) b.insert(k);
    auto bb = closure_variety(b);
    rec.expect(b.subset_of(bb), [] { return "A not inside A''"; });
    rec.expect(closure_variety(bb) == bb, [] { return "A'''' differs from A''"; });
    auto both = b & a;
    rec.expect(kernel_leq(congruence_of(b), congruence_of(both)), [] { return "A' not antitone"; });
  }
  return rec.done();
}

SuiteResult closure_suite(Rng& rng) {
  Recorder rec("closure");
  const auto& sig = *group_signature();
  auto ctx = standard_context(sig, 2);
  std::vector<AlgebraPtr> pool;
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto& g : all_groups(n)) pool.push_back(g);
  SaturationBounds b{.max_iterations = 2, .max_clauses = 150, .circ_pool = 8};
  for (auto kind : {ClauseKind::Identity, ClauseKind::Pseudo, ClauseKind::Quasi, ClauseKind::Universal}) {
    for (int i = 0; i < 3; ++i) {
      std::vector<Clause> t;
      while (t.empty()) {
        auto c = random_clause(kind, sig, ctx, 1, 2, rng);
        if (std::any_of(pool.begin(), pool.end(), [&](const AlgebraPtr& g) { return holds_clause(*g, c); }))
          t.push_back(c);
      }
      auto res = derive_closure(kind, t, sig, b);
      auto rep = soundness_check(std::vector<Clause>(res.clauses.begin(), res.clauses.end()), t, pool);
      rec.expect(rep.passed(), [&] { return rep.violations.front(); });
    }
  }
  std::vector<Clause> chain{Clause::pseudo({canonical_pair(ctx.var(0), ctx.var(1))}),
                            Clause::pseudo({canonical_pair(ctx.var(1), Term::make(sig, "e", {}))})};
  rec.expect(circ_pseudo_member(Clause::pseudo({canonical_pair(ctx.var(0), Term::make(sig, "e", {}))}), chain),
             [] { return "transitivity instance not a composition member"; });
  return rec.done();
}

SuiteResult halmos_suite(Rng& rng) {
  Recorder rec("halmos");
  const auto& sig = *group_signature();
  auto ctx = standard_context(sig, 2);
  auto rels = std::make_shared<RelSignature>();
  rels->add("P", {0});
  rels->add("R", {0, 0});
  for (auto g : {cyclic_group(2), cyclic_group(3)}) {
    auto m = random_model(g, rels, rng);
    auto geo = make_geo(ctx, g);
    std::vector<ValueSet> vals;
    for (int i = 0; i < 12; ++i) vals.push_back(eval_formula(random_formula(sig, *rels, ctx, {}, rng), m, geo));
    for (std::vector<std::size_t> y : {std::vector<std::size_t>{0}, {1}, {0, 1}})
      for (const auto& a : vals) {
        rec.expect(a.subset_of(exists(a, y)), [] { return "a not inside exists a"; });
        for (const auto& b : vals)
          rec.expect(exists(a & exists(b, y), y) == (exists(a, y) & exists(b, y)),
                     [] { return "exists(a and exists b) law fails"; });
      }
    for (int i = 0; i < 40; ++i) {
      auto u = random_formula(sig, *rels, ctx, {}, rng);
      auto s = random_substitution(sig, ctx, 1, rng);
      Formula su;
      try {
        su = apply_subst(s, u);
      } catch (const Error&) {
        continue;
      }
      rec.expect(eval_formula(su, m, geo) == act_endo_value(s, eval_formula(u, m, geo)),
                 [&] { return "End action differs on " + to_string(u, sig, *rels); });
    }
  }
  return rec.done();
}

using SuiteFn = SuiteResult (*)(Rng&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> all{{"terms", terms_suite},
                                                                 {"congruence", congruence_suite},
                                                                 {"galois", galois_suite},
                                                                 {"closure", closure_suite},
                                                                 {"halmos", halmos_suite}};
  return all;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [n, f] : suites()) out.push_back(n);
  return out;
}

std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const auto& [n, f] : suites()) {
    if (name != "all" && name != n) continue;
    Rng rng(seed);
    out.push_back(f(rng));
  }
  if (out.empty()) throw Error(ErrorKind::Usage, "unknown suite '" + name + "'");
  return out;
}

}  // namespace uag
