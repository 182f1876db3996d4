#include "uag/commands.hpp"

#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "uag/checks.hpp"
#include "uag/error.hpp"
#include "uag/library.hpp"
#include "uag/random.hpp"
#include "uag/report.hpp"

namespace uag {

namespace {

struct Options {
  std::uint64_t seed = 1;
  std::size_t depth = 2;
  std::optional<std::size_t> cap;
  std::string format = "text";
  std::vector<std::string> loads;

  std::string algebra, ctx, pairs, point, term, source, subst;
  std::string ctx2, pairs2;
  std::string g1, g2, mode = "exact";
  std::size_t samples = 200;
  std::string clauses, pool = "groups";
  std::size_t iterations = 3, width = 3, max_clauses = 400;
  bool implicative = false;
  std::string model;
  std::vector<std::string> formulas;
  std::string suite = "all";
  std::string experiment;
  std::vector<std::string> files;
};

// A pair set, substitution, term or formula argument: a workspace name or an
// inline s-expression.
SExpr inline_arg(const std::string& text, const char* what) {
  if (text.empty()) throw Error(ErrorKind::Usage, std::string("missing ") + what);
  return parse_sexpr(text, std::string("--") + what);
}

class Runner {
 public:
  Runner(Workspace& ws, const Options& o) : ws_(ws), o_(o) {
    rep_.doc["command"] = "";
    rep_.doc["seed"] = o.seed;
  }

  Report run(const std::string& verb) {
    rep_.doc["command"] = verb;
    if (verb == "parse") parse();
    else if (verb == "eval") eval_cmd();
    else if (verb == "variety") variety();
    else if (verb == "closure") closure();
    else if (verb == "nullsatz") nullsatz();
    else if (verb == "point-closure") point_closure_cmd();
    else if (verb == "verbal") verbal();
    else if (verb == "morphism") morphism();
    else if (verb == "iso") iso();
    else if (verb == "equiv") equiv();
    else if (verb == "derive") derive();
    else if (verb == "query") query();
    else if (verb == "fo-variety") fo_variety_cmd();
    else if (verb == "check") check();
    else if (verb == "experiment") experiment();
    else throw Error(ErrorKind::Usage, "unknown command '" + verb + "'");
    return std::move(rep_);
  }

 private:
  // ---- argument resolution ----

  struct Ambient {
    const AlgebraDoc* alg;
    const SignatureEntry* sig;
    VarContext ctx;
    GeoPtr geo;
  };

  Ambient ambient(const std::string& algebra, const std::string& ctx) {
    if (algebra.empty()) throw Error(ErrorKind::Usage, "missing --algebra");
    if (ctx.empty()) throw Error(ErrorKind::Usage, "missing --ctx");
    const auto& a = ws_.algebra(algebra);
    const auto& s = ws_.signature_of(a);
    auto c = ws_.context(ctx, *s.sig);
    rep_.doc["algebra"] = {{"name", a.name}, {"digest", digest(*a.algebra)}};
    rep_.doc["ctx"] = ctx_json(c, *s.sig);
    return {&a, &s, c, make_geo(c, a.algebra)};
  }

  static Json ctx_json(const VarContext& c, const Signature& sig) {
    Json j = Json::array();
    for (std::size_t i = 0; i < c.size(); ++i) j.push_back({c.name(i), sig.sort_name(c.sort(i))});
    return j;
  }

  void check_terms_in(const std::vector<Term>& ts, const Signature& sig, const VarContext& ctx, const char* what) {
    for (const auto& t : ts) {
      auto chk = well_sorted(t, sig, ctx);
      if (!chk) throw Error(ErrorKind::Reference, std::string(what) + ": " + chk.diagnostic);
    }
  }

  // A document argument naming a file: load it and use the document named
  // after the file stem.
  std::string from_file(const std::string& text, bool known) {
    if (known || text.empty() || text.front() == '(' || !std::filesystem::is_regular_file(text)) return text;
    ws_.load_file(text);
    return std::filesystem::path(text).stem().string();
  }

  PairSet pairs_arg(const std::string& arg, const SignatureEntry& se, const VarContext& ctx, const char* what) {
    auto text = from_file(arg, ws_.has_pairs(arg));
    if (ws_.has_pairs(text)) {
      const auto& d = ws_.pairs(text);
      if (!same_signature(ws_.signature(d.signature).sig, se.sig))
        throw Error(ErrorKind::Sort, "pair set '" + text + "' is over signature '" + d.signature + "'");
      std::vector<Term> ts;
      for (const auto& [a, b] : d.pairs) {
        ts.push_back(a);
        ts.push_back(b);
      }
      check_terms_in(ts, *se.sig, ctx, what);
      return d.pairs;
    }
    return ws_.read_pairs(inline_arg(text, what), se, ctx);
  }

  Substitution subst_arg(const std::string& arg, const SignatureEntry& se, const VarContext& ctx) {
    auto text = from_file(arg, ws_.has_subst(arg));
    if (ws_.has_subst(text)) {
      const auto& d = ws_.subst(text);
      if (!same_signature(ws_.signature(d.signature).sig, se.sig))
        throw Error(ErrorKind::Sort, "substitution '" + text + "' is over signature '" + d.signature + "'");
      std::vector<Term> ts;
      for (const auto& [v, t] : d.subst.bindings()) ts.push_back(t);
      check_terms_in(ts, *se.sig, ctx, "subst");
      return d.subst;
    }
    return ws_.read_subst(inline_arg(text, "subst"), se, ctx);
  }

  Formula formula_arg(const std::string& arg, const SignatureEntry& se, const VarContext& ctx) {
    auto text = from_file(arg, ws_.has_formula(arg));
    if (ws_.has_formula(text)) {
      const auto& d = ws_.formula(text);
      if (d.signature != se.name)
        throw Error(ErrorKind::Sort, "formula '" + text + "' is over signature '" + d.signature + "'");
      for (const auto& v : d.formula.free_vars())
        if (!ctx.contains(v)) throw Error(ErrorKind::Reference, "formula '" + text + "': variable '" + v + "' not in context");
      return d.formula;
    }
    return ws_.read_formula(inline_arg(text, "formula"), se, ctx);
  }

  Point point_arg(const std::string& text, const VarContext& ctx, const FiniteAlgebra& g) {
    if (text.empty()) throw Error(ErrorKind::Usage, "missing --point");
    std::string t = text;
    for (auto& c : t)
      if (c == ',') c = ' ';
    std::istringstream in(t);
    Point p;
    long long v;
    while (in >> v) {
      if (v < 0) throw Error(ErrorKind::Usage, "negative element in --point");
      p.push_back(static_cast<Element>(v));
    }
    if (!in.eof()) throw Error(ErrorKind::Usage, "--point takes element numbers");
    if (p.size() != ctx.size())
      throw Error(ErrorKind::Usage, "--point has " + std::to_string(p.size()) + " entries for " +
                                        std::to_string(ctx.size()) + " variables");
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] >= g.carrier_size(ctx.sort(i))) throw Error(ErrorKind::Usage, "--point entry out of range");
    return p;
  }

  void put_variety(const char* key, const PointSet& a) {
    rep_.doc[key] = variety_json(a);
    rep_.line(std::string(key) + ": " + std::to_string(a.count()) + " of " + std::to_string(a.geo()->size()) +
              " points");
    for (const auto& l : variety_text(a)) rep_.line("  " + l);
  }

  // ---- verbs ----

  void parse() {
    Json docs = Json::array();
    for (const auto& s : ws_.summary()) docs.push_back(s);
    rep_.doc["documents"] = docs;
    rep_.doc["printed"] = ws_.print();
    rep_.line("loaded " + std::to_string(docs.size()) + " documents");
    for (const auto& s : ws_.summary()) rep_.line("  " + s);
  }

  void eval_cmd() {
    auto amb = ambient(o_.algebra, o_.ctx);
    Term t = ws_.read_term(inline_arg(o_.term, "term"), *amb.sig, amb.ctx);
    Point p = point_arg(o_.point, amb.ctx, *amb.alg->algebra);
    Element v = eval(t, amb.ctx, p, *amb.alg->algebra);
    rep_.doc["term"] = to_string(t, *amb.sig->sig);
    rep_.doc["point"] = point_json(p, amb.ctx);
    rep_.doc["value"] = v;
    rep_.line(to_string(t, *amb.sig->sig) + " at " + point_text(p, amb.ctx) + " = " + std::to_string(v));
  }

  void variety() {
    auto amb = ambient(o_.algebra, o_.ctx);
    auto t = pairs_arg(o_.pairs, *amb.sig, amb.ctx, "pairs");
    rep_.doc["pairs"] = pairs_json(t, *amb.sig->sig);
    put_variety("variety", variety_of(t, amb.geo));
  }

  void closure() {
    auto amb = ambient(o_.algebra, o_.ctx);
    auto t = pairs_arg(o_.pairs, *amb.sig, amb.ctx, "pairs");
    const auto& sig = *amb.sig->sig;
    rep_.doc["pairs"] = pairs_json(t, sig);
    auto v = variety_of(t, amb.geo);
    put_variety("variety", v);
    auto k = congruence_of(v);
    rep_.doc["closure"] = kernel_json(k);
    rep_.line("coordinate algebra: " + std::to_string(k.coordinate().total_members()) + " elements");
    auto terms = enumerate_terms(sig, amb.ctx, o_.depth, 1u << 14);
    PairSet listed;
    for (std::size_t i = 0; i < terms.size() && listed.size() < 200; ++i)
      for (std::size_t j = i + 1; j < terms.size() && listed.size() < 200; ++j)
        if (terms[i].sort() == terms[j].sort() && k.contains(terms[i], terms[j])) listed.insert(terms[i], terms[j]);
    rep_.doc["closure_pairs_depth"] = o_.depth;
    rep_.doc["closure_pairs"] = pairs_json(listed, sig);
    rep_.line("closure pairs up to depth " + std::to_string(o_.depth) + " (first " + std::to_string(listed.size()) +
              "):");
    for (const auto& p : listed) rep_.line("  " + to_string(p, sig));
  }

  void nullsatz() {
    auto amb = ambient(o_.algebra, o_.ctx);
    if (o_.source.empty()) throw Error(ErrorKind::Usage, "missing --source (algebra presenting the kernel)");
    const auto& h = ws_.algebra(o_.source);
    if (!same_signature(h.algebra->signature_ptr(), amb.alg->algebra->signature_ptr()))
      throw Error(ErrorKind::Sort, "--source is over another signature");
    Point p = point_arg(o_.point, amb.ctx, *h.algebra);
    auto k = kernel_of_point(amb.alg->algebra->signature_ptr(), amb.ctx, h.algebra, p);
    auto r = nullstellensatz_check(k, amb.geo);
    rep_.doc["source"] = {{"name", h.name}, {"point", point_json(p, amb.ctx)}};
    rep_.doc["kernel"] = kernel_digest(k);
    rep_.doc["report"] = nullstellensatz_json(r);
    rep_.line("closure by points " + kernel_digest(r.by_points));
    rep_.line("preimage of the h-kernel " + kernel_digest(r.by_h_kernel));
    rep_.line(std::string("|A0| = ") + std::to_string(r.a0_size) + ", homs A0 -> G: " + std::to_string(r.homs));
    rep_.line(r.passed() ? "agree: yes" : "agree: NO");
    if (!r.passed()) rep_.status = 1;
  }

  void point_closure_cmd() {
    auto amb = ambient(o_.algebra, o_.ctx);
    Point p = point_arg(o_.point, amb.ctx, *amb.alg->algebra);
    rep_.doc["point"] = point_json(p, amb.ctx);
    put_variety("closure", point_closure(p, amb.geo));
  }

  void verbal() {
    auto amb = ambient(o_.algebra, o_.ctx);
    auto t = pairs_arg(o_.pairs, *amb.sig, amb.ctx, "pairs");
    rep_.doc["identities"] = pairs_json(t, *amb.sig->sig);
    put_variety("variety", verbal_variety(t, amb.geo));
  }

  void morphism() {
    auto a = ambient(o_.algebra, o_.ctx);
    auto b_ctx = ws_.context(o_.ctx2, *a.sig->sig);
    auto b_geo = make_geo(b_ctx, a.alg->algebra);
    auto va = variety_of(pairs_arg(o_.pairs, *a.sig, a.ctx, "pairs"), a.geo);
    auto vb = variety_of(pairs_arg(o_.pairs2, *a.sig, b_ctx, "pairs2"), b_geo);
    auto s = subst_arg(o_.subst, *a.sig, a.ctx);
    for (std::size_t i = 0; i < b_ctx.size(); ++i) {
      if (!s.lookup(b_ctx.name(i))) throw Error(ErrorKind::Usage, "--subst leaves '" + b_ctx.name(i) + "' unbound");
      if (s.lookup(b_ctx.name(i))->sort() != b_ctx.sort(i))
        throw Error(ErrorKind::Sort, "--subst binds '" + b_ctx.name(i) + "' at the wrong sort");
    }
    Point failing;
    bool ok = morphism_check(s, va, vb, &failing);
    rep_.doc["morphism"] = ok;
    if (!ok) rep_.doc["escaping_point"] = point_json(failing, a.ctx);
    rep_.line(ok ? "morphism: yes" : "morphism: no, " + point_text(failing, a.ctx) + " escapes");
  }

  void iso() {
    auto a = ambient(o_.algebra, o_.ctx);
    auto b_ctx = ws_.context(o_.ctx2, *a.sig->sig);
    auto va = variety_of(pairs_arg(o_.pairs, *a.sig, a.ctx, "pairs"), a.geo);
    auto vb = variety_of(pairs_arg(o_.pairs2, *a.sig, b_ctx, "pairs2"), make_geo(b_ctx, a.alg->algebra));
    const auto& sig = *a.sig->sig;
    auto found = variety_iso(va, vb);
    rep_.doc["isomorphic"] = found.has_value();
    if (!found) {
      rep_.line("isomorphic: no");
      return;
    }
    auto binds = [&](const Substitution& s) {
      Json j = Json::object();
      for (const auto& [v, t] : s.bindings()) j[v] = to_string(t, sig);
      return j;
    };
    bool verified = verify_variety_iso(*found, va, vb);
    rep_.doc["s"] = binds(found->s);
    rep_.doc["s_prime"] = binds(found->s_prime);
    rep_.doc["verified"] = verified;
    rep_.line("isomorphic: yes");
    for (const auto& [v, t] : found->s.bindings()) rep_.line("  s: " + v + " -> " + to_string(t, sig));
    for (const auto& [v, t] : found->s_prime.bindings()) rep_.line("  s': " + v + " -> " + to_string(t, sig));
    rep_.line(verified ? "verified pointwise" : "VERIFICATION FAILED");
    if (!verified) rep_.status = 1;
  }

  void equiv() {
    if (o_.g1.empty() || o_.g2.empty()) throw Error(ErrorKind::Usage, "equiv needs --g1 and --g2");
    const auto& a = ws_.algebra(o_.g1);
    const auto& b = ws_.algebra(o_.g2);
    if (!same_signature(a.algebra->signature_ptr(), b.algebra->signature_ptr()))
      throw Error(ErrorKind::Sort, "--g1 and --g2 have different signatures");
    const auto& se = ws_.signature_of(a);
    if (o_.ctx.empty()) throw Error(ErrorKind::Usage, "missing --ctx");
    auto ctx = ws_.context(o_.ctx, *se.sig);
    EquivOptions eo;
    if (o_.mode == "exact") eo.mode = EquivMode::Exact;
    else if (o_.mode == "sampled") eo.mode = EquivMode::Sampled;
    else throw Error(ErrorKind::Usage, "--mode is exact or sampled");
    eo.seed = o_.seed;
    eo.depth = o_.depth;
    eo.samples = o_.samples;
    auto v = geometric_equiv(a.algebra, b.algebra, ctx, eo);
    rep_.doc["g1"] = {{"name", a.name}, {"digest", digest(*a.algebra)}};
    rep_.doc["g2"] = {{"name", b.name}, {"digest", digest(*b.algebra)}};
    rep_.doc["ctx"] = ctx_json(ctx, *se.sig);
    rep_.doc["mode"] = o_.mode;
    rep_.doc["result"] = equiv_json(v, *se.sig);
    const auto& sig = *se.sig;
    if (const auto* e = std::get_if<Equivalent>(&v.value)) {
      rep_.line(std::string("Equivalent (") + (e->exact ? "exact, " : "sampled, ") + std::to_string(e->checked) +
                " checked)");
    } else if (const auto* n = std::get_if<NotEquivalent>(&v.value)) {
      bool ok = verify_not_equivalent(*n, a.algebra, b.algebra, ctx);
      rep_.doc["result"]["verified"] = ok;
      rep_.line("NotEquivalent");
      rep_.line("  witness T: " + (n->witness.empty() ? std::string("{}") : std::string()));
      for (const auto& p : n->witness) rep_.line("    " + to_string(p, sig));
      rep_.line("  " + to_string(n->separating, sig) + " lies in the closure over " + (n->side == 1 ? a.name : b.name) +
                " only");
      rep_.line(ok ? "  witness verified" : "  WITNESS FAILED VERIFICATION");
      if (!ok) rep_.status = 1;
    } else {
      rep_.line("Inconclusive after " + std::to_string(std::get<Inconclusive>(v.value).samples_tried) + " samples");
    }
    for (const auto& n : v.notices) rep_.line("note: " + n);
  }

  std::vector<AlgebraPtr> pool_arg(const Signature& sig) {
    std::vector<AlgebraPtr> pool;
    if (o_.pool == "groups") {
      for (std::size_t n = 1; n <= 4; ++n)
        for (auto& g : all_groups(n)) pool.push_back(g);
    } else if (o_.pool == "semilattices") {
      for (std::size_t n = 1; n <= 4; ++n)
        for (auto& g : all_semilattices(n)) pool.push_back(g);
    } else {
      std::string t = o_.pool;
      for (auto& c : t)
        if (c == ',') c = ' ';
      std::istringstream in(t);
      std::string name;
      while (in >> name) pool.push_back(ws_.algebra(name).algebra);
    }
    for (const auto& g : pool)
      if (!(g->signature() == sig)) throw Error(ErrorKind::Sort, "pool algebra '" + g->name() + "' has another signature");
    return pool;
  }

  void derive() {
    if (o_.clauses.empty()) throw Error(ErrorKind::Usage, "missing --clauses");
    const auto& d = ws_.clauses(from_file(o_.clauses, ws_.has_clauses(o_.clauses)));
    const auto& sig = *ws_.signature(d.signature).sig;
    SaturationBounds b;
    b.max_depth = o_.depth;
    b.max_width = o_.width;
    b.max_iterations = o_.iterations;
    b.max_clauses = o_.max_clauses;
    b.implicative = o_.implicative;
    auto res = derive_closure(d.kind, d.clauses, sig, b);
    auto pool = pool_arg(sig);
    std::vector<Clause> derived(res.clauses.begin(), res.clauses.end());
    auto sound = soundness_check(derived, d.clauses, pool);
    Json cl = Json::array();
    for (const auto& c : derived) cl.push_back(to_string(c, sig));
    rep_.doc["kind"] = clause_kind_name(d.kind);
    rep_.doc["bounds"] = {{"depth", b.max_depth},
                          {"width", b.max_width},
                          {"iterations", b.max_iterations},
                          {"max_clauses", b.max_clauses},
                          {"implicative", b.implicative}};
    rep_.doc["iterations"] = res.iterations;
    rep_.doc["fixpoint"] = res.fixpoint;
    rep_.doc["truncated"] = res.truncated;
    rep_.doc["clauses"] = cl;
    rep_.doc["soundness"] = {{"models_checked", sound.models_checked},
                             {"clauses_checked", sound.clauses_checked},
                             {"violations", sound.violations}};
    rep_.line(std::to_string(derived.size()) + " clauses after " + std::to_string(res.iterations) + " rounds" +
              (res.fixpoint ? " (fixpoint)" : res.truncated ? " (bound reached)" : ""));
    for (const auto& c : derived) rep_.line("  " + to_string(c, sig));
    rep_.line("soundness: " + std::to_string(sound.models_checked) + " pool models, " +
              std::to_string(sound.violations.size()) + " violations");
    for (const auto& v : sound.violations) rep_.line("  VIOLATION " + v);
    if (!sound.passed()) rep_.status = 1;
  }

  struct ModelAmbient {
    const ModelDoc* model;
    const SignatureEntry* sig;
    VarContext ctx;
    GeoPtr geo;
  };

  ModelAmbient model_ambient() {
    if (o_.model.empty()) throw Error(ErrorKind::Usage, "missing --model");
    if (o_.ctx.empty()) throw Error(ErrorKind::Usage, "missing --ctx");
    const auto& m = ws_.model(o_.model);
    const auto& se = ws_.signature_of(ws_.algebra(m.algebra));
    auto ctx = ws_.context(o_.ctx, *se.sig);
    rep_.doc["model"] = m.name;
    rep_.doc["ctx"] = ctx_json(ctx, *se.sig);
    return {&m, &se, ctx, make_geo(ctx, m.model->algebra)};
  }

  void query() {
    auto a = model_ambient();
    if (o_.formulas.size() != 1) throw Error(ErrorKind::Usage, "query takes one --formula");
    auto u = formula_arg(o_.formulas[0], *a.sig, a.ctx);
    rep_.doc["formula"] = to_string(u, *a.sig->sig, *a.sig->rels);
    rep_.line(to_string(u, *a.sig->sig, *a.sig->rels));
    put_variety("value", eval_formula(u, *a.model->model, a.geo));
  }

  void fo_variety_cmd() {
    auto a = model_ambient();
    std::vector<Formula> t;
    Json fs = Json::array();
    for (const auto& f : o_.formulas) {
      t.push_back(formula_arg(f, *a.sig, a.ctx));
      fs.push_back(to_string(t.back(), *a.sig->sig, *a.sig->rels));
    }
    rep_.doc["formulas"] = fs;
    put_variety("variety", fo_variety(t, *a.model->model, a.geo));
  }

  void check() {
    auto results = run_suite(o_.suite, o_.seed);
    Json arr = Json::array();
    for (const auto& r : results) {
      arr.push_back({{"suite", r.name}, {"checks", r.checks}, {"failures", r.failure_count}, {"examples", r.failures}});
      rep_.line(r.name + ": " + std::to_string(r.checks) + " checks, " + std::to_string(r.failure_count) + " failures");
      for (const auto& f : r.failures) rep_.line("  " + f);
      if (!r.passed()) rep_.status = 1;
    }
    rep_.doc["suites"] = arr;
  }

  // For each subset A of a small point space: is {h : A <= h} closed under
  // forall(Y)? Tabulates the subsets for which it is.
  void experiment_filter_closure() {
    auto g = cyclic_group(2);
    auto ctx = standard_context(*group_signature(), 2);
    auto geo = make_geo(ctx, g);
    std::size_t filters = 0, total = 0;
    Json hits = Json::array();
    for (unsigned mask = 0; mask < (1u << geo->size()); ++mask) {
      PointSet a(geo, false);
      for (std::size_t i = 0; i < geo->size(); ++i)
        if (mask >> i & 1) a.insert(i);
      ValueFamily up;
      for (unsigned m2 = 0; m2 < (1u << geo->size()); ++m2)
        if ((m2 & mask) == mask) {
          PointSet b(geo, false);
          for (std::size_t i = 0; i < geo->size(); ++i)
            if (m2 >> i & 1) b.insert(i);
          up.insert(b.bits());
        }
      ++total;
      if (is_filter(up, geo)) {
        ++filters;
        hits.push_back(variety_json(a));
      }
    }
    rep_.doc["space"] = "Hom(W({x, y}), Z2)";
    rep_.doc["subsets"] = total;
    rep_.doc["filters"] = filters;
    rep_.doc["filter_subsets"] = hits;
    rep_.line(std::to_string(filters) + " of " + std::to_string(total) +
              " subsets A give a filter {h : A <= h} in the value algebra");
  }

  // Compares first-order closures of A computed in G and in a subalgebra H
  // containing A's images, on sampled formulas.
  void experiment_submodel_closure() {
    Rng rng(o_.seed);
    auto rels = std::make_shared<RelSignature>();
    rels->add("P", {0});
    const auto& sig = *group_signature();
    auto ctx = standard_context(sig, 2);
    std::size_t compared = 0, differ = 0;
    for (int round = 0; round < 20; ++round) {
      auto g = pick(rng, 2) ? cyclic_group(4) : symmetric_group3();
      auto m = random_model(g, rels, rng);
      Point gen{static_cast<Element>(pick(rng, g->carrier_size(0)))};
      GeneratedSubalgebra h(g, standard_context(sig, 1), gen);
      auto sub = restrict_submodel(m, h);
      auto geo_g = make_geo(ctx, g);
      auto geo_h = make_geo(ctx, sub.algebra);
      PointSet a_h(geo_h, false);
      PointSet a_g(geo_g, false);
      for (std::size_t i = 0; i < geo_h->size(); ++i) {
        if (pick(rng, 2)) continue;
        a_h.insert(i);
        auto p = geo_h->space.point(i);
        Point q(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) q[k] = h.structure().member(0, p[k])[0];
        a_g.insert(geo_g->space.index(q));
      }
      for (int k = 0; k < 10; ++k) {
        auto u = random_formula(sig, *rels, ctx, {}, rng);
        ++compared;
        if (fo_closure_member(u, a_g, m) != fo_closure_member(u, a_h, sub)) ++differ;
      }
    }
    rep_.doc["compared"] = compared;
    rep_.doc["differ"] = differ;
    rep_.line(std::to_string(differ) + " of " + std::to_string(compared) +
              " sampled formulas are in exactly one of the two closures");
  }

  void experiment() {
    rep_.doc["experiment"] = o_.experiment;
    if (o_.experiment == "filter-closure") experiment_filter_closure();
    else if (o_.experiment == "submodel-closure") experiment_submodel_closure();
    else throw Error(ErrorKind::Usage, "experiments: filter-closure, submodel-closure");
  }

  Workspace& ws_;
  const Options& o_;
  Report rep_;
};

}  // namespace

CommandResult run_command(Workspace& ws, const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Equational geometry over finite algebras", "uag"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "random seed, echoed in every report");
  app.add_option("--depth", o.depth, "term depth bound");
  app.add_option("--cap", o.cap, "enumeration cap (overrides UAG_CAP)");
  app.add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--load", o.loads, "document file to load");

  auto amb = [&](CLI::App* s) {
    s->add_option("--algebra", o.algebra, "algebra name");
    s->add_option("--ctx", o.ctx, "variable context");
  };
  auto* p = app.add_subcommand("parse", "load documents and print them back");
  p->add_option("files", o.files, "document files");
  auto* e = app.add_subcommand("eval", "evaluate a term at a point");
  amb(e);
  e->add_option("--term", o.term);
  e->add_option("--point", o.point, "elements in context order, e.g. \"1 0\"");
  auto* v = app.add_subcommand("variety", "solutions of a pair set");
  amb(v);
  v->add_option("--pairs", o.pairs);
  auto* c = app.add_subcommand("closure", "closure of a pair set through its variety");
  amb(c);
  c->add_option("--pairs", o.pairs);
  auto* n = app.add_subcommand("nullsatz", "compare the closure with the preimage of the h-kernel");
  amb(n);
  n->add_option("--source", o.source, "algebra presenting the kernel");
  n->add_option("--point", o.point, "point of the source algebra");
  auto* pc = app.add_subcommand("point-closure", "closure of a single point");
  amb(pc);
  pc->add_option("--point", o.point);
  auto* vb = app.add_subcommand("verbal", "points whose image satisfies identities");
  amb(vb);
  vb->add_option("--pairs", o.pairs);
  auto* m = app.add_subcommand("morphism", "check a substitution maps one variety into another");
  amb(m);
  m->add_option("--pairs", o.pairs, "source pair set");
  m->add_option("--ctx2", o.ctx2, "target context");
  m->add_option("--pairs2", o.pairs2, "target pair set");
  m->add_option("--subst", o.subst, "target variables to source terms");
  auto* i = app.add_subcommand("iso", "search for an isomorphism of varieties");
  amb(i);
  i->add_option("--pairs", o.pairs);
  i->add_option("--ctx2", o.ctx2);
  i->add_option("--pairs2", o.pairs2);
  auto* q = app.add_subcommand("equiv", "geometric equivalence of two algebras");
  q->add_option("--g1", o.g1);
  q->add_option("--g2", o.g2);
  q->add_option("--ctx", o.ctx);
  q->add_option("--mode", o.mode, "exact or sampled");
  q->add_option("--samples", o.samples);
  auto* d = app.add_subcommand("derive", "bounded closure of a clause set");
  d->add_option("--clauses", o.clauses);
  d->add_option("--iterations", o.iterations);
  d->add_option("--width", o.width);
  d->add_option("--max-clauses", o.max_clauses);
  d->add_flag("--implicative", o.implicative, "u0 -> false gives u0 -> anything");
  d->add_option("--pool", o.pool, "groups, semilattices or algebra names");
  auto* qu = app.add_subcommand("query", "value set of a formula in a model");
  qu->add_option("--model", o.model);
  qu->add_option("--ctx", o.ctx);
  qu->add_option("--formula", o.formulas);
  auto* fv = app.add_subcommand("fo-variety", "common value set of formulas");
  fv->add_option("--model", o.model);
  fv->add_option("--ctx", o.ctx);
  fv->add_option("--formula", o.formulas);
  auto* ch = app.add_subcommand("check", "run an invariant suite");
  ch->add_option("--suite", o.suite, "terms, congruence, galois, closure, halmos or all");
  auto* ex = app.add_subcommand("experiment", "exploratory computations without claims");
  ex->add_option("name", o.experiment, "filter-closure or submodel-closure")->required();

  CommandResult res;
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& err) {
    std::ostringstream out, errs;
    int code = app.exit(err, out, errs);
    res.out = out.str();
    res.err = errs.str();
    res.status = code == 0 ? 0 : 2;
    return res;
  }

  std::string verb = app.get_subcommands().front()->get_name();
  try {
    std::optional<ScopedCap> cap;
    if (o.cap) cap.emplace(*o.cap);
    for (const auto& f : o.loads) ws.load_file(f);
    for (const auto& f : o.files) ws.load_file(f);
    Report r = Runner(ws, o).run(verb);
    res.out = r.render(o.format == "json" ? Format::Json : Format::Text);
    res.status = r.status;
  } catch (const Error& err) {
    res.err = std::string("error[") + error_kind_name(err.kind()) + "]: " + err.what() + "\n";
    res.status = 2;
  }
  return res;
}

}  // namespace uag
