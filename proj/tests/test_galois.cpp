#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "uag/constants.hpp"
#include "uag/error.hpp"
#include "uag/random.hpp"

using namespace uag;
using testing::alg;
using testing::gp;
using testing::gt;

namespace {

std::vector<Point> pts(const Variety& v) { return v.points(); }

Variety from_bits(const GeoPtr& geo, unsigned mask) {
  Variety v(geo, false);
  for (std::size_t i = 0; i < geo->size(); ++i)
    if (mask >> i & 1) v.insert(i);
  return v;
}

}  // namespace

TEST_CASE("varieties of pair sets") {
  auto geo = make_geo(testing::X1(), alg("Z4"));
  auto v = variety_of(PairSet{gp("mul(x, x)", "e")}, geo);
  CHECK(pts(v) == std::vector<Point>{{0}, {2}});
  CHECK(variety_of(PairSet{}, geo).is_full());
  auto z2 = make_geo(testing::X1(), alg("Z2"));
  CHECK(variety_of(PairSet{gp("x", "e"), gp("x", "inv(mul(x, x))")}, z2).count() == 1);
}

TEST_CASE("congruences of varieties") {
  auto z2 = make_geo(testing::X1(), alg("Z2"));
  auto k = congruence_of(Variety::full(z2));
  CHECK(k.contains(gp("mul(x, x)", "e")));
  auto z4 = make_geo(testing::X1(), alg("Z4"));
  Variety single(z4, false);
  single.insert(0);
  CHECK(congruence_of(single).contains(gp("x", "e")));
  auto unit = congruence_of(Variety::empty(z4));
  CHECK(unit.contains(gp("x", "mul(x, x)")));
}

TEST_CASE("varieties of kernels") {
  auto sig = group_signature();
  auto z2 = make_geo(testing::X1(), alg("Z2"));
  auto z4 = make_geo(testing::X1(), alg("Z4"));
  auto k4 = kernel_of_point(sig, testing::X1(), alg("Z4"), Point{1});
  CHECK(variety_of_kernel(k4, z2).is_full());
  auto k2 = kernel_of_point(sig, testing::X1(), alg("Z2"), Point{1});
  CHECK(pts(variety_of_kernel(k2, z4)) == std::vector<Point>{{0}, {2}});
  // every group has a one-element subgroup
  CHECK(variety_of_kernel(KernelCongruence::unit(sig, testing::X1()), z4).count() == 1);
  // a semilattice without constants: the unit congruence still has points
  auto sl = make_geo(standard_context(*semilattice_signature(), 1), alg("SL2"));
  CHECK(variety_of_kernel(KernelCongruence::unit(semilattice_signature(), sl->ctx), sl).count() == 2);
}

TEST_CASE("closures") {
  auto z4 = make_geo(testing::X1(), alg("Z4"));
  auto c = closure_pairs(PairSet{gp("mul(x, x)", "e")}, z4);
  CHECK(c.contains(gp("mul(mul(x, x), x)", "x")));
  auto z2 = make_geo(testing::X1(), alg("Z2"));
  CHECK(closure_pairs(PairSet{}, z2).contains(gp("mul(x, x)", "e")));
  CHECK(closure_variety(Variety::full(z4)).is_full());
}

TEST_CASE("Galois laws exhaustively on tiny spaces") {
  auto geo = make_geo(testing::X2(), alg("Z2"));
  for (unsigned mask = 0; mask < 16; ++mask) {
    auto a = from_bits(geo, mask);
    auto cl = closure_variety(a);
    CHECK(a.subset_of(cl));
    CHECK(closure_variety(cl) == cl);
    // A' computed two ways: pairs in A' hold at every point of A
    auto k = congruence_of(a);
    for (const auto& t : enumerate_terms(*group_signature(), testing::X2(), 1, 1000))
      CHECK(k.contains(t, gt("e")) == testing::brute_in_congruence(canonical_pair(t, gt("e")), a));
    for (unsigned m2 = 0; m2 < 16; ++m2) {
      if ((mask & m2) != mask) continue;
      auto b = from_bits(geo, m2);
      CHECK(kernel_leq(congruence_of(b), congruence_of(a)));
    }
  }
}

TEST_CASE("variety by point filtering agrees with the direct oracle") {
  const auto& sig = *group_signature();
  Rng rng(9);
  std::vector<AlgebraPtr> gs{alg("Z2"), alg("Z4"), alg("S3")};
  for (int i = 0; i < 50; ++i) {
    auto geo = make_geo(testing::X2(), gs[pick(rng, gs.size())]);
    auto t = random_pairs(sig, geo->ctx, 1 + pick(rng, 3), 3, rng);
    CHECK(variety_of(t, geo).indices() == testing::brute_variety(t, geo));
  }
}

TEST_CASE("two routes to a kernel variety agree") {
  auto sig = group_signature();
  Rng rng(21);
  std::vector<AlgebraPtr> gs{alg("Z2"), alg("Z3"), alg("Z4"), alg("S3")};
  for (int i = 0; i < 40; ++i) {
    auto h = gs[pick(rng, gs.size())];
    auto geo = make_geo(testing::X2(), gs[pick(rng, gs.size())]);
    auto k = kernel_of_point(sig, geo->ctx, h, random_point(geo->ctx, *h, rng));
    CHECK(variety_of_kernel(k, geo) == variety_of_kernel_by_homs(k, geo));
    // and through a finite presentation of the kernel
    CHECK(variety_of(presentation(k), geo) == variety_of_kernel(k, geo));
  }
}

TEST_CASE("Nullstellensatz desk instances") {
  auto sig = group_signature();
  auto z2 = make_geo(testing::X1(), alg("Z2"));
  auto k = kernel_of_point(sig, testing::X1(), alg("Z4"), Point{1});
  auto rep = nullstellensatz_check(k, z2);
  CHECK(rep.passed());
  CHECK(kernel_equal(rep.by_points, kernel_of_point(sig, testing::X1(), alg("Z2"), Point{1})));
  auto self = nullstellensatz_check(kernel_of_point(sig, testing::X1(), alg("Z2"), Point{1}), z2);
  CHECK(self.passed());
  auto unit = nullstellensatz_check(KernelCongruence::unit(sig, testing::X1()), z2);
  CHECK(unit.passed());
}

TEST_CASE("verbal varieties") {
  auto s3 = make_geo(testing::X2(), alg("S3"));
  auto v = verbal_variety(PairSet{gp("mul(x, y)", "mul(y, x)")}, s3);
  std::size_t expected = 0;
  for (std::size_t i = 0; i < s3->size(); ++i) {
    auto p = s3->space.point(i);
    GeneratedSubalgebra h(s3->g, s3->ctx, p);
    bool abelian = satisfies_identity(*h.algebra(), gp("mul(x, y)", "mul(y, x)"));
    CHECK(v.contains(i) == abelian);
    expected += abelian;
  }
  CHECK(v.count() == expected);
  CHECK(v.count() == 18);  // pairs generating a cyclic subgroup
  auto z2 = make_geo(testing::X2(), alg("Z2"));
  CHECK(verbal_variety(PairSet{gp("mul(x, y)", "mul(y, x)")}, z2).is_full());
  CHECK(verbal_variety(PairSet{gp("x", "e")}, s3).count() == 1);
}

TEST_CASE("point closures") {
  auto z4 = make_geo(testing::X1(), alg("Z4"));
  CHECK(point_closure(Point{1}, z4).is_full());
  CHECK(pts(point_closure(Point{0}, z4)) == std::vector<Point>{{0}});
  for (Element a = 0; a < 4; ++a) CHECK(point_closure(Point{a}, z4).contains(Point{a}));
}

TEST_CASE("End action on varieties and pair sets") {
  auto z4 = make_geo(testing::X1(), alg("Z4"));
  Substitution sq;
  sq.bind(gt("x"), gt("mul(x, x)"));
  auto a = variety_of(PairSet{gp("x", "e")}, z4);
  CHECK(pts(act_endo_variety(sq, a)) == std::vector<Point>{{0}, {2}});
  CHECK(act_endo_variety(Substitution{}, a) == a);

  const auto& sig = *group_signature();
  Rng rng(33);
  std::vector<AlgebraPtr> gs{alg("Z2"), alg("Z4"), alg("S3")};
  for (int i = 0; i < 60; ++i) {
    auto geo = make_geo(testing::X2(), gs[pick(rng, gs.size())]);
    auto t = random_pairs(sig, geo->ctx, 1 + pick(rng, 2), 2, rng);
    auto s = random_substitution(sig, geo->ctx, 2, rng);
    CHECK(variety_of(act_endo_pairs(s, t), geo) == act_endo_variety(s, variety_of(t, geo)));
  }
  // a variable swap maps closed sets to closed sets
  Substitution swap;
  swap.bind(gt("x"), gt("y")).bind(gt("y"), gt("x"));
  auto geo = make_geo(testing::X2(), alg("Z4"));
  for (const auto& c : closed_varieties(geo)) {
    auto s = act_endo_variety(swap, c);
    CHECK(closure_variety(s) == s);
  }
}

TEST_CASE("morphisms of varieties") {
  VarContext xs{{"x", 0}};
  VarContext ys{{"y", 0}};
  auto a = Variety::full(make_geo(xs, alg("Z4")));
  auto b = variety_of(PairSet{gp("mul(y, y)", "e")}, make_geo(ys, alg("Z4")));
  Substitution s;
  s.bind(gt("y"), gt("mul(x, x)"));
  CHECK(morphism_check(s, a, b));
  Substitution id;
  id.bind(gt("y"), gt("x"));
  Point failing;
  CHECK_FALSE(morphism_check(id, a, b, &failing));
  CHECK(failing == Point{1});
}

TEST_CASE("isomorphism of varieties") {
  auto z2 = alg("Z2");
  auto diag = variety_of(PairSet{gp("x", "y")}, make_geo(testing::X2(), z2));
  VarContext zs{{"z", 0}};
  auto line = Variety::full(make_geo(zs, z2));
  auto iso = variety_iso(diag, line);
  REQUIRE(iso);
  CHECK(verify_variety_iso(*iso, diag, line));
  CHECK_FALSE(variety_iso(Variety::full(make_geo(testing::X2(), z2)), Variety::empty(make_geo(testing::X2(), z2))));
  auto self = variety_iso(diag, diag);
  REQUIRE(self);
  CHECK(verify_variety_iso(*self, diag, diag));
}

TEST_CASE("geometric equivalence desk instances") {
  auto ctx = testing::X1();
  auto v = geometric_equiv(alg("Z2"), alg("Z4"), ctx);
  auto* ne = std::get_if<NotEquivalent>(&v.value);
  REQUIRE(ne);
  CHECK(verify_not_equivalent(*ne, alg("Z2"), alg("Z4"), ctx));
  // the classic separating pair also separates with the empty witness
  NotEquivalent classic{PairSet{}, gp("mul(x, x)", "e"), 1};
  CHECK(verify_not_equivalent(classic, alg("Z2"), alg("Z4"), ctx));

  CHECK(std::holds_alternative<Equivalent>(geometric_equiv(alg("Z2"), alg("Z2xZ2"), ctx).value));
  CHECK(std::holds_alternative<Equivalent>(geometric_equiv(alg("Z4"), alg("Z2xZ4"), ctx).value));
  CHECK(std::holds_alternative<NotEquivalent>(geometric_equiv(alg("Z2xZ2"), alg("Z4"), ctx).value));
}

TEST_CASE("sampled equivalence is honest") {
  EquivOptions opts;
  opts.mode = EquivMode::Sampled;
  opts.samples = 40;
  opts.depth = 2;
  auto ctx = testing::X1();
  auto same = geometric_equiv(alg("Z2"), alg("Z2xZ2"), ctx, opts);
  auto* eq = std::get_if<Equivalent>(&same.value);
  REQUIRE(eq);
  CHECK_FALSE(eq->exact);
  auto diff = geometric_equiv(alg("Z2"), alg("Z4"), ctx, opts);
  auto* ne = std::get_if<NotEquivalent>(&diff.value);
  REQUIRE(ne);
  CHECK(verify_not_equivalent(*ne, alg("Z2"), alg("Z4"), ctx));
}

TEST_CASE("same identities") {
  CHECK(same_identities(*alg("Z2"), *alg("Z2xZ2"), testing::X2(), 2));
  TermPair w;
  CHECK_FALSE(same_identities(*alg("Z2"), *alg("Z4"), testing::X1(), 2, &w));
  CHECK(satisfies_identity(*alg("Z2"), w) != satisfies_identity(*alg("Z4"), w));
}

TEST_CASE("pointwise closure of ring varieties") {
  auto ring = alg("Z5R");
  const auto& rs = *ring_signature();
  auto ctx = standard_context(rs, 2);
  auto geo = make_geo(ctx, ring);
  auto rt = [&](std::string_view s) { return testing::term(rs, s); };
  auto parabola = variety_of(PairSet{canonical_pair(rt("mul(y, y)"), rt("x"))}, geo);
  std::vector<OpId> mul_one{*rs.find_op("mul"), *rs.find_op("one")};
  CHECK(pointwise_closed(parabola, mul_one));
  auto shifted = variety_of(PairSet{canonical_pair(rt("mul(y, y)"), rt("mul(two, x)"))}, geo);
  CHECK_FALSE(pointwise_closed(shifted, mul_one));
  auto line = variety_of(PairSet{canonical_pair(rt("add(x, y)"), rt("zero"))}, geo);
  std::vector<OpId> add_zero{*rs.find_op("add"), *rs.find_op("zero")};
  CHECK(pointwise_closed(line, add_zero));
  std::vector<OpId> add_mul{*rs.find_op("add"), *rs.find_op("mul")};
  CHECK_THROWS_AS(pointwise_closed(line, add_mul), Error);
}

TEST_CASE("faithful solvability over adjoined constants") {
  auto z2 = alg("Z2");
  auto adj = adjoin_constants(*z2);
  auto c0 = adj.constant_term(0, 0);
  auto c1 = adj.constant_term(0, 1);
  CHECK(faithful_solvable(PairSet{canonical_pair(c0, c1)}, *z2, {}).verdict == Faithful::NotFaithful);
  CHECK(faithful_solvable(PairSet{canonical_pair(Term::var("x", 0), c1)}, *z2, {}).verdict ==
        Faithful::FaithfulGround);
  // x = c1 and mul(x, x) = x force c1 = c0 using the table of Z2
  const auto& s = *adj.signature;
  auto x = Term::var("x", 0);
  PairSet t{canonical_pair(x, c1), canonical_pair(Term::make(s, "mul", {x, x}), x)};
  CHECK(faithful_solvable(t, *z2, {}).verdict == Faithful::NotFaithful);
  // inv(x) = x * c1 is harmless without identities, fatal with x*c0 = x instances
  PairSet u{canonical_pair(Term::make(s, "mul", {x, c0}), c1)};
  CHECK(faithful_solvable(u, *z2, {}).verdict == Faithful::FaithfulGround);
  PairSet inst{canonical_pair(Term::make(s, "mul", {x, c0}), x), canonical_pair(x, c0)};
  CHECK(faithful_solvable(u, *z2, inst).verdict == Faithful::NotFaithful);
}
