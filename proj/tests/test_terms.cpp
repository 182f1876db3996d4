#include "doctest.h"
#include "helpers.hpp"
#include "uag/constants.hpp"
#include "uag/error.hpp"
#include "uag/random.hpp"

using namespace uag;
using testing::gt;

TEST_CASE("well_sorted accepts declared shapes and rejects the rest") {
  const auto& sig = *group_signature();
  auto ctx = testing::X2();
  CHECK(well_sorted(gt("mul(x, e)"), sig, ctx));
  auto bad = Term::app(*sig.find_op("mul"), {gt("x")}, 0);
  auto chk = well_sorted(bad, sig, ctx);
  CHECK_FALSE(chk);
  CHECK(chk.diagnostic.find("mul") != std::string::npos);
  CHECK_FALSE(well_sorted(Term::var("q", 0), sig, ctx));
  CHECK_THROWS_AS(Term::make(sig, "mul", {gt("x")}), Error);
}

TEST_CASE("substitution application") {
  const auto& sig = *group_signature();
  Substitution s;
  s.bind(gt("x"), gt("mul(x, y)"));
  CHECK(apply_subst(s, gt("inv(x)")) == gt("inv(mul(x, y))"));
  CHECK(apply_subst(Substitution{}, gt("mul(x, inv(y))")) == gt("mul(x, inv(y))"));
  Substitution c;
  c.bind(gt("x"), gt("e"));
  CHECK(apply_subst(c, gt("mul(x, x)")) == gt("mul(e, e)"));
  CHECK(to_string(apply_subst(c, gt("mul(x, x)")), sig) == "mul(e, e)");
}

TEST_CASE("composition laws") {
  Substitution s2, s1;
  s2.bind(gt("x"), gt("y"));
  s1.bind(gt("y"), gt("e"));
  CHECK(compose(s1, s2).image(gt("x")) == gt("e"));
  CHECK(compose(Substitution{}, s2) == s2);
  CHECK(compose(s2, Substitution{}) == s2);

  const auto& sig = *group_signature();
  auto ctx = testing::X3();
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    auto a = random_substitution(sig, ctx, 2, rng);
    auto b = random_substitution(sig, ctx, 2, rng);
    auto c = random_substitution(sig, ctx, 2, rng);
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    auto t = random_term(sig, ctx, 3, rng);
    CHECK(apply_subst(compose(a, b), t) == apply_subst(a, apply_subst(b, t)));
    CHECK(apply_subst(a, t).sort() == t.sort());
  }
}

TEST_CASE("subterm universe") {
  std::vector<Term> one{gt("mul(x, y)")};
  auto u = subterm_universe(one);
  REQUIRE(u.size() == 3);
  CHECK(u[0] == gt("mul(x, y)"));
  CHECK(u[1] == gt("x"));
  CHECK(u[2] == gt("y"));
  std::vector<Term> chain{gt("inv(inv(x))")};
  CHECK(subterm_universe(chain).size() == 3);
  std::vector<Term> leaf{gt("x")};
  CHECK(subterm_universe(leaf).size() == 1);
  CHECK(subterm_universe(u) == u);
}

TEST_CASE("term depth and enumeration order") {
  CHECK(gt("x").depth() == 0);
  CHECK(gt("e").depth() == 0);
  CHECK(gt("mul(x, inv(e))").depth() == 2);
  const auto& sig = *group_signature();
  auto terms = enumerate_terms(sig, testing::X1(), 1, 100);
  // depth 0: x, e; depth 1: mul over 2x2 arguments, inv over 2
  REQUIRE(terms.size() == 8);
  CHECK(terms[0] == gt("x"));
  CHECK(terms[1] == gt("e"));
  CHECK(terms[2] == gt("mul(x, x)"));
  CHECK(terms[6] == gt("inv(x)"));
  CHECK_THROWS_AS(enumerate_terms(sig, testing::X2(), 2, 10), Error);
}

TEST_CASE("adjoined constants tabulate every entry") {
  auto z2 = testing::alg("Z2");
  auto adj = adjoin_constants(*z2);
  CHECK(adj.signature->find_op("c0"));
  CHECK(adj.signature->find_op("c1"));
  // 4 mul + 2 inv + 1 e
  std::size_t expected = 0;
  for (OpId o = 0; o < group_signature()->num_ops(); ++o) expected += table_size(*z2, o);
  CHECK(expected == 7);
  CHECK(adj.ground_pairs.size() == expected);
  const auto& s = *adj.signature;
  auto want = canonical_pair(Term::make(s, "mul", {adj.constant_term(0, 1), adj.constant_term(0, 1)}),
                             adj.constant_term(0, 0));
  CHECK(std::any_of(adj.ground_pairs.begin(), adj.ground_pairs.end(),
                    [&](const TermPair& p) { return canonical_pair(p.first, p.second) == want; }));
  for (const auto& p : adj.ground_pairs) CHECK(satisfies_identity(*adj.algebra, p));

  auto z4 = adjoin_constants(*testing::alg("Z4"));
  std::size_t mul_pairs = 0;
  for (const auto& p : z4.ground_pairs)
    for (const auto* t : {&p.first, &p.second})
      if (!t->is_var() && z4.signature->op(t->op()).name == "mul") ++mul_pairs;
  CHECK(mul_pairs == 16);
}
