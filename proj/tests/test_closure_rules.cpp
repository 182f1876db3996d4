#include "doctest.h"
#include "helpers.hpp"
#include "uag/closure_rules.hpp"
#include "uag/error.hpp"
#include "uag/random.hpp"

using namespace uag;
using testing::alg;
using testing::gp;
using testing::gt;

namespace {

std::vector<AlgebraPtr> group_pool() {
  std::vector<AlgebraPtr> pool;
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto& g : all_groups(n)) pool.push_back(g);
  return pool;
}

}  // namespace

TEST_CASE("clause validity in finite algebras") {
  CHECK(holds_clause(*alg("Z2"), Clause::pseudo({gp("x", "e"), gp("mul(x, x)", "e")})));
  auto cong = Clause::quasi({gp("x", "y")}, gp("mul(x, z)", "mul(y, z)"));
  for (const auto& g : {alg("Z2"), alg("Z4"), alg("S3")}) CHECK(holds_clause(*g, cong));
  CHECK_FALSE(holds_clause(*alg("Z4"), Clause::identity(gt("mul(x, x)"), gt("e"))));
  CHECK(holds_clause(*alg("Z2"), Clause::identity(gt("mul(x, x)"), gt("e"))));
  // cancellation: mul(x, y) = mul(x, z) -> y = z
  CHECK(holds_clause(*alg("S3"), Clause::quasi({gp("mul(x, y)", "mul(x, z)")}, gp("y", "z"))));
  CHECK_FALSE(holds_clause(*alg("SL2"), Clause::quasi({canonical_pair(testing::term(*semilattice_signature(),
                                                                                     "meet(x, y)"),
                                                                       testing::term(*semilattice_signature(),
                                                                                     "meet(x, z)"))},
                                                      canonical_pair(testing::term(*semilattice_signature(), "y"),
                                                                     testing::term(*semilattice_signature(), "z")))));
  // x != e or x = e holds everywhere, x != e alone does not
  CHECK(holds_clause(*alg("Z4"), Clause::universal({gp("x", "e")}, {gp("x", "e")})));
  CHECK_FALSE(holds_clause(*alg("Z4"), Clause::universal({}, {gp("x", "e")})));
  CHECK(holds_clause(*alg("Z2"), Clause::universal({gp("x", "e")}, {gp("x", "inv(x)"), gp("mul(x, x)", "x")})));
}

TEST_CASE("clause normalization and shape") {
  auto c = Clause::pseudo({gp("y", "x"), gp("x", "y"), gp("x", "e")});
  CHECK(c.positives.size() == 2);
  CHECK_THROWS_AS(Clause::pseudo({}), Error);
  CHECK(Clause::universal({gp("x", "y")}, {gp("x", "y")}).is_tautology());
  CHECK(Clause::quasi({gp("x", "y")}, gp("x", "y")).is_tautology());
  CHECK_FALSE(Clause::identity(gt("x"), gt("e")).is_tautology());
  auto q = Clause::quasi({gp("x", "y"), gp("y", "z")}, gp("x", "z"));
  CHECK(to_string(q, *group_signature()) == "x = y & y = z -> x = z");
  CHECK(q.antecedent().size() == 2);
  CHECK(q.consequent() == gp("x", "z"));
  CHECK(Clause::quasi_false({gp("x", "e")}).positives.empty());
}

TEST_CASE("rho membership") {
  CHECK(rho_membership(gp("x", "z"), PairSet{gp("x", "y"), gp("y", "z")}));
  CHECK_FALSE(rho_membership(gp("x", "z"), PairSet{gp("x", "y")}));
  CHECK(rho_membership(gp("mul(mul(x, y), z)", "mul(e, z)"), PairSet{gp("mul(x, y)", "e")}));
  CHECK(rho_membership(gp("x", "x"), PairSet{}));
}

TEST_CASE("composition membership for pseudoidentities") {
  std::vector<Clause> chain{Clause::pseudo({gp("x", "y")}), Clause::pseudo({gp("y", "z")})};
  CHECK(circ_pseudo_member(Clause::pseudo({gp("x", "z")}), chain));
  std::vector<Clause> wide{Clause::pseudo({gp("x", "y"), gp("z", "e")})};
  CHECK_FALSE(circ_pseudo_member(Clause::pseudo({gp("x", "y")}), wide));
  CHECK(circ_pseudo_member(Clause::pseudo({gp("x", "y"), gp("z", "e")}), wide));
  std::vector<Clause> shared{Clause::pseudo({gp("x", "e"), gp("y", "z")}), Clause::pseudo({gp("x", "e")})};
  CHECK(circ_pseudo_member(Clause::pseudo({gp("x", "e")}), shared));
}

TEST_CASE("composition membership for universal clauses") {
  std::vector<Clause> taut{Clause::universal({gp("x", "y")}, {gp("x", "y")})};
  CHECK(circ_universal_member(Clause::universal({gp("x", "y")}, {gp("x", "y"), gp("z", "e")}), taut));
  std::vector<Clause> us{Clause::universal({gp("x", "y")}, {})};
  CHECK_FALSE(circ_universal_member(Clause::universal({}, {gp("z", "e")}), us));
  // resolution: (x = y or z = e) with (x != y or z = inv(z)) gives z = e or z = inv(z)
  std::vector<Clause> res{Clause::universal({gp("x", "y"), gp("z", "e")}, {}),
                          Clause::universal({gp("z", "inv(z)")}, {gp("x", "y")})};
  CHECK(circ_universal_member(Clause::universal({gp("z", "e"), gp("z", "inv(z)")}, {}), res));
  CHECK_FALSE(circ_universal_member(Clause::universal({gp("z", "e")}, {}), res));
}

TEST_CASE("universal membership with no negatives matches pseudo membership") {
  const auto& sig = *group_signature();
  auto ctx = testing::X3();
  Rng rng(77);
  for (int i = 0; i < 150; ++i) {
    std::vector<Clause> us;
    std::size_t r = 1 + pick(rng, 3);
    for (std::size_t k = 0; k < r; ++k) us.push_back(random_clause(ClauseKind::Pseudo, sig, ctx, 1, 2, rng));
    auto u = random_clause(ClauseKind::Pseudo, sig, ctx, 1, 3, rng);
    std::vector<Clause> as_universal;
    for (const auto& c : us) as_universal.push_back(Clause::universal(c.positives, {}));
    CHECK(circ_pseudo_member(u, us) == circ_universal_member(Clause::universal(u.positives, {}), as_universal));
    // a wider candidate can only gain members
    if (circ_pseudo_member(u, us)) {
      auto wider = u.positives;
      wider.push_back(random_pair(sig, ctx, 1, rng));
      CHECK(circ_pseudo_member(Clause::pseudo(wider), us));
    }
  }
}

TEST_CASE("composition members are consequences") {
  const auto& sig = *group_signature();
  auto ctx = testing::X2();
  auto pool = group_pool();
  Rng rng(3);
  std::size_t members = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Clause> us;
    for (int k = 0; k < 2; ++k) us.push_back(random_clause(ClauseKind::Universal, sig, ctx, 1, 2, rng));
    auto u = random_clause(ClauseKind::Universal, sig, ctx, 1, 3, rng);
    if (!circ_universal_member(u, us)) continue;
    ++members;
    for (const auto& g : pool)
      if (holds_clause(*g, us[0]) && holds_clause(*g, us[1])) CHECK(holds_clause(*g, u));
  }
  CHECK(members > 0);
}

TEST_CASE("identity saturation") {
  const auto& sig = *group_signature();
  auto assoc = Clause::identity(gt("mul(mul(x, y), z)"), gt("mul(x, mul(y, z))"));
  auto res = derive_closure(ClauseKind::Identity, {assoc}, sig, {.max_iterations = 1});
  CHECK(res.clauses.count(assoc));
  CHECK(res.clauses.count(Clause::identity(gt("mul(mul(e, y), z)"), gt("mul(e, mul(y, z))"))));
  CHECK(res.clauses.count(Clause::identity(gt("mul(mul(y, y), z)"), gt("mul(y, mul(y, z))"))));
  // depth 3 instances are outside the bound
  for (const auto& c : res.clauses) CHECK(c.depth() <= 2);

  auto comm = Clause::identity(gt("mul(x, y)"), gt("mul(y, x)"));
  auto two = derive_closure(ClauseKind::Identity, {comm}, sig, {.max_iterations = 2});
  CHECK(two.clauses.count(Clause::identity(gt("inv(mul(x, y))"), gt("inv(mul(y, x))"))));
  auto rep = soundness_check(std::vector<Clause>(two.clauses.begin(), two.clauses.end()), {comm}, group_pool());
  CHECK(rep.passed());
  CHECK(rep.models_checked > 0);
}

TEST_CASE("saturation is inflationary and stable at fixed bounds") {
  const auto& sig = *group_signature();
  SaturationBounds b{.max_iterations = 2, .max_clauses = 300};
  std::vector<Clause> t{Clause::identity(gt("mul(x, x)"), gt("e"))};
  auto r1 = derive_closure(ClauseKind::Identity, t, sig, b);
  for (const auto& c : t) CHECK(r1.clauses.count(c));
  auto r2 = derive_closure(ClauseKind::Identity, t, sig, b);
  CHECK(r1.clauses == r2.clauses);
  CHECK_THROWS_AS(derive_closure(ClauseKind::Identity, t, sig, {.max_depth = 0}), Error);
  CHECK_THROWS_AS(derive_closure(ClauseKind::Pseudo, t, sig), Error);
}

TEST_CASE("quasi-identity rules") {
  const auto& sig = *group_signature();
  std::vector<Clause> t{Clause::quasi({gp("x", "y"), gp("y", "z")}, gp("x", "z"))};
  auto res = derive_closure(ClauseKind::Quasi, t, sig, {.max_iterations = 1, .max_clauses = 5000});
  CHECK(res.clauses.count(Clause::quasi({gp("x", "y"), gp("y", "z")}, gp("x", "y"))));
  CHECK(res.clauses.count(Clause::quasi({gp("x", "y"), gp("y", "z")}, gp("inv(x)", "inv(y)"))));

  std::vector<Clause> chain{Clause::quasi({gp("x", "e")}, gp("y", "z")), Clause::quasi({gp("x", "e")}, gp("z", "e"))};
  auto r3 = derive_closure(ClauseKind::Quasi, chain, sig, {.max_iterations = 1, .max_clauses = 5000});
  CHECK(r3.clauses.count(Clause::quasi({gp("x", "e")}, gp("y", "e"))));

  // cut: u0 -> (x = e) and (x = e -> y = e) give u0 -> (y = e)
  std::vector<Clause> cut{Clause::quasi({gp("z", "e")}, gp("x", "e")), Clause::quasi({gp("x", "e")}, gp("y", "e"))};
  auto r5 = derive_closure(ClauseKind::Quasi, cut, sig, {.max_iterations = 1, .max_clauses = 5000});
  CHECK(r5.clauses.count(Clause::quasi({gp("z", "e")}, gp("y", "e"))));

  std::vector<Clause> f{Clause::quasi_false({gp("mul(x, y)", "e")})};
  auto off = derive_closure(ClauseKind::Quasi, f, sig, {.max_iterations = 1});
  CHECK_FALSE(off.clauses.count(Clause::quasi({gp("mul(x, y)", "e")}, gp("x", "y"))));
  auto on = derive_closure(ClauseKind::Quasi, f, sig, {.max_iterations = 1, .implicative = true});
  CHECK(on.clauses.count(Clause::quasi({gp("mul(x, y)", "e")}, gp("x", "y"))));
}

TEST_CASE("pseudo and universal saturation stay sound") {
  const auto& sig = *group_signature();
  auto pool = group_pool();
  std::vector<Clause> t{Clause::pseudo({gp("x", "e"), gp("mul(x, x)", "e")})};
  SaturationBounds b{.max_iterations = 2, .max_clauses = 300, .circ_pool = 8};
  auto res = derive_closure(ClauseKind::Pseudo, t, sig, b);
  CHECK(res.clauses.size() > 1);
  CHECK(soundness_check(std::vector<Clause>(res.clauses.begin(), res.clauses.end()), t, pool).passed());

  std::vector<Clause> u{Clause::universal({gp("mul(x, y)", "mul(y, x)")}, {gp("x", "e")})};
  auto ru = derive_closure(ClauseKind::Universal, u, sig, b);
  CHECK(ru.clauses.size() > 1);
  CHECK(soundness_check(std::vector<Clause>(ru.clauses.begin(), ru.clauses.end()), u, pool).passed());
}

TEST_CASE("soundness check catches an injected non-consequence") {
  auto comm = Clause::identity(gt("mul(x, y)"), gt("mul(y, x)"));
  std::vector<Clause> derived{comm, Clause::identity(gt("mul(x, x)"), gt("e"))};
  auto rep = soundness_check(derived, {comm}, {alg("Z2"), alg("Z4"), alg("Z3")});
  CHECK(rep.models_checked == 3);
  CHECK(rep.violations.size() == 2);  // Z3 and Z4
  CHECK_FALSE(rep.passed());
}
