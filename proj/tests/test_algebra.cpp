#include "doctest.h"
#include "helpers.hpp"
#include "uag/error.hpp"
#include "uag/random.hpp"

using namespace uag;
using testing::alg;
using testing::gp;
using testing::gt;

namespace {

// Every map a -> b (one-sorted) filtered by the operation tables.
std::vector<Hom> brute_homs(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  std::vector<Hom> out;
  std::size_t n = a.carrier_size(0), m = b.carrier_size(0);
  std::vector<Element> f(n, 0);
  while (true) {
    Hom h{{f}};
    if (is_hom(a, b, h)) out.push_back(h);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++f[k] < m) break;
      f[k] = 0;
      if (k == 0) return out;
    }
    if (n == 0) return out;
  }
}

}  // namespace

TEST_CASE("evaluation against hand computed values") {
  auto z4 = alg("Z4");
  auto ctx = testing::X2();
  Point p{3, 0};
  CHECK(eval(gt("mul(x, x)"), ctx, p, *z4) == 2);
  CHECK(eval(gt("e"), ctx, p, *z4) == 0);
  Point q{1, 2};
  CHECK(eval(gt("inv(mul(x, y))"), ctx, q, *z4) == 1);
}

TEST_CASE("point enumeration sizes") {
  CHECK(enumerate_points(testing::X2(), *alg("Z2")).size() == 4);
  CHECK(enumerate_points(testing::X1(), *alg("Z4")).size() == 4);
  auto trivial = cyclic_group(1);
  CHECK(enumerate_points(testing::X1(), *trivial).size() == 1);
  auto pts = enumerate_points(testing::X2(), *alg("Z2"));
  CHECK(pts[1] == Point{0, 1});  // first variable most significant
}

TEST_CASE("homomorphism enumeration matches brute force") {
  CHECK(enumerate_homs(*alg("Z4"), *alg("Z2")).size() == 2);
  CHECK(enumerate_homs(*alg("Z2"), *alg("Z2")).size() == 2);
  CHECK(enumerate_homs(*alg("S3"), *cyclic_group(1)).size() == 1);
  std::vector<AlgebraPtr> gs{alg("Z2"), alg("Z3"), alg("Z4"), alg("S3"), alg("Z2xZ2")};
  for (const auto& a : gs)
    for (const auto& b : gs) {
      auto fast = enumerate_homs(*a, *b);
      auto slow = brute_homs(*a, *b);
      CHECK_MESSAGE(fast == slow, a->name() << " -> " << b->name());
    }
  auto sl = all_semilattices(3);
  for (const auto& a : sl)
    for (const auto& b : sl) CHECK(enumerate_homs(*a, *b) == brute_homs(*a, *b));
}

TEST_CASE("hom extension from generated subalgebras") {
  auto z4 = alg("Z4");
  Element one = 1;
  auto h = subalgebra_generated(z4, std::span<const Element>(&one, 1));
  Element img1 = 1;
  auto ext = hom_extension(h, std::span<const Element>(&img1, 1), *alg("Z2"));
  REQUIRE(ext);
  CHECK(ext->map[0] == std::vector<Element>{0, 1, 0, 1});
  CHECK_FALSE(hom_extension(h, std::span<const Element>(&img1, 1), *alg("Z3")));
  auto id = hom_extension(h, std::span<const Element>(&one, 1), *z4);
  REQUIRE(id);
  CHECK(id->map[0] == std::vector<Element>{0, 1, 2, 3});
}

TEST_CASE("generated subalgebras and witnesses") {
  auto z4 = alg("Z4");
  Element two = 2;
  auto h = subalgebra_generated(z4, std::span<const Element>(&two, 1));
  CHECK(h.members(0) == std::vector<Element>{2, 0});
  CHECK(*h.witness(0, 2) == gt("x"));
  CHECK(*h.witness(0, 0) == gt("mul(x, x)"));
  Element one = 1;
  CHECK(subalgebra_generated(z4, std::span<const Element>(&one, 1)).members(0).size() == 4);
  auto empty = subalgebra_generated(alg("S3"), {});
  CHECK(empty.members(0) == std::vector<Element>{0});

  Rng rng(3);
  auto s3 = alg("S3");
  for (int i = 0; i < 30; ++i) {
    Point p = random_point(testing::X2(), *s3, rng);
    GeneratedSubalgebra sub(s3, testing::X2(), p);
    for (Element m : sub.members(0)) CHECK(eval(*sub.witness(0, m), testing::X2(), p, *s3) == m);
  }
}

TEST_CASE("products and quotients") {
  auto klein = alg("Z2xZ2");
  CHECK(klein->carrier_size(0) == 4);
  for (Element a = 0; a < 4; ++a)
    for (Element b = 0; b < 4; ++b) {
      Element args[] = {a, b};
      CHECK(klein->apply(0, args) == (a ^ b));
    }
  auto z4 = alg("Z4");
  Partition good{{{0, 1, 0, 1}}};
  auto q = quotient(*z4, good);
  CHECK(q->carrier_size(0) == 2);
  CHECK(enumerate_homs(*q, *alg("Z2")).size() == 2);
  Partition bad{{{0, 0, 1, 1}}};
  CHECK_FALSE(is_congruence(*z4, bad));
  try {
    quotient(*z4, bad);
    FAIL("quotient accepted a non-congruence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCongruence);
  }
  // canonical projection is a surjective hom with the input kernel
  Hom proj{{{0, 1, 0, 1}}};
  CHECK(is_hom(*z4, *q, proj));
  CHECK(kernel_partition(*z4, proj) == good);
}

TEST_CASE("identities and commutativity") {
  CHECK(satisfies_identity(*alg("Z2"), gp("mul(x, y)", "mul(y, x)")));
  CHECK_FALSE(satisfies_identity(*alg("Z4"), gp("mul(x, x)", "e")));
  auto ce = identity_counterexample(*alg("Z4"), gp("mul(x, x)", "e"));
  REQUIRE(ce);
  CHECK(ce->second == Point{1});
  CHECK(satisfies_identity(*alg("Z2"), gp("mul(x, x)", "e")));
  CHECK(is_commutative(*alg("Z2")));
  CHECK_FALSE(is_commutative(*alg("S3")));
  CHECK(is_commutative(*cyclic_group(1)));
  auto ring = alg("Z5R");
  auto pair = first_noncommuting_pair(*ring, std::vector<OpId>{0, 1});
  CHECK(pair);  // add and mul do not commute
}

TEST_CASE("substituted evaluation equals evaluation at the composed point") {
  const auto& sig = *group_signature();
  auto ctx = testing::X3();
  auto s3 = alg("S3");
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    auto s = random_substitution(sig, ctx, 2, rng);
    auto t = random_term(sig, ctx, 3, rng);
    Point p = random_point(ctx, *s3, rng);
    Point ps(ctx.size());
    for (std::size_t k = 0; k < ctx.size(); ++k) ps[k] = eval(s.image(ctx.var(k)), ctx, p, *s3);
    CHECK(eval(apply_subst(s, t), ctx, p, *s3) == eval(t, ctx, ps, *s3));
  }
}

TEST_CASE("small group and semilattice enumeration") {
  CHECK(all_groups(1).size() == 1);
  CHECK(all_groups(2).size() == 2);
  CHECK(all_groups(3).size() == 3);  // 3! / |Aut(Z3)|
  CHECK(all_semilattices(2).size() == 2);
  // oracle: symmetric idempotent associative tables on 3 points
  std::size_t count = 0;
  for (Element a = 0; a < 27; ++a) {
    Element t[9];
    for (int i = 0; i < 3; ++i) t[i * 3 + i] = i;
    Element v = a;
    t[1] = t[3] = v % 3;
    v /= 3;
    t[2] = t[6] = v % 3;
    v /= 3;
    t[5] = t[7] = v % 3;
    bool ok = true;
    for (int x = 0; x < 3 && ok; ++x)
      for (int y = 0; y < 3 && ok; ++y)
        for (int z = 0; z < 3 && ok; ++z) ok = t[t[x * 3 + y] * 3 + z] == t[x * 3 + t[y * 3 + z]];
    count += ok;
  }
  CHECK(all_semilattices(3).size() == count);
}

TEST_CASE("digest depends on tables") {
  CHECK(digest(*alg("Z4")) == digest(*cyclic_group(4)));
  CHECK(digest(*alg("Z4")) != digest(*alg("Z2xZ2")));
}
