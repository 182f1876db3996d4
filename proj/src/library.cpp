#include "uag/library.hpp"

#include <array>

#include "uag/error.hpp"

namespace uag {

SignaturePtr group_signature() {
  static const SignaturePtr sig = [] {
    auto s = std::make_shared<Signature>();
    SortId g = s->add_sort("g");
    s->add_op("mul", {g, g}, g);
    s->add_op("inv", {g}, g);
    s->add_op("e", {}, g);
    return SignaturePtr(s);
  }();
  return sig;
}

SignaturePtr semilattice_signature() {
  static const SignaturePtr sig = [] {
    auto s = std::make_shared<Signature>();
    SortId t = s->add_sort("s");
    s->add_op("meet", {t, t}, t);
    return SignaturePtr(s);
  }();
  return sig;
}

SignaturePtr ring_signature() {
  static const SignaturePtr sig = [] {
    auto s = std::make_shared<Signature>();
    SortId r = s->add_sort("r");
    s->add_op("add", {r, r}, r);
    s->add_op("mul", {r, r}, r);
    s->add_op("neg", {r}, r);
    s->add_op("zero", {}, r);
    s->add_op("one", {}, r);
    s->add_op("two", {}, r);
    return SignaturePtr(s);
  }();
  return sig;
}

AlgebraPtr cyclic_group(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Invalid, "cyclic group of order 0");
  std::vector<Element> mul, inv;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul.push_back(static_cast<Element>((a + b) % n));
  for (std::size_t a = 0; a < n; ++a) inv.push_back(static_cast<Element>((n - a) % n));
  return std::make_shared<const FiniteAlgebra>(group_signature(), std::vector<std::size_t>{n},
                                               std::vector<std::vector<Element>>{mul, inv, {0}},
                                               "Z" + std::to_string(n));
}

AlgebraPtr symmetric_group3() {
  // Permutations of {0,1,2} in lexicographic order of their images.
  std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto index = [&](const std::array<int, 3>& p) {
    for (std::size_t i = 0; i < perms.size(); ++i)
      if (perms[i] == p) return static_cast<Element>(i);
    return Element{0};
  };
  std::vector<Element> mul, inv;
  for (const auto& a : perms)
    for (const auto& b : perms) {
      std::array<int, 3> c{};  // apply b first, then a
      for (int i = 0; i < 3; ++i) c[i] = a[b[i]];
      mul.push_back(index(c));
    }
  for (const auto& a : perms) {
    std::array<int, 3> c{};
    for (int i = 0; i < 3; ++i) c[a[i]] = i;
    inv.push_back(index(c));
  }
  return std::make_shared<const FiniteAlgebra>(group_signature(), std::vector<std::size_t>{6},
                                               std::vector<std::vector<Element>>{mul, inv, {0}}, "S3");
}

AlgebraPtr semilattice2() {
  return std::make_shared<const FiniteAlgebra>(semilattice_signature(), std::vector<std::size_t>{2},
                                               std::vector<std::vector<Element>>{{0, 0, 0, 1}}, "SL2");
}

AlgebraPtr zn_ring(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::Invalid, "ring Z/n needs n >= 3 for the constant two");
  std::vector<Element> add, mul, neg;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      add.push_back(static_cast<Element>((a + b) % n));
      mul.push_back(static_cast<Element>((a * b) % n));
    }
  for (std::size_t a = 0; a < n; ++a) neg.push_back(static_cast<Element>((n - a) % n));
  return std::make_shared<const FiniteAlgebra>(ring_signature(), std::vector<std::size_t>{n},
                                               std::vector<std::vector<Element>>{add, mul, neg, {0}, {1}, {2}},
                                               "Z" + std::to_string(n) + "R");
}

std::optional<AlgebraPtr> builtin_algebra(std::string_view name) {
  if (name == "Z2") return cyclic_group(2);
  if (name == "Z3") return cyclic_group(3);
  if (name == "Z4") return cyclic_group(4);
  if (name == "Z5") return cyclic_group(5);
  if (name == "S3") return symmetric_group3();
  if (name == "Z2xZ2" || name == "Z2xZ4") {
    std::vector<AlgebraPtr> f{cyclic_group(2), cyclic_group(name == "Z2xZ2" ? 2 : 4)};
    return product(f, std::string(name));
  }
  if (name == "SL2") return semilattice2();
  if (name == "Z5R") return zn_ring(5);
  return std::nullopt;
}

std::vector<std::string> builtin_algebra_names() {
  return {"Z2", "Z3", "Z4", "Z5", "S3", "Z2xZ2", "Z2xZ4", "SL2", "Z5R"};
}

VarContext standard_context(const Signature& sig, std::size_t n) {
  if (sig.num_sorts() == 0) throw Error(ErrorKind::Invalid, "signature without sorts");
  static const char* names[] = {"x", "y", "z"};
  VarContext ctx;
  for (std::size_t i = 0; i < n; ++i) ctx.add(n <= 3 ? names[i] : "x" + std::to_string(i + 1), 0);
  return ctx;
}

std::optional<VarContext> builtin_context(std::string_view name, const Signature& sig) {
  if (name == "X1") return standard_context(sig, 1);
  if (name == "X2") return standard_context(sig, 2);
  if (name == "X3") return standard_context(sig, 3);
  return std::nullopt;
}

namespace {

// Calls f(table) for every table in {0..n-1}^(n*n) with the given fixed
// entries (value < n) and free entries (value == n).
template <class F>
void for_each_table(std::size_t n, std::vector<Element> table, F&& f) {
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] == n) {
      free.push_back(i);
      table[i] = 0;
    }
  while (true) {
    f(table);
    std::size_t k = free.size();
    while (true) {
      if (k == 0) return;
      --k;
      if (++table[free[k]] < n) break;
      table[free[k]] = 0;
    }
  }
}

bool associative(std::size_t n, const std::vector<Element>& t) {
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (t[t[a * n + b] * n + c] != t[a * n + t[b * n + c]]) return false;
  return true;
}

}  // namespace

std::vector<AlgebraPtr> all_groups(std::size_t n) {
  std::vector<AlgebraPtr> out;
  if (n == 0) return out;
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<Element> tmpl(n * n, static_cast<Element>(n));
    for (std::size_t a = 0; a < n; ++a) {
      tmpl[e * n + a] = static_cast<Element>(a);
      tmpl[a * n + e] = static_cast<Element>(a);
    }
    for_each_table(n, tmpl, [&](const std::vector<Element>& t) {
      if (!associative(n, t)) return;
      std::vector<Element> inv(n);
      for (std::size_t a = 0; a < n; ++a) {
        bool found = false;
        for (std::size_t b = 0; b < n && !found; ++b)
          if (t[a * n + b] == e && t[b * n + a] == e) {
            inv[a] = static_cast<Element>(b);
            found = true;
          }
        if (!found) return;
      }
      out.push_back(std::make_shared<const FiniteAlgebra>(
          group_signature(), std::vector<std::size_t>{n},
          std::vector<std::vector<Element>>{t, inv, {static_cast<Element>(e)}},
          "G" + std::to_string(n) + "_" + std::to_string(out.size())));
    });
  }
  return out;
}

std::vector<AlgebraPtr> all_semilattices(std::size_t n) {
  std::vector<AlgebraPtr> out;
  if (n == 0) return out;
  std::vector<Element> tmpl(n * n, static_cast<Element>(n));
  for (std::size_t a = 0; a < n; ++a) tmpl[a * n + a] = static_cast<Element>(a);
  for_each_table(n, tmpl, [&](const std::vector<Element>& t) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (t[a * n + b] != t[b * n + a]) return;
    if (!associative(n, t)) return;
    out.push_back(std::make_shared<const FiniteAlgebra>(semilattice_signature(), std::vector<std::size_t>{n},
                                                        std::vector<std::vector<Element>>{t},
                                                        "L" + std::to_string(n) + "_" + std::to_string(out.size())));
  });
  return out;
}

}  // namespace uag
