#include "uag/algebra.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "uag/error.hpp"

namespace uag {

namespace {

std::size_t args_count(const Signature& sig, const std::vector<std::size_t>& carrier, OpId op) {
  std::size_t n = 1;
  for (SortId s : sig.op(op).args) n = saturating_mul(n, carrier[s]);
  return n;
}

}  // namespace

FiniteAlgebra::FiniteAlgebra(SignaturePtr sig, std::vector<std::size_t> carrier,
                             std::vector<std::vector<Element>> tables, std::string name)
    : sig_(std::move(sig)), carrier_(std::move(carrier)), tables_(std::move(tables)), name_(std::move(name)) {
  if (!sig_) throw Error(ErrorKind::Invalid, "algebra without signature");
  const std::string who = name_.empty() ? std::string("algebra") : "algebra '" + name_ + "'";
  if (carrier_.size() != sig_->num_sorts())
    throw Error(ErrorKind::Arity, who + " declares " + std::to_string(carrier_.size()) + " carriers for " +
                                      std::to_string(sig_->num_sorts()) + " sorts");
  if (tables_.size() != sig_->num_ops())
    throw Error(ErrorKind::Arity, who + " has " + std::to_string(tables_.size()) + " tables for " +
                                      std::to_string(sig_->num_ops()) + " operations");
  for (OpId o = 0; o < sig_->num_ops(); ++o) {
    const OpDecl& d = sig_->op(o);
    std::size_t expect = args_count(*sig_, carrier_, o);
    check_cap(expect, "operation table");
    if (tables_[o].size() != expect)
      throw Error(ErrorKind::Arity, who + ": table of '" + d.name + "' has " + std::to_string(tables_[o].size()) +
                                        " entries, expected " + std::to_string(expect));
    for (std::size_t i = 0; i < tables_[o].size(); ++i)
      if (tables_[o][i] >= carrier_[d.result])
        throw Error(ErrorKind::Invalid, who + ": table of '" + d.name + "' entry " + std::to_string(i) +
                                            " is outside the carrier of sort '" + sig_->sort_name(d.result) + "'");
  }
}

std::size_t FiniteAlgebra::total_size() const {
  std::size_t n = 0;
  for (std::size_t c : carrier_) n += c;
  return n;
}

std::size_t table_size(const FiniteAlgebra& g, OpId op) { return g.table(op).size(); }

std::vector<Element> decode_args(const FiniteAlgebra& g, OpId op, std::size_t index) {
  const auto& a = g.signature().op(op).args;
  std::vector<Element> out(a.size());
  for (std::size_t i = a.size(); i-- > 0;) {
    std::size_t r = g.carrier_size(a[i]);
    out[i] = static_cast<Element>(index % r);
    index /= r;
  }
  return out;
}

PointSpace::PointSpace(const VarContext& ctx, const FiniteAlgebra& g) {
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    radix_.push_back(g.carrier_size(ctx.sort(i)));
    size_ = saturating_mul(size_, radix_.back());
  }
  if (radix_.empty()) size_ = 1;
  check_cap(size_, "point space");
}

Point PointSpace::point(std::size_t index) const {
  Point p(radix_.size());
  for (std::size_t i = radix_.size(); i-- > 0;) {
    p[i] = static_cast<Element>(index % radix_[i]);
    index /= radix_[i];
  }
  return p;
}

std::size_t PointSpace::index(std::span<const Element> p) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < radix_.size(); ++i) idx = idx * radix_[i] + p[i];
  return idx;
}

TermProgram::TermProgram(const Term& t, const VarContext& ctx) : sort_(t.sort()) {
  std::size_t depth = 0;
  // Iterative postfix emission.
  struct Frame {
    const Term* t;
    std::size_t next;
  };
  std::vector<Frame> stack{{&t, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    const Term& cur = *f.t;
    if (cur.is_var()) {
      auto i = ctx.index_of(cur.var_name());
      if (!i) throw Error(ErrorKind::Reference, "variable '" + cur.var_name() + "' is not in the context");
      code_.push_back({true, static_cast<std::uint32_t>(*i), 0});
      max_stack_ = std::max(max_stack_, ++depth);
      stack.pop_back();
      continue;
    }
    if (f.next < cur.children().size()) {
      const Term* child = &cur.children()[f.next++];
      stack.push_back({child, 0});
      continue;
    }
    std::uint32_t ar = static_cast<std::uint32_t>(cur.children().size());
    code_.push_back({false, cur.op(), ar});
    depth = depth - ar + 1;
    max_stack_ = std::max(max_stack_, depth);
    stack.pop_back();
  }
}

Element TermProgram::run(const FiniteAlgebra& g, std::span<const Element> point) const {
  Element local[64];
  local[0] = 0;
  std::vector<Element> heap;
  Element* st = local;
  if (max_stack_ > 64) {
    heap.resize(max_stack_);
    st = heap.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : code_) {
    if (in.is_var) {
      st[sp++] = point[in.id];
    } else {
      sp -= in.arity;
      st[sp] = g.apply(in.id, std::span<const Element>(st + sp, in.arity));
      ++sp;
    }
  }
  return st[0];
}

bool advance(Point& p, const PointSpace& space) {
  for (std::size_t i = p.size(); i-- > 0;) {
    if (++p[i] < space.radix(i)) return true;
    p[i] = 0;
  }
  return false;
}

Element eval(const Term& t, const VarContext& ctx, std::span<const Element> point, const FiniteAlgebra& g) {
  return TermProgram(t, ctx).run(g, point);
}

std::vector<Point> enumerate_points(const VarContext& ctx, const FiniteAlgebra& g) {
  PointSpace space(ctx, g);
  std::vector<Point> out;
  out.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) out.push_back(space.point(i));
  return out;
}

std::size_t Generated::TupleHash::operator()(const std::vector<Element>& v) const {
  std::size_t h = 1469598103934665603ULL;
  for (Element e : v) h = (h ^ e) * 1099511628211ULL;
  return h;
}

Generated::Generated(SignaturePtr sig, VarContext ctx, std::vector<AlgebraPtr> components,
                     std::vector<Point> assignments)
    : sig_(std::move(sig)),
      ctx_(std::move(ctx)),
      components_(std::move(components)),
      assignments_(std::move(assignments)) {
  const Signature& S = *sig_;
  const std::size_t nsorts = S.num_sorts();
  const std::size_t ncomp = components_.size();
  if (assignments_.size() != ncomp) throw Error(ErrorKind::Invalid, "one assignment per component required");
  for (std::size_t c = 0; c < ncomp; ++c) {
    if (assignments_[c].size() != ctx_.size())
      throw Error(ErrorKind::Invalid, "assignment does not cover the context");
    for (std::size_t i = 0; i < ctx_.size(); ++i)
      if (assignments_[c][i] >= components_[c]->carrier_size(ctx_.sort(i)))
        throw Error(ErrorKind::Invalid, "assignment of '" + ctx_.name(i) + "' is outside the carrier");
  }
  members_.assign(nsorts, {});
  derivs_.assign(nsorts, {});
  index_.assign(nsorts, {});

  const std::size_t cap = enumeration_cap();
  auto insert = [&](SortId s, std::vector<Element> tuple, Derivation d) -> std::uint32_t {
    auto [it, fresh] = index_[s].try_emplace(tuple, static_cast<std::uint32_t>(members_[s].size()));
    if (fresh) {
      if (order_.size() + 1 > cap) check_cap(order_.size() + 1, "generated subalgebra");
      members_[s].push_back(std::move(tuple));
      derivs_[s].push_back(std::move(d));
      order_.emplace_back(s, it->second);
    }
    return it->second;
  };

  generators_.resize(ctx_.size());
  for (std::size_t i = 0; i < ctx_.size(); ++i) {
    std::vector<Element> tuple(ncomp);
    for (std::size_t c = 0; c < ncomp; ++c) tuple[c] = assignments_[c][i];
    generators_[i] = insert(ctx_.sort(i), std::move(tuple), Derivation{true, static_cast<std::uint32_t>(i), {}});
  }

  std::vector<std::size_t> new_start(nsorts, 0);
  std::vector<Element> cargs;
  for (std::size_t round = 1;; ++round) {
    std::vector<std::size_t> end(nsorts);
    for (SortId s = 0; s < nsorts; ++s) end[s] = members_[s].size();
    const std::size_t before = order_.size();
    for (OpId o = 0; o < S.num_ops(); ++o) {
      const OpDecl& d = S.op(o);
      const std::size_t ar = d.arity();
      if (ar == 0) {
        if (round != 1) continue;
        std::vector<Element> tuple(ncomp);
        for (std::size_t c = 0; c < ncomp; ++c) tuple[c] = components_[c]->apply(o, {});
        insert(d.result, std::move(tuple), Derivation{false, o, {}});
        continue;
      }
      bool empty = false;
      for (SortId s : d.args)
        if (end[s] == 0) empty = true;
      if (empty) continue;
      std::vector<std::uint32_t> idx(ar, 0);
      cargs.resize(ar);
      while (true) {
        bool has_new = false;
        for (std::size_t k = 0; k < ar; ++k)
          if (idx[k] >= new_start[d.args[k]]) {
            has_new = true;
            break;
          }
        if (has_new) {
          std::vector<Element> tuple(ncomp);
          for (std::size_t c = 0; c < ncomp; ++c) {
            for (std::size_t k = 0; k < ar; ++k) cargs[k] = members_[d.args[k]][idx[k]][c];
            tuple[c] = components_[c]->apply(o, cargs);
          }
          insert(d.result, std::move(tuple), Derivation{false, o, idx});
        }
        std::size_t k = ar;
        bool done = true;
        while (k-- > 0) {
          if (++idx[k] < end[d.args[k]]) {
            done = false;
            break;
          }
          idx[k] = 0;
        }
        if (done) break;
      }
    }
    new_start = end;
    if (order_.size() == before) break;
  }

  // Member-indexed tables.
  std::vector<std::size_t> carrier(nsorts);
  for (SortId s = 0; s < nsorts; ++s) carrier[s] = members_[s].size();
  std::vector<std::vector<Element>> tables(S.num_ops());
  for (OpId o = 0; o < S.num_ops(); ++o) {
    const OpDecl& d = S.op(o);
    std::size_t n = args_count(S, carrier, o);
    check_cap(n, "generated subalgebra table");
    tables[o].resize(n);
    std::vector<Element> margs(d.arity());
    cargs.resize(d.arity());
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t rest = t;
      for (std::size_t k = d.arity(); k-- > 0;) {
        margs[k] = static_cast<Element>(rest % carrier[d.args[k]]);
        rest /= carrier[d.args[k]];
      }
      std::vector<Element> tuple(ncomp);
      for (std::size_t c = 0; c < ncomp; ++c) {
        for (std::size_t k = 0; k < d.arity(); ++k) cargs[k] = members_[d.args[k]][margs[k]][c];
        tuple[c] = components_[c]->apply(o, cargs);
      }
      tables[o][t] = index_[d.result].at(tuple);
    }
  }
  algebra_ = std::make_shared<FiniteAlgebra>(sig_, std::move(carrier), std::move(tables));

  witnesses_.assign(nsorts, {});
  for (SortId s = 0; s < nsorts; ++s) witnesses_[s].resize(members_[s].size());
  for (const auto& [s, m] : order_) {
    const Derivation& d = derivs_[s][m];
    if (d.is_generator) {
      witnesses_[s][m] = ctx_.var(d.id);
    } else {
      std::vector<Term> ch;
      const OpDecl& od = S.op(d.id);
      for (std::size_t k = 0; k < d.args.size(); ++k) ch.push_back(witnesses_[od.args[k]][d.args[k]]);
      witnesses_[s][m] = Term::app(d.id, std::move(ch), od.result);
    }
  }
}

std::size_t Generated::total_members() const { return order_.size(); }

std::optional<std::uint32_t> Generated::find(SortId s, std::span<const Element> tuple) const {
  auto it = index_[s].find(std::vector<Element>(tuple.begin(), tuple.end()));
  if (it == index_[s].end()) return std::nullopt;
  return it->second;
}

GeneratedSubalgebra::GeneratedSubalgebra(AlgebraPtr parent, VarContext ctx, Point assignment)
    : parent_(parent), gen_(parent->signature_ptr(), std::move(ctx), {parent}, {std::move(assignment)}) {}

std::vector<Element> GeneratedSubalgebra::members(SortId s) const {
  std::vector<Element> out;
  for (std::uint32_t m = 0; m < gen_.member_count(s); ++m) out.push_back(gen_.member(s, m)[0]);
  return out;
}

bool GeneratedSubalgebra::contains(SortId s, Element e) const {
  Element t[1] = {e};
  return gen_.find(s, t).has_value();
}

std::optional<Term> GeneratedSubalgebra::witness(SortId s, Element e) const {
  Element t[1] = {e};
  auto m = gen_.find(s, t);
  if (!m) return std::nullopt;
  return gen_.witness(s, *m);
}

GeneratedSubalgebra subalgebra_generated(AlgebraPtr g, std::span<const Element> seed) {
  if (g->signature().num_sorts() != 1)
    throw Error(ErrorKind::Invalid, "element seeds need a one-sorted algebra; use a context instead");
  VarContext ctx;
  Point p;
  for (std::size_t i = 0; i < seed.size(); ++i) {
    if (seed[i] >= g->carrier_size(0)) throw Error(ErrorKind::Invalid, "seed element outside the carrier");
    ctx.add(seed.size() == 1 ? std::string("x") : "x" + std::to_string(i + 1), 0);
    p.push_back(seed[i]);
  }
  return GeneratedSubalgebra(std::move(g), std::move(ctx), std::move(p));
}

std::optional<Hom> hom_extension(const Generated& src, std::span<const Element> images, const FiniteAlgebra& b) {
  const Signature& S = src.signature();
  const VarContext& ctx = src.context();
  if (images.size() != ctx.size()) throw Error(ErrorKind::Invalid, "one image per generator required");
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (images[i] >= b.carrier_size(ctx.sort(i))) return std::nullopt;

  Hom h;
  h.map.resize(S.num_sorts());
  for (SortId s = 0; s < S.num_sorts(); ++s) h.map[s].resize(src.member_count(s));
  std::vector<Element> args;
  for (const auto& [s, m] : src.order()) {
    const auto& d = src.derivation(s, m);
    if (d.is_generator) {
      h.map[s][m] = images[d.id];
    } else {
      const OpDecl& od = S.op(d.id);
      args.resize(d.args.size());
      for (std::size_t k = 0; k < d.args.size(); ++k) args[k] = h.map[od.args[k]][d.args[k]];
      h.map[s][m] = b.apply(d.id, args);
    }
  }
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (h.map[ctx.sort(i)][src.generators()[i]] != images[i]) return std::nullopt;
  if (!is_hom(*src.algebra(), b, h)) return std::nullopt;
  return h;
}

std::optional<Hom> hom_extension(const GeneratedSubalgebra& src, std::span<const Element> images,
                                 const FiniteAlgebra& b) {
  auto h = hom_extension(src.structure(), images, b);
  if (!h) return std::nullopt;
  const Signature& S = src.parent().signature();
  Hom out;
  out.map.resize(S.num_sorts());
  for (SortId s = 0; s < S.num_sorts(); ++s) {
    out.map[s].assign(src.parent().carrier_size(s), 0);
    for (std::uint32_t m = 0; m < src.structure().member_count(s); ++m)
      out.map[s][src.structure().member(s, m)[0]] = h->map[s][m];
  }
  return out;
}

bool is_hom(const FiniteAlgebra& a, const FiniteAlgebra& b, const Hom& h) {
  const Signature& S = a.signature();
  std::vector<Element> args, img;
  for (OpId o = 0; o < S.num_ops(); ++o) {
    const OpDecl& d = S.op(o);
    const auto& tab = a.table(o);
    args.assign(d.arity(), 0);
    img.resize(d.arity());
    for (std::size_t t = 0; t < tab.size(); ++t) {
      for (std::size_t k = 0; k < d.arity(); ++k) img[k] = h.map[d.args[k]][args[k]];
      if (h.map[d.result][tab[t]] != b.apply(o, img)) return false;
      for (std::size_t k = d.arity(); k-- > 0;) {
        if (++args[k] < a.carrier_size(d.args[k])) break;
        args[k] = 0;
      }
    }
  }
  return true;
}

namespace {

/// Closure of a marked element set under all operations, in place.
void close_set(const FiniteAlgebra& a, std::vector<std::vector<char>>& in) {
  const Signature& S = a.signature();
  bool changed = true;
  std::vector<Element> args;
  while (changed) {
    changed = false;
    for (OpId o = 0; o < S.num_ops(); ++o) {
      const OpDecl& d = S.op(o);
      const auto& tab = a.table(o);
      args.assign(d.arity(), 0);
      for (std::size_t t = 0; t < tab.size(); ++t) {
        bool all_in = true;
        for (std::size_t k = 0; k < d.arity(); ++k)
          if (!in[d.args[k]][args[k]]) {
            all_in = false;
            break;
          }
        if (all_in && !in[d.result][tab[t]]) {
          in[d.result][tab[t]] = 1;
          changed = true;
        }
        for (std::size_t k = d.arity(); k-- > 0;) {
          if (++args[k] < a.carrier_size(d.args[k])) break;
          args[k] = 0;
        }
      }
    }
  }
}

std::size_t count_marked(const std::vector<std::vector<char>>& in) {
  std::size_t n = 0;
  for (const auto& v : in) n += static_cast<std::size_t>(std::count(v.begin(), v.end(), 1));
  return n;
}

}  // namespace

std::vector<std::pair<SortId, Element>> generating_family(const FiniteAlgebra& a) {
  const Signature& S = a.signature();
  std::vector<std::vector<char>> cur(S.num_sorts());
  for (SortId s = 0; s < S.num_sorts(); ++s) cur[s].assign(a.carrier_size(s), 0);
  close_set(a, cur);
  std::vector<std::pair<SortId, Element>> family;
  const std::size_t total = a.total_size();
  while (count_marked(cur) < total) {
    std::size_t best_count = 0;
    std::pair<SortId, Element> best{0, 0};
    std::vector<std::vector<char>> best_set;
    for (SortId s = 0; s < S.num_sorts(); ++s)
      for (Element e = 0; e < a.carrier_size(s); ++e) {
        if (cur[s][e]) continue;
        auto trial = cur;
        trial[s][e] = 1;
        close_set(a, trial);
        std::size_t c = count_marked(trial);
        if (c > best_count) {
          best_count = c;
          best = {s, e};
          best_set = std::move(trial);
        }
      }
    family.push_back(best);
    cur = std::move(best_set);
  }
  return family;
}

std::vector<Hom> enumerate_homs(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (!same_signature(a.signature_ptr(), b.signature_ptr()))
    throw Error(ErrorKind::Invalid, "homomorphisms need a common signature");
  auto family = generating_family(a);
  VarContext ctx;
  Point assignment;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < family.size(); ++i) {
    ctx.add("g" + std::to_string(i), family[i].first);
    assignment.push_back(family[i].second);
    combos = saturating_mul(combos, b.carrier_size(family[i].first));
  }
  check_cap(combos, "homomorphism search");
  auto aptr = std::make_shared<FiniteAlgebra>(a);
  Generated gen(a.signature_ptr(), ctx, {aptr}, {assignment});

  std::vector<Hom> out;
  Point images(family.size(), 0);
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    for (std::size_t i = family.size(); i-- > 0;) {
      std::size_t r = b.carrier_size(family[i].first);
      images[i] = static_cast<Element>(rest % r);
      rest /= r;
    }
    auto h = hom_extension(gen, images, b);
    if (!h) continue;
    Hom full;
    full.map.resize(a.signature().num_sorts());
    for (SortId s = 0; s < full.map.size(); ++s) {
      full.map[s].assign(a.carrier_size(s), 0);
      for (std::uint32_t m = 0; m < gen.member_count(s); ++m) full.map[s][gen.member(s, m)[0]] = h->map[s][m];
    }
    out.push_back(std::move(full));
  }
  std::sort(out.begin(), out.end());
  return out;
}

AlgebraPtr product(std::span<const AlgebraPtr> gs, std::string name) {
  if (gs.empty()) throw Error(ErrorKind::Invalid, "product of an empty family needs a signature");
  const SignaturePtr& sig = gs[0]->signature_ptr();
  for (const auto& g : gs)
    if (!same_signature(sig, g->signature_ptr())) throw Error(ErrorKind::Invalid, "product factors differ in signature");
  const Signature& S = *sig;
  std::vector<std::size_t> carrier(S.num_sorts(), 1);
  for (SortId s = 0; s < S.num_sorts(); ++s) {
    for (const auto& g : gs) carrier[s] = saturating_mul(carrier[s], g->carrier_size(s));
    check_cap(carrier[s], "product carrier");
  }
  auto decode = [&](SortId s, std::size_t v, std::vector<Element>& out) {
    for (std::size_t i = gs.size(); i-- > 0;) {
      std::size_t r = gs[i]->carrier_size(s);
      out[i] = static_cast<Element>(v % r);
      v /= r;
    }
  };
  std::vector<std::vector<Element>> tables(S.num_ops());
  for (OpId o = 0; o < S.num_ops(); ++o) {
    const OpDecl& d = S.op(o);
    std::size_t n = args_count(S, carrier, o);
    check_cap(n, "product table");
    tables[o].resize(n);
    std::vector<std::vector<Element>> comps(d.arity(), std::vector<Element>(gs.size()));
    std::vector<Element> cargs(d.arity());
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t rest = t;
      for (std::size_t k = d.arity(); k-- > 0;) {
        decode(d.args[k], rest % carrier[d.args[k]], comps[k]);
        rest /= carrier[d.args[k]];
      }
      std::size_t r = 0;
      for (std::size_t i = 0; i < gs.size(); ++i) {
        for (std::size_t k = 0; k < d.arity(); ++k) cargs[k] = comps[k][i];
        r = r * gs[i]->carrier_size(d.result) + gs[i]->apply(o, cargs);
      }
      tables[o][t] = static_cast<Element>(r);
    }
  }
  if (name.empty()) {
    for (std::size_t i = 0; i < gs.size(); ++i) name += (i ? "x" : "") + gs[i]->name();
  }
  return std::make_shared<FiniteAlgebra>(sig, std::move(carrier), std::move(tables), std::move(name));
}

void Partition::canonicalize() {
  for (auto& v : label) {
    std::unordered_map<std::uint32_t, std::uint32_t> re;
    for (auto& l : v) {
      auto [it, fresh] = re.try_emplace(l, static_cast<std::uint32_t>(re.size()));
      l = it->second;
    }
  }
}

std::size_t Partition::num_classes(SortId s) const {
  std::uint32_t m = 0;
  for (auto l : label[s]) m = std::max(m, l + 1);
  return label[s].empty() ? 0 : m;
}

namespace {

/// Class tables of g by p; returns nullopt-equivalent through `conflict`.
std::vector<std::vector<Element>> class_tables(const FiniteAlgebra& g, const Partition& p, std::string* conflict) {
  const Signature& S = g.signature();
  std::vector<std::size_t> classes(S.num_sorts());
  for (SortId s = 0; s < S.num_sorts(); ++s) classes[s] = p.num_classes(s);
  std::vector<std::vector<Element>> tables(S.num_ops());
  constexpr Element unset = ~Element{0};
  for (OpId o = 0; o < S.num_ops(); ++o) {
    const OpDecl& d = S.op(o);
    tables[o].assign(args_count(S, classes, o), unset);
    const auto& tab = g.table(o);
    std::vector<Element> args(d.arity(), 0);
    for (std::size_t t = 0; t < tab.size(); ++t) {
      std::size_t ci = 0;
      for (std::size_t k = 0; k < d.arity(); ++k) ci = ci * classes[d.args[k]] + p.label[d.args[k]][args[k]];
      Element rc = p.label[d.result][tab[t]];
      if (tables[o][ci] == unset) {
        tables[o][ci] = rc;
      } else if (tables[o][ci] != rc) {
        if (conflict) {
          std::string a;
          for (std::size_t k = 0; k < args.size(); ++k) a += (k ? " " : "") + std::to_string(args[k]);
          *conflict = "operation '" + d.name + "' at (" + a + ") leaves its class";
        }
        return {};
      }
      for (std::size_t k = d.arity(); k-- > 0;) {
        if (++args[k] < g.carrier_size(d.args[k])) break;
        args[k] = 0;
      }
    }
  }
  return tables;
}

}  // namespace

bool is_congruence(const FiniteAlgebra& g, const Partition& p) {
  Partition q = p;
  q.canonicalize();
  std::string conflict;
  auto t = class_tables(g, q, &conflict);
  return conflict.empty();
}

AlgebraPtr quotient(const FiniteAlgebra& g, Partition p, std::string name) {
  const Signature& S = g.signature();
  if (p.label.size() != S.num_sorts()) throw Error(ErrorKind::Invalid, "partition does not cover every sort");
  for (SortId s = 0; s < S.num_sorts(); ++s)
    if (p.label[s].size() != g.carrier_size(s)) throw Error(ErrorKind::Invalid, "partition does not cover the carrier");
  p.canonicalize();
  std::string conflict;
  auto tables = class_tables(g, p, &conflict);
  if (!conflict.empty()) throw Error(ErrorKind::NotCongruence, "partition is not a congruence: " + conflict);
  std::vector<std::size_t> carrier(S.num_sorts());
  for (SortId s = 0; s < S.num_sorts(); ++s) carrier[s] = p.num_classes(s);
  return std::make_shared<FiniteAlgebra>(g.signature_ptr(), std::move(carrier), std::move(tables), std::move(name));
}

Partition kernel_partition(const FiniteAlgebra& a, const Hom& h) {
  Partition p;
  p.label.resize(a.signature().num_sorts());
  for (SortId s = 0; s < p.label.size(); ++s) p.label[s] = h.map[s];
  p.canonicalize();
  return p;
}

Partition discrete_partition(const FiniteAlgebra& g) {
  Partition p;
  p.label.resize(g.signature().num_sorts());
  for (SortId s = 0; s < p.label.size(); ++s)
    for (std::uint32_t e = 0; e < g.carrier_size(s); ++e) p.label[s].push_back(e);
  return p;
}

Partition unit_partition(const FiniteAlgebra& g) {
  Partition p;
  p.label.resize(g.signature().num_sorts());
  for (SortId s = 0; s < p.label.size(); ++s) p.label[s].assign(g.carrier_size(s), 0);
  return p;
}

Partition meet(const Partition& a, const Partition& b) {
  Partition p;
  p.label.resize(a.label.size());
  for (std::size_t s = 0; s < a.label.size(); ++s) {
    std::size_t nb = 0;
    for (auto l : b.label[s]) nb = std::max<std::size_t>(nb, l + 1);
    for (std::size_t e = 0; e < a.label[s].size(); ++e)
      p.label[s].push_back(static_cast<std::uint32_t>(a.label[s][e] * nb + b.label[s][e]));
  }
  p.canonicalize();
  return p;
}

std::optional<std::pair<VarContext, Point>> identity_counterexample(const FiniteAlgebra& g, const TermPair& pair) {
  if (pair.first.sort() != pair.second.sort()) throw Error(ErrorKind::Sort, "identity sides differ in sort");
  VarContext ctx = minimal_context(std::span<const TermPair>(&pair, 1));
  TermProgram l(pair.first, ctx), r(pair.second, ctx);
  PointSpace space(ctx, g);
  for (std::size_t i = 0; i < space.size(); ++i) {
    Point p = space.point(i);
    if (l.run(g, p) != r.run(g, p)) return std::make_pair(ctx, std::move(p));
  }
  return std::nullopt;
}

bool satisfies_identity(const FiniteAlgebra& g, const TermPair& pair) { return !identity_counterexample(g, pair); }

std::optional<TermPair> commutation_law(const Signature& sig, OpId a, OpId b) {
  const OpDecl& w1 = sig.op(a);
  const OpDecl& w2 = sig.op(b);
  const std::size_t n = w1.arity();
  const std::size_t m = w2.arity();
  if (w1.result != w2.result) return std::nullopt;
  for (SortId s : w2.args)
    if (s != w1.result) return std::nullopt;
  for (SortId s : w1.args)
    if (s != w2.result) return std::nullopt;
  // All variables share one sort when any exist.
  const SortId vs = w1.result;
  auto x = [&](std::size_t i, std::size_t j) { return Term::var("x" + std::to_string(i + 1) + "_" + std::to_string(j + 1), vs); };
  std::vector<Term> outer1;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Term> row;
    for (std::size_t j = 0; j < n; ++j) row.push_back(x(i, j));
    outer1.push_back(Term::app(a, std::move(row), w1.result));
  }
  Term l = Term::app(b, std::move(outer1), w2.result);
  std::vector<Term> outer2;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Term> col;
    for (std::size_t i = 0; i < m; ++i) col.push_back(x(i, j));
    outer2.push_back(Term::app(b, std::move(col), w2.result));
  }
  Term r = Term::app(a, std::move(outer2), w1.result);
  return TermPair{l, r};
}

std::optional<std::pair<OpId, OpId>> first_noncommuting_pair(const FiniteAlgebra& g, std::span<const OpId> ops) {
  for (OpId a : ops)
    for (OpId b : ops) {
      auto law = commutation_law(g.signature(), a, b);
      if (law && !satisfies_identity(g, *law)) return std::make_pair(a, b);
    }
  return std::nullopt;
}

bool is_commutative(const FiniteAlgebra& g) {
  std::vector<OpId> ops(g.signature().num_ops());
  for (OpId o = 0; o < ops.size(); ++o) ops[o] = o;
  return !first_noncommuting_pair(g, ops);
}

std::string digest(const FiniteAlgebra& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  auto feed_str = [&](const std::string& s) {
    feed(s.size());
    for (unsigned char c : s) feed(c);
  };
  const Signature& S = g.signature();
  for (const auto& s : S.sorts()) feed_str(s);
  for (const auto& o : S.ops()) {
    feed_str(o.name);
    for (auto a : o.args) feed(a);
    feed(o.result);
  }
  for (auto c : g.carrier()) feed(c);
  for (const auto& t : g.tables())
    for (auto e : t) feed(e);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace uag
