#include "uag/congruence.hpp"

#include <algorithm>

#include "uag/error.hpp"

namespace uag {

namespace {

bool pair_less(const TermPair& a, const TermPair& b) {
  int c = term_compare(a.first, b.first);
  if (c != 0) return c < 0;
  return term_compare(a.second, b.second) < 0;
}

}  // namespace

PairSet::PairSet(std::initializer_list<TermPair> pairs) {
  for (const auto& p : pairs) insert(p);
}

PairSet::PairSet(std::span<const TermPair> pairs) {
  for (const auto& p : pairs) insert(p);
}

bool PairSet::insert(const Term& a, const Term& b) {
  if (a.sort() != b.sort()) throw Error(ErrorKind::Sort, "pair sides differ in sort");
  TermPair p = canonical_pair(a, b);
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p, pair_less);
  if (it != pairs_.end() && it->first == p.first && it->second == p.second) return false;
  pairs_.insert(it, std::move(p));
  return true;
}

bool PairSet::contains(const Term& a, const Term& b) const {
  TermPair p = canonical_pair(a, b);
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p, pair_less);
  return it != pairs_.end() && it->first == p.first && it->second == p.second;
}

bool PairSet::erase(const TermPair& q) {
  TermPair p = canonical_pair(q.first, q.second);
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p, pair_less);
  if (it == pairs_.end() || it->first != p.first || it->second != p.second) return false;
  pairs_.erase(it);
  return true;
}

bool PairSet::subset_of(const PairSet& o) const {
  for (const auto& p : pairs_)
    if (!o.contains(p.first, p.second)) return false;
  return true;
}

PairSet PairSet::united(const PairSet& o) const {
  PairSet r = *this;
  for (const auto& p : o) r.insert(p);
  return r;
}

std::size_t GroundCongruence::KeyHash::operator()(const std::vector<std::uint32_t>& k) const {
  std::size_t h = 1469598103934665603ULL;
  for (auto v : k) h = (h ^ v) * 1099511628211ULL;
  return h;
}

std::uint32_t GroundCongruence::find(std::uint32_t id) const {
  std::uint32_t r = id;
  while (parent_[r] != r) r = parent_[r];
  while (parent_[id] != r) {
    std::uint32_t next = parent_[id];
    parent_[id] = r;
    id = next;
  }
  return r;
}

std::vector<std::uint32_t> GroundCongruence::key(std::uint32_t id) const {
  const Node& n = nodes_[id];
  std::vector<std::uint32_t> k;
  k.reserve(n.children.size() + 1);
  k.push_back(n.op);
  for (auto c : n.children) k.push_back(find(c));
  return k;
}

std::uint32_t GroundCongruence::add_term(const Term& t) {
  if (auto it = ids_.find(t); it != ids_.end()) return it->second;
  std::vector<std::uint32_t> children;
  for (const Term& c : t.children()) children.push_back(add_term(c));
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{t, t.is_var(), t.is_var() ? 0 : t.op(), std::move(children)});
  parent_.push_back(id);
  rank_.push_back(0);
  uses_.emplace_back();
  ids_.emplace(t, id);
  if (!t.is_var()) {
    std::vector<std::uint32_t> reps;
    for (auto c : nodes_[id].children) reps.push_back(find(c));
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    for (auto r : reps) uses_[r].push_back(id);
    auto [it, fresh] = table_.try_emplace(key(id), id);
    if (!fresh) pending_.emplace_back(id, it->second);
    close();
  }
  return id;
}

void GroundCongruence::merge(const Term& a, const Term& b) {
  auto ia = add_term(a);
  auto ib = add_term(b);
  pending_.emplace_back(ia, ib);
  close();
}

void GroundCongruence::close() {
  while (!pending_.empty()) {
    auto [a, b] = pending_.back();
    pending_.pop_back();
    std::uint32_t ra = find(a), rb = find(b);
    if (ra == rb) continue;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    std::vector<std::uint32_t> moved = std::move(uses_[rb]);
    uses_[rb].clear();
    for (auto p : moved) {
      auto it = table_.find(key(p));
      if (it != table_.end() && it->second == p) table_.erase(it);
    }
    parent_[rb] = ra;
    for (auto p : moved) {
      auto [it, fresh] = table_.try_emplace(key(p), p);
      if (!fresh && find(it->second) != find(p)) pending_.emplace_back(p, it->second);
      uses_[ra].push_back(p);
    }
  }
}

bool GroundCongruence::congruent(const Term& a, const Term& b) {
  if (a.sort() != b.sort()) return false;
  auto ia = add_term(a);
  auto ib = add_term(b);
  return find(ia) == find(ib);
}

bool GroundCongruence::congruent_registered(const Term& a, const Term& b) const {
  auto ia = id_of(a), ib = id_of(b);
  if (!ia || !ib) return false;
  return find(*ia) == find(*ib);
}

std::optional<std::uint32_t> GroundCongruence::id_of(const Term& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t GroundCongruence::num_classes() const {
  std::size_t n = 0;
  for (std::uint32_t i = 0; i < parent_.size(); ++i)
    if (find(i) == i) ++n;
  return n;
}

GroundCongruence ground_closure(const PairSet& pairs, std::span<const Term> extra_terms) {
  GroundCongruence gc;
  for (const auto& [a, b] : pairs) {
    gc.add_term(a);
    gc.add_term(b);
  }
  for (const Term& t : extra_terms) gc.add_term(t);
  for (const auto& [a, b] : pairs) gc.merge(a, b);
  return gc;
}

KernelCongruence::KernelCongruence(SignaturePtr sig, VarContext ctx, std::vector<KernelComponent> components)
    : sig_(std::move(sig)), ctx_(std::move(ctx)), components_(std::move(components)), lazy_(std::make_shared<Lazy>()) {
  for (const auto& c : components_) {
    if (!same_signature(sig_, c.target->signature_ptr()))
      throw Error(ErrorKind::Invalid, "kernel component over a different signature");
    if (c.assignment.size() != ctx_.size()) throw Error(ErrorKind::Invalid, "kernel assignment does not cover the context");
  }
}

KernelCongruence KernelCongruence::of_point(SignaturePtr sig, const VarContext& ctx, AlgebraPtr g, Point p) {
  std::vector<KernelComponent> c;
  c.push_back({std::move(g), std::move(p)});
  return KernelCongruence(std::move(sig), ctx, std::move(c));
}

KernelCongruence KernelCongruence::unit(SignaturePtr sig, const VarContext& ctx) {
  return KernelCongruence(std::move(sig), ctx, {});
}

bool KernelCongruence::contains(const Term& a, const Term& b) const {
  if (a.sort() != b.sort()) return false;
  if (components_.empty()) return true;
  TermProgram pa(a, ctx_), pb(b, ctx_);
  for (const auto& c : components_)
    if (pa.run(*c.target, c.assignment) != pb.run(*c.target, c.assignment)) return false;
  return true;
}

const Generated& KernelCongruence::coordinate() const {
  std::call_once(lazy_->once, [this] {
    std::vector<AlgebraPtr> targets;
    std::vector<Point> assignments;
    for (const auto& c : components_) {
      targets.push_back(c.target);
      assignments.push_back(c.assignment);
    }
    lazy_->value = std::make_shared<const Generated>(sig_, ctx_, std::move(targets), std::move(assignments));
  });
  return *lazy_->value;
}

KernelCongruence kernel_of_point(SignaturePtr sig, const VarContext& ctx, AlgebraPtr g, Point p) {
  return KernelCongruence::of_point(std::move(sig), ctx, std::move(g), std::move(p));
}

KernelCongruence meet_kernels(std::span<const KernelCongruence> ks, SignaturePtr sig, const VarContext& ctx) {
  std::vector<KernelComponent> comps;
  for (const auto& k : ks) {
    if (!(k.context() == ctx)) throw Error(ErrorKind::Invalid, "kernels over different contexts");
    comps.insert(comps.end(), k.components().begin(), k.components().end());
  }
  return KernelCongruence(std::move(sig), ctx, std::move(comps));
}

bool kernel_leq(const KernelCongruence& k1, const KernelCongruence& k2) {
  if (!(k1.context() == k2.context())) throw Error(ErrorKind::Invalid, "kernels over different contexts");
  if (k2.components().empty()) return true;
  const Generated& ca = k1.coordinate();
  for (const auto& c : k2.components())
    if (!hom_extension(ca, c.assignment, *c.target)) return false;
  return true;
}

bool kernel_equal(const KernelCongruence& k1, const KernelCongruence& k2) {
  return kernel_leq(k1, k2) && kernel_leq(k2, k1);
}

FinitePartitionCongruence h_ker(const FiniteAlgebra& g, const FiniteAlgebra& h) {
  auto homs = enumerate_homs(g, h);
  FinitePartitionCongruence out{std::make_shared<FiniteAlgebra>(g), unit_partition(g)};
  if (homs.empty()) return out;
  Partition p = kernel_partition(g, homs[0]);
  for (std::size_t i = 1; i < homs.size(); ++i) p = meet(p, kernel_partition(g, homs[i]));
  out.partition = std::move(p);
  return out;
}

}  // namespace uag
