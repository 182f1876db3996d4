#pragma once

// Congruences on the term algebra: generated ones (ground congruence closure
// over a finite registered universe) and kernels of evaluation maps into
// finite algebras.

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "uag/algebra.hpp"

namespace uag {

/// Finite set of same-sorted term pairs, canonical within each pair and
/// sorted by (first, second).
class PairSet {
 public:
  PairSet() = default;
  PairSet(std::initializer_list<TermPair> pairs);
  explicit PairSet(std::span<const TermPair> pairs);

  /// Returns false when the pair was already present.
  bool insert(const Term& a, const Term& b);
  bool insert(const TermPair& p) { return insert(p.first, p.second); }
  bool contains(const Term& a, const Term& b) const;
  bool erase(const TermPair& p);

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<TermPair>& pairs() const { return pairs_; }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  bool operator==(const PairSet& o) const { return pairs_ == o.pairs_; }
  bool subset_of(const PairSet& o) const;
  PairSet united(const PairSet& o) const;

 private:
  std::vector<TermPair> pairs_;
};

/// Union-find congruence closure over a subterm-closed universe. Variables are
/// treated as free constants.
class GroundCongruence {
 public:
  GroundCongruence() = default;

  /// Registers t and its subterms; returns the node id of t.
  std::uint32_t add_term(const Term& t);
  void merge(const Term& a, const Term& b);
  /// Registers both terms (closing again) and compares classes.
  bool congruent(const Term& a, const Term& b);
  /// Compares already registered terms; false if either is unregistered.
  bool congruent_registered(const Term& a, const Term& b) const;

  std::size_t num_nodes() const { return nodes_.size(); }
  const Term& term(std::uint32_t id) const { return nodes_[id].term; }
  std::optional<std::uint32_t> id_of(const Term& t) const;
  std::uint32_t find(std::uint32_t id) const;
  std::size_t num_classes() const;

 private:
  struct Node {
    Term term;
    bool leaf;
    OpId op;
    std::vector<std::uint32_t> children;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const;
  };

  std::vector<std::uint32_t> key(std::uint32_t id) const;
  void close();

  std::vector<Node> nodes_;
  mutable std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::vector<std::uint32_t>> uses_;
  std::unordered_map<Term, std::uint32_t, TermHash> ids_;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> table_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pending_;
};

/// ground_closure(pairs, extra): universe = subterms of pairs and extra terms.
GroundCongruence ground_closure(const PairSet& pairs, std::span<const Term> extra_terms = {});

/// One factor of an evaluation map W(X) -> target.
struct KernelComponent {
  AlgebraPtr target;
  Point assignment;
};

/// Kernel of the evaluation map W(X) -> prod of component targets. With no
/// components this is the unit congruence (every same-sorted pair).
class KernelCongruence {
 public:
  KernelCongruence(SignaturePtr sig, VarContext ctx, std::vector<KernelComponent> components);

  static KernelCongruence of_point(SignaturePtr sig, const VarContext& ctx, AlgebraPtr g, Point p);
  static KernelCongruence unit(SignaturePtr sig, const VarContext& ctx);

  const SignaturePtr& signature_ptr() const { return sig_; }
  const VarContext& context() const { return ctx_; }
  const std::vector<KernelComponent>& components() const { return components_; }

  bool contains(const Term& a, const Term& b) const;
  bool contains(const TermPair& p) const { return contains(p.first, p.second); }

  /// The image of W(X), i.e. W(X)/ker, as a generated subalgebra of the
  /// product. Built once on first use; throws CapExceeded when too large.
  const Generated& coordinate() const;

 private:
  struct Lazy {
    std::once_flag once;
    std::shared_ptr<const Generated> value;
  };
  SignaturePtr sig_;
  VarContext ctx_;
  std::vector<KernelComponent> components_;
  std::shared_ptr<Lazy> lazy_;
};

KernelCongruence kernel_of_point(SignaturePtr sig, const VarContext& ctx, AlgebraPtr g, Point p);
/// Concatenation of components; an empty list yields the unit congruence.
KernelCongruence meet_kernels(std::span<const KernelCongruence> ks, SignaturePtr sig, const VarContext& ctx);
/// ker k1 is contained in ker k2.
bool kernel_leq(const KernelCongruence& k1, const KernelCongruence& k2);
bool kernel_equal(const KernelCongruence& k1, const KernelCongruence& k2);

struct FinitePartitionCongruence {
  AlgebraPtr algebra;
  Partition partition;
};

/// Intersection of the kernels of all homomorphisms g -> h; unit when none.
FinitePartitionCongruence h_ker(const FiniteAlgebra& g, const FiniteAlgebra& h);

}  // namespace uag
