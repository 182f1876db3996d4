#include "uag/constants.hpp"

#include "uag/error.hpp"

namespace uag {

Term AdjoinedConstants::constant_term(SortId s, Element a) const {
  return Term::app(constant.at(s).at(a), {}, s);
}

AdjoinedConstants adjoin_constants(const FiniteAlgebra& g) {
  const Signature& base = g.signature();
  auto sig = std::make_shared<Signature>(base);
  AdjoinedConstants out;
  out.constant.resize(base.num_sorts());
  const bool one_sorted = base.num_sorts() == 1;
  for (SortId s = 0; s < base.num_sorts(); ++s)
    for (Element a = 0; a < g.carrier_size(s); ++a) {
      std::string name = one_sorted ? "c" + std::to_string(a) : "c_" + base.sort_name(s) + "_" + std::to_string(a);
      if (sig->find_op(name))
        throw Error(ErrorKind::Invalid, "constant name '" + name + "' clashes with an existing operation");
      out.constant[s].push_back(sig->add_op(name, {}, s));
    }
  std::vector<std::vector<Element>> tables = g.tables();
  for (SortId s = 0; s < base.num_sorts(); ++s)
    for (Element a = 0; a < g.carrier_size(s); ++a) tables.push_back({a});
  out.signature = sig;
  out.algebra = std::make_shared<FiniteAlgebra>(sig, g.carrier(), std::move(tables), g.name());

  for (OpId o = 0; o < base.num_ops(); ++o) {
    const OpDecl& d = base.op(o);
    const auto& tab = g.table(o);
    for (std::size_t t = 0; t < tab.size(); ++t) {
      auto args = decode_args(g, o, t);
      std::vector<Term> ch;
      for (std::size_t k = 0; k < args.size(); ++k) ch.push_back(out.constant_term(d.args[k], args[k]));
      out.ground_pairs.emplace_back(Term::app(o, std::move(ch), d.result), out.constant_term(d.result, tab[t]));
    }
  }
  return out;
}

}  // namespace uag
