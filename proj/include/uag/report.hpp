#pragma once

// Structured command results: an ordered JSON document (stable field order)
// plus human-readable lines.

#include <string>
#include <vector>

#include "json.hpp"
#include "uag/galois.hpp"
#include "uag/halmos.hpp"

namespace uag {

using Json = nlohmann::ordered_json;

enum class Format { Text, Json };

struct Report {
  Json doc = Json::object();
  std::vector<std::string> lines;
  /// 0 ok, 1 property violation found.
  int status = 0;

  void line(std::string s) { lines.push_back(std::move(s)); }
  std::string render(Format f) const;
};

Json point_json(const Point& p, const VarContext& ctx);
std::string point_text(const Point& p, const VarContext& ctx);
/// Points in canonical (index) order.
Json variety_json(const PointSet& a);
std::vector<std::string> variety_text(const PointSet& a);

/// Presentation-independent digest: the coordinate algebra table in canonical
/// generation order together with the generator images.
std::string kernel_digest(const KernelCongruence& k);
Json kernel_json(const KernelCongruence& k);

Json pairs_json(const PairSet& t, const Signature& sig);
Json equiv_json(const EquivVerdict& v, const Signature& sig);
Json nullstellensatz_json(const NullstellensatzReport& r);

}  // namespace uag
