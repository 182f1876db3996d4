#include "uag/report.hpp"

namespace uag {

std::string Report::render(Format f) const {
  if (f == Format::Json) return doc.dump(2) + "\n";
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

Json point_json(const Point& p, const VarContext& ctx) {
  Json j = Json::object();
  for (std::size_t i = 0; i < ctx.size(); ++i) j[ctx.name(i)] = p[i];
  return j;
}

std::string point_text(const Point& p, const VarContext& ctx) {
  std::string out = "{";
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ", ";
    out += ctx.name(i) + " -> " + std::to_string(p[i]);
  }
  return out + "}";
}

Json variety_json(const PointSet& a) {
  Json arr = Json::array();
  for (const auto& p : a.points()) arr.push_back(point_json(p, a.geo()->ctx));
  return arr;
}

std::vector<std::string> variety_text(const PointSet& a) {
  std::vector<std::string> out;
  for (const auto& p : a.points()) out.push_back(point_text(p, a.geo()->ctx));
  return out;
}

std::string kernel_digest(const KernelCongruence& k) {
  const auto& c = k.coordinate();
  std::string d = digest(*c.algebra());
  for (auto g : c.generators()) d += ":" + std::to_string(g);
  return d;
}

Json kernel_json(const KernelCongruence& k) {
  Json j;
  j["digest"] = kernel_digest(k);
  j["coordinate_size"] = k.coordinate().total_members();
  Json comps = Json::array();
  for (const auto& c : k.components()) {
    Json cj;
    cj["algebra"] = digest(*c.target);
    cj["assignment"] = c.assignment;
    comps.push_back(cj);
  }
  j["components"] = comps;
  return j;
}

Json pairs_json(const PairSet& t, const Signature& sig) {
  Json arr = Json::array();
  for (const auto& p : t) arr.push_back(Json::array({to_string(p.first, sig), to_string(p.second, sig)}));
  return arr;
}

Json equiv_json(const EquivVerdict& v, const Signature& sig) {
  Json j;
  if (const auto* e = std::get_if<Equivalent>(&v.value)) {
    j["verdict"] = "Equivalent";
    j["exact"] = e->exact;
    j["checked"] = e->checked;
  } else if (const auto* n = std::get_if<NotEquivalent>(&v.value)) {
    j["verdict"] = "NotEquivalent";
    j["witness"] = pairs_json(n->witness, sig);
    j["separating"] = Json::array({to_string(n->separating.first, sig), to_string(n->separating.second, sig)});
    j["closed_over"] = n->side == 1 ? "g1" : "g2";
  } else {
    j["verdict"] = "Inconclusive";
    j["samples_tried"] = std::get<Inconclusive>(v.value).samples_tried;
  }
  j["notices"] = v.notices;
  return j;
}

Json nullstellensatz_json(const NullstellensatzReport& r) {
  Json j;
  j["by_points"] = kernel_digest(r.by_points);
  j["by_h_kernel"] = kernel_digest(r.by_h_kernel);
  j["by_injections"] = kernel_digest(r.by_injections);
  j["a0_size"] = r.a0_size;
  j["h_ker_classes"] = r.h_ker_classes;
  j["homs"] = r.homs;
  j["points_leq_h"] = r.points_leq_h;
  j["h_leq_points"] = r.h_leq_points;
  j["injections_agree"] = r.injections_agree;
  j["passed"] = r.passed();
  return j;
}

}  // namespace uag
