#include "cdeform/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cdeform {

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

// JSON has no infinity; non-finite values become null.
Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

Json id_list(const MetricDomain& dom, const std::vector<VertexIndex>& vs) {
  Json out = Json::array();
  for (auto v : vs) out.push_back(dom.id(v));
  return out;
}


}  // namespace

Json to_json(const ConstantsBundle& b) {
  return Json{{"C_U", num(b.c_u)},
              {"C_q", num(b.c_q)},
              {"C_phi", num(b.c_phi)},
              {"n0", b.n0},
              {"m0", b.m0},
              {"k0", b.k0},
              {"k0_star", b.k0_star},
              {"A_branch", b.small_cq ? "A1" : "A2"},
              {"A", num(b.a_phi)},
              {"lambda", num(b.lambda)},
              {"Lambda", num(b.Lambda)},
              {"C_A", num(b.c_a)},
              {"T", num(b.t_medium)},
              {"T_small", num(b.t_small)},
              {"C_star", num(b.c_star)},
              {"C", num(b.c_big)},
              {"t0", num(b.t0)},
              {"C1", num(b.c1)},
              {"C2", num(b.c2)},
              {"C3", num(b.c3)},
              {"C4", num(b.c4)},
              {"large_k", num(kLargeKConstant)}};
}

Json to_json(const InfinityEstimate& e, const MetricDomain& domain) {
  Json j{{"x", e.x == kNoVertex ? Json(nullptr) : Json(domain.id(e.x))},
         {"lower", num(e.lower)},
         {"upper", num(e.upper)},
         {"frontier_shell", e.frontier_shell},
         {"frontier_distance", num(e.frontier_distance)},
         {"midpoint", num(e.midpoint())},
         {"width", num(e.width())}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

Json to_json(const Curve& c, const MetricDomain& domain) {
  const auto [ld, lp] = lengths(c);
  return Json{{"vertices", id_list(domain, c.vertices)},
              {"len_d", num(ld)},
              {"len_phi", num(lp)},
              {"to_infinity", c.to_infinity.has_value()}};
}

Json to_json(const SynthesisResult& r, const MetricDomain& domain) {
  Json splice = Json::array();
  if (r.z1) splice.push_back(domain.id(*r.z1));
  if (r.z2) splice.push_back(domain.id(*r.z2));
  const bool inf = r.curve.to_infinity.has_value();
  Json j{{"case", to_string(r.tag)},
         {"x", domain.id(r.curve.front())},
         {"y", inf ? Json("inf") : Json(domain.id(r.curve.back()))},
         {"m", r.m},
         {"k", inf ? Json(nullptr) : Json(r.k)},
         {"predicted", num(r.predicted)},
         {"measured", num(r.measured.constant)},
         {"ratio", num(r.ratio())},
         {"quasiconvexity", num(r.measured.quasiconvexity)},
         {"cigar", num(r.measured.cigar)},
         {"C_U_used", num(r.c_u_used)},
         {"spliceverts", splice}};
  if (r.below_cross_threshold) j["below_cross_threshold"] = true;
  return j;
}

Json to_json(const SynthesisReport& r, const MetricDomain& domain) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row, domain));
  Json summary = Json::object();
  for (const auto& [tag, s] : r.summary) {
    summary[to_string(tag)] = Json{{"count", s.count},
                                   {"max_measured", num(s.max_measured)},
                                   {"max_ratio", num(s.max_ratio)},
                                   {"flagged", s.flagged}};
  }
  return Json{{"rows", rows},
              {"summary", summary},
              {"flagged", r.flagged},
              {"below_cross_threshold", r.below_cross_threshold},
              {"tolerance", num(r.factor)},
              {"notes", r.notes}};
}

Json to_json(const CheckReport& r) {
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back(Json{{"ids", w.ids},
                             {"achieved", num(w.achieved)},
                             {"allowed", num(w.allowed)},
                             {"ratio", num(w.ratio)},
                             {"what", w.what}});
  }
  Json stats = Json::object();
  for (const auto& [k, v] : r.stats) stats[k] = num(v);
  return Json{{"name", r.name},
              {"samples", r.samples},
              {"violations", r.violations},
              {"excluded", r.excluded},
              {"worst_ratio", num(r.worst_ratio)},
              {"tolerance", num(r.factor)},
              {"passed", r.passed()},
              {"witnesses", witnesses},
              {"stats", stats},
              {"notes", r.notes}};
}

Json distance_record(const DeformedDomain& dd, VertexIndex x, VertexIndex y, bool with_geodesic) {
  const auto& dom = dd.base();
  const VertexIndex target[] = {y};
  const auto td = dd.tree(Metric::d, x, SearchLimits{target});
  const auto tp = dd.tree(Metric::phi, x, SearchLimits{target});
  Json j{{"x", dom.id(x)},
         {"y", dom.id(y)},
         {"d", num(to_length(td.dist[y]))},
         {"d_phi", num(to_length(tp.dist[y]))}};
  if (with_geodesic) j["geodesic"] = id_list(dom, tp.path_to(y));
  return j;
}

bool AggregateReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return true;
}

Json to_json(const AggregateReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  Json params = Json::object();
  for (const auto& [k, v] : r.domain_meta.params) params[k] = num(v);
  return Json{{"checks", checks},
              {"domain_meta", Json{{"generator", r.domain_meta.generator}, {"params", params}}},
              {"weight_spec", r.weight_spec},
              {"bundle", to_json(r.bundle)},
              {"seed", r.seed},
              {"tolerance", num(r.tolerance)},
              {"passed", r.passed()}};
}

std::string to_csv(const AggregateReport& r) {
  std::ostringstream out;
  out << "check,samples,violations,excluded,worst_ratio,tolerance\n";
  char buf[64];
  for (const auto& c : r.checks) {
    out << c.name << ',' << c.samples << ',' << c.violations << ',' << c.excluded << ',';
    std::snprintf(buf, sizeof buf, "%.12g,%.12g", c.worst_ratio, r.tolerance);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace cdeform
