#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdeform/constants.hpp"
#include "cdeform/deform.hpp"
#include "cdeform/synthesis.hpp"
#include "cdeform/verify.hpp"

namespace cdeform {

using Json = nlohmann::ordered_json;

/// Doubles are rounded to 12 significant digits so reports diff cleanly.
double round12(double v);

Json to_json(const ConstantsBundle& b);
Json to_json(const InfinityEstimate& e, const MetricDomain& domain);
Json to_json(const Curve& c, const MetricDomain& domain);
Json to_json(const SynthesisResult& r, const MetricDomain& domain);
Json to_json(const SynthesisReport& r, const MetricDomain& domain);
Json to_json(const CheckReport& r);

/// `{x, y, d, d_phi, geodesic?}`.
Json distance_record(const DeformedDomain& dd, VertexIndex x, VertexIndex y, bool with_geodesic);

struct AggregateReport {
  std::vector<CheckReport> checks;
  DomainMeta domain_meta;
  std::string weight_spec;
  ConstantsBundle bundle;
  std::uint64_t seed = 0;
  double tolerance = 1.0;

  bool passed() const;
};

Json to_json(const AggregateReport& r);
/// One row per check: name, samples, violations, excluded, worst_ratio, tolerance.
std::string to_csv(const AggregateReport& r);

}  // namespace cdeform
