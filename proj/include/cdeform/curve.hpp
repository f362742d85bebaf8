#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdeform/types.hpp"

namespace cdeform {

class DeformedDomain;

/// Interval estimate of d_phi(x, inf).
struct InfinityEstimate {
  VertexIndex x = kNoVertex;
  double lower = 0.0;
  double upper = 0.0;
  double frontier_distance = 0.0;  // D: d_phi from x to the frontier set
  int frontier_shell = 0;          // M: smallest shell on the frontier
  double escape = 0.0;             // bound on the cost from the frontier on to inf
  std::string note;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
};

enum class Metric { d, phi };

/// Vertex polyline with arc length in both metrics. Cumulative arrays start
/// at 0 and are strictly increasing.
struct Curve {
  std::vector<VertexIndex> vertices;
  std::vector<Ticks> cum_d;
  std::vector<Ticks> cum_phi;
  /// Set when the curve ends on the frontier and stands for a curve to inf.
  std::optional<InfinityEstimate> to_infinity;

  std::size_t size() const { return vertices.size(); }
  VertexIndex front() const { return vertices.front(); }
  VertexIndex back() const { return vertices.back(); }

  Ticks length_ticks(Metric m) const { return (m == Metric::d ? cum_d : cum_phi).back(); }
  double len_d() const { return to_length(cum_d.back()); }
  double len_phi() const { return to_length(cum_phi.back()); }
  /// Arc length from the start to vertex i.
  Ticks prefix(Metric m, std::size_t i) const { return (m == Metric::d ? cum_d : cum_phi)[i]; }
};

/// Builds a curve along `path`, whose consecutive vertices must be adjacent.
/// Throws InputError otherwise.
Curve make_curve(const DeformedDomain& dd, std::vector<VertexIndex> path);

/// (l_d, l_phi). A curve to inf is measured up to its frontier vertex; the
/// escape bound stays on its InfinityEstimate.
std::pair<double, double> lengths(const Curve& c);

Curve reverse(const Curve& c);
/// Joins a and b; b must start where a ends. The joint vertex is kept once.
Curve concat(const DeformedDomain& dd, const Curve& a, const Curve& b);

/// Vertices from..to of c (inclusive) with arc length measured from `from`.
/// Keeps the inf marker only when the slice runs to the end.
Curve subcurve(const Curve& c, std::size_t from, std::size_t to);

/// Pair distance and distance-to-boundary in one metric.
struct MetricOracles {
  std::function<double(VertexIndex, VertexIndex)> distance;
  std::function<double(VertexIndex)> boundary;
  /// Only consulted for curves to inf: lower bound on dist(x, inf).
  std::function<double(VertexIndex)> infinity;
};

struct UniformityResult {
  double constant = 1.0;
  double quasiconvexity = 1.0;   // l(c) / dist(x, y)
  double cigar = 0.0;            // max over interior z of min(l_xz, l_zy) / bdry(z)
  std::optional<std::size_t> witness;  // curve position of the worst cigar point
};

/// Least C for which c is C-uniform in the chosen metric, cigar condition
/// tested at interior curve vertices. Throws InputError on x = y or on an
/// interior vertex with zero boundary distance.
UniformityResult uniformity_constant(const Curve& c, Metric metric, const MetricOracles& oracles);

struct UniformCheck {
  bool pass = true;
  UniformityResult measured;
  /// Curve position of the cigar witness, or empty for a quasiconvexity failure.
  std::optional<std::size_t> witness;
  std::string reason;
};

/// Pass iff the measured constant is at most constant * factor.
UniformCheck check_uniform(const Curve& c, Metric metric, double constant, double factor,
                           const MetricOracles& oracles);

/// Largest uniformity constant over proper prefixes and suffixes, next to the
/// whole-curve constant. Flagged when a subcurve exceeds whole * factor.
struct SubcurveReport {
  double whole = 1.0;
  double worst = 0.0;
  std::size_t from = 0, to = 0;
  bool flagged = false;
};
SubcurveReport subcurve_uniformity(const Curve& c, Metric metric, const MetricOracles& oracles,
                                   double factor);

}  // namespace cdeform
