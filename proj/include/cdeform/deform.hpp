#pragma once

#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cdeform/constants.hpp"
#include "cdeform/curve.hpp"
#include "cdeform/domain.hpp"
#include "cdeform/weight.hpp"

namespace cdeform {

/// Per-edge rule for integrating phi(d_Omega) along an edge.
struct Quadrature {
  int pieces = 4;  // 1 is the plain trapezoid rule

  static Quadrature trapezoid() { return {1}; }
  static Quadrature subdivided(int k);
  /// "trapezoid", "subdivided:8" or "sub8".
  static Quadrature parse(const std::string& text);
  std::string to_string() const;
};

/// The deformed space (Omega_phi, d_phi) on the graph of a MetricDomain.
/// Holds a reference to the domain, which must outlive it. Immutable after
/// construction; the lazily built fields are guarded and safe to share.
class DeformedDomain {
 public:
  DeformedDomain(const MetricDomain& domain, BoundaryDistanceField field, WeightFunction weight,
                 Quadrature quadrature = {});

  const MetricDomain& base() const { return *domain_; }
  const BoundaryDistanceField& field() const { return field_; }
  const WeightFunction& weight() const { return weight_; }
  const Quadrature& quadrature() const { return quadrature_; }

  std::span<const Ticks> phi_ticks() const { return phi_ticks_; }
  std::span<const Ticks> ticks(Metric m) const {
    return m == Metric::d ? base().edge_ticks() : std::span<const Ticks>(phi_ticks_);
  }
  double phi_length(EdgeIndex e) const { return to_length(phi_ticks_[e]); }

  /// Smallest shell index over the frontier; -1 without a frontier.
  int frontier_shell() const { return frontier_shell_; }

  /// Single-source search in either metric under the boundary rule.
  ShortestPathTree tree(Metric m, VertexIndex source, const SearchLimits& limits = {}) const;
  ShortestPathTree tree(Metric m, std::span<const VertexIndex> sources,
                        const SearchLimits& limits = {}) const;

  /// Multi-source tree rooted at the frontier: distance to the nearest
  /// frontier vertex and a path there. Throws InputError without a frontier.
  const ShortestPathTree& frontier_tree(Metric m = Metric::phi) const;
  /// d_phi to the nearest boundary vertex, per vertex.
  const std::vector<Ticks>& phi_boundary_field() const;

 private:
  struct Lazy {
    std::once_flag frontier_once[2], boundary_once;
    ShortestPathTree frontier[2];
    std::vector<Ticks> boundary;
  };

  const MetricDomain* domain_;
  BoundaryDistanceField field_;
  WeightFunction weight_;
  Quadrature quadrature_;
  std::vector<Ticks> phi_ticks_;
  int frontier_shell_ = -1;
  std::unique_ptr<Lazy> lazy_;
};

/// Mean of phi(max(h/2, t)) over an edge whose d_Omega runs linearly from a
/// to b, by the composite trapezoid rule with `pieces` panels.
double edge_weight_average(const WeightFunction& w, double a, double b, double half_h, int pieces);

/// Re-weights every edge by phi(d_Omega). Requires h <= 2.
DeformedDomain deform(const MetricDomain& domain, const BoundaryDistanceField& field,
                      const WeightFunction& weight, Quadrature quadrature = {});

double dphi_distance(const DeformedDomain& dd, VertexIndex x, VertexIndex y);
Ticks dphi_distance_ticks(const DeformedDomain& dd, VertexIndex x, VertexIndex y);
Curve dphi_geodesic(const DeformedDomain& dd, VertexIndex x, VertexIndex y);
/// Geodesic in either metric (d-geodesics are the discrete uniform curves).
Curve geodesic(const DeformedDomain& dd, Metric m, VertexIndex x, VertexIndex y);

/// Shortest d_phi path from x to the frontier, as a curve to inf.
Curve dphi_path_to_infinity(const DeformedDomain& dd, const ConstantsBundle& bundle, VertexIndex x);

/// [max(D, 5/11 tail(m+1)), D + C_U C_phi tail(M - n0)], D the d_phi
/// distance from x to the frontier and M the frontier shell.
InfinityEstimate dist_to_infinity(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                  VertexIndex x);

/// d_{Omega_phi}(x): d_phi distance to the boundary vertex set.
double dphi_boundary_distance(const DeformedDomain& dd, VertexIndex x);

/// Small LRU of single-source trees, keyed by (metric, source). Thread safe;
/// returned trees are shared and immutable.
class TreeCache {
 public:
  TreeCache(const DeformedDomain& dd, std::size_t capacity = 8) : dd_(dd), capacity_(capacity) {}

  std::shared_ptr<const ShortestPathTree> get(Metric m, VertexIndex source);
  double distance(Metric m, VertexIndex x, VertexIndex y);

 private:
  struct Entry {
    Metric metric;
    VertexIndex source;
    std::shared_ptr<const ShortestPathTree> tree;
  };
  const DeformedDomain& dd_;
  std::size_t capacity_;
  std::mutex mutex_;
  std::list<Entry> entries_;
};

}  // namespace cdeform
