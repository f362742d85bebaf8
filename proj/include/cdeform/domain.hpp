#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdeform/shortest_paths.hpp"
#include "cdeform/types.hpp"

namespace cdeform {

struct DomainEdge {
  VertexIndex u;
  VertexIndex v;
  double length;
};

/// Descriptive data carried alongside a domain; numeric generator parameters
/// (h, R, W, conn, ...) live in `params`.
struct DomainMeta {
  std::string generator;
  std::map<std::string, double> params;

  std::optional<double> param(const std::string& key) const;
};

/// A finite graph approximating a metric domain (Omega, d). Boundary vertices
/// sample the completion boundary; frontier vertices mark the outer truncation
/// that stands in for escape to infinity.
///
/// Immutable once built. Vertex indices are dense and ordered like the
/// external ids, so "smallest id" and "smallest index" agree.
class MetricDomain {
 public:
  struct Input {
    std::vector<std::int64_t> ids;
    std::vector<std::array<double, 3>> coords;  // empty, or one per vertex
    int coord_dim = 0;                          // 0, 2 or 3
    std::vector<std::array<std::int64_t, 2>> edges;  // by external id
    std::vector<double> lengths;
    std::vector<std::int64_t> boundary;
    std::vector<std::int64_t> frontier;
    DomainMeta meta;
  };

  /// Validates and indexes the input. Throws InputError naming the offending
  /// element on: duplicate/unknown ids, non-positive or unrepresentable edge
  /// lengths, empty boundary, boundary/frontier overlap, disconnected graph.
  static MetricDomain build(Input input);

  std::size_t num_vertices() const { return ids_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const DomainEdge> edges() const { return edges_; }
  std::span<const Ticks> edge_ticks() const { return edge_ticks_; }
  const Adjacency& adjacency() const { return adj_; }

  std::int64_t id(VertexIndex v) const { return ids_[v]; }
  std::optional<VertexIndex> index_of(std::int64_t id) const;

  bool is_boundary(VertexIndex v) const { return boundary_mask_[v] != 0; }
  bool is_frontier(VertexIndex v) const { return frontier_mask_[v] != 0; }
  std::span<const char> boundary_mask() const { return boundary_mask_; }
  std::span<const VertexIndex> boundary() const { return boundary_; }
  std::span<const VertexIndex> frontier() const { return frontier_; }

  int coord_dim() const { return coord_dim_; }
  const std::array<double, 3>& coords(VertexIndex v) const { return coords_[v]; }

  const DomainMeta& meta() const { return meta_; }

  /// Grid spacing h: from metadata when present, else the shortest edge.
  double spacing() const { return spacing_; }
  /// Longest edge in the d metric.
  double max_edge_length() const { return max_edge_length_; }

  /// Vertex whose coordinates are closest to `point` (ties to smallest id).
  VertexIndex nearest_vertex(std::span<const double> point) const;

 private:
  MetricDomain() = default;

  std::vector<std::int64_t> ids_;
  std::vector<std::array<double, 3>> coords_;
  int coord_dim_ = 0;
  std::vector<DomainEdge> edges_;
  std::vector<Ticks> edge_ticks_;
  Adjacency adj_;
  std::vector<char> boundary_mask_;
  std::vector<char> frontier_mask_;
  std::vector<VertexIndex> boundary_;
  std::vector<VertexIndex> frontier_;
  DomainMeta meta_;
  double spacing_ = 0.0;
  double max_edge_length_ = 0.0;
};

/// Dyadic shell index: 0 when d <= 1, otherwise n with 2^(n-1) < d <= 2^n.
int shell_index(Ticks boundary_distance);
int shell_index(double boundary_distance);

/// Distance-to-boundary field d_Omega and its shell decomposition.
struct BoundaryDistanceField {
  std::vector<Ticks> distance;
  std::vector<int> shell;

  double value(VertexIndex v) const { return to_length(distance[v]); }
  int max_shell() const;
};

BoundaryDistanceField boundary_distance(const MetricDomain& domain);

/// Throws InputError if any frontier vertex lies closer than the truncation
/// radius R recorded in the metadata.
void check_frontier_radius(const MetricDomain& domain, const BoundaryDistanceField& field);

// --- generators ---------------------------------------------------------

struct GeneratorSpec {
  std::string name;  // half_plane | strip | slit_plane
  std::map<std::string, double> params;

  /// Parses "half_plane:W=40,R=40,h=0.05,conn=8".
  static GeneratorSpec parse(const std::string& text);
  std::string to_string() const;
};

MetricDomain generate_domain(const GeneratorSpec& spec);

MetricDomain half_plane(double width, double height, double h, int connectivity);
MetricDomain strip(double width, double h, int connectivity = 8);
MetricDomain slit_plane(double radius, double h, int connectivity = 8);

// --- serialization ------------------------------------------------------

MetricDomain load_domain(const std::filesystem::path& file);
MetricDomain parse_domain(const std::string& json_text);
void save_domain(const MetricDomain& domain, const std::filesystem::path& file);
std::string serialize_domain(const MetricDomain& domain);

/// Accepts either a generator spec string or a path to a domain file.
MetricDomain resolve_domain(const std::string& spec_or_path);

// --- empirical constants -----------------------------------------------

struct MetricConstantsEstimate {
  double quasiconvexity = 1.0;  // C_q
  double uniformity = 1.0;      // C_U
  std::size_t pairs = 0;
  std::size_t skipped = 0;
};

/// Samples vertex pairs (seeded), takes the d-geodesic of each, and reports
/// the largest quasiconvexity and cigar ratios seen. Pairs are grouped by
/// source so one shortest-path tree serves many targets.
MetricConstantsEstimate estimate_metric_constants(const MetricDomain& domain,
                                                  const BoundaryDistanceField& field,
                                                  std::size_t budget, std::uint64_t seed);

/// Same estimate over caller-chosen pairs.
MetricConstantsEstimate estimate_metric_constants(
    const MetricDomain& domain, const BoundaryDistanceField& field,
    std::span<const std::pair<VertexIndex, VertexIndex>> pairs);

}  // namespace cdeform
