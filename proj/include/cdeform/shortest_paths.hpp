#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cdeform/types.hpp"

namespace cdeform {

/// Compressed adjacency of an undirected graph. Each undirected edge appears
/// twice in `neighbors`, once per endpoint, with `edge_of` giving its index.
struct Adjacency {
  std::vector<std::uint32_t> offsets;  // size n + 1
  std::vector<VertexIndex> neighbors;
  std::vector<EdgeIndex> edge_of;

  std::size_t num_vertices() const { return offsets.empty() ? 0 : offsets.size() - 1; }

  struct Arc {
    VertexIndex to;
    EdgeIndex edge;
  };

  template <typename F>
  void for_each_arc(VertexIndex v, F&& f) const {
    for (auto i = offsets[v]; i < offsets[v + 1]; ++i) f(Arc{neighbors[i], edge_of[i]});
  }

  /// Edge joining u and v, or none.
  std::optional<EdgeIndex> find_edge(VertexIndex u, VertexIndex v) const;

  static Adjacency build(std::size_t num_vertices,
                         std::span<const std::pair<VertexIndex, VertexIndex>> edges);
};

struct SearchLimits {
  /// Stop as soon as every listed vertex is settled. Empty: no target stop.
  std::span<const VertexIndex> targets{};
  /// Vertices farther than this are never settled.
  Ticks radius = kUnreached;
};

/// Result of a (multi-)source Dijkstra run. Ties between equal-length
/// predecessors resolve to the smallest vertex index.
struct ShortestPathTree {
  std::vector<Ticks> dist;
  std::vector<VertexIndex> pred;

  bool reached(VertexIndex v) const { return dist[v] != kUnreached; }

  /// Vertices from the tree root to `target`, inclusive. Empty if unreached.
  std::vector<VertexIndex> path_to(VertexIndex target) const;
};

/// Dijkstra over `weights` (indexed by edge). Vertices flagged in `terminal`
/// can be reached but are never expanded unless they are sources; this is how
/// boundary points stay out of curve interiors.
ShortestPathTree shortest_paths(const Adjacency& adj, std::span<const Ticks> weights,
                                std::span<const char> terminal,
                                std::span<const VertexIndex> sources,
                                const SearchLimits& limits = {});

}  // namespace cdeform
