#include "cdeform/shortest_paths.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>

namespace cdeform {

std::optional<EdgeIndex> Adjacency::find_edge(VertexIndex u, VertexIndex v) const {
  for (auto i = offsets[u]; i < offsets[u + 1]; ++i) {
    if (neighbors[i] == v) return edge_of[i];
  }
  return std::nullopt;
}

Adjacency Adjacency::build(std::size_t num_vertices,
                           std::span<const std::pair<VertexIndex, VertexIndex>> edges) {
  Adjacency adj;
  adj.offsets.assign(num_vertices + 1, 0);
  for (const auto& [u, v] : edges) {
    ++adj.offsets[u + 1];
    ++adj.offsets[v + 1];
  }
  for (std::size_t i = 0; i < num_vertices; ++i) adj.offsets[i + 1] += adj.offsets[i];
  adj.neighbors.resize(adj.offsets.back());
  adj.edge_of.resize(adj.offsets.back());
  std::vector<std::uint32_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    adj.neighbors[fill[u]] = v;
    adj.edge_of[fill[u]++] = e;
    adj.neighbors[fill[v]] = u;
    adj.edge_of[fill[v]++] = e;
  }
  // Neighbor order sorted by index keeps relaxation order reproducible.
  for (std::size_t v = 0; v < num_vertices; ++v) {
    const auto lo = adj.offsets[v], hi = adj.offsets[v + 1];
    std::vector<std::pair<VertexIndex, EdgeIndex>> tmp;
    tmp.reserve(hi - lo);
    for (auto i = lo; i < hi; ++i) tmp.emplace_back(adj.neighbors[i], adj.edge_of[i]);
    std::sort(tmp.begin(), tmp.end());
    for (auto i = lo; i < hi; ++i) {
      adj.neighbors[i] = tmp[i - lo].first;
      adj.edge_of[i] = tmp[i - lo].second;
    }
  }
  return adj;
}

std::vector<VertexIndex> ShortestPathTree::path_to(VertexIndex target) const {
  std::vector<VertexIndex> path;
  if (!reached(target)) return path;
  for (VertexIndex v = target; v != kNoVertex; v = pred[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathTree shortest_paths(const Adjacency& adj, std::span<const Ticks> weights,
                                std::span<const char> terminal,
                                std::span<const VertexIndex> sources,
                                const SearchLimits& limits) {
  const auto n = adj.num_vertices();
  ShortestPathTree tree;
  tree.dist.assign(n, kUnreached);
  tree.pred.assign(n, kNoVertex);

  std::vector<char> is_source(sources.empty() ? 0 : n, 0);
  std::vector<char> settled(n, 0);
  using Entry = std::pair<Ticks, VertexIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (auto s : sources) {
    tree.dist[s] = 0;
    is_source[s] = 1;
    heap.emplace(0, s);
  }

  std::vector<char> wanted;
  std::size_t remaining = 0;
  if (!limits.targets.empty()) {
    wanted.assign(n, 0);
    for (auto t : limits.targets) {
      if (!wanted[t]) {
        wanted[t] = 1;
        ++remaining;
      }
    }
  }

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d != tree.dist[u]) continue;
    if (d > limits.radius) break;
    settled[u] = 1;
    if (!wanted.empty() && wanted[u] && --remaining == 0) break;
    if (terminal[u] && !is_source[u]) continue;
    adj.for_each_arc(u, [&](Adjacency::Arc arc) {
      const auto v = arc.to;
      if (settled[v]) return;
      const Ticks alt = d + weights[arc.edge];
      if (alt < tree.dist[v]) {
        tree.dist[v] = alt;
        tree.pred[v] = u;
        heap.emplace(alt, v);
      } else if (alt == tree.dist[v] && u < tree.pred[v]) {
        tree.pred[v] = u;
      }
    });
  }
  // Anything tentatively labelled but never settled lies beyond the limits.
  for (std::size_t v = 0; v < n; ++v) {
    if (!settled[v]) {
      tree.dist[v] = kUnreached;
      tree.pred[v] = kNoVertex;
    }
  }
  return tree;
}

}  // namespace cdeform
