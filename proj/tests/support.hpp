#pragma once
// Test-only helpers: a tiny seeded generator and brute-force oracles that
// share no code with the library's search routines.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "cdeform/deform.hpp"
#include "cdeform/domain.hpp"

namespace testing {

using cdeform::Ticks;
using cdeform::VertexIndex;

// splitmix64; deliberately not the library's generator.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t s_;
};

struct SmallGraph {
  std::size_t n = 0;
  std::vector<std::array<std::int64_t, 2>> edges;
  std::vector<double> lengths;
  std::vector<std::int64_t> boundary;
};

// Connected graph on n <= 10 vertices: a random tree plus a few chords.
// Vertex 0 is always boundary; others join it with probability 1/5.
inline SmallGraph random_small_graph(SplitMix& rng, std::size_t n) {
  SmallGraph g;
  g.n = n;
  auto has = [&](std::int64_t a, std::int64_t b) {
    for (auto& e : g.edges)
      if ((e[0] == a && e[1] == b) || (e[0] == b && e[1] == a)) return true;
    return false;
  };
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::int64_t>(rng.below(v));
    g.edges.push_back({u, static_cast<std::int64_t>(v)});
    g.lengths.push_back(rng.uniform(0.1, 2.0));
  }
  const std::size_t chords = rng.below(n + 1);
  for (std::size_t c = 0; c < chords; ++c) {
    const auto a = static_cast<std::int64_t>(rng.below(n));
    const auto b = static_cast<std::int64_t>(rng.below(n));
    if (a == b || has(a, b)) continue;
    g.edges.push_back({a, b});
    g.lengths.push_back(rng.uniform(0.1, 2.0));
  }
  g.boundary.push_back(0);
  for (std::size_t v = 1; v < n; ++v)
    if (rng.below(5) == 0) g.boundary.push_back(static_cast<std::int64_t>(v));
  return g;
}

inline cdeform::MetricDomain build(const SmallGraph& g) {
  cdeform::MetricDomain::Input in;
  for (std::size_t v = 0; v < g.n; ++v) in.ids.push_back(static_cast<std::int64_t>(v));
  in.edges = g.edges;
  in.lengths = g.lengths;
  in.boundary = g.boundary;
  in.meta.generator = "random_small";
  return cdeform::MetricDomain::build(std::move(in));
}

// Minimum over all simple paths s -> t of the summed edge ticks, where
// boundary vertices may only appear as end points. Exhaustive DFS.
inline Ticks brute_force_distance(const cdeform::MetricDomain& dom, std::span<const Ticks> weights,
                                  VertexIndex s, VertexIndex t) {
  if (s == t) return 0;
  const auto n = dom.num_vertices();
  std::vector<char> on_path(n, 0);
  Ticks best = cdeform::kUnreached;
  const auto edges = dom.edges();
  std::function<void(VertexIndex, Ticks)> dfs = [&](VertexIndex u, Ticks acc) {
    if (u == t) {
      best = std::min(best, acc);
      return;
    }
    if (u != s && dom.is_boundary(u)) return;
    on_path[u] = 1;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      VertexIndex v;
      if (edges[e].u == u) v = edges[e].v;
      else if (edges[e].v == u) v = edges[e].u;
      else continue;
      if (!on_path[v]) dfs(v, acc + weights[e]);
    }
    on_path[u] = 0;
  };
  dfs(s, 0);
  return best;
}

// Boundary distance by brute force: minimum over boundary vertices.
inline Ticks brute_force_boundary(const cdeform::MetricDomain& dom, std::span<const Ticks> weights,
                                  VertexIndex x) {
  Ticks best = cdeform::kUnreached;
  for (auto b : dom.boundary()) best = std::min(best, brute_force_distance(dom, weights, x, b));
  return best;
}

// Every simple path s -> t with interior vertices off the boundary.
inline std::vector<std::vector<VertexIndex>> all_simple_paths(const cdeform::MetricDomain& dom,
                                                              VertexIndex s, VertexIndex t) {
  std::vector<std::vector<VertexIndex>> out;
  std::vector<VertexIndex> path{s};
  std::vector<char> on_path(dom.num_vertices(), 0);
  std::function<void(VertexIndex)> dfs = [&](VertexIndex u) {
    if (u == t) {
      out.push_back(path);
      return;
    }
    if (u != s && dom.is_boundary(u)) return;
    on_path[u] = 1;
    for (const auto& e : dom.edges()) {
      VertexIndex v;
      if (e.u == u) v = e.v;
      else if (e.v == u) v = e.u;
      else continue;
      if (on_path[v]) continue;
      path.push_back(v);
      dfs(v);
      path.pop_back();
    }
    on_path[u] = 0;
  };
  if (s != t) dfs(s);
  return out;
}

// Straight O(n^2) Dijkstra over doubles on an explicit edge list, no heap, no
// boundary rule. Used where the boundary rule cannot matter.
inline std::vector<double> naive_distances(const cdeform::MetricDomain& dom, std::span<const Ticks> w,
                                           VertexIndex s) {
  const auto n = dom.num_vertices();
  std::vector<Ticks> dist(n, cdeform::kUnreached);
  std::vector<char> done(n, 0);
  std::vector<std::vector<std::pair<VertexIndex, Ticks>>> nb(n);
  const auto edges = dom.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    nb[edges[e].u].push_back({edges[e].v, w[e]});
    nb[edges[e].v].push_back({edges[e].u, w[e]});
  }
  dist[s] = 0;
  for (std::size_t round = 0; round < n; ++round) {
    VertexIndex u = cdeform::kNoVertex;
    for (VertexIndex v = 0; v < n; ++v)
      if (!done[v] && dist[v] != cdeform::kUnreached && (u == cdeform::kNoVertex || dist[v] < dist[u])) u = v;
    if (u == cdeform::kNoVertex) break;
    done[u] = 1;
    if (u != s && dom.is_boundary(u)) continue;
    for (auto [v, len] : nb[u]) dist[v] = std::min(dist[v], dist[u] + len);
  }
  std::vector<double> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = cdeform::to_length(dist[v]);
  return out;
}

// Exhaustive uniformity constant with brute-force distances.
inline double exhaustive_constant(const cdeform::MetricDomain& dom, std::span<const Ticks> w, const std::vector<VertexIndex>& path) {
  std::vector<Ticks> cum{0};
  for (std::size_t i = 1; i < path.size(); ++i) {
    Ticks step = 0;
    for (std::size_t e = 0; e < dom.edges().size(); ++e) {
      const auto& ed = dom.edges()[e];
      if ((ed.u == path[i - 1] && ed.v == path[i]) || (ed.v == path[i - 1] && ed.u == path[i])) step = w[e];
    }
    cum.push_back(cum.back() + step);
  }
  const Ticks total = cum.back();
  double k = cdeform::to_length(total) / cdeform::to_length(brute_force_distance(dom, w, path.front(), path.back()));
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const double bd = cdeform::to_length(brute_force_boundary(dom, w, path[i]));
    k = std::max(k, cdeform::to_length(std::min(cum[i], total - cum[i])) / bd);
  }
  return k;
}

}  // namespace testing
