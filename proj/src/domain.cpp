#include "cdeform/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cdeform/sampling.hpp"

namespace cdeform {

std::optional<double> DomainMeta::param(const std::string& key) const {
  if (auto it = params.find(key); it != params.end()) return it->second;
  return std::nullopt;
}

MetricDomain MetricDomain::build(Input in) {
  MetricDomain dom;
  const std::size_t n = in.ids.size();
  if (n == 0) throw InputError("domain has no vertices");
  if (!in.coords.empty() && in.coords.size() != n)
    throw InputError("coordinates given for some vertices but not all");
  if (in.lengths.size() != in.edges.size()) throw InputError("edge/length count mismatch");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return in.ids[a] < in.ids[b]; });
  dom.ids_.resize(n);
  if (!in.coords.empty()) dom.coords_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    dom.ids_[i] = in.ids[order[i]];
    if (i > 0 && dom.ids_[i] == dom.ids_[i - 1])
      throw InputError("duplicate vertex id " + std::to_string(dom.ids_[i]));
    if (!in.coords.empty()) dom.coords_[i] = in.coords[order[i]];
  }
  dom.coord_dim_ = in.coords.empty() ? 0 : in.coord_dim;

  auto lookup = [&](std::int64_t id, const char* what) {
    auto idx = dom.index_of(id);
    if (!idx) throw InputError(std::string(what) + " refers to unknown vertex id " + std::to_string(id));
    return *idx;
  };

  dom.boundary_mask_.assign(n, 0);
  dom.frontier_mask_.assign(n, 0);
  for (auto id : in.boundary) dom.boundary_mask_[lookup(id, "boundary")] = 1;
  for (auto id : in.frontier) {
    const auto v = lookup(id, "frontier");
    if (dom.boundary_mask_[v])
      throw InputError("vertex " + std::to_string(id) + " is both boundary and frontier");
    dom.frontier_mask_[v] = 1;
  }
  for (VertexIndex v = 0; v < n; ++v) {
    if (dom.boundary_mask_[v]) dom.boundary_.push_back(v);
    if (dom.frontier_mask_[v]) dom.frontier_.push_back(v);
  }
  if (dom.boundary_.empty()) throw InputError("empty boundary");
  if (dom.boundary_.size() == n) throw InputError("domain has no interior vertices");

  std::vector<std::pair<VertexIndex, VertexIndex>> pairs;
  pairs.reserve(in.edges.size());
  dom.edges_.reserve(in.edges.size());
  dom.edge_ticks_.reserve(in.edges.size());
  Ticks total = 0;
  double min_len = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < in.edges.size(); ++e) {
    const auto [a, b] = in.edges[e];
    const double len = in.lengths[e];
    const std::string tag = "edge " + std::to_string(e) + " (" + std::to_string(a) + "," +
                            std::to_string(b) + ")";
    if (!(len > 0.0) || !std::isfinite(len)) throw InputError("non-positive edge length at " + tag);
    const auto u = lookup(a, "edge"), v = lookup(b, "edge");
    if (u == v) throw InputError("self-loop at " + tag);
    const Ticks t = to_ticks(len);
    if (t <= 0) throw InputError("edge length below fixed-point resolution at " + tag);
    if (t > kMaxTotalTicks - total) throw InputError("total edge length too large at " + tag);
    total += t;
    pairs.emplace_back(u, v);
    dom.edges_.push_back({u, v, len});
    dom.edge_ticks_.push_back(t);
    min_len = std::min(min_len, len);
    dom.max_edge_length_ = std::max(dom.max_edge_length_, len);
  }
  dom.adj_ = Adjacency::build(n, pairs);
  for (VertexIndex v = 0; v < n; ++v) {
    std::vector<VertexIndex> nb;
    dom.adj_.for_each_arc(v, [&](Adjacency::Arc a) { nb.push_back(a.to); });
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw InputError("parallel edges at vertex id " + std::to_string(dom.ids_[v]));
  }

  // Connectivity under the curve rule: boundary vertices are endpoints only,
  // so every vertex must be reachable from the boundary set.
  std::vector<Ticks> unit(dom.edges_.size(), 1);
  const auto tree = shortest_paths(dom.adj_, unit, dom.boundary_mask_, dom.boundary_);
  for (VertexIndex v = 0; v < n; ++v) {
    if (!tree.reached(v))
      throw InputError("disconnected graph: vertex id " + std::to_string(dom.ids_[v]) +
                       " is unreachable");
  }

  dom.meta_ = std::move(in.meta);
  dom.spacing_ = dom.meta_.param("h").value_or(min_len);
  if (!(dom.spacing_ > 0.0)) throw InputError("non-positive grid spacing h");
  return dom;
}

std::optional<VertexIndex> MetricDomain::index_of(std::int64_t id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<VertexIndex>(it - ids_.begin());
}

VertexIndex MetricDomain::nearest_vertex(std::span<const double> point) const {
  if (coord_dim_ == 0) throw InputError("domain has no coordinates; address vertices by id");
  VertexIndex best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (VertexIndex v = 0; v < num_vertices(); ++v) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < point.size() && k < 3; ++k) {
      const double diff = coords_[v][k] - point[k];
      d2 += diff * diff;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best = v;
    }
  }
  return best;
}

int shell_index(Ticks d) {
  const Ticks one = to_ticks(1.0);
  if (d <= one) return 0;
  int n = 1;
  // 2^n in ticks; the shift is exact because kTicksPerUnit is a power of two.
  while (n < 60 && d > (one << n)) ++n;
  return n;
}

int shell_index(double d) {
  if (d <= 1.0) return 0;
  int n = 1;
  while (n < 1100 && d > std::ldexp(1.0, n)) ++n;
  return n;
}

int BoundaryDistanceField::max_shell() const {
  return shell.empty() ? 0 : *std::max_element(shell.begin(), shell.end());
}

BoundaryDistanceField boundary_distance(const MetricDomain& domain) {
  const auto tree = shortest_paths(domain.adjacency(), domain.edge_ticks(),
                                   domain.boundary_mask(), domain.boundary());
  BoundaryDistanceField field;
  field.distance = tree.dist;
  field.shell.resize(field.distance.size());
  for (std::size_t v = 0; v < field.distance.size(); ++v)
    field.shell[v] = shell_index(field.distance[v]);
  return field;
}

void check_frontier_radius(const MetricDomain& domain, const BoundaryDistanceField& field) {
  const auto radius = domain.meta().param("R");
  if (!radius) return;
  // Grid coordinates and path sums agree only up to fixed-point rounding.
  const double slack = 1e-9 * std::max(1.0, *radius);
  for (auto f : domain.frontier()) {
    if (field.value(f) < *radius - slack)
      throw InputError("frontier vertex id " + std::to_string(domain.id(f)) +
                       " has d_Omega below R");
  }
}

namespace {

double coord_distance(const MetricDomain& dom, VertexIndex a, VertexIndex b) {
  double s = 0.0;
  for (int k = 0; k < dom.coord_dim(); ++k) {
    const double diff = dom.coords(a)[k] - dom.coords(b)[k];
    s += diff * diff;
  }
  return std::sqrt(s);
}

// Accumulates ratios for one geodesic, already extracted as a vertex path.
void accumulate(const MetricDomain& dom, const BoundaryDistanceField& field,
                std::span<const VertexIndex> path, Ticks pair_distance,
                MetricConstantsEstimate& est) {
  std::vector<Ticks> cum(path.size(), 0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto e = dom.adjacency().find_edge(path[i - 1], path[i]);
    cum[i] = cum[i - 1] + dom.edge_ticks()[*e];
  }
  const Ticks total = cum.back();
  if (dom.coord_dim() > 0) {
    const double chord = coord_distance(dom, path.front(), path.back());
    if (chord > 0.0) est.quasiconvexity = std::max(est.quasiconvexity, to_length(total) / chord);
  } else {
    est.quasiconvexity =
        std::max(est.quasiconvexity, to_length(total) / to_length(pair_distance));
  }
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const Ticks shorter = std::min(cum[i], total - cum[i]);
    const Ticks bd = field.distance[path[i]];
    if (bd <= 0) continue;
    est.uniformity = std::max(est.uniformity, to_length(shorter) / to_length(bd));
  }
}

}  // namespace

MetricConstantsEstimate estimate_metric_constants(
    const MetricDomain& domain, const BoundaryDistanceField& field,
    std::span<const std::pair<VertexIndex, VertexIndex>> pairs) {
  MetricConstantsEstimate est;
  // Group by source so each tree is built once.
  std::map<VertexIndex, std::vector<VertexIndex>> by_source;
  for (auto [x, y] : pairs) {
    if (x == y) {
      ++est.skipped;
      continue;
    }
    by_source[x].push_back(y);
  }
  for (const auto& [x, targets] : by_source) {
    const VertexIndex src[] = {x};
    const auto tree = shortest_paths(domain.adjacency(), domain.edge_ticks(),
                                     domain.boundary_mask(), src, SearchLimits{targets});
    for (auto y : targets) {
      const auto path = tree.path_to(y);
      accumulate(domain, field, path, tree.dist[y], est);
      ++est.pairs;
    }
  }
  if (est.pairs == 0) throw InputError("empty sample set for metric constant estimation");
  return est;
}

MetricConstantsEstimate estimate_metric_constants(const MetricDomain& domain,
                                                  const BoundaryDistanceField& field,
                                                  std::size_t budget, std::uint64_t seed) {
  if (budget == 0) throw InputError("sample budget must be at least 1");
  const auto pairs = sample_interior_pairs(domain, budget, seed);
  return estimate_metric_constants(domain, field, pairs);
}

}  // namespace cdeform
