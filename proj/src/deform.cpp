#include "cdeform/deform.hpp"

#include <algorithm>
#include <cmath>

namespace cdeform {

Quadrature Quadrature::subdivided(int k) {
  if (k < 1 || k > 4096) throw InputError("quadrature subdivision must lie in [1, 4096]");
  return {k};
}

Quadrature Quadrature::parse(const std::string& text) {
  if (text == "trapezoid") return trapezoid();
  std::string digits;
  if (text.rfind("subdivided:", 0) == 0) digits = text.substr(11);
  else if (text.rfind("sub", 0) == 0) digits = text.substr(3);
  else throw InputError("unknown quadrature " + text);
  try {
    std::size_t used = 0;
    const int k = std::stoi(digits, &used);
    if (used != digits.size()) throw std::invalid_argument(digits);
    return subdivided(k);
  } catch (const std::logic_error&) {
    throw InputError("bad quadrature order in " + text);
  }
}

std::string Quadrature::to_string() const {
  return pieces == 1 ? std::string("trapezoid") : "subdivided:" + std::to_string(pieces);
}

double edge_weight_average(const WeightFunction& w, double a, double b, double half_h, int pieces) {
  double sum = 0.0;
  for (int i = 0; i <= pieces; ++i) {
    const double t = a + (b - a) * i / pieces;
    const double f = w.eval(std::max(half_h, t));
    sum += (i == 0 || i == pieces) ? 0.5 * f : f;
  }
  return sum / pieces;
}

DeformedDomain::DeformedDomain(const MetricDomain& domain, BoundaryDistanceField field,
                               WeightFunction weight, Quadrature quadrature)
    : domain_(&domain),
      field_(std::move(field)),
      weight_(std::move(weight)),
      quadrature_(quadrature),
      lazy_(std::make_unique<Lazy>()) {
  if (field_.distance.size() != domain.num_vertices())
    throw InputError("distance field does not match the domain");
  const double h = domain.spacing();
  if (h > 2.0) throw InputError("grid spacing h must be at most 2 for the boundary clamp");
  const double half_h = 0.5 * h;
  const auto edges = domain.edges();
  const auto base = domain.edge_ticks();
  phi_ticks_.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double avg = edge_weight_average(weight_, field_.value(edges[e].u),
                                           field_.value(edges[e].v), half_h, quadrature_.pieces);
    if (avg == 1.0) {
      phi_ticks_[e] = base[e];
    } else {
      const auto t = static_cast<Ticks>(std::llround(static_cast<double>(base[e]) * avg));
      phi_ticks_[e] = std::clamp<Ticks>(t, 1, base[e]);
    }
  }
  for (auto f : domain.frontier()) {
    const int s = field_.shell[f];
    frontier_shell_ = frontier_shell_ < 0 ? s : std::min(frontier_shell_, s);
  }
}

ShortestPathTree DeformedDomain::tree(Metric m, VertexIndex source,
                                      const SearchLimits& limits) const {
  const VertexIndex src[] = {source};
  return tree(m, src, limits);
}

ShortestPathTree DeformedDomain::tree(Metric m, std::span<const VertexIndex> sources,
                                      const SearchLimits& limits) const {
  return shortest_paths(base().adjacency(), ticks(m), base().boundary_mask(), sources, limits);
}

const ShortestPathTree& DeformedDomain::frontier_tree(Metric m) const {
  if (base().frontier().empty())
    throw InputError("domain has no frontier; distances to infinity are undefined");
  const int i = m == Metric::d ? 0 : 1;
  std::call_once(lazy_->frontier_once[i],
                 [&] { lazy_->frontier[i] = tree(m, base().frontier()); });
  return lazy_->frontier[i];
}

const std::vector<Ticks>& DeformedDomain::phi_boundary_field() const {
  std::call_once(lazy_->boundary_once,
                 [&] { lazy_->boundary = tree(Metric::phi, base().boundary()).dist; });
  return lazy_->boundary;
}

DeformedDomain deform(const MetricDomain& domain, const BoundaryDistanceField& field,
                      const WeightFunction& weight, Quadrature quadrature) {
  return DeformedDomain(domain, field, weight, quadrature);
}

Ticks dphi_distance_ticks(const DeformedDomain& dd, VertexIndex x, VertexIndex y) {
  if (x == y) return 0;
  const VertexIndex target[] = {y};
  const auto t = dd.tree(Metric::phi, x, SearchLimits{target});
  if (!t.reached(y)) throw NumericalError("vertex unreachable in d_phi");
  return t.dist[y];
}

double dphi_distance(const DeformedDomain& dd, VertexIndex x, VertexIndex y) {
  return to_length(dphi_distance_ticks(dd, x, y));
}

Curve geodesic(const DeformedDomain& dd, Metric m, VertexIndex x, VertexIndex y) {
  const VertexIndex target[] = {y};
  const auto t = dd.tree(m, x, SearchLimits{target});
  auto path = t.path_to(y);
  if (path.empty()) throw NumericalError("vertex unreachable");
  return make_curve(dd, std::move(path));
}

Curve dphi_geodesic(const DeformedDomain& dd, VertexIndex x, VertexIndex y) {
  return geodesic(dd, Metric::phi, x, y);
}

InfinityEstimate dist_to_infinity(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                  VertexIndex x) {
  const auto& ft = dd.frontier_tree();
  InfinityEstimate est;
  est.x = x;
  est.frontier_distance = to_length(ft.dist[x]);
  est.frontier_shell = dd.frontier_shell();
  const auto& w = dd.weight();
  // Frontiers shallower than n0 shells would index a negative tail; the tail
  // from 0 still bounds the escape cost from above.
  const int from = std::max(0, est.frontier_shell - bundle.n0);
  est.escape = bundle.c_u * bundle.c_phi * w.tail_sum(from);
  est.upper = est.frontier_distance + est.escape;
  const double shell_lower = 5.0 / 11.0 * w.tail_sum(dd.field().shell[x] + 1);
  est.lower = est.frontier_distance;
  if (shell_lower > est.upper) {
    est.note = "frontier distance plus escape bound; shell lower bound above upper end, not used";
  } else if (shell_lower > est.lower) {
    est.lower = shell_lower;
    est.note = "shell lower bound; frontier distance plus escape bound";
  } else {
    est.note = "frontier distance plus escape bound";
  }
  if (from != est.frontier_shell - bundle.n0) est.note += "; tail index clamped at 0";
  return est;
}

Curve dphi_path_to_infinity(const DeformedDomain& dd, const ConstantsBundle& bundle,
                            VertexIndex x) {
  auto path = dd.frontier_tree().path_to(x);
  std::reverse(path.begin(), path.end());
  auto c = make_curve(dd, std::move(path));
  c.to_infinity = dist_to_infinity(dd, bundle, c.back());
  return c;
}

double dphi_boundary_distance(const DeformedDomain& dd, VertexIndex x) {
  return to_length(dd.phi_boundary_field()[x]);
}

std::shared_ptr<const ShortestPathTree> TreeCache::get(Metric m, VertexIndex source) {
  {
    std::lock_guard lock(mutex_);
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->metric == m && it->source == source) {
        entries_.splice(entries_.begin(), entries_, it);
        return entries_.front().tree;
      }
    }
  }
  auto tree = std::make_shared<const ShortestPathTree>(dd_.tree(m, source));
  std::lock_guard lock(mutex_);
  entries_.push_front({m, source, tree});
  while (entries_.size() > capacity_) entries_.pop_back();
  return tree;
}

double TreeCache::distance(Metric m, VertexIndex x, VertexIndex y) {
  return to_length(get(m, x)->dist[y]);
}

}  // namespace cdeform
