#include <algorithm>

#include "cdeform/curve.hpp"
#include "cdeform/deform.hpp"

namespace cdeform {

Curve make_curve(const DeformedDomain& dd, std::vector<VertexIndex> path) {
  if (path.empty()) throw InputError("empty curve");
  const auto& adj = dd.base().adjacency();
  Curve c;
  c.cum_d.assign(path.size(), 0);
  c.cum_phi.assign(path.size(), 0);
  const auto d = dd.ticks(Metric::d), phi = dd.ticks(Metric::phi);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto e = adj.find_edge(path[i - 1], path[i]);
    if (!e)
      throw InputError("curve steps between non-adjacent vertices " +
                       std::to_string(dd.base().id(path[i - 1])) + " and " +
                       std::to_string(dd.base().id(path[i])));
    c.cum_d[i] = c.cum_d[i - 1] + d[*e];
    c.cum_phi[i] = c.cum_phi[i - 1] + phi[*e];
  }
  c.vertices = std::move(path);
  return c;
}

std::pair<double, double> lengths(const Curve& c) { return {c.len_d(), c.len_phi()}; }

Curve reverse(const Curve& c) {
  if (c.to_infinity) throw InputError("a curve to infinity cannot be reversed");
  Curve r;
  const auto n = c.size();
  r.vertices.assign(c.vertices.rbegin(), c.vertices.rend());
  r.cum_d.resize(n);
  r.cum_phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.cum_d[i] = c.cum_d.back() - c.cum_d[n - 1 - i];
    r.cum_phi[i] = c.cum_phi.back() - c.cum_phi[n - 1 - i];
  }
  return r;
}

Curve concat(const DeformedDomain& dd, const Curve& a, const Curve& b) {
  if (a.to_infinity) throw InputError("cannot extend a curve that already reaches infinity");
  if (a.back() != b.front()) throw InputError("concatenated curves do not share the joint vertex");
  auto path = a.vertices;
  path.insert(path.end(), b.vertices.begin() + 1, b.vertices.end());
  auto c = make_curve(dd, std::move(path));
  c.to_infinity = b.to_infinity;
  return c;
}

UniformityResult uniformity_constant(const Curve& c, Metric metric, const MetricOracles& oracles) {
  const bool infinite = c.to_infinity.has_value();
  if (infinite && metric == Metric::d)
    throw InputError("curves to infinity have infinite d-length");
  const VertexIndex x = c.front(), y = c.back();
  if (!infinite && x == y) throw InputError("uniformity constant needs distinct end points");

  const Ticks total = c.length_ticks(metric);
  const double dist = infinite ? oracles.infinity(x) : oracles.distance(x, y);
  if (!(dist > 0.0)) throw InputError("end points at zero distance");

  UniformityResult r;
  r.quasiconvexity = to_length(total) / dist;
  // For a curve to inf the frontier vertex is interior as well.
  const std::size_t last = infinite ? c.size() : c.size() - 1;
  for (std::size_t i = 1; i < last; ++i) {
    const Ticks pre = c.prefix(metric, i);
    const double shorter = to_length(std::min(pre, total - pre));
    const double bd = oracles.boundary(c.vertices[i]);
    if (!(bd > 0.0))
      throw InputError("interior curve vertex at zero boundary distance (position " +
                       std::to_string(i) + ")");
    const double ratio = shorter / bd;
    if (ratio > r.cigar) {
      r.cigar = ratio;
      r.witness = i;
    }
  }
  r.constant = std::max(r.quasiconvexity, r.cigar);
  return r;
}

UniformCheck check_uniform(const Curve& c, Metric metric, double constant, double factor,
                           const MetricOracles& oracles) {
  UniformCheck out;
  out.measured = uniformity_constant(c, metric, oracles);
  const double allowed = constant * factor;
  if (out.measured.constant <= allowed) return out;
  out.pass = false;
  if (out.measured.cigar > allowed) {
    out.witness = out.measured.witness;
    out.reason = "cigar condition fails at curve position " + std::to_string(*out.witness);
  } else {
    out.reason = "quasiconvexity ratio " + std::to_string(out.measured.quasiconvexity) +
                 " exceeds " + std::to_string(allowed);
  }
  return out;
}

}  // namespace cdeform

namespace cdeform {

Curve subcurve(const Curve& c, std::size_t from, std::size_t to) {
  if (from > to || to >= c.size()) throw InputError("subcurve range out of bounds");
  Curve s;
  s.vertices.assign(c.vertices.begin() + from, c.vertices.begin() + to + 1);
  for (std::size_t i = from; i <= to; ++i) {
    s.cum_d.push_back(c.cum_d[i] - c.cum_d[from]);
    s.cum_phi.push_back(c.cum_phi[i] - c.cum_phi[from]);
  }
  if (to + 1 == c.size()) s.to_infinity = c.to_infinity;
  return s;
}

SubcurveReport subcurve_uniformity(const Curve& c, Metric metric, const MetricOracles& oracles,
                                   double factor) {
  SubcurveReport r;
  r.whole = uniformity_constant(c, metric, oracles).constant;
  const auto n = c.size();
  auto consider = [&](std::size_t from, std::size_t to) {
    if (c.vertices[from] == c.vertices[to] && !(to + 1 == n && c.to_infinity)) return;
    const double k = uniformity_constant(subcurve(c, from, to), metric, oracles).constant;
    if (k > r.worst) {
      r.worst = k;
      r.from = from;
      r.to = to;
    }
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    consider(0, i);
    consider(i, n - 1);
  }
  r.flagged = r.worst > r.whole * factor;
  return r;
}

}  // namespace cdeform
