#include "cdeform/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cdeform/parallel.hpp"
#include "cdeform/sampling.hpp"

namespace cdeform {

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::small: return "small";
    case CaseTag::medium_inside: return "medium_inside";
    case CaseTag::medium_spliced: return "medium_spliced";
    case CaseTag::large_k: return "large_k";
    case CaseTag::cross_border: return "cross_border";
    case CaseTag::to_infinity_deep: return "to_infinity_deep";
    case CaseTag::to_infinity_shallow: return "to_infinity_shallow";
  }
  return "?";
}

ProofCase classify(int m, int k, int m0) {
  if (k < 0) return m >= m0 ? ProofCase::infinity_deep : ProofCase::infinity_shallow;
  if (m > k) std::swap(m, k);
  if (m >= m0) return ProofCase::large;
  if (k <= m0) return ProofCase::bounded;
  return ProofCase::cross;
}

Curve uniform_curve_d(const DeformedDomain& dd, VertexIndex x, VertexIndex y) {
  return geodesic(dd, Metric::d, x, y);
}

MetricOracles phi_oracles(const DeformedDomain& dd, const ConstantsBundle& bundle) {
  MetricOracles o;
  o.distance = [&dd](VertexIndex a, VertexIndex b) { return dphi_distance(dd, a, b); };
  o.boundary = [&dd](VertexIndex a) { return dphi_boundary_distance(dd, a); };
  o.infinity = [&dd, bundle](VertexIndex a) { return dist_to_infinity(dd, bundle, a).lower; };
  return o;
}

MetricOracles d_oracles(const DeformedDomain& dd) {
  MetricOracles o;
  o.distance = [&dd](VertexIndex a, VertexIndex b) {
    return a == b ? 0.0 : geodesic(dd, Metric::d, a, b).len_d();
  };
  o.boundary = [&dd](VertexIndex a) { return dd.field().value(a); };
  return o;
}

std::vector<VertexIndex> erase_loops(const std::vector<VertexIndex>& path) {
  std::vector<VertexIndex> out;
  std::unordered_map<VertexIndex, std::size_t> where;
  for (auto v : path) {
    if (auto it = where.find(v); it != where.end()) {
      const auto keep = it->second + 1;
      for (std::size_t i = keep; i < out.size(); ++i) where.erase(out[i]);
      out.resize(keep);
      continue;
    }
    where[v] = out.size();
    out.push_back(v);
  }
  return out;
}

namespace {

std::vector<VertexIndex> slice(const Curve& c, std::size_t from, std::size_t to) {
  return {c.vertices.begin() + static_cast<std::ptrdiff_t>(from),
          c.vertices.begin() + static_cast<std::ptrdiff_t>(to) + 1};
}

// Joins vertex runs that share their end/start vertex, then erases loops.
Curve join(const DeformedDomain& dd, std::initializer_list<std::vector<VertexIndex>> parts,
           bool& erased) {
  std::vector<VertexIndex> path;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    const auto skip = (!path.empty() && path.back() == p.front()) ? 1 : 0;
    path.insert(path.end(), p.begin() + skip, p.end());
  }
  auto clean = erase_loops(path);
  erased = clean.size() != path.size();
  return make_curve(dd, std::move(clean));
}

// Cigar ratio of a d-curve; for a curve that heads to inf only the prefix
// side counts. Floored at 1.
double d_uniformity(const DeformedDomain& dd, const Curve& c, bool to_infinity) {
  const auto& f = dd.field();
  const Ticks total = c.length_ticks(Metric::d);
  double worst = 1.0;
  const std::size_t last = to_infinity ? c.size() : c.size() - 1;
  for (std::size_t i = 1; i < last; ++i) {
    const Ticks pre = c.prefix(Metric::d, i);
    const Ticks side = to_infinity ? pre : std::min(pre, total - pre);
    const Ticks bd = f.distance[c.vertices[i]];
    if (bd > 0) worst = std::max(worst, to_length(side) / to_length(bd));
  }
  return worst;
}

double phi_at_shell(const WeightFunction& w, int m) { return std::ldexp(1.0, m) * w.eval(std::ldexp(1.0, m)); }

ConstantsBundle prediction_bundle(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                  double measured_cu) {
  if (measured_cu <= bundle.c_u) return bundle;
  return derive_constants(dd.weight(), measured_cu, bundle.c_q);
}

}  // namespace

SynthesisResult synthesize(const DeformedDomain& dd, VertexIndex x, std::optional<VertexIndex> y,
                           const ConstantsBundle& bundle) {
  const auto& shell = dd.field().shell;
  const auto& dist = dd.field().distance;
  SynthesisResult r;
  r.c_u_used = bundle.c_u;

  if (!y) {
    if (dd.base().frontier().empty()) throw InputError("no frontier: cannot synthesize a curve to infinity");
    r.m = shell[x];
    r.k = -1;
    if (classify(r.m, -1, bundle.m0) == ProofCase::infinity_deep) {
      r.curve = dphi_path_to_infinity(dd, bundle, x);
      r.tag = CaseTag::to_infinity_deep;
      r.predicted = kLargeKConstant;
    } else {
      auto up = dd.frontier_tree(Metric::d).path_to(x);
      std::reverse(up.begin(), up.end());
      const Curve beta = make_curve(dd, up);
      r.c_u_used = std::max(bundle.c_u, d_uniformity(dd, beta, true));
      const auto pb = prediction_bundle(dd, bundle, r.c_u_used);
      const int level = bundle.m0 + bundle.n0;
      int k_star = level;
      if (dd.field().max_shell() >= level) {
        // Smallest shell k >= level whose every vertex is d_phi-far from x.
        const auto t = dd.tree(Metric::phi, x);
        std::map<int, Ticks> nearest;
        for (VertexIndex v = 0; v < dist.size(); ++v) {
          if (shell[v] < level || !t.reached(v)) continue;
          auto [it, fresh] = nearest.emplace(shell[v], t.dist[v]);
          if (!fresh) it->second = std::min(it->second, t.dist[v]);
        }
        for (const auto& [k, d] : nearest) {
          if (to_length(d) >= pb.cross_border_threshold()) {
            k_star = k;
            break;
          }
        }
      }
      std::size_t cut = beta.size();
      for (std::size_t i = 0; i < beta.size(); ++i) {
        if (shell[beta.vertices[i]] >= k_star) {
          cut = i;
          break;
        }
      }
      if (cut < beta.size()) {
        auto tail = dd.frontier_tree(Metric::phi).path_to(beta.vertices[cut]);
        std::reverse(tail.begin(), tail.end());
        r.curve = join(dd, {slice(beta, 0, cut), tail}, r.loops_erased);
        r.z1 = beta.vertices[cut];
      } else {
        r.curve = beta;
      }
      r.curve.to_infinity = dist_to_infinity(dd, bundle, r.curve.back());
      r.tag = CaseTag::to_infinity_shallow;
      r.predicted = pb.c4;
    }
    r.measured = uniformity_constant(r.curve, Metric::phi, phi_oracles(dd, bundle));
    return r;
  }

  if (*y == x) throw InputError("synthesize needs distinct end points");
  VertexIndex a = x, b = *y;
  if (shell[a] > shell[b]) std::swap(a, b);
  r.m = shell[a];
  r.k = shell[b];
  const auto pc = classify(r.m, r.k, bundle.m0);

  if (pc == ProofCase::large) {
    r.curve = dphi_geodesic(dd, a, b);
    r.tag = CaseTag::large_k;
    r.predicted = kLargeKConstant;
  } else {
    const Curve beta = uniform_curve_d(dd, a, b);
    r.c_u_used = std::max(bundle.c_u, d_uniformity(dd, beta, false));
    const auto pb = prediction_bundle(dd, bundle, r.c_u_used);
    const double dphi = dphi_distance(dd, a, b);
    if (pc == ProofCase::bounded) {
      const int level = bundle.m0 + bundle.n0;
      std::size_t first = beta.size(), last = 0;
      for (std::size_t i = 0; i < beta.size(); ++i) {
        if (shell[beta.vertices[i]] >= level) {
          first = std::min(first, i);
          last = i;
        }
      }
      int deepest = 0;
      for (auto v : beta.vertices) deepest = std::max(deepest, shell[v]);
      if (deepest <= level) {
        r.curve = beta;
        const bool small = dphi < pb.t_small * phi_at_shell(dd.weight(), r.m);
        r.tag = small ? CaseTag::small : CaseTag::medium_inside;
        r.predicted = small ? pb.c1 : pb.c2;
      } else {
        const auto mid = dphi_geodesic(dd, beta.vertices[first], beta.vertices[last]);
        r.curve = join(dd, {slice(beta, 0, first), mid.vertices, slice(beta, last, beta.size() - 1)},
                       r.loops_erased);
        r.z1 = beta.vertices[first];
        r.z2 = beta.vertices[last];
        r.tag = CaseTag::medium_spliced;
        r.predicted = pb.c2;
      }
    } else {
      if (dphi < pb.cross_border_threshold()) {
        r.curve = beta;
        r.tag = CaseTag::small;
        r.predicted = pb.c1;
        r.below_cross_threshold = true;
      } else {
        const Ticks border = to_ticks(std::ldexp(1.0, bundle.m0));
        std::size_t cut = beta.size() - 1;
        for (std::size_t i = 0; i < beta.size(); ++i) {
          if (dist[beta.vertices[i]] >= border) {
            cut = i;
            break;
          }
        }
        const auto rest = dphi_geodesic(dd, beta.vertices[cut], b);
        r.curve = join(dd, {slice(beta, 0, cut), rest.vertices}, r.loops_erased);
        r.z1 = beta.vertices[cut];
        r.tag = CaseTag::cross_border;
        r.predicted = pb.c3;
      }
    }
  }
  r.measured = uniformity_constant(r.curve, Metric::phi, phi_oracles(dd, bundle));
  return r;
}

SynthesisReport predicted_vs_measured(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                      const std::vector<SynthesisSample>& samples, double factor) {
  if (samples.empty()) throw InputError("synthesis needs at least one sample");
  SynthesisReport rep;
  rep.factor = factor;
  rep.rows.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    rep.rows[i] = synthesize(dd, samples[i].x, samples[i].y, bundle);
  });
  for (const auto& row : rep.rows) {
    auto& s = rep.summary[row.tag];
    ++s.count;
    s.max_measured = std::max(s.max_measured, row.measured.constant);
    s.max_ratio = std::max(s.max_ratio, row.ratio());
    if (row.measured.constant > row.predicted * factor) {
      ++s.flagged;
      ++rep.flagged;
    }
    if (row.below_cross_threshold) ++rep.below_cross_threshold;
  }
  const int deepest = dd.field().max_shell();
  if (!rep.summary.count(CaseTag::large_k) && deepest < bundle.m0)
    rep.notes.push_back("large_k absent: deepest shell " + std::to_string(deepest) +
                        " is below m0 = " + std::to_string(bundle.m0));
  if (!rep.summary.count(CaseTag::cross_border) && deepest <= bundle.m0)
    rep.notes.push_back("cross_border absent: no shell beyond m0 = " + std::to_string(bundle.m0));
  if (rep.below_cross_threshold > 0)
    rep.notes.push_back(std::to_string(rep.below_cross_threshold) +
                        " cross-shell pairs fell below the cross-border threshold and were handled as small");
  return rep;
}

std::vector<SynthesisSample> stratified_synthesis_samples(const DeformedDomain& dd, std::size_t pairs,
                                                          std::size_t to_infinity,
                                                          std::uint64_t seed) {
  Rng rng(seed);
  const auto& dom = dd.base();
  auto xs = stratified_vertices(dom, dd.field(), pairs, rng);
  auto ys = stratified_vertices(dom, dd.field(), pairs, rng);
  // Shuffle partners so shells mix across the pair.
  for (std::size_t i = ys.size(); i > 1; --i) std::swap(ys[i - 1], ys[uniform_index(rng, i)]);
  std::vector<SynthesisSample> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto y = ys[i];
    for (int tries = 0; y == xs[i] && tries < 64; ++tries) y = ys[uniform_index(rng, ys.size())];
    if (y != xs[i]) out.push_back({xs[i], y});
  }
  if (to_infinity > 0 && !dom.frontier().empty()) {
    for (auto v : stratified_vertices(dom, dd.field(), to_infinity, rng)) out.push_back({v, std::nullopt});
  }
  return out;
}

}  // namespace cdeform
