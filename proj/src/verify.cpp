#include "cdeform/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>

#include "cdeform/parallel.hpp"
#include "cdeform/sampling.hpp"

namespace cdeform {

void CheckReport::add(double ratio, Witness w) {
  ++samples;
  worst_ratio = std::max(worst_ratio, ratio);
  if (ratio > factor) ++violations;
  w.ratio = ratio;
  auto pos = std::find_if(witnesses.begin(), witnesses.end(),
                          [&](const Witness& o) { return o.ratio < ratio; });
  if (pos == witnesses.end() && witnesses.size() >= kMaxWitnesses) return;
  witnesses.insert(pos, std::move(w));
  if (witnesses.size() > kMaxWitnesses) witnesses.pop_back();
}

double default_tolerance(const MetricDomain& domain) { return 1.0 + 10.0 * domain.spacing(); }

namespace {

double shell_mass(const WeightFunction& w, int n) {
  const double t = std::ldexp(1.0, n);
  return t * w.eval(t);
}

CheckReport start(const char* name, const CheckOptions& opt) {
  CheckReport r;
  r.name = name;
  r.factor = opt.factor;
  return r;
}

// Per-source seed so parallel work draws the same numbers in any order.
Rng source_rng(const CheckOptions& opt, std::size_t i, std::uint64_t salt) {
  std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(i), salt};
  return Rng(seq);
}

std::vector<std::int64_t> ids(const MetricDomain& dom, std::initializer_list<VertexIndex> vs) {
  std::vector<std::int64_t> out;
  for (auto v : vs) out.push_back(dom.id(v));
  return out;
}

// Vertices settled by a radius-limited search, found by walking the tree
// region outward from the source.
std::vector<VertexIndex> settled_region(const MetricDomain& dom, const ShortestPathTree& t,
                                        VertexIndex source) {
  std::vector<VertexIndex> out{source};
  std::deque<VertexIndex> queue{source};
  std::vector<VertexIndex> visited{source};
  // Small regions: a sorted vector beats an n-sized mask.
  auto mark = [&](VertexIndex v) {
    auto it = std::lower_bound(visited.begin(), visited.end(), v);
    if (it != visited.end() && *it == v) return false;
    visited.insert(it, v);
    return true;
  };
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (dom.is_boundary(u) && u != source) continue;
    dom.adjacency().for_each_arc(u, [&](Adjacency::Arc a) {
      if (t.reached(a.to) && mark(a.to)) {
        out.push_back(a.to);
        queue.push_back(a.to);
      }
    });
  }
  return out;
}

struct CurveSample {
  std::vector<VertexIndex> path;
  const char* kind;
};

}  // namespace

CheckReport check_crossing_levels(const DeformedDomain& dd, const CheckOptions& opt) {
  auto rep = start("crossing_levels", opt);
  const auto& dom = dd.base();
  const auto& f = dd.field();
  const auto& w = dd.weight();
  const int deepest = f.max_shell();
  if (deepest < 2) {
    rep.notes.push_back("vacuous: fewer than three shells");
    return rep;
  }
  constexpr std::size_t per_source = 8;
  const std::size_t sources = (opt.samples + per_source - 1) / per_source + 2;
  Rng rng(opt.seed);
  const auto xs = stratified_vertices(dom, f, sources, rng,
                                      [&](VertexIndex v) { return f.shell[v] <= deepest - 2; });
  const double cphi2 = w.reverse_doubling() * w.reverse_doubling();

  std::vector<std::vector<CurveSample>> curves(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const auto x = xs[i];
    auto r = source_rng(opt, i, 11);
    const auto ys = stratified_vertices(dom, f, per_source, r,
                                        [&](VertexIndex v) { return f.shell[v] >= f.shell[x] + 2; });
    if (ys.empty()) return;
    const auto td = dd.tree(Metric::d, x);
    const auto tp = dd.tree(Metric::phi, x);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const auto y = ys[j];
      switch (j % 4) {
        case 0:
          curves[i].push_back({td.path_to(y), "d-geodesic"});
          break;
        case 1:
          curves[i].push_back({tp.path_to(y), "phi-geodesic"});
          break;
        case 2: {
          // Detour: from another target back through x and out to y.
          auto path = td.path_to(ys[(j + 1) % ys.size()]);
          std::reverse(path.begin(), path.end());
          const auto out = tp.path_to(y);
          path.insert(path.end(), out.begin() + 1, out.end());
          curves[i].push_back({std::move(path), "detour"});
          break;
        }
        default: {
          auto path = tp.path_to(y);
          if (opt.random_walks) {
            for (int step = 0; step < 400; ++step) {
              std::vector<VertexIndex> nb;
              dom.adjacency().for_each_arc(path.back(), [&](Adjacency::Arc a) {
                if (!dom.is_boundary(a.to)) nb.push_back(a.to);
              });
              path.push_back(nb[uniform_index(r, nb.size())]);
            }
          }
          curves[i].push_back({std::move(path), "geodesic+walk"});
        }
      }
    }
  });

  for (const auto& batch : curves) {
    for (const auto& cs : batch) {
      std::uint64_t hit = 0;
      for (auto v : cs.path) hit |= std::uint64_t{1} << std::min(f.shell[v], 63);
      double bound = 0.0;
      int worst_m = -1;
      for (int m = 0; m + 2 < 64; ++m) {
        if ((hit >> m & 1) && (hit >> (m + 2) & 1)) {
          const double b = shell_mass(w, m) / cphi2;
          if (b > bound) {
            bound = b;
            worst_m = m;
          }
        }
      }
      if (worst_m < 0) {
        ++rep.excluded;
        continue;
      }
      const double len = make_curve(dd, cs.path).len_phi();
      rep.add(bound / len, {ids(dom, {cs.path.front(), cs.path.back()}), len, bound, 0.0,
                            std::string(cs.kind) + " crossing shell " + std::to_string(worst_m) +
                                " to " + std::to_string(worst_m + 2)});
      ++rep.stats[std::string("kind_") + cs.kind];
    }
  }
  return rep;
}

CheckReport check_nearby_points(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                const CheckOptions& opt) {
  auto rep = start("nearby_points", opt);
  const auto& dom = dd.base();
  const auto& f = dd.field();
  const auto& w = dd.weight();
  const double cphi = bundle.c_phi, cq = bundle.c_q;
  const double hyp = std::min(10.0 / (11.0 * cphi * cphi) / 4.0, 10.0 / (22.0 * cq * cq));
  rep.stats["hypothesis_factor"] = hyp;
  rep.notes.push_back(bundle.small_cq ? "threshold branch: C_q < 2 C_phi"
                                      : "threshold branch: C_q >= 2 C_phi");
  Rng rng(opt.seed);
  const std::size_t budget = 40 * opt.samples;
  const auto candidates = stratified_vertices(dom, f, budget, rng);
  for (std::size_t i = 0; i < candidates.size() && rep.samples < opt.samples; ++i) {
    const auto x = candidates[i];
    const int m = f.shell[x];
    const double radius = hyp * shell_mass(w, m);
    const Ticks limit = to_ticks(radius) - 1;  // strict inequality
    if (limit <= 0) {
      ++rep.excluded;
      continue;
    }
    const auto tp = dd.tree(Metric::phi, x, SearchLimits{{}, limit});
    auto region = settled_region(dom, tp, x);
    region.erase(std::remove_if(region.begin(), region.end(),
                                [&](VertexIndex v) { return v == x || dom.is_boundary(v); }),
                 region.end());
    if (region.empty()) {
      ++rep.excluded;
      continue;
    }
    std::sort(region.begin(), region.end());
    const auto y = region[uniform_index(rng, region.size())];
    const VertexIndex target[] = {y};
    const auto td = dd.tree(Metric::d, x, SearchLimits{target});
    const double d = to_length(td.dist[y]);
    const double dphi = to_length(tp.dist[y]);
    const double pm = w.eval(std::ldexp(1.0, m));
    const double pm1 = w.eval(std::ldexp(1.0, m + 1));
    const double ca = bundle.c_a;
    const double lower = pm * d / ca / dphi;
    const double upper = dphi / (ca * pm * d);
    const double sharp = pm1 * d / (1.1 * dphi);
    const double worst = std::max({lower, upper, sharp});
    const char* which = worst == lower ? "lower C_A bound" : worst == upper ? "upper C_A bound"
                                                                          : "sharp lower bound";
    rep.add(worst, {ids(dom, {x, y}), dphi, d, 0.0,
                    std::string(which) + " in shell " + std::to_string(m)});
    ++rep.stats["shell_" + std::to_string(m)];
  }
  rep.stats[bundle.small_cq ? "branch_cq_below_2cphi" : "branch_cq_at_least_2cphi"] =
      static_cast<double>(rep.samples);
  if (rep.samples < opt.samples)
    rep.notes.push_back("only " + std::to_string(rep.samples) + " hypothesis-satisfying pairs found in " +
                        std::to_string(candidates.size()) + " candidates");
  return rep;
}

CheckReport check_dist_to_infty(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                const CheckOptions& opt) {
  auto rep = start("dist_to_infty", opt);
  const auto& dom = dd.base();
  const auto& f = dd.field();
  const auto& w = dd.weight();
  if (dom.frontier().empty()) {
    rep.notes.push_back("vacuous: no frontier");
    return rep;
  }
  const int min_shell = bundle.n0 + 2;
  Rng rng(opt.seed);
  const auto xs = stratified_vertices(dom, f, opt.samples, rng,
                                      [&](VertexIndex v) { return f.shell[v] >= min_shell; });
  if (xs.empty()) rep.notes.push_back("vacuous: no vertex in shell >= n0 + 2");
  for (auto x : xs) {
    const int m = f.shell[x];
    const auto est = dist_to_infinity(dd, bundle, x);
    const double lo = 5.0 / 11.0 * w.tail_sum(m + 1);
    const double hi = bundle.c_u * bundle.c_phi * w.tail_sum(m - bundle.n0);
    const double r1 = lo / est.lower;   // interval lower end vs the shell lower bound
    const double r2 = est.upper / hi;   // interval upper end vs the shell upper bound
    const double r3 = est.lower / hi;   // intersection
    const double r4 = lo / est.upper;
    rep.add(std::max({r1, r2, r3, r4}),
            {ids(dom, {x}), est.upper, hi, 0.0, "shell " + std::to_string(m)});
  }
  return rep;
}

CheckReport check_dist_pip_bdy(const DeformedDomain& dd, const ConstantsBundle& bundle,
                               const CheckOptions& opt) {
  auto rep = start("dist_pip_bdy", opt);
  const auto& dom = dd.base();
  const auto& f = dd.field();
  const auto& w = dd.weight();
  Rng rng(opt.seed);
  const auto xs = stratified_vertices(dom, f, opt.samples, rng);
  for (auto x : xs) {
    const int m = f.shell[x];
    const double v = dphi_boundary_distance(dd, x);
    if (m == 0) {
      const double d = f.value(x);
      rep.add(std::max(v / d, d / v), {ids(dom, {x}), v, d, 0.0, "shell 0 equality"});
    } else {
      const double lo = 50.0 / 121.0 * w.head_sum(m - 1);
      const double hi = bundle.c_u * bundle.c_phi * w.head_sum(m + bundle.n0);
      const bool low = lo / v >= v / hi;
      rep.add(std::max(lo / v, v / hi), {ids(dom, {x}), v, low ? lo : hi, 0.0,
                                         (low ? "lower bound, shell " : "upper bound, shell ") +
                                             std::to_string(m)});
    }
  }
  return rep;
}

CheckReport check_large_bound(const DeformedDomain& dd, const ConstantsBundle& bundle,
                              const CheckOptions& opt) {
  auto rep = start("large_bound", opt);
  const auto& dom = dd.base();
  const auto& f = dd.field();
  const auto& w = dd.weight();
  auto within = [&](VertexIndex v) { return f.shell[v] <= bundle.m0; };
  constexpr std::size_t per_source = 8;
  const std::size_t sources = (opt.samples + per_source - 1) / per_source;
  Rng rng(opt.seed);
  auto xs = stratified_vertices(dom, f, sources, rng, within);
  // Pairs at the threshold shell are the tightest instances.
  auto at_m0 = [&](VertexIndex v) { return f.shell[v] == bundle.m0; };
  const auto extra = stratified_vertices(dom, f, 2, rng, at_m0);
  if (extra.empty()) rep.notes.push_back("no vertices in shell m0; threshold pairs not sampled");
  xs.insert(xs.end(), extra.begin(), extra.end());

  struct Row {
    VertexIndex x, y;
    Ticks dphi;
  };
  std::vector<std::vector<Row>> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const auto x = xs[i];
    auto r = source_rng(opt, i, 23);
    const bool threshold = i >= xs.size() - extra.size();
    const auto ys = stratified_vertices(dom, f, per_source, r, threshold ? std::function<bool(VertexIndex)>(at_m0)
                                                                          : std::function<bool(VertexIndex)>(within));
    const auto tp = dd.tree(Metric::phi, x, SearchLimits{ys});
    for (auto y : ys) {
      if (y != x) rows[i].push_back({x, y, tp.dist[y]});
    }
  });
  for (const auto& batch : rows) {
    for (const auto& row : batch) {
      const int m = std::min(f.shell[row.x], f.shell[row.y]);
      const double bound = bundle.c_big * shell_mass(w, m);
      const double dphi = to_length(row.dphi);
      rep.add(dphi / bound, {ids(dom, {row.x, row.y}), dphi, bound, 0.0,
                             "shells " + std::to_string(f.shell[row.x]) + "," +
                                 std::to_string(f.shell[row.y])});
    }
  }
  return rep;
}

CheckReport check_boundary_identification(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                          const CheckOptions& opt) {
  auto rep = start("boundary_identification", opt);
  const auto& dom = dd.base();
  std::vector<VertexIndex> order(dom.boundary().begin(), dom.boundary().end());
  Rng rng(opt.seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  const Ticks radius = to_ticks(0.1);
  for (auto z : order) {
    if (rep.samples >= opt.samples) break;
    const auto td = dd.tree(Metric::d, z, SearchLimits{{}, radius});
    std::vector<VertexIndex> partners;
    for (auto v : settled_region(dom, td, z)) {
      if (v != z && dom.is_boundary(v) && v > z) partners.push_back(v);
    }
    if (partners.empty()) {
      ++rep.excluded;
      continue;
    }
    std::sort(partners.begin(), partners.end());
    const auto tp = dd.tree(Metric::phi, z, SearchLimits{partners});
    for (auto e : partners) {
      const double d = to_length(td.dist[e]);
      const double dphi = to_length(tp.dist[e]);
      const double lower = d / dphi;
      const double upper = dphi / (bundle.c_q * d);
      rep.add(std::max(lower, upper), {ids(dom, {z, e}), dphi, d, 0.0, "boundary pair"});
    }
  }
  rep.notes.push_back("upper comparison uses the empirical quasiconvexity constant C_q = " +
                      std::to_string(bundle.c_q));
  return rep;
}

CheckReport check_separation_from_infinity(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                           const CheckOptions& opt) {
  auto rep = start("separation_from_infinity", opt);
  const auto& dom = dd.base();
  if (dom.frontier().empty()) {
    rep.notes.push_back("vacuous: no frontier");
    return rep;
  }
  const auto& w = dd.weight();
  const bool closed_form = dom.meta().generator == "half_plane" && w.family() == WeightFamily::power;
  const double target = w.beta() / (w.beta() - 1.0);
  if (closed_form) rep.stats["target"] = target;
  double min_lower = std::numeric_limits<double>::infinity();
  for (auto z : dom.boundary()) {
    const auto est = dist_to_infinity(dd, bundle, z);
    min_lower = std::min(min_lower, est.lower);
    double ratio = est.lower > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    std::string what = "lower end of the infinity interval";
    if (closed_form && est.lower > 0.0) {
      ratio = std::abs(est.midpoint() - target) / (0.02 * target + est.width());
      what = "midpoint " + std::to_string(est.midpoint()) + " vs beta/(beta-1)";
    }
    rep.add(ratio, {ids(dom, {z}), est.midpoint(), target, 0.0, what});
  }
  rep.stats["min_lower"] = min_lower;
  return rep;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "crossing_levels", "nearby_points", "dist_to_infty", "dist_pip_bdy",
      "large_bound",     "boundary_identification", "separation_from_infinity"};
  return names;
}

std::vector<CheckReport> run_checks(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                    const std::vector<std::string>& names, const CheckOptions& opt) {
  std::vector<std::string> wanted;
  for (const auto& n : names) {
    if (n == "all") {
      wanted = check_names();
      break;
    }
    if (std::find(check_names().begin(), check_names().end(), n) == check_names().end())
      throw InputError("unknown check " + n);
    wanted.push_back(n);
  }
  std::vector<CheckReport> out;
  for (const auto& n : wanted) {
    if (n == "crossing_levels") out.push_back(check_crossing_levels(dd, opt));
    else if (n == "nearby_points") out.push_back(check_nearby_points(dd, bundle, opt));
    else if (n == "dist_to_infty") out.push_back(check_dist_to_infty(dd, bundle, opt));
    else if (n == "dist_pip_bdy") out.push_back(check_dist_pip_bdy(dd, bundle, opt));
    else if (n == "large_bound") out.push_back(check_large_bound(dd, bundle, opt));
    else if (n == "boundary_identification") out.push_back(check_boundary_identification(dd, bundle, opt));
    else out.push_back(check_separation_from_infinity(dd, bundle, opt));
  }
  return out;
}

}  // namespace cdeform
