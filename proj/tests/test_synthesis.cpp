#include <doctest.h>

#include <cmath>
#include <set>

#include "cdeform/synthesis.hpp"
#include "support.hpp"

using namespace cdeform;

namespace {

VertexIndex at(const MetricDomain& dom, double x, double y) {
  const double p[] = {x, y};
  return dom.nearest_vertex(p);
}

struct Fixture {
  MetricDomain dom;
  BoundaryDistanceField field;
  DeformedDomain dd;
  Fixture(MetricDomain d, WeightFunction w)
      : dom(std::move(d)), field(boundary_distance(dom)), dd(dom, field, std::move(w)) {}
};

// Unit grid over [-w, w] x [0, top] with the bottom row as boundary, the top
// row as frontier, and the block |x| <= 1, 1 <= y <= wall removed. Paths
// between the two sides must climb over the removed block.
MetricDomain walled_domain(int w, int top, int wall) {
  MetricDomain::Input in;
  in.coord_dim = 2;
  auto id = [&](int x, int y) { return static_cast<std::int64_t>((y * (2 * w + 1)) + (x + w)); };
  auto present = [&](int x, int y) { return !(std::abs(x) <= 1 && y >= 1 && y <= wall); };
  for (int y = 0; y <= top; ++y) {
    for (int x = -w; x <= w; ++x) {
      if (!present(x, y)) continue;
      in.ids.push_back(id(x, y));
      in.coords.push_back({double(x), double(y), 0.0});
      if (y == 0) in.boundary.push_back(id(x, y));
      if (y == top) in.frontier.push_back(id(x, y));
      if (x > -w && present(x - 1, y)) {
        in.edges.push_back({id(x - 1, y), id(x, y)});
        in.lengths.push_back(1.0);
      }
      if (y > 0 && present(x, y - 1)) {
        in.edges.push_back({id(x, y - 1), id(x, y)});
        in.lengths.push_back(1.0);
      }
    }
  }
  in.meta.generator = "walled";
  in.meta.params = {{"h", 1.0}};
  return MetricDomain::build(std::move(in));
}

// Box arch from x up to height top, across, and down to y (equal-height
// endpoints on a grid of spacing h).
std::vector<VertexIndex> arch(const MetricDomain& dom, double x0, double x1, double y0, double top, double h) {
  std::vector<VertexIndex> p;
  for (double y = y0; y < top - 1e-9; y += h) p.push_back(at(dom, x0, y));
  const double dir = x1 > x0 ? h : -h;
  for (double x = x0; std::abs(x - x1) > 1e-9; x += dir) p.push_back(at(dom, x, top));
  for (double y = top; y > y0 - 1e-9; y -= h) p.push_back(at(dom, x1, y));
  return p;
}

}  // namespace

TEST_CASE("case table is exhaustive and exclusive") {
  for (int m0 = 1; m0 <= 15; ++m0) {
    for (int m = 0; m <= 30; ++m) {
      for (int k = -1; k <= 30; ++k) {
        const auto pc = classify(m, k, m0);
        if (k < 0) {
          CHECK(pc == (m >= m0 ? ProofCase::infinity_deep : ProofCase::infinity_shallow));
          continue;
        }
        const int lo = std::min(m, k), hi = std::max(m, k);
        // lo = hi = m0 satisfies both of the first two rules; it belongs to the first
        const bool one = lo >= m0, two = hi <= m0 && lo < m0, three = lo < m0 && m0 < hi;
        CHECK(one + two + three == 1);
        if (one) CHECK(pc == ProofCase::large);
        if (two) CHECK(pc == ProofCase::bounded);
        if (three) CHECK(pc == ProofCase::cross);
        CHECK(classify(k, m, m0) == pc);
      }
    }
  }
}

TEST_CASE("loop erasure on random walks") {
  const auto dom = half_plane(4, 4, 0.5, 8);
  testing::SplitMix rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<VertexIndex> walk{static_cast<VertexIndex>(rng.below(dom.num_vertices()))};
    for (int s = 0; s < 60; ++s) {
      std::vector<VertexIndex> nb;
      dom.adjacency().for_each_arc(walk.back(), [&](Adjacency::Arc a) { nb.push_back(a.to); });
      walk.push_back(nb[rng.below(nb.size())]);
    }
    const auto clean = erase_loops(walk);
    CHECK(clean.front() == walk.front());
    CHECK(clean.back() == walk.back());
    CHECK(std::set<VertexIndex>(clean.begin(), clean.end()).size() == clean.size());
    for (std::size_t i = 1; i < clean.size(); ++i) CHECK(dom.adjacency().find_edge(clean[i - 1], clean[i]));
  }
}

TEST_CASE("pairs near the boundary: the d-geodesic itself") {
  Fixture f(half_plane(10, 10, 0.05, 8), WeightFunction::power(2));
  const auto b = derive_constants(f.dd.weight(), 2, 1);
  const auto x = at(f.dom, 0, 0.05), y = at(f.dom, 0.3, 0.05);
  const auto r = synthesize(f.dd, x, y, b);
  // the small-pair threshold T' 2^m phi(2^m) is far below one grid step here
  CHECK(b.t_small < f.dom.spacing());
  CHECK(r.tag == CaseTag::medium_inside);
  CHECK(r.curve.vertices == uniform_curve_d(f.dd, x, y).vertices);
  const auto d_const = uniformity_constant(r.curve, Metric::d, d_oracles(f.dd)).constant;
  CHECK(r.measured.constant == doctest::Approx(d_const).epsilon(1e-12));
  CHECK(r.measured.constant <= r.predicted);
  CHECK_THROWS_AS(synthesize(f.dd, x, x, b), InputError);
}

TEST_CASE("pairs below the small-pair threshold") {
  // boundary 0, a triangle of tiny edges above it
  MetricDomain::Input in;
  in.ids = {0, 1, 2};
  in.edges = {{{0, 1}}, {{0, 2}}, {{1, 2}}};
  in.lengths = {1e-5, 1e-5, 1e-5};
  in.boundary = {0};
  const auto dom = MetricDomain::build(in);
  const auto field = boundary_distance(dom);
  const DeformedDomain dd(dom, field, WeightFunction::power(2));
  const auto b = derive_constants(dd.weight(), 2, 1);
  const auto r = synthesize(dd, 1, 2, b);
  CHECK(r.tag == CaseTag::small);
  CHECK(r.predicted == b.c1);
  CHECK(r.measured.constant == 1.0);
}

TEST_CASE("cross-border splice lands at the threshold shell") {
  // beta=2: m0 = 10, so the splice sits near d_Omega = 1024
  Fixture f(half_plane(40, 1100, 1, 8), WeightFunction::power(2));
  const auto b = derive_constants(f.dd.weight(), 2, 1);
  REQUIRE(b.m0 == 10);
  const auto x = at(f.dom, 0, 1), y = at(f.dom, 5, 1090);
  const auto r = synthesize(f.dd, x, y, b);
  CHECK(r.tag == CaseTag::cross_border);
  REQUIRE(r.z1);
  CHECK(std::abs(f.field.shell[*r.z1] - b.m0) <= 1);
  CHECK(f.field.value(*r.z1) >= 1024.0);
  CHECK(r.curve.front() == x);
  CHECK(r.curve.back() == y);
  CHECK(r.measured.constant <= r.predicted * (1 + 10 * f.dom.spacing()));
}

TEST_CASE("large_k and infinity cases, beta=3") {
  Fixture f(half_plane(40, 40, 0.1, 8), WeightFunction::power(3));
  const auto b = derive_constants(f.dd.weight(), 2, 1);
  REQUIRE(b.m0 == 6);
  const double tol = 1 + 10 * f.dom.spacing();
  const auto r = synthesize(f.dd, at(f.dom, -8, 33), at(f.dom, 9, 39), b);
  CHECK(r.tag == CaseTag::large_k);
  CHECK(r.predicted == kLargeKConstant);
  CHECK(r.measured.constant <= kLargeKConstant * tol);

  const auto deep = synthesize(f.dd, at(f.dom, 0, 35), std::nullopt, b);
  CHECK(deep.tag == CaseTag::to_infinity_deep);
  CHECK(deep.curve.to_infinity);
  CHECK(deep.measured.constant <= deep.predicted * tol);

  const auto shallow = synthesize(f.dd, at(f.dom, 0, 0.1), std::nullopt, b);
  CHECK(shallow.tag == CaseTag::to_infinity_shallow);
  CHECK(shallow.predicted == derive_constants(f.dd.weight(), shallow.c_u_used, 1).c4);
  CHECK(f.dom.is_frontier(shallow.curve.back()));
  CHECK(shallow.measured.constant <= shallow.predicted * tol);
}

TEST_CASE("cross-border on the acceptance-size domain, beta=4") {
  Fixture f(half_plane(40, 40, 0.1, 8), WeightFunction::power(4));
  const auto b = derive_constants(f.dd.weight(), 2, 1);
  REQUIRE(b.m0 == 5);
  const auto r = synthesize(f.dd, at(f.dom, 0, 0.1), at(f.dom, 1, 36), b);
  CHECK(r.tag == CaseTag::cross_border);
  REQUIRE(r.z1);
  CHECK(std::abs(f.field.shell[*r.z1] - b.m0) <= 1);
  CHECK(r.measured.constant <= r.predicted * (1 + 10 * f.dom.spacing()));
}

TEST_CASE("curves that rise past the splice level are spliced") {
  // beta=8, C_U=1: n0 = 1, m0 = 4, splice level shell 5 (d_Omega > 16)
  const auto dom = walled_domain(8, 60, 40);
  const auto field = boundary_distance(dom);
  const DeformedDomain dd(dom, field, WeightFunction::power(8));
  const auto b = derive_constants(dd.weight(), 1, 1);
  REQUIRE(b.m0 == 4);
  const auto x = at(dom, -5, 3), y = at(dom, 5, 3);
  REQUIRE(field.shell[x] <= b.m0);
  const auto r = synthesize(dd, x, y, b);
  CHECK(r.tag == CaseTag::medium_spliced);
  REQUIRE(r.z1);
  REQUIRE(r.z2);
  CHECK(field.shell[*r.z1] >= b.m0 + b.n0);
  CHECK(field.shell[*r.z2] >= b.m0 + b.n0);
  // connected and simple after the joints
  std::set<VertexIndex> seen(r.curve.vertices.begin(), r.curve.vertices.end());
  CHECK(seen.size() == r.curve.size());
  CHECK(std::isfinite(r.curve.len_phi()));
  CHECK(r.measured.constant <= r.predicted);
}

TEST_CASE("box arches are 2-uniform in the half plane") {
  const double h = 0.05;
  Fixture f(half_plane(40, 40, h, 8), WeightFunction::power(2));
  const auto od = d_oracles(f.dd);
  testing::SplitMix rng(4);
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double y0 = h * (1 + static_cast<int>(rng.below(100)));
    const double len = h * (1 + static_cast<int>(rng.below(500)));
    const double top = y0 + std::round(len / 2 / h) * h;
    if (top > 40) continue;
    const double x0 = -h * std::floor(len / h / 2);
    const auto c = make_curve(f.dd, arch(f.dom, x0, x0 + len, y0, top, h));
    worst = std::max(worst, uniformity_constant(c, Metric::d, od).constant);
  }
  CHECK(worst <= 2 * (1 + 10 * h));
  CHECK(worst >= 1.9);
}

TEST_CASE("predicted vs measured on a small half plane") {
  Fixture f(half_plane(10, 10, 0.1, 8), WeightFunction::power(2));
  const auto b = derive_constants(f.dd.weight(), 2, 1);
  const auto samples = stratified_synthesis_samples(f.dd, 30, 8, 1);
  CHECK(samples.size() == 38);
  const auto rep = predicted_vs_measured(f.dd, b, samples, 1 + 10 * f.dom.spacing());
  CHECK(rep.flagged == 0);
  std::size_t total = 0;
  for (const auto& [tag, s] : rep.summary) total += s.count;
  CHECK(total == samples.size());
  CHECK_FALSE(rep.summary.count(CaseTag::large_k));
  CHECK(std::any_of(rep.notes.begin(), rep.notes.end(),
                    [](const std::string& n) { return n.find("large_k absent") != std::string::npos; }));
  // same seed, same rows
  const auto again = predicted_vs_measured(f.dd, b, stratified_synthesis_samples(f.dd, 30, 8, 1), rep.factor);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(again.rows[i].curve.vertices == rep.rows[i].curve.vertices);
    CHECK(again.rows[i].measured.constant == rep.rows[i].measured.constant);
  }
  CHECK_THROWS_AS(predicted_vs_measured(f.dd, b, {}, 1.5), InputError);
}
