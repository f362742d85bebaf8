#include "cdeform/sampling.hpp"

#include <cmath>
#include <map>

#include "cdeform/domain.hpp"

namespace cdeform {

std::size_t uniform_index(Rng& rng, std::size_t n) {
  // Rejection sampling keeps the draw identical across standard libraries.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return static_cast<std::size_t>(r % n);
}

namespace {

std::vector<VertexIndex> interior_vertices(const MetricDomain& domain) {
  std::vector<VertexIndex> out;
  out.reserve(domain.num_vertices());
  for (VertexIndex v = 0; v < domain.num_vertices(); ++v)
    if (!domain.is_boundary(v)) out.push_back(v);
  return out;
}

}  // namespace

std::vector<std::pair<VertexIndex, VertexIndex>> sample_interior_pairs(const MetricDomain& domain,
                                                                       std::size_t budget,
                                                                       std::uint64_t seed) {
  Rng rng(seed);
  const auto interior = interior_vertices(domain);
  const auto sources = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(budget))));
  std::vector<std::pair<VertexIndex, VertexIndex>> pairs;
  pairs.reserve(budget);
  for (std::size_t s = 0; s < sources && pairs.size() < budget; ++s) {
    const auto x = interior[uniform_index(rng, interior.size())];
    const std::size_t per = (budget - pairs.size() + (sources - s) - 1) / (sources - s);
    for (std::size_t t = 0; t < per; ++t)
      pairs.emplace_back(x, interior[uniform_index(rng, interior.size())]);
  }
  return pairs;
}

std::vector<VertexIndex> stratified_vertices(const MetricDomain& domain,
                                             const BoundaryDistanceField& field,
                                             std::size_t count, Rng& rng,
                                             const std::function<bool(VertexIndex)>& accept) {
  std::map<int, std::vector<VertexIndex>> by_shell;
  for (VertexIndex v = 0; v < domain.num_vertices(); ++v) {
    if (domain.is_boundary(v)) continue;
    if (accept && !accept(v)) continue;
    by_shell[field.shell[v]].push_back(v);
  }
  std::vector<VertexIndex> out;
  if (by_shell.empty()) return out;
  out.reserve(count);
  while (out.size() < count) {
    for (const auto& [shell, members] : by_shell) {
      if (out.size() == count) break;
      out.push_back(members[uniform_index(rng, members.size())]);
    }
  }
  return out;
}

}  // namespace cdeform
