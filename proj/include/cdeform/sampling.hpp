#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "cdeform/types.hpp"

namespace cdeform {

class MetricDomain;
struct BoundaryDistanceField;

using Rng = std::mt19937_64;

/// Uniform index in [0, n).
std::size_t uniform_index(Rng& rng, std::size_t n);

/// `budget` interior pairs, grouped as ~sqrt(budget) sources with several
/// targets each.
std::vector<std::pair<VertexIndex, VertexIndex>> sample_interior_pairs(const MetricDomain& domain,
                                                                       std::size_t budget,
                                                                       std::uint64_t seed);

/// Interior vertices drawn round-robin across shells so deep (rare) shells are
/// represented as often as shallow ones. `accept` filters candidates.
std::vector<VertexIndex> stratified_vertices(const MetricDomain& domain,
                                             const BoundaryDistanceField& field,
                                             std::size_t count, Rng& rng,
                                             const std::function<bool(VertexIndex)>& accept = {});

}  // namespace cdeform
