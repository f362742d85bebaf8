#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cdeform {

using VertexIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

inline constexpr VertexIndex kNoVertex = std::numeric_limits<VertexIndex>::max();

/// Path lengths are accumulated as fixed-point integers ("ticks") so that
/// sums are associative: graph distances then satisfy the metric axioms
/// exactly, independent of summation order.
using Ticks = std::int64_t;

inline constexpr double kTicksPerUnit = 4398046511104.0;  // 2^42
inline constexpr Ticks kUnreached = std::numeric_limits<Ticks>::max();
// Total edge mass allowed in one graph; keeps every path sum below INT64_MAX.
inline constexpr Ticks kMaxTotalTicks = Ticks{1} << 62;

inline Ticks to_ticks(double length) {
  return static_cast<Ticks>(std::llround(length * kTicksPerUnit));
}

inline constexpr double to_length(Ticks t) {
  return static_cast<double>(t) / kTicksPerUnit;
}

/// Base for all errors raised on bad input (files, specs, parameters).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a meaningful value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdeform
