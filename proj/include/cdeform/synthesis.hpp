#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdeform/constants.hpp"
#include "cdeform/curve.hpp"
#include "cdeform/deform.hpp"

namespace cdeform {

enum class CaseTag {
  small,
  medium_inside,
  medium_spliced,
  large_k,
  cross_border,
  to_infinity_deep,
  to_infinity_shallow
};

std::string to_string(CaseTag tag);

/// Which branch of the uniformity argument covers a pair with shells
/// m <= k (k < 0 stands for y = inf). Exhaustive and exclusive.
enum class ProofCase { large, bounded, cross, infinity_deep, infinity_shallow };
ProofCase classify(int m, int k, int m0);

struct SynthesisResult {
  Curve curve;
  CaseTag tag = CaseTag::small;
  double predicted = 0.0;
  UniformityResult measured;
  std::optional<VertexIndex> z1, z2;
  int m = 0;
  int k = -1;  // -1 when y = inf
  /// C_U fed into the prediction: max of the bundle's and the measured
  /// constant of the d-geodesic.
  double c_u_used = 1.0;
  /// Cross-shell pair below the cross-border threshold, handled as small.
  bool below_cross_threshold = false;
  bool loops_erased = false;

  double ratio() const { return measured.constant / predicted; }
};

/// The d-geodesic between x and y: the discrete stand-in for a uniform curve.
Curve uniform_curve_d(const DeformedDomain& dd, VertexIndex x, VertexIndex y);

/// d_phi oracles for measuring a curve (exact pair distances, boundary field,
/// lower end of the infinity interval).
MetricOracles phi_oracles(const DeformedDomain& dd, const ConstantsBundle& bundle);
/// d oracles (pair distance and d_Omega).
MetricOracles d_oracles(const DeformedDomain& dd);

/// Builds a curve from x to y (or to inf when y is empty) following the case
/// split, then measures its d_phi uniformity constant. Case selection uses
/// `bundle`; predictions use it recomputed with the measured C_U of the
/// d-geodesic when that is larger.
SynthesisResult synthesize(const DeformedDomain& dd, VertexIndex x, std::optional<VertexIndex> y,
                           const ConstantsBundle& bundle);

/// Removes loops left by splicing (chronological loop erasure).
std::vector<VertexIndex> erase_loops(const std::vector<VertexIndex>& path);

struct SynthesisSample {
  VertexIndex x;
  std::optional<VertexIndex> y;
};

struct TagSummary {
  std::size_t count = 0;
  double max_measured = 0.0;
  double max_ratio = 0.0;
  std::size_t flagged = 0;
};

struct SynthesisReport {
  std::vector<SynthesisResult> rows;
  std::map<CaseTag, TagSummary> summary;
  std::size_t flagged = 0;
  std::size_t below_cross_threshold = 0;
  double factor = 1.0;
  std::vector<std::string> notes;  // e.g. vacuous cases
};

/// Runs synthesize over the samples and flags measured > predicted * factor.
SynthesisReport predicted_vs_measured(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                      const std::vector<SynthesisSample>& samples, double factor);

/// `pairs` shell-stratified pairs plus `to_infinity` shell-stratified points.
std::vector<SynthesisSample> stratified_synthesis_samples(const DeformedDomain& dd, std::size_t pairs,
                                                          std::size_t to_infinity,
                                                          std::uint64_t seed);

}  // namespace cdeform
