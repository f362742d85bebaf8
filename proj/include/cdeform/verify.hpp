#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cdeform/constants.hpp"
#include "cdeform/deform.hpp"

namespace cdeform {

struct Witness {
  std::vector<std::int64_t> ids;  // external vertex ids involved
  double achieved = 0.0;
  double allowed = 0.0;
  double ratio = 0.0;
  std::string what;
};

/// Outcome of one inequality check. `ratio` compares achieved to allowed so
/// that values above 1 mean the inequality failed outright; a violation is a
/// ratio above `factor`.
struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t excluded = 0;  // candidates outside the hypothesis
  double worst_ratio = 0.0;
  double factor = 1.0;
  std::vector<Witness> witnesses;  // worst first, at most kMaxWitnesses
  std::map<std::string, double> stats;
  std::vector<std::string> notes;

  static constexpr std::size_t kMaxWitnesses = 5;

  bool passed() const { return violations == 0; }
  /// Records one sample.
  void add(double ratio, Witness w);
};

struct CheckOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  double factor = 1.5;
  bool random_walks = true;
};

/// Default factor 1 + 10h for a domain.
double default_tolerance(const MetricDomain& domain);

CheckReport check_crossing_levels(const DeformedDomain& dd, const CheckOptions& opt);
CheckReport check_nearby_points(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                const CheckOptions& opt);
CheckReport check_dist_to_infty(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                const CheckOptions& opt);
CheckReport check_dist_pip_bdy(const DeformedDomain& dd, const ConstantsBundle& bundle,
                               const CheckOptions& opt);
CheckReport check_large_bound(const DeformedDomain& dd, const ConstantsBundle& bundle,
                              const CheckOptions& opt);
CheckReport check_boundary_identification(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                          const CheckOptions& opt);
CheckReport check_separation_from_infinity(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                           const CheckOptions& opt);

/// Names accepted by run_checks, in report order.
const std::vector<std::string>& check_names();

/// Runs the named checks ("all" expands to every check). Unknown names throw
/// InputError.
std::vector<CheckReport> run_checks(const DeformedDomain& dd, const ConstantsBundle& bundle,
                                    const std::vector<std::string>& names, const CheckOptions& opt);

}  // namespace cdeform
