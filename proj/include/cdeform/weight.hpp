#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cdeform {

enum class WeightFamily { power, power_log, table };

/// Dampening function phi: (0, inf) -> (0, 1], equal to 1 on (0, 1] and
/// decreasing beyond. Value type; validated on construction.
class WeightFunction {
 public:
  /// phi(t) = t^-beta for t > 1. Requires beta > 1.
  static WeightFunction power(double beta);
  /// phi(t) = t^-beta (1 + log t)^-kappa for t > 1. Requires beta > 1, kappa >= 0.
  static WeightFunction power_log(double beta, double kappa);
  /// Samples (t_i, phi_i) with 1 < t_0 < t_1 < ...; log-linear in between,
  /// extended past the last sample with the last log-log slope, which must be
  /// steeper than -1.
  static WeightFunction table(std::vector<std::pair<double, double>> samples,
                              std::string source = {});

  WeightFamily family() const { return family_; }
  double beta() const { return beta_; }
  double kappa() const { return kappa_; }

  /// phi(t). Throws InputError for t <= 0.
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  /// log phi(e^s); finite for every real s, which lets tail sums run past the
  /// double range of t.
  double log_phi(double log_t) const;

  /// sum_{n >= m} 2^n phi(2^n). Closed form for power weights.
  double tail_sum(int m) const;
  /// The same tail by direct summation until the increment drops below 1e-14
  /// of the running total, whatever the family.
  double tail_sum_by_summation(int m) const;
  /// sum_{n=0}^{m} 2^n phi(2^n); 0 when m < 0.
  double head_sum(int m) const;

  /// C_phi with phi(t) <= C_phi phi(2t).
  double reverse_doubling() const { return c_phi_; }

  /// Canonical spec string ("power:beta=2", ...).
  std::string spec() const;

 private:
  WeightFunction() = default;
  void finish();

  WeightFamily family_ = WeightFamily::power;
  double beta_ = 2.0;
  double kappa_ = 0.0;
  std::vector<std::pair<double, double>> knots_;  // (log t, log phi), starting at (0, 0)
  double tail_slope_ = 0.0;
  std::string source_;
  double c_phi_ = 1.0;
};

/// Parses "power:beta=2", "powerlog:beta=2,kappa=1" or "table:@file.json".
/// A table file is {"t": [...], "phi": [...]} or [[t, phi], ...].
WeightFunction parse_weight(const std::string& spec);

}  // namespace cdeform
