#pragma once

#include "cdeform/weight.hpp"

namespace cdeform {

/// Every constant the uniformity argument builds from (C_U, C_q, phi).
/// Values are computed in long double and stored as double.
struct ConstantsBundle {
  double c_u = 1.0;
  double c_q = 1.0;
  double c_phi = 1.0;

  int n0 = 1;        // 2^(n0-1) <= C_U < 2^n0
  int m0 = 4;        // smallest m > n0 + 2 with tail(m - n0) < 1 / (8 C_U C_phi)
  int k0 = 1;        // 2^-k0 < A <= 2^(1-k0)
  int k0_star = 2;   // 2^(k0'-1) <= C_* < 2^k0'
  bool small_cq = true;  // C_q < 2 C_phi, i.e. A = A_1

  double lambda = 1.0;  // min 2^n phi(2^n), 0 <= n <= m0 + n0
  double Lambda = 1.0;  // max of the same
  double c_a = 1.0;
  double t_medium = 0.0;  // T
  double t_small = 0.0;   // threshold factor for small pairs
  double c_star = 2.0;
  double c_big = 1.0;     // C = 2^(m0+n0+1) C_U^2 / lambda
  double t0 = 0.0;
  double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0;
  double a_phi = 1.0;

  /// d_phi threshold for cross-border pairs: lambda * t_small.
  double cross_border_threshold() const { return lambda * t_small; }
};

inline constexpr double kLargeKConstant = 1331.0 / 669.0;

/// Throws InputError unless C_U >= 1 and C_q >= 1, NumericalError if m0 is
/// not found below 10^6 or lambda underflows.
ConstantsBundle derive_constants(const WeightFunction& w, double c_u, double c_q);

}  // namespace cdeform
