#include "cdeform/constants.hpp"

#include <algorithm>
#include <cmath>

#include "cdeform/types.hpp"

namespace cdeform {

namespace {

using Real = long double;

// Positive integer k with 2^-k < a <= 2^(1-k), for 0 < a <= 1.
int dyadic_exponent(Real a) {
  int k = 1;
  while (std::ldexp(Real{1}, -k) >= a) ++k;
  return k;
}

}  // namespace

ConstantsBundle derive_constants(const WeightFunction& w, double c_u_in, double c_q_in) {
  if (!(c_u_in >= 1.0) || !std::isfinite(c_u_in)) throw InputError("C_U must be >= 1");
  if (!(c_q_in >= 1.0) || !std::isfinite(c_q_in)) throw InputError("C_q must be >= 1");
  ConstantsBundle b;
  b.c_u = c_u_in;
  b.c_q = c_q_in;
  b.c_phi = w.reverse_doubling();
  const Real cu = c_u_in, cq = c_q_in, cphi = b.c_phi;

  b.n0 = 1;
  while (std::ldexp(Real{1}, b.n0) <= cu) ++b.n0;

  const Real goal = 1 / (8 * cu * cphi);
  b.m0 = -1;
  for (int m = b.n0 + 3; m < 1000000; ++m) {
    if (w.tail_sum(m - b.n0) < goal) {
      b.m0 = m;
      break;
    }
  }
  if (b.m0 < 0) throw NumericalError("no m0 below 10^6 satisfies the tail condition");

  Real lo = 1, hi = 1;
  for (int n = 0; n <= b.m0 + b.n0; ++n) {
    const Real t = std::ldexp(Real{1}, n);
    const Real v = t * static_cast<Real>(w.eval(static_cast<double>(t)));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo > 0)) throw NumericalError("lambda underflowed to zero");
  b.lambda = static_cast<double>(lo);
  b.Lambda = static_cast<double>(hi);
  const Real lam = lo, Lam = hi;

  b.small_cq = cq < 2 * cphi;
  const Real a = b.small_cq ? 1 - cq / (2 * cphi) : 1 - cphi / cq;
  if (!(a > 0)) throw NumericalError("degenerate A in the nearby-points constant");
  b.k0 = dyadic_exponent(a);
  const Real ca = cq * std::pow(cphi, Real(b.k0 + 1));
  b.c_a = static_cast<double>(ca);

  const Real cphi_n = std::pow(cphi, Real(b.n0 + 1));
  const Real t = 5 / (22 * cphi_n * cu * ca);
  const Real t_small = 5 / (44 * cphi_n * cq * cq * cu * ca);
  const Real c_star = 5 / (44 * cphi_n * cq * cq * cu) + 2;
  b.t_medium = static_cast<double>(t);
  b.t_small = static_cast<double>(t_small);
  b.c_star = static_cast<double>(c_star);
  b.k0_star = 1;
  while (std::ldexp(Real{1}, b.k0_star) <= c_star) ++b.k0_star;

  const Real c = std::ldexp(Real{1}, b.m0 + b.n0 + 1) * cu * cu / lam;
  b.c_big = static_cast<double>(c);
  const Real c1 = std::max(ca * cphi_n * cu, 363 * cu / 50);
  const Real t0 = c1 * (22 * cphi * cphi / 5) * (Lam / lam) * c;
  const Real c2 = (Real(2000) / 669) * (2 * c * c1 / t) * (Lam / lam) *
                  (2 * t0 + 121 * cphi * cphi / (20 * lam));
  const Real k = 44 * cphi_n * cq * cq * cu * ca / (5 * lam);
  const Real c3a = c2 + k * (c2 / (2 * cphi) + Real(11) / 40);
  const Real c3b = c2 * (1 + (Real(11) / (40 * c2) + 1 / (2 * cphi)) * 2000 * c2 / (669 * lam));
  const Real c3 = std::max(c3a, c3b);
  const Real c4 = std::max(Real(1331) / 669, c3);
  b.t0 = static_cast<double>(t0);
  b.c1 = static_cast<double>(c1);
  b.c2 = static_cast<double>(c2);
  b.c3 = static_cast<double>(c3);
  b.c4 = static_cast<double>(c4);
  b.a_phi = static_cast<double>(std::max({c1, c2, c3, c4, Real(1331) / 669}));
  for (double v : {b.lambda, b.Lambda, b.c_a, b.t_medium, b.t_small, b.c_big, b.t0, b.c1, b.c2,
                   b.c3, b.c4, b.a_phi}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw NumericalError("a derived constant is not finite and positive");
  }
  return b;
}

}  // namespace cdeform
