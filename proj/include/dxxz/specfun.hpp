#ifndef DXXZ_SPECFUN_HPP
#define DXXZ_SPECFUN_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "dxxz/errors.hpp"

namespace dxxz::specfun {

namespace detail {

// Power series sum_k (-1)^k (x/2)^{2k} / (k!)^2, accumulated in long double.
// Terms peak near k = x/2 at magnitude ~(x/2)^x/(x/2)!^2, so the cancellation
// error is that peak times the long-double ulp; at the |x| = 16 crossover this
// stays a few 1e-14 absolute.
inline double j0_series(double x) {
  const long double q = static_cast<long double>(x) * 0.5L;
  const long double q2 = q * q;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 80; ++k) {
    term *= -q2 / (static_cast<long double>(k) * k);
    sum += term;
    if (term < 1e-18L && term > -1e-18L) break;
  }
  return static_cast<double>(sum);
}

// Hankel asymptotic expansion, A&S 9.2.5: J0 = sqrt(2/pi x)(P cos X - Q sin X)
// with X = x - pi/4. Valid (and below 1e-13 absolute) for x >= 16; terms are
// added until they stop decreasing.
inline double j0_asymptotic(double x) {
  const double inv2x = 1.0 / (2.0 * x);
  // hankel(m) = (-1)^m ((2m-1)!!)^2 / (4^m m!), hankel(m+1)/hankel(m) = -(2m+1)^2/(4(m+1))
  double hankel = 1.0, pw = 1.0;
  double p_sum = 0.0, q_sum = 0.0;
  double prev_mag = HUGE_VAL;
  for (int m = 0; m < 60; ++m) {
    const double term = hankel * pw;
    const double mag = std::fabs(term);
    if (mag >= prev_mag) break;  // past the optimal truncation point
    if (m % 2 == 0) p_sum += (m % 4 == 0 ? term : -term);
    else q_sum += (m % 4 == 1 ? term : -term);
    prev_mag = mag;
    hankel *= -(2.0 * m + 1.0) * (2.0 * m + 1.0) / (4.0 * (m + 1.0));
    pw *= inv2x;
    if (mag < 1e-18) break;
  }
  const double chi = x - 0.25 * M_PI;
  return std::sqrt(2.0 / (M_PI * x)) * (p_sum * std::cos(chi) - q_sum * std::sin(chi));
}

}  // namespace detail

// Bessel J0. Even in x by construction; absolute error <= 1e-13 for |x| <= 50
// (and comparable accuracy beyond).
inline double j0(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("j0: non-finite argument");
  const double ax = std::fabs(x);
  return ax <= 16.0 ? detail::j0_series(ax) : detail::j0_asymptotic(ax);
}

// k-th positive zero of J0, k = 1..20. Table entries are refined by bisection
// on j0 down to machine width, so tabulation precision never limits results.
inline double j0_zero(int k) {
  static const double table[20] = {
      2.404825557695773, 5.520078110286311, 8.653727912911012,
      11.791534439014281, 14.930917708487786, 18.071063967910922,
      21.211636629879259, 24.352471530749302, 27.493479132040254,
      30.634606468431975, 33.775820213573569, 36.917098353664044,
      40.058425764628239, 43.199791713176730, 46.341188371661814,
      49.482609897397817, 52.624051841114996, 55.765510755019979,
      58.906983926080942, 62.048469190227170};
  if (k < 1 || k > 20) throw InvalidArgument("j0_zero: k must be in 1..20");
  static const std::vector<double> refined = [] {
    std::vector<double> zs(20);
    for (int i = 0; i < 20; ++i) {
      double lo = table[i] - 1e-6, hi = table[i] + 1e-6;
      double flo = j0(lo);
      if (flo * j0(hi) > 0) { zs[i] = table[i]; continue; }
      for (int it = 0; it < 80 && hi - lo > 0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = j0(mid);
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
        else hi = mid;
      }
      zs[i] = 0.5 * (lo + hi);
    }
    return zs;
  }();
  return refined[k - 1];
}

struct QuadratureResult {
  double value;     // real part of (1/2pi) int_0^{2pi} exp(-i a sin t) dt
  double imag_abs;  // |imaginary part|, diagnostic (odd integrand, ~roundoff)
};

// Trapezoidal rule on the periodic integrand; spectrally accurate, so modest
// node counts reach roundoff. Independent route to J0(a).
inline QuadratureResult j0_by_quadrature(double a, int nodes) {
  if (nodes < 4) throw InvalidArgument("j0_by_quadrature: nodes must be >= 4");
  double re = 0, im = 0;
  for (int n = 0; n < nodes; ++n) {
    const double theta = 2.0 * M_PI * n / nodes;
    const double phase = -a * std::sin(theta);
    re += std::cos(phase);
    im += std::sin(phase);
  }
  return {re / nodes, std::fabs(im / nodes)};
}

// J0(a*z) tabulated on the unit-spaced grid z = z_min + t, t = 0..count-1.
// The staggered-magnetization eigenvalues of a bond live on exactly such a
// grid, so operator kernels index this table instead of re-evaluating j0.
class BesselTable {
 public:
  BesselTable(double amplitude, double z_min, int count)
      : amplitude_(amplitude), z_min_(z_min), values_(count) {
    for (int t = 0; t < count; ++t) values_[t] = j0(amplitude * (z_min + t));
  }

  double at_offset(int t) const { return values_[t]; }
  double at(double z) const {
    return values_[static_cast<int>(std::llround(z - z_min_))];
  }
  double amplitude() const { return amplitude_; }
  int size() const { return static_cast<int>(values_.size()); }

 private:
  double amplitude_;
  double z_min_;
  std::vector<double> values_;
};

}  // namespace dxxz::specfun

#endif
