#pragma once

#include <vector>

namespace ballheat {

/// Largest Bessel order the evaluators accept.
inline constexpr double kMaxBesselOrder = 150.0;

// The templates below are instantiated for double and ballheat::quad.

/// J_nu(r) for 0 <= nu <= kMaxBesselOrder and r >= 0.
template <class Real>
Real bessel_j(Real nu, Real r);

/// J'_nu(r) = (J_{nu-1}(r) - J_{nu+1}(r)) / 2, with J'_0 = -J_1.
template <class Real>
Real bessel_j_prime(Real nu, Real r);

/// McMahon's large-zero expansion; used as the Newton starting point.
template <class Real>
Real mcmahon_zero_guess(Real nu, int k);

/// The k-th positive zero j_{nu,k}. Zeros are located by a sign-change scan
/// that counts them, then polished by Newton with bisection fallback. Throws
/// numeric_error if the polish does not converge.
template <class Real>
Real bessel_zero(Real nu, int k);

/// Positive zeros of J_nu, increasing.
template <class Real>
struct ZeroTable {
  Real nu;
  std::vector<Real> zeros;
};

/// The first `count` zeros.
template <class Real>
ZeroTable<Real> bessel_zeros(Real nu, int count);

/// All zeros strictly below `limit`.
template <class Real>
ZeroTable<Real> bessel_zeros_below(Real nu, Real limit);

/// Extends `table` with further zeros until its last zero is >= limit or it
/// holds `max_count` zeros. Existing entries are left untouched.
template <class Real>
void extend_zeros(ZeroTable<Real>& table, Real limit, int max_count);

/// Gegenbauer polynomial C_l^{(lambda)}(s) by the three-term recurrence.
/// lambda > 0, |s| <= 1.
double gegenbauer(int l, double lambda, double s);

/// C_0 .. C_lmax at one argument, written into `out` (resized to lmax + 1).
template <class Real>
void gegenbauer_sequence(int lmax, Real lambda, Real s, std::vector<Real>& out);

// double conveniences
inline double bessel_j(double nu, double r) { return bessel_j<double>(nu, r); }
inline double bessel_j_prime(double nu, double r) { return bessel_j_prime<double>(nu, r); }
inline double bessel_zero(double nu, int k) { return bessel_zero<double>(nu, k); }

}  // namespace ballheat
