#include "ballheat/specfun.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "ballheat/errors.hpp"
#include "ballheat/precision.hpp"

namespace ballheat {

namespace {

template <class Real>
void check_order(Real nu) {
  if (!(nu >= 0) || nu > Real(kMaxBesselOrder)) {
    throw domain_error("Bessel order outside [0, " + std::to_string(kMaxBesselOrder) + "]");
  }
}

template <class Real>
Real scan_step() {
  // Consecutive zeros of J_nu, nu >= 0, are more than 2.9 apart.
  return Real(0.25);
}

template <class Real>
Real polish_zero(Real nu, Real a, Real b, Real fa, Real guess) {
  using std::abs;
  const Real eps = std::numeric_limits<Real>::epsilon();
  Real x = (guess > a && guess < b) ? guess : (a + b) / 2;
  for (int iter = 0; iter < 200; ++iter) {
    const Real f = bessel_j(nu, x);
    if (f == 0) return x;
    if ((f > 0) == (fa > 0)) {
      a = x;
      fa = f;
    } else {
      b = x;
    }
    const Real d = bessel_j_prime(nu, x);
    Real next = d != 0 ? x - f / d : (a + b) / 2;
    if (!(next > a && next < b)) next = (a + b) / 2;
    const Real step = abs(next - x);
    x = next;
    if (step <= 4 * eps * x || (b - a) <= 4 * eps * x) return x;
  }
  throw numeric_error("Bessel zero refinement did not converge");
}

// First zero of J_nu above `from`, assuming none lies in (from, from + small).
template <class Real>
Real next_zero(Real nu, Real from, int k) {
  const Real h = scan_step<Real>();
  Real a = from;
  Real fa = bessel_j(nu, a);
  for (int steps = 0; steps < 100000; ++steps) {
    const Real b = a + h;
    const Real fb = bessel_j(nu, b);
    if (fb == 0) return b;
    if ((fa > 0) != (fb > 0) && fa != 0) {
      return polish_zero(nu, a, b, fa, mcmahon_zero_guess(nu, k));
    }
    a = b;
    fa = fb;
  }
  throw numeric_error("no sign change found while scanning for a Bessel zero");
}

template <class Real>
Real first_scan_start(Real nu) {
  using std::sqrt;
  // j_{nu,1} > sqrt(nu (nu + 2)); J_nu is positive below its first zero.
  const Real lower = sqrt(nu * (nu + 2));
  return lower > Real(0.5) ? lower : Real(0.5);
}

}  // namespace

template <class Real>
Real bessel_j(Real nu, Real r) {
  check_order(nu);
  if (r < 0) throw domain_error("Bessel argument must be nonnegative");
  if (r == 0) return nu == 0 ? Real(1) : Real(0);
  return boost::math::cyl_bessel_j(nu, r);
}

template <class Real>
Real bessel_j_prime(Real nu, Real r) {
  check_order(nu);
  if (r < 0) throw domain_error("Bessel argument must be nonnegative");
  if (nu == 0) return -bessel_j(Real(1), r);
  if (r == 0) {
    if (nu == 1) return Real(0.5);
    if (nu > 1) return Real(0);
    return std::numeric_limits<Real>::infinity();
  }
  return (boost::math::cyl_bessel_j(nu - 1, r) - boost::math::cyl_bessel_j(nu + 1, r)) / 2;
}

template <class Real>
Real mcmahon_zero_guess(Real nu, int k) {
  using std::cbrt;
  const Real pi = boost::math::constants::pi<Real>();
  if (k == 1 && nu > 1) {
    // Uniform expansion in nu for the first zero.
    const Real c = cbrt(nu);
    return nu + Real(1.8557571) * c + Real(1.033150) / c - Real(0.00397) / nu;
  }
  const Real mu = 4 * nu * nu;
  const Real beta = (k + nu / 2 - Real(0.25)) * pi;
  const Real e = 8 * beta;
  return beta - (mu - 1) / e - 4 * (mu - 1) * (7 * mu - 31) / (3 * e * e * e);
}

template <class Real>
void extend_zeros(ZeroTable<Real>& table, Real limit, int max_count) {
  check_order(table.nu);
  while (static_cast<int>(table.zeros.size()) < max_count &&
         (table.zeros.empty() || table.zeros.back() < limit)) {
    const int k = static_cast<int>(table.zeros.size()) + 1;
    if (table.nu == Real(0.5)) {
      // J_{1/2} is a multiple of sin(r)/sqrt(r).
      table.zeros.push_back(k * boost::math::constants::pi<Real>());
      continue;
    }
    const Real from = table.zeros.empty() ? first_scan_start(table.nu) : table.zeros.back() + Real(2.5);
    table.zeros.push_back(next_zero(table.nu, from, k));
  }
}

template <class Real>
ZeroTable<Real> bessel_zeros(Real nu, int count) {
  ZeroTable<Real> table{nu, {}};
  extend_zeros(table, std::numeric_limits<Real>::infinity(), count);
  return table;
}

template <class Real>
ZeroTable<Real> bessel_zeros_below(Real nu, Real limit) {
  ZeroTable<Real> table{nu, {}};
  extend_zeros(table, limit, std::numeric_limits<int>::max());
  if (!table.zeros.empty() && table.zeros.back() >= limit) table.zeros.pop_back();
  return table;
}

template <class Real>
Real bessel_zero(Real nu, int k) {
  if (k < 1) throw input_error("zero index must be >= 1");
  return bessel_zeros(nu, k).zeros.back();
}

double gegenbauer(int l, double lambda, double s) {
  std::vector<double> seq;
  gegenbauer_sequence(l, lambda, s, seq);
  return seq.back();
}

template <class Real>
void gegenbauer_sequence(int lmax, Real lambda, Real s, std::vector<Real>& out) {
  if (lmax < 0) throw input_error("Gegenbauer degree must be >= 0");
  if (!(lambda > 0)) throw input_error("Gegenbauer parameter must be positive");
  if (s > 1 || s < -1) throw input_error("Gegenbauer argument outside [-1, 1]");
  out.resize(lmax + 1);
  out[0] = 1;
  if (lmax == 0) return;
  out[1] = 2 * lambda * s;
  for (int k = 2; k <= lmax; ++k) {
    out[k] = (2 * (k + lambda - 1) * s * out[k - 1] - (k + 2 * lambda - 2) * out[k - 2]) / k;
  }
}

#define BALLHEAT_INSTANTIATE_SPECFUN(Real)                                   \
  template Real bessel_j<Real>(Real, Real);                                 \
  template Real bessel_j_prime<Real>(Real, Real);                           \
  template Real mcmahon_zero_guess<Real>(Real, int);                        \
  template Real bessel_zero<Real>(Real, int);                               \
  template ZeroTable<Real> bessel_zeros<Real>(Real, int);                   \
  template ZeroTable<Real> bessel_zeros_below<Real>(Real, Real);            \
  template void extend_zeros<Real>(ZeroTable<Real>&, Real, int);            \
  template void gegenbauer_sequence<Real>(int, Real, Real, std::vector<Real>&);

BALLHEAT_INSTANTIATE_SPECFUN(double)
BALLHEAT_INSTANTIATE_SPECFUN(quad)

#undef BALLHEAT_INSTANTIATE_SPECFUN

}  // namespace ballheat
