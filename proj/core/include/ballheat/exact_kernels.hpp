#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expm1.hpp>
#include <cmath>
#include <limits>
#include <span>

#include "ballheat/errors.hpp"
#include "ballheat/geometry.hpp"

namespace ballheat {

// All kernels use the generator Delta: the free kernel is
// (4 pi t)^{-n/2} exp(-|x - y|^2 / (4 t)).

enum class SeriesRepresentation { spectral, images };

template <class Real = double>
struct SeriesEvalReport {
  Real value = 0;
  int terms_used = 0;
  /// Certified bound on the truncated remainder.
  double tail_bound = 0.0;
  /// Estimate of accumulated rounding, eps times the sum of |terms|.
  double rounding_bound = 0.0;
  SeriesRepresentation representation = SeriesRepresentation::spectral;
};

/// Time below which the interval kernel uses images, above which it uses the
/// sine series.
inline constexpr double kIntervalCrossover = 0.4;

double gauss_kernel(double t, std::span<const double> x, std::span<const double> y);

/// Dirichlet kernel of a half-space by reflection:
/// k(t,x,y) (1 - exp(-delta_H(x) delta_H(y) / t)).
double halfspace_kernel(double t, std::span<const double> x, std::span<const double> y,
                        const HalfSpace& h);

/// Integral of k(t,x,z) k(t,z,y) over the ball B(a, c sqrt(t)), n <= 3.
/// Uses Gauss-Legendre in the radius about a (64 nodes) times an angular
/// product rule. Never exceeds k(2t, x, y) beyond rounding.
double midpoint_mass(double t, std::span<const double> x, std::span<const double> y,
                     std::span<const double> a, double c);

namespace detail {

template <class Real>
Real gauss_1d(Real t, Real u) {
  using std::exp;
  using std::sqrt;
  const Real pi = boost::math::constants::pi<Real>();
  return exp(-u * u / (4 * t)) / sqrt(4 * pi * t);
}

template <class Real>
Real to_real(double v) {
  return Real(v);
}

template <class Real>
double to_double(const Real& v) {
  return static_cast<double>(v);
}

template <class Real>
void check_interval_args(const Real& t, const Real& tol) {
  if (!(t > 0)) throw input_error("time must be positive");
  if (!(tol > 0)) throw input_error("tolerance must be positive");
}

template <class Real>
bool on_interval_boundary(const Real& x) {
  return x <= -1 || x >= 1;
}

// Remainder of sum_{m > M} w(m) e^{-m^2 c} where w(m+1)/w(m) <= growth(M) for
// m > M and the terms are bounded by w(M+1) e^{-(M+1)^2 c} times a geometric
// factor.
inline double geometric_tail(double first, double ratio) {
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return first / (1.0 - ratio);
}

}  // namespace detail

/// Sine series on (-1, 1):
/// sum_m exp(-m^2 pi^2 t / 4) sin(m pi (x+1)/2) sin(m pi (y+1)/2).
template <class Real>
SeriesEvalReport<Real> interval_kernel_spectral(Real t, Real x, Real y, Real tol) {
  using std::abs;
  using std::exp;
  using std::sin;
  detail::check_interval_args(t, tol);
  if (x < -1 || x > 1 || y < -1 || y > 1) throw input_error("point outside [-1, 1]");
  SeriesEvalReport<Real> r;
  r.representation = SeriesRepresentation::spectral;
  if (detail::on_interval_boundary(x) || detail::on_interval_boundary(y)) return r;
  const Real pi = boost::math::constants::pi<Real>();
  const Real c = pi * pi * t / 4;
  const double cd = static_cast<double>(c);
  const double told = static_cast<double>(tol);
  int m_max = 1;
  for (;; ++m_max) {
    const double first = std::exp(-(m_max + 1.0) * (m_max + 1.0) * cd);
    const double ratio = std::exp(-(2.0 * m_max + 3.0) * cd);
    const double tail = detail::geometric_tail(first, ratio);
    if (tail <= told) {
      r.tail_bound = tail;
      break;
    }
    if (m_max > 10000000) throw numeric_error("interval sine series needs too many terms");
  }
  Real sum = 0;
  Real abs_sum = 0;
  const Real ax = pi * (x + 1) / 2;
  const Real ay = pi * (y + 1) / 2;
  for (int m = 1; m <= m_max; ++m) {
    const Real term = exp(-Real(m) * m * c) * sin(m * ax) * sin(m * ay);
    sum += term;
    abs_sum += abs(term);
  }
  r.value = sum;
  r.terms_used = m_max;
  r.rounding_bound = 8.0 * m_max * static_cast<double>(std::numeric_limits<Real>::epsilon() * abs_sum);
  return r;
}

/// Method of images on (-1, 1) with period 4:
/// sum_j g(x - y - 4j) - g(x + y + 2 - 4j). The j = 0 term and its two
/// nearest reflections are combined in product form so that points near
/// either end lose no relative accuracy.
template <class Real>
SeriesEvalReport<Real> interval_kernel_images(Real t, Real x, Real y, Real tol) {
  using std::abs;
  using std::ceil;
  using std::exp;
  using std::sqrt;
  using boost::math::expm1;
  detail::check_interval_args(t, tol);
  if (x < -1 || x > 1 || y < -1 || y > 1) throw input_error("point outside [-1, 1]");
  SeriesEvalReport<Real> r;
  r.representation = SeriesRepresentation::images;
  if (detail::on_interval_boundary(x) || detail::on_interval_boundary(y)) return r;

  const double td = static_cast<double>(t);
  const double told = static_cast<double>(tol);
  const double pre = 1.0 / std::sqrt(4.0 * boost::math::constants::pi<double>() * td);
  int jmax = static_cast<int>(std::ceil(1.0 + 3.0 * std::sqrt(td))) + 2;
  for (;; ++jmax) {
    const double first = 4.0 * pre * std::exp(-4.0 * jmax * jmax / td);
    const double ratio = std::exp(-4.0 * (2.0 * jmax + 1.0) / td);
    const double tail = detail::geometric_tail(first, ratio);
    if (tail <= told) {
      r.tail_bound = tail;
      break;
    }
    if (jmax > 100000) throw numeric_error("image series needs too many terms");
  }

  const Real a = (x + 1) * (y + 1) / t;
  const Real b = (1 - x) * (1 - y) / t;
  const Real lead_factor = (-expm1(-a)) * (-expm1(-b)) - exp(-(a + b));
  const Real lead = detail::gauss_1d<Real>(t, x - y) * lead_factor;

  Real sum = lead;
  Real abs_sum = abs(lead);
  int terms = 3;
  for (int j = -jmax; j <= jmax; ++j) {
    if (j != 0) {
      const Real u = detail::gauss_1d<Real>(t, x - y - 4 * j);
      sum += u;
      abs_sum += u;
      ++terms;
    }
    if (j != 0 && j != 1) {
      const Real v = detail::gauss_1d<Real>(t, x + y + 2 - 4 * j);
      sum -= v;
      abs_sum += v;
      ++terms;
    }
  }
  r.value = sum;
  r.terms_used = terms;
  r.rounding_bound = 8.0 * terms * static_cast<double>(std::numeric_limits<Real>::epsilon() * abs_sum);
  return r;
}

/// Dirichlet kernel of (-1, 1): images below kIntervalCrossover, sine series above.
template <class Real>
SeriesEvalReport<Real> interval_kernel(Real t, Real x, Real y, Real tol) {
  if (t < Real(kIntervalCrossover)) return interval_kernel_images(t, x, y, tol);
  return interval_kernel_spectral(t, x, y, tol);
}

inline SeriesEvalReport<double> interval_kernel(double t, double x, double y, double tol = 1e-12) {
  return interval_kernel<double>(t, x, y, tol);
}

/// P^x(tau > t) on (-1, 1).
template <class Real>
SeriesEvalReport<Real> interval_survival(Real t, Real x, Real tol) {
  using std::abs;
  using std::exp;
  using std::sin;
  using std::sqrt;
  detail::check_interval_args(t, tol);
  if (x < -1 || x > 1) throw input_error("point outside [-1, 1]");
  SeriesEvalReport<Real> r;
  if (detail::on_interval_boundary(x)) return r;
  const Real pi = boost::math::constants::pi<Real>();
  const double told = static_cast<double>(tol);
  if (t >= Real(kIntervalCrossover)) {
    r.representation = SeriesRepresentation::spectral;
    const Real c = pi * pi * t / 4;
    const double cd = static_cast<double>(c);
    int m_max = 1;
    for (;; ++m_max) {
      const double first = 4.0 / (boost::math::constants::pi<double>() * (m_max + 1)) *
                           std::exp(-(m_max + 1.0) * (m_max + 1.0) * cd);
      const double tail = detail::geometric_tail(first, std::exp(-(2.0 * m_max + 3.0) * cd));
      if (tail <= told) {
        r.tail_bound = tail;
        break;
      }
    }
    Real sum = 0;
    Real abs_sum = 0;
    for (int m = 1; m <= m_max; m += 2) {
      const Real term = exp(-Real(m) * m * c) * sin(m * pi * (x + 1) / 2) * 4 / (m * pi);
      sum += term;
      abs_sum += abs(term);
    }
    r.value = sum;
    r.terms_used = (m_max + 1) / 2;
    r.rounding_bound = 8.0 * m_max * static_cast<double>(std::numeric_limits<Real>::epsilon() * abs_sum);
    return r;
  }
  // Images: each free Gaussian contributes the mass it puts on (-1, 1).
  r.representation = SeriesRepresentation::images;
  const Real s = sqrt(4 * t);  // sqrt(2 * variance)
  auto mass = [&](Real lo, Real hi) -> Real {
    using boost::math::erf;
    using boost::math::erfc;
    const Real a = lo / s;
    const Real b = hi / s;
    if (a >= 0) return (erfc(a) - erfc(b)) / 2;
    if (b <= 0) return (erfc(-b) - erfc(-a)) / 2;
    return (erf(b) - erf(a)) / 2;
  };
  const double td = static_cast<double>(t);
  int jmax = static_cast<int>(std::ceil(1.0 + 3.0 * std::sqrt(td))) + 2;
  for (;; ++jmax) {
    const double tail = 4.0 * std::exp(-4.0 * jmax * jmax / td) /
                        (1.0 - std::exp(-4.0 * (2.0 * jmax + 1.0) / td));
    if (tail <= told) {
      r.tail_bound = tail;
      break;
    }
  }
  Real sum = 0;
  Real abs_sum = 0;
  for (int j = -jmax; j <= jmax; ++j) {
    // u = x - y - 4j for y in (-1, 1); v = x + y + 2 - 4j
    const Real pu = mass(x - 1 - 4 * j, x + 1 - 4 * j);
    const Real pv = mass(x + 1 - 4 * j, x + 3 - 4 * j);
    sum += pu - pv;
    abs_sum += pu + pv;
  }
  r.value = sum;
  r.terms_used = 2 * (2 * jmax + 1);
  r.rounding_bound = 8.0 * r.terms_used * static_cast<double>(std::numeric_limits<Real>::epsilon() * abs_sum);
  return r;
}

/// Exit density through the endpoint z = +1 or z = -1, i.e. the inward normal
/// derivative of the interval kernel there.
template <class Real>
SeriesEvalReport<Real> interval_exit_density(Real t, Real x, int z_sign, Real tol) {
  using std::abs;
  using std::exp;
  using std::sin;
  detail::check_interval_args(t, tol);
  if (z_sign != 1 && z_sign != -1) throw input_error("exit point must be +1 or -1");
  if (!(x > -1 && x < 1)) throw input_error("start point must lie in (-1, 1)");
  if (z_sign == -1) return interval_exit_density<Real>(t, -x, 1, tol);
  SeriesEvalReport<Real> r;
  const Real pi = boost::math::constants::pi<Real>();
  const double told = static_cast<double>(tol);
  const double td = static_cast<double>(t);
  if (t >= Real(kIntervalCrossover)) {
    r.representation = SeriesRepresentation::spectral;
    const Real c = pi * pi * t / 4;
    const double cd = static_cast<double>(c);
    const double hp = boost::math::constants::half_pi<double>();
    int m_max = 1;
    for (;; ++m_max) {
      const double first = hp * (m_max + 1) * std::exp(-(m_max + 1.0) * (m_max + 1.0) * cd);
      const double ratio = (m_max + 2.0) / (m_max + 1.0) * std::exp(-(2.0 * m_max + 3.0) * cd);
      const double tail = detail::geometric_tail(first, ratio);
      if (tail <= told) {
        r.tail_bound = tail;
        break;
      }
    }
    Real sum = 0;
    Real abs_sum = 0;
    for (int m = 1; m <= m_max; ++m) {
      const Real sign = (m % 2 == 1) ? Real(1) : Real(-1);
      const Real term = exp(-Real(m) * m * c) * sin(m * pi * (x + 1) / 2) * (m * pi / 2) * sign;
      sum += term;
      abs_sum += abs(term);
    }
    r.value = sum;
    r.terms_used = m_max;
    r.rounding_bound = 8.0 * m_max * static_cast<double>(std::numeric_limits<Real>::epsilon() * abs_sum);
    return r;
  }
  // q = (1/t) sum_j (1 - x + 4j) g(x - 1 - 4j)
  r.representation = SeriesRepresentation::images;
  const double pre = 1.0 / std::sqrt(4.0 * boost::math::constants::pi<double>() * td);
  int jmax = static_cast<int>(std::ceil(1.0 + 3.0 * std::sqrt(td))) + 2;
  for (;; ++jmax) {
    const double w = 4.0 * jmax + 2.0;
    const double first = 2.0 * w / td * pre * std::exp(-(w - 4.0) * (w - 4.0) / (4.0 * td));
    const double ratio = 2.0 * std::exp(-8.0 * (w - 2.0) / (4.0 * td));
    const double tail = detail::geometric_tail(first, ratio);
    if (tail <= told) {
      r.tail_bound = tail;
      break;
    }
  }
  Real sum = 0;
  Real abs_sum = 0;
  for (int j = -jmax; j <= jmax; ++j) {
    const Real w = 1 - x + 4 * j;
    const Real term = w * detail::gauss_1d<Real>(t, w) / t;
    sum += term;
    abs_sum += abs(term);
  }
  r.value = sum;
  r.terms_used = 2 * jmax + 1;
  r.rounding_bound = 8.0 * r.terms_used * static_cast<double>(std::numeric_limits<Real>::epsilon() * abs_sum);
  return r;
}

}  // namespace ballheat
