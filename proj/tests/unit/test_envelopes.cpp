#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ballheat/ball_spectral.hpp"
#include "ballheat/envelopes.hpp"
#include "ballheat/errors.hpp"
#include "ballheat/exact_kernels.hpp"
#include "ballheat/quadrature.hpp"
#include "oracles.hpp"

using namespace ballheat;

TEST_SUITE("envelopes") {

TEST_CASE("h factor") {
  CHECK(h_factor(1.0, Vector{0.0, 0.0}, Vector{0.0, 0.0}) == 1.0);
  CHECK(h_factor(0.3, Vector{1.0, 0.0}, Vector{0.2, 0.1}) == 0.0);
  // Depths 0.1, distance 0.2.
  const double theta = 2 * std::asin(1.0 / 9);
  const Vector x{0.9, 0.0};
  const Vector y{0.9 * std::cos(theta), 0.9 * std::sin(theta)};
  CHECK(distance(x, y) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(h_factor(0.01, x, y) == doctest::Approx(1.16).epsilon(1e-12));
  CHECK_THROWS_AS(h_factor(0.0, Vector{0.0}, Vector{0.0}), input_error);
  CHECK_THROWS_AS(h_factor(1.0, Vector{1.5}, Vector{0.0}), input_error);
}

TEST_CASE("h factor bounds, symmetry, rotation") {
  oracle::Uniform u(3);
  for (int i = 0; i < 5000; ++i) {
    const int n = 1 + i % 3;
    Vector x(n), y(n);
    for (int c = 0; c < n; ++c) {
      x[c] = (u() - 0.5) * 1.15;
      y[c] = (u() - 0.5) * 1.15;
    }
    if (norm(x) > 1 || norm(y) > 1) continue;
    const double t = std::pow(10.0, -3 + 3 * u());
    const double h = h_factor(t, x, y);
    CHECK(h >= 0.0);
    CHECK(h <= 2.0);
    CHECK(h == h_factor(t, y, x));
    if (n > 1) {
      oracle::Uniform a(i), b(i);
      CHECK(h_factor(t, oracle::rotate(x, a), oracle::rotate(y, b)) == doctest::Approx(h).epsilon(1e-10));
    }
  }
}

TEST_CASE("sharp and global shapes") {
  const double pi = std::numbers::pi;
  CHECK(sharp_shape(1.0, Vector{0.0, 0.0}, Vector{0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sharp_shape(0.2, Vector{0.6, 0.8}, Vector{0.0, 0.0}) == 0.0);
  oracle::Uniform u(4);
  for (int i = 0; i < 500; ++i) {
    const int n = 1 + i % 3;
    Vector x(n), y(n);
    for (int c = 0; c < n; ++c) {
      x[c] = (u() - 0.5) * 1.1;
      y[c] = (u() - 0.5) * 1.1;
    }
    if (norm(x) > 1 || norm(y) > 1) continue;
    const double t = 0.001 + u();
    const double s = sharp_shape(t, x, y);
    CHECK(s == doctest::Approx(h_factor(t, x, y) * std::pow(4 * pi, n / 2.0) * gauss_kernel(t, x, y)).epsilon(1e-14));
    CHECK(global_shape(t, x, y) == doctest::Approx(s * std::exp(-lambda1(n) * t)).epsilon(1e-14));
  }
  CHECK(global_shape(4.0, Vector{0.0}, Vector{0.0}) == doctest::Approx(std::exp(-pi * pi)).epsilon(1e-14));
  CHECK(global_shape(4.0, Vector{0.0}, Vector{0.0}) == doctest::Approx(5.1724e-5).epsilon(1e-4));
  // Beyond t = 1 only the Gaussian and spectral factors move.
  const Vector x{0.3, 0.1}, y{-0.4, 0.2};
  const double d2 = distance(x, y) * distance(x, y);
  for (double t : {1.5, 3.0, 7.0}) {
    const double expect = h_factor(1.0, x, y) * std::exp(-d2 / (4 * t) - lambda1(2) * t);
    CHECK(global_shape(t, x, y) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("q shape transcription") {
  const double pi = std::numbers::pi;
  CHECK(q_shape(0.5, Vector{0.5, 0.0}, Vector{1.0, 0.0}) ==
        doctest::Approx(1.125 / (2 * pi) * std::exp(-0.125)).epsilon(1e-14));
  CHECK(q_shape(0.1, Vector{0.9}, Vector{1.0}) ==
        doctest::Approx(1.001 * std::pow(0.4 * pi, -0.5) * std::exp(-0.025)).epsilon(1e-13));
  CHECK(q_shape(0.05, Vector{0.0, 0.0, 0.2}, Vector{1.0, 0.0, 0.0}) ==
        doctest::Approx(36.8 * std::pow(0.2 * pi, -1.5) * std::exp(-5.2)).epsilon(1e-13));
  for (int n = 1; n <= 3; ++n) {
    Vector o(n, 0.0), z(n, 0.0);
    z[0] = 1.0;
    CHECK(q_shape(1.0, o, z) == doctest::Approx(2 * std::pow(4 * pi, -n / 2.0) * std::exp(-0.25)).epsilon(1e-14));
  }
  // Radial approach: the first summand takes over.
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const Vector x{1 - eps, 0.0};
    const Vector z{1.0, 0.0};
    const double ratio = q_shape(0.1, x, z) / (eps / 0.1 * gauss_kernel(0.1, x, z));
    CHECK(ratio == doctest::Approx(1.0).epsilon(2 * eps * eps));
  }
}

TEST_CASE("q shape integrates over the sphere") {
  const auto rule = sphere_rule(3, 48, 96);
  for (double t : {0.01, 0.1, 1.0}) {
    for (double r : {0.0, 0.5, 0.99}) {
      const Vector x{0.0, 0.0, r};
      double s = 0.0;
      for (std::size_t i = 0; i < rule.points.size(); ++i) s += rule.weights[i] * q_shape(t, x, rule.points[i]);
      CHECK(std::isfinite(s));
      CHECK(s > 0.0);
    }
  }
}

TEST_CASE("interval shape") {
  CHECK(interval_shape(1.0, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(interval_shape(4.0, 0.0, 0.0) == doctest::Approx(1.0 / 16 * 0.5).epsilon(1e-15));
  CHECK(interval_shape(0.3, 1.0, 0.2) == 0.0);
  CHECK(interval_shape(0.3, 0.2, -1.0) == 0.0);
  CHECK_THROWS_AS(interval_shape(0.3, 1.2, 0.0), input_error);
  // Comparable to the sharp shape; the constant is measured, not assumed.
  double lo = 1e300, hi = 0.0;
  int count = 0;
  for (int it = 0; it < 25; ++it) {
    const double t = std::pow(10.0, -3.0 + 3.0 * it / 24);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double x = -0.999 + 1.998 * i / 19;
        const double y = -0.999 + 1.998 * j / 19;
        const double r = interval_shape(t, x, y) / sharp_shape(t, Vector{x}, Vector{y});
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        ++count;
      }
    }
  }
  CHECK(count == 10000);
  CHECK(std::isfinite(hi / lo));
  CHECK(lo > 0.0);
  MESSAGE("interval/sharp ratio in [" << lo << ", " << hi << "]");
}

TEST_CASE("Davies-Zhang shape") {
  const Vector x{0.3, -0.5};
  for (double t : {0.01, 0.3, 2.0}) {
    const double d = 1 - norm(x);
    const double expect = std::min(1.0, d * d / t) * std::pow(t, -1.0);
    CHECK(davies_zhang_shape(t, x, x, 4.0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(davies_zhang_shape(t, x, x, 4.0) == doctest::Approx(sharp_shape(t, x, x)).epsilon(1e-14));
  }
  CHECK(davies_zhang_shape(0.1, x, Vector{0.1, 0.2}, 16.0) >= 0.0);
  CHECK(davies_zhang_shape(0.1, x, Vector{0.1, 0.2}, 16.0) > davies_zhang_shape(0.1, x, Vector{0.1, 0.2}, 4.0));
  CHECK_THROWS_AS(davies_zhang_shape(0.1, x, x, 0.0), input_error);
}

TEST_CASE("boundary vanishing rate") {
  const Vector y{0.1, 0.3};
  std::vector<double> le, ls;
  for (int i = 0; i <= 8; ++i) {
    const double eps = std::pow(10.0, -4.0 + 2.0 * i / 8);
    const Vector x{(1 - eps) * 0.6, (1 - eps) * 0.8};
    le.push_back(std::log(eps));
    ls.push_back(std::log(sharp_shape(0.1, x, y)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < le.size(); ++i) {
    mx += le[i];
    my += ls[i];
  }
  mx /= le.size();
  my /= le.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < le.size(); ++i) {
    sxy += (le[i] - mx) * (ls[i] - my);
    sxx += (le[i] - mx) * (le[i] - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(1.0).epsilon(0.05));
}

}
