#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ballheat/errors.hpp"
#include "ballheat/exact_kernels.hpp"
#include "ballheat/quadrature.hpp"
#include "oracles.hpp"

using namespace ballheat;

TEST_SUITE("exact_kernels") {

TEST_CASE("free kernel") {
  const double pi = std::numbers::pi;
  CHECK(gauss_kernel(1.0, Vector{0.2, 0.1}, Vector{0.2, 0.1}) == doctest::Approx(1 / (4 * pi)).epsilon(1e-15));
  CHECK(gauss_kernel(0.25, Vector{0.0}, Vector{1.0}) == doctest::Approx(std::exp(-1.0) / std::sqrt(pi)).epsilon(1e-15));
  CHECK(gauss_kernel(0.3, Vector{0.1, 0.5}, Vector{-0.2, 0.3}) == gauss_kernel(0.3, Vector{-0.2, 0.3}, Vector{0.1, 0.5}));
  CHECK_THROWS_AS(gauss_kernel(0.0, Vector{0.0}, Vector{0.0}), input_error);
}

TEST_CASE("half-space kernel") {
  const double pi = std::numbers::pi;
  const HalfSpace h({1.0}, 1.0);
  CHECK(halfspace_kernel(1.0, Vector{0.0}, Vector{0.0}, h) ==
        doctest::Approx((1 - std::exp(-1.0)) / std::sqrt(4 * pi)).epsilon(1e-14));
  CHECK(halfspace_kernel(0.5, Vector{0.2}, Vector{1.0}, h) == 0.0);
  CHECK_THROWS_AS(halfspace_kernel(0.5, Vector{1.2}, Vector{0.0}, h), input_error);
  oracle::Uniform u(8);
  for (int i = 0; i < 300; ++i) {
    const double th = 2 * pi * u();
    const HalfSpace hs({std::cos(th), std::sin(th)}, 1.0);
    const Vector x{u() * 1.4 - 0.7, u() * 1.4 - 0.7};
    const Vector y{u() * 1.4 - 0.7, u() * 1.4 - 0.7};
    const double t = 0.01 + u();
    const double k = gauss_kernel(t, x, y);
    const double kh = halfspace_kernel(t, x, y, hs);
    CHECK(kh >= 0.0);
    CHECK(kh <= k);
    // k(t, x, P(y)) = exp(-dx dy / t) k(t, x, y)
    const Vector py = reflect_hyperplane(y, hs.boundary());
    const double refl = gauss_kernel(t, x, py);
    const double ident = std::exp(-hs.signed_distance(x) * hs.signed_distance(y) / t) * k;
    CHECK(refl == doctest::Approx(ident).epsilon(1e-13));
    CHECK(kh == doctest::Approx(k - refl).epsilon(1e-10));
  }
}

TEST_CASE("interval kernel") {
  const double pi = std::numbers::pi;
  CHECK(interval_kernel(0.3, 1.0, 0.2).value == 0.0);
  CHECK(interval_kernel(0.3, 0.2, -1.0).value == 0.0);
  const double two_term = std::exp(-pi * pi / 2) + std::exp(-9 * pi * pi / 2);
  CHECK(interval_kernel(2.0, 0.0, 0.0).value == doctest::Approx(two_term).epsilon(1e-13));
  const auto s = interval_kernel_spectral(0.5, 0.3, -0.2, 1e-15);
  const auto im = interval_kernel_images(0.5, 0.3, -0.2, 1e-15);
  CHECK(std::abs(s.value - im.value) <= 1e-12 * s.value);
  CHECK(s.tail_bound <= 1e-15);
  CHECK(im.tail_bound <= 1e-15);
  CHECK(interval_kernel(0.1, 0.0, 0.0).representation == SeriesRepresentation::images);
  CHECK(interval_kernel(0.5, 0.0, 0.0).representation == SeriesRepresentation::spectral);
  CHECK_THROWS_AS(interval_kernel(-1.0, 0.0, 0.0), input_error);
  CHECK_THROWS_AS(interval_kernel(1.0, 0.0, 0.0, 0.0), input_error);
  CHECK_THROWS_AS(interval_kernel(1.0, 1.5, 0.0), input_error);

  for (double t : {0.01, 0.05, 0.3, 1.0}) {
    for (double x = -0.95; x < 1.0; x += 0.15) {
      for (double y = -0.95; y < 1.0; y += 0.15) {
        const double k = interval_kernel(t, x, y).value;
        CHECK(k > 0.0);
        CHECK(k == doctest::Approx(interval_kernel(t, y, x).value).epsilon(1e-13));
        CHECK(k <= gauss_kernel(t, Vector{x}, Vector{y}) * (1 + 1e-13));
      }
    }
  }
}

TEST_CASE("interval semigroup") {
  const auto& gl = gauss_legendre(64);
  for (double t : {0.05, 0.2, 0.5}) {
    double lhs = 0.0;
    for (int p = 0; p < 8; ++p) {
      const double a = -1.0 + p * 0.25;
      lhs += gl.integrate([&](double z) {
        return interval_kernel(t, 0.0, z, 1e-16).value * interval_kernel(t, z, 0.4, 1e-16).value;
      }, a, a + 0.25);
    }
    CHECK(lhs == doctest::Approx(interval_kernel(2 * t, 0.0, 0.4).value).epsilon(1e-8));
  }
}

TEST_CASE("interval survival and exit density") {
  const double pi = std::numbers::pi;
  const double s1 = 4 / pi * std::exp(-pi * pi / 4) - 4 / (3 * pi) * std::exp(-9 * pi * pi / 4);
  CHECK(interval_survival(1.0, 0.0, 1e-14).value == doctest::Approx(s1).epsilon(1e-6));
  CHECK(std::abs(interval_survival(1.0, 0.0, 1e-14).value - 0.10798) < 1e-5);
  const double q = 0.5 * (pi * std::exp(-pi * pi / 4) - 3 * pi * std::exp(-9 * pi * pi / 4));
  CHECK(interval_exit_density(1.0, 0.0, 1, 1e-14).value == doctest::Approx(q).epsilon(1e-6));
  // Commonly quoted as 0.13323; the two-term value is 0.133212.
  CHECK(std::abs(q - 0.13323) < 3e-5);
  for (double x : {-0.9, -0.3, 0.0, 0.5, 0.97}) {
    // Both representations of each quantity agree.
    CHECK(interval_survival(0.39, x, 1e-15).value ==
          doctest::Approx(interval_survival(0.41, x, 1e-15).value).epsilon(0.05));
    const double below = interval_exit_density(0.399999, x, 1, 1e-15).value;
    const double above = interval_exit_density(0.4, x, 1, 1e-15).value;
    CHECK(below == doctest::Approx(above).epsilon(1e-5));
    const double left = interval_exit_density(0.2, x, -1, 1e-15).value;
    CHECK(left == doctest::Approx(interval_exit_density(0.2, -x, 1, 1e-15).value).epsilon(1e-15));
  }
  // Exit density is the one-sided normal derivative of the kernel.
  const double eps = 1e-6;
  const double fd = interval_kernel(0.3, 0.2, 1.0 - eps, 1e-16).value / eps;
  CHECK(interval_exit_density(0.3, 0.2, 1, 1e-15).value == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("free Chapman-Kolmogorov") {
  const auto& gl = gauss_legendre(96);
  // 1D and 2D, unequal times, over a box wide enough to hold all mass.
  const double t = 0.3, s = 0.1;
  const Vector x1{0.2}, y1{-0.4};
  double one = 0.0;
  for (int p = 0; p < 8; ++p) {
    const double a = -6.0 + 1.5 * p;
    one += gl.integrate([&](double z) { return gauss_kernel(t, x1, Vector{z}) * gauss_kernel(s, Vector{z}, y1); }, a, a + 1.5);
  }
  CHECK(one == doctest::Approx(gauss_kernel(t + s, x1, y1)).epsilon(1e-10));
  const Vector x2{0.1, 0.3}, y2{-0.2, 0.0};
  double two = 0.0;
  for (int p = 0; p < 6; ++p) {
    const double a = -5.0 + p * 10.0 / 6;
    two += gl.integrate([&](double z1) {
      double inner = 0.0;
      for (int q = 0; q < 6; ++q) {
        const double b = -5.0 + q * 10.0 / 6;
        inner += gl.integrate([&](double z2) {
          const Vector z{z1, z2};
          return gauss_kernel(t, x2, z) * gauss_kernel(s, z, y2);
        }, b, b + 10.0 / 6);
      }
      return inner;
    }, a, a + 10.0 / 6);
  }
  CHECK(two == doctest::Approx(gauss_kernel(t + s, x2, y2)).epsilon(1e-10));
}

TEST_CASE("midpoint mass") {
  for (int n = 1; n <= 3; ++n) {
    Vector x(n, 0.0), y(n, 0.0), a(n, 0.0);
    x[0] = 0.3;
    y[0] = -0.1;
    if (n > 1) y[1] = 0.2;
    for (int c = 0; c < n; ++c) a[c] = 0.5 * (x[c] + y[c]);
    for (double t : {0.01, 0.2}) {
      CHECK(midpoint_mass(t, x, y, a, 12.0) == doctest::Approx(gauss_kernel(2 * t, x, y)).epsilon(1e-10));
    }
  }
  oracle::Uniform u(77);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 3;
    Vector x(n), y(n), a(n);
    for (int c = 0; c < n; ++c) {
      x[c] = u() - 0.5;
      y[c] = u() - 0.5;
    }
    const double t = 0.01 + u();
    for (int c = 0; c < n; ++c) a[c] = 0.5 * (x[c] + y[c]) + (u() - 0.5) * std::sqrt(t);
    CHECK(midpoint_mass(t, x, y, a, 0.2 + 2 * u()) <= gauss_kernel(2 * t, x, y) * (1 + 1e-12));
  }
  // n = 1, x = -y, a = 0, c = 1: uniformly bounded below.
  double lo = 1.0, hi = 0.0;
  for (double t = 0.01; t <= 1.0; t *= 1.5) {
    for (double x = 0.0; x <= 1.0; x += 0.1) {
      const double r = midpoint_mass(t, Vector{x}, Vector{-x}, Vector{0.0}, 1.0) /
                       gauss_kernel(2 * t, Vector{x}, Vector{-x});
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  CHECK(lo > 0.5);
  CHECK(hi <= 1.0);
  CHECK_THROWS_AS(midpoint_mass(0.1, Vector{0.0}, Vector{0.0}, Vector{0.0}, 0.0), input_error);
  CHECK_THROWS_AS(midpoint_mass(0.1, Vector(4, 0.0), Vector(4, 0.0), Vector(4, 0.0), 1.0), input_error);
}

}
