#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ballheat/errors.hpp"
#include "ballheat/precision.hpp"
#include "ballheat/specfun.hpp"
#include "oracles.hpp"

using namespace ballheat;

TEST_SUITE("specfun") {

TEST_CASE("Bessel J values") {
  const double pi = std::numbers::pi;
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(2.0, 0.0) == 0.0);
  CHECK(bessel_j(0.5, pi / 2) == doctest::Approx(2 / pi).epsilon(1e-14));
  CHECK(std::abs(bessel_j(0.0, 2.404825557695773)) < 1e-12);
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 5.0, 12.5}) {
    for (double r = 0.05; r < 18.0; r *= 1.3) {
      const double ref = static_cast<double>(oracle::bessel_series(nu, r));
      const double v = bessel_j(nu, r);
      CHECK(std::abs(v - ref) <= 1e-12 * std::abs(ref) + 1e-14);
    }
  }
  CHECK_THROWS_AS(bessel_j(-1.0, 1.0), domain_error);
  CHECK_THROWS_AS(bessel_j(kMaxBesselOrder + 1, 1.0), domain_error);
  CHECK_THROWS_AS(bessel_j(1.0, -1.0), domain_error);
}

TEST_CASE("Bessel J in binary128 matches binary64") {
  for (double nu : {0.0, 0.5, 3.0, 40.5}) {
    for (double r : {0.3, 2.0, 17.0, 60.0}) {
      const double d = bessel_j(nu, r);
      const double q = static_cast<double>(bessel_j<quad>(quad(nu), quad(r)));
      CHECK(std::abs(q - d) <= 1e-13 * std::abs(d) + 1e-15);
    }
  }
}

TEST_CASE("Bessel J derivative") {
  const double pi = std::numbers::pi;
  CHECK(bessel_j_prime(0.0, 0.0) == 0.0);
  // J_{1/2}(x) = sqrt(2/(pi x)) sin x; derivative at pi is -sqrt(2)/pi.
  CHECK(bessel_j_prime(0.5, pi) == doctest::Approx(-std::sqrt(2.0) / pi).epsilon(1e-13));
  for (double nu : {0.0, 0.5, 1.0, 2.5, 7.0}) {
    for (double r = 0.1; r < 30.0; r *= 1.5) {
      const double h = 1e-5 * r;
      const double fd = (bessel_j(nu, r + h) - bessel_j(nu, r - h)) / (2 * h);
      const double d = bessel_j_prime(nu, r);
      CHECK(std::abs(d - fd) <= 1e-8 * std::max(std::abs(d), 1.0));
    }
    for (double z : bessel_zeros(nu, 10).zeros) CHECK(std::abs(bessel_j_prime(nu, z)) > 1e-3);
  }
}

TEST_CASE("Bessel zeros") {
  const double pi = std::numbers::pi;
  CHECK(bessel_zero(0.5, 1) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(bessel_zero(0.5, 2) == doctest::Approx(2 * pi).epsilon(1e-15));
  const double j01 = static_cast<double>(oracle::bessel_root_bisect(0.0L, 2.0L, 3.0L));
  CHECK(std::abs(j01 - 2.404825557695773) < 1e-13);
  CHECK(std::abs(bessel_zero(0.0, 1) - j01) < 1e-12);
  CHECK_THROWS_AS(bessel_zero(0.0, 0), input_error);
  // Bisection oracle for a few more low zeros.
  for (double nu : {1.0, 2.5}) {
    const auto z = bessel_zeros(nu, 3);
    for (double v : z.zeros) {
      const double ref = static_cast<double>(oracle::bessel_root_bisect(nu, v - 0.5, v + 0.5));
      CHECK(std::abs(v - ref) < 1e-12);
    }
  }
}

TEST_CASE("zero interlacing and sign alternation") {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const auto a = bessel_zeros(nu, 21);
    const auto b = bessel_zeros(nu + 1, 20);
    for (int k = 0; k < 20; ++k) {
      CHECK(a.zeros[k] < b.zeros[k]);
      CHECK(b.zeros[k] < a.zeros[k + 1]);
      const double gap = a.zeros[k + 1] - a.zeros[k];
      CHECK(gap > 1.0);
      CHECK(gap < std::numbers::pi * (1 + nu));
      if (k + 2 < 21) {
        const double mid = bessel_j(nu, 0.5 * (a.zeros[k] + a.zeros[k + 1]));
        const double next = bessel_j(nu, 0.5 * (a.zeros[k + 1] + a.zeros[k + 2]));
        CHECK((mid > 0) != (next > 0));
      }
    }
  }
}

TEST_CASE("zero tables grow without changing earlier entries") {
  auto t = bessel_zeros_below(3.0, 20.0);
  const auto before = t.zeros;
  CHECK(t.zeros.back() < 20.0);
  extend_zeros(t, 40.0, 1000);
  CHECK(t.zeros.back() >= 40.0);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(t.zeros[i] == before[i]);
  const auto direct = bessel_zeros(3.0, static_cast<int>(t.zeros.size()));
  for (std::size_t i = 0; i < t.zeros.size(); ++i) CHECK(t.zeros[i] == direct.zeros[i]);
}

TEST_CASE("McMahon guess lands near the zero") {
  // Asymptotic in k; only a bracketing seed, so moderate orders only.
  for (double nu : {0.0, 1.0, 4.5}) {
    for (int k : {1, 2, 5, 20}) {
      CHECK(std::abs(mcmahon_zero_guess(nu, k) - bessel_zero(nu, k)) < 0.2 + 0.02 * nu);
    }
  }
}

TEST_CASE("Gegenbauer") {
  CHECK(gegenbauer(0, 0.7, 0.3) == 1.0);
  CHECK(gegenbauer(1, 0.7, 0.3) == doctest::Approx(2 * 0.7 * 0.3));
  CHECK(gegenbauer(2, 1.0, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (double lam : {0.5, 1.0, 1.5}) {
    for (double s = -1.0; s <= 1.0; s += 0.125) {
      const double c2 = 2 * lam * (lam + 1) * s * s - lam;
      const double c3 = 4.0 / 3.0 * lam * (lam + 1) * (lam + 2) * s * s * s - 2 * lam * (lam + 1) * s;
      CHECK(gegenbauer(2, lam, s) == doctest::Approx(c2).epsilon(1e-13));
      CHECK(gegenbauer(3, lam, s) == doctest::Approx(c3).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gegenbauer(2, 1.0, 1.01), input_error);
  CHECK_THROWS_AS(gegenbauer(2, 0.0, 0.5), input_error);
}

}
