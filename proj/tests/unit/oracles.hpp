#pragma once

// Reference values computed independently of the library.

#include <vector>

namespace oracle {

/// J_nu(x) by its power series in long double; fine for x <= 20.
long double bessel_series(long double nu, long double x);

/// Root of J_nu between a and b by plain bisection on the power series.
long double bessel_root_bisect(long double nu, long double a, long double b);

/// Deterministic uniform in [0, 1) (splitmix64).
class Uniform {
 public:
  explicit Uniform(unsigned long long seed) : s_(seed) {}
  double operator()();

 private:
  unsigned long long s_;
};

/// Random rotation of R^n (n <= 3) applied to v, built from `u`.
std::vector<double> rotate(const std::vector<double>& v, Uniform& u);

}  // namespace oracle
