#pragma once

#include <span>

namespace ballheat {

// C-free shapes the Dirichlet kernel is compared against. "min" is a literal
// minimum throughout.

/// (1 ^ d_x d_y / t) + (1 ^ d_x |x-y|^2 / t)(1 ^ d_y |x-y|^2 / t) with
/// d = 1 - |.|. Lies in [0, 2].
double h_factor(double t, std::span<const double> x, std::span<const double> y);

/// h(t,x,y) t^{-n/2} exp(-|x-y|^2 / 4t).
double sharp_shape(double t, std::span<const double> x, std::span<const double> y);

/// h(t^1, x, y) (t^1)^{-n/2} exp(-|x-y|^2 / 4t - lambda_1 t), valid for all t.
double global_shape(double t, std::span<const double> x, std::span<const double> y);

/// ((1-|x|)/t + (|x-z|^2/t)(1 ^ (1-|x|)|x-z|^2/t)) k(t,x,z) for z on the sphere.
/// The first summand is not capped at 1.
double q_shape(double t, std::span<const double> x, std::span<const double> z);

/// (1 ^ (x+1)(y+1)/t)(1 ^ (1-x)(1-y)/t) t^{-1/2} exp(-(x-y)^2 / 4t) on [-1, 1].
double interval_shape(double t, double x, double y);

/// (1 ^ d_x d_y / t) t^{-n/2} exp(-|x-y|^2 / (c_exp t)).
double davies_zhang_shape(double t, std::span<const double> x, std::span<const double> y,
                          double c_exp);

}  // namespace ballheat
