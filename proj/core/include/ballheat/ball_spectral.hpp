#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "ballheat/specfun.hpp"

namespace ballheat {

/// One Dirichlet eigenpair of -Delta on the unit ball, grouped by angular
/// degree l (all 2l+n-2 choose ... harmonics of degree l share it).
/// The radial profile is radial_norm * r^{1-n/2} J_nu(zero * r).
template <class Real = double>
struct EigenMode {
  int l = 0;
  int k = 1;
  Real nu = 0;
  Real zero = 0;
  Real eigenvalue = 0;
  Real radial_norm = 0;
};

/// How a spectral sum was cut off.
struct SpectralTruncation {
  int l_max = 0;
  int k_max = 0;
  /// Modes counted with angular multiplicity.
  std::size_t mode_count = 0;
  /// Every eigenvalue below this was summed.
  double cutoff_eigenvalue = 0.0;
  double tail_bound = 0.0;
  double tol = 0.0;
};

template <class Real = double>
struct SpectralValue {
  Real value = 0;
  SpectralTruncation truncation;
  double rounding_bound = 0.0;

  double error_bound() const { return truncation.tail_bound + rounding_bound; }
};

enum class SpectralQuantity { kernel, exit_density, survival };

struct SpectralOptions {
  /// Largest admissible mode count (with multiplicity) before refusing.
  std::size_t mode_budget = 200000;
  /// Optional eigen-table cache file (binary64 tables only).
  std::string cache_path;
};

/// Number of linearly independent spherical harmonics of degree l in R^n.
double harmonic_dimension(int n, int l);

/// Smallest Dirichlet eigenvalue of -Delta on B(0,1) in R^n (n = 1: pi^2/4).
double lambda1(int n);

/// All modes with l <= l_max, k <= k_max, sorted by eigenvalue. n >= 2.
std::vector<EigenMode<double>> eigen_table(int n, int l_max, int k_max);

/// Immutable set of all modes with zero below `zero_limit`.
template <class Real>
class EigenTable {
 public:
  static EigenTable build(int n, double zero_limit);
  /// Copy of `base` extended to a larger limit; existing modes are reused.
  static EigenTable extend(const EigenTable& base, double zero_limit);

  int dimension() const { return n_; }
  double zero_limit() const { return zero_limit_; }
  /// Sorted by (l, k).
  const std::vector<EigenMode<Real>>& modes() const { return modes_; }

  /// Rows "n l k zero eigenvalue radial_norm" at 17 significant digits.
  void save(const std::string& path) const;
  static EigenTable load(const std::string& path);

 private:
  int n_ = 2;
  double zero_limit_ = 0.0;
  std::vector<EigenMode<Real>> modes_;
  std::vector<ZeroTable<Real>> zeros_;  // indexed by l

  void add_modes_for_degree(int l);
};

/// Fourier-Bessel expansion of the Dirichlet heat kernel of the unit ball,
/// n >= 2. Thread-safe: the eigen table grows under a lock and is otherwise
/// shared read-only.
template <class Real = double>
class BallSpectral {
 public:
  explicit BallSpectral(int n, SpectralOptions options = {});

  int dimension() const { return n_; }
  Real lambda1() const;

  /// Plans the truncation for one quantity at time t. Throws
  /// small_time_refusal if the certified cut-off needs too many modes or an
  /// order beyond kMaxBesselOrder.
  SpectralTruncation plan(double t, double tol, SpectralQuantity q) const;

  SpectralValue<Real> kernel(double t, std::span<const double> x, std::span<const double> y,
                             double tol) const;
  /// P^x(tau > t) by termwise radial integration.
  SpectralValue<Real> survival(double t, std::span<const double> x, double tol) const;
  /// Inward normal derivative of k1(t, x, .) at the boundary point z.
  SpectralValue<Real> exit_density(double t, std::span<const double> x, std::span<const double> z,
                                   double tol) const;

  /// All (l = 0) modes for the radial series used by survival and exit-mass
  /// checks. Covers eigenvalues below `cutoff`.
  std::shared_ptr<const EigenTable<Real>> table_covering(double cutoff_eigenvalue) const;

  /// Evaluation at fixed t with cached radial profiles. Not thread-safe;
  /// use one slice per thread.
  class Slice {
   public:
    Slice(const BallSpectral& model, double t, double tol, SpectralQuantity q);

    const SpectralTruncation& truncation() const { return trunc_; }
    double time() const { return t_; }

    /// k1 at radii rx, ry and angle theta between the points.
    SpectralValue<Real> kernel(double rx, double ry, double theta);
    /// q_x(t, z) with |x| = rx and angle theta between x and z.
    SpectralValue<Real> exit_density(double rx, double theta);
    /// Sphere integral of q_x(t, .), i.e. the exit-time density.
    SpectralValue<Real> exit_time_density(double rx);
    SpectralValue<Real> survival(double rx);
    /// int_t^inf of the exit-time density, in closed form per mode.
    SpectralValue<Real> exit_time_remainder(double rx);

    /// Radial profiles R_{l,k}(r) of every included mode.
    const std::vector<Real>& radial_profile(double r);

   private:
    int n_;
    double t_;
    SpectralTruncation trunc_;
    std::shared_ptr<const EigenTable<Real>> table_;
    std::vector<std::size_t> included_;  // indices into table_->modes()
    std::vector<Real> weight_;            // e^{-lambda t}
    int l_max_ = 0;
    std::map<double, std::vector<Real>> profiles_;
    std::vector<Real> zonal_;
    std::vector<Real> exit_coeff_;        // -R'(1)
    std::vector<Real> radial_mass_;       // int_0^1 R r^{n-1} dr, l = 0 only

    void compute_zonal(double theta);
    SpectralValue<Real> finish(Real sum, Real abs_sum) const;
  };

 private:
  int n_;
  SpectralOptions options_;
  mutable std::mutex mutex_;
  mutable std::shared_ptr<const EigenTable<Real>> table_;
};

/// Shared binary64 models, one per dimension.
const BallSpectral<double>& ball_spectral(int n);

struct KernelResult {
  double value = 0.0;
  SpectralTruncation truncation;
  double rounding_bound = 0.0;
};

/// Dirichlet kernel of the unit ball in any dimension (n = 1 goes to the
/// interval dual series). A point on the sphere gives exactly 0; a point
/// outside throws input_error.
KernelResult ball_kernel(double t, std::span<const double> x, std::span<const double> y,
                         double tol = 1e-10);
KernelResult survival(double t, std::span<const double> x, double tol = 1e-10);
KernelResult exit_density(double t, std::span<const double> x, std::span<const double> z,
                          double tol = 1e-10);

}  // namespace ballheat
