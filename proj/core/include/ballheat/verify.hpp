#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ballheat/geometry.hpp"
#include "ballheat/mc_oracle.hpp"
#include "ballheat/precision.hpp"

namespace ballheat {

enum class KernelSource { spectral, interval, mc, skipped };

enum class EnvelopeKind { sharp, global, interval, davies_zhang, exit };

struct Envelope {
  EnvelopeKind kind = EnvelopeKind::sharp;
  double c_exp = 4.0;  // davies_zhang only
};

std::string to_string(KernelSource s);
std::string to_string(const Envelope& e);

/// One grid node. `ratio` is NaN when the node is skipped or the shape is 0
/// (flagged). For exit-density sweeps abs_y is 1 and `angle` is the angle
/// between x and the exit point.
struct RatioRecord {
  int n = 1;
  double t = 0.0;
  double abs_x = 0.0;
  double abs_y = 0.0;
  double angle = 0.0;
  double kernel = 0.0;
  double shape = 0.0;
  double ratio = 0.0;
  KernelSource source = KernelSource::spectral;
  bool flagged = false;
};

/// Records whose t lies in the closed interval [t_lo, t_hi].
struct DecadeReport {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t count = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double empirical_C = 0.0;
};

struct SweepReport {
  std::string grid;
  std::size_t records = 0;
  std::size_t skipped = 0;
  std::size_t flagged = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double empirical_C = 0.0;
  double mc_fraction = 0.0;
  std::vector<DecadeReport> decades;

  /// The sub-report for [t_lo, t_hi]; throws input_error if absent.
  const DecadeReport& decade(double t_lo, double t_hi) const;
};

struct SweepGrid {
  int n = 2;
  std::vector<double> ts;
  /// n >= 2: radii in [0, 1]; pairs with |x| <= |y| are visited.
  /// n = 1: positions in (-1, 1); all ordered pairs are visited.
  std::vector<double> radii;
  /// Angles between x and y in [0, pi]; unused for n = 1.
  std::vector<double> angles;
};

/// t log-spaced 8 per decade over [t_lo, t_hi]; radii 1 - eps with eps
/// log-spaced from 1e-3 to 0.1 plus 0, 0.3, 0.6; nine angles from 0 to pi.
/// For n = 1 the positions are +-(1 - eps), eps log-spaced in [1e-3, 0.9],
/// plus 0 (41 values).
SweepGrid standard_grid(int n, double t_lo = 0.01, double t_hi = 1.0);

/// t_lo * 10^(k/per_decade) up to t_hi, with both ends included.
std::vector<double> log_grid(double t_lo, double t_hi, int per_decade);

struct SweepConfig {
  /// Sources in order of preference. n = 1 "spectral" is the sine series,
  /// "interval" the dual series with automatic switching.
  std::vector<KernelSource> sources = {KernelSource::spectral};
  Precision precision = Precision::binary128;
  /// Absolute spectral tail tolerance; 0 picks 1e-32 (binary128) or 1e-15.
  double tol = 0.0;
  /// A series value is accepted only if its error bound is below
  /// rel_accept * value.
  double rel_accept = 1e-6;
  PathConfig mc;
  unsigned threads = 0;
};

struct SweepResult {
  SweepReport report;
  std::vector<RatioRecord> records;
};

/// Kernel against an envelope at every node of the grid.
SweepResult ratio_sweep(const SweepGrid& grid, const Envelope& envelope, const SweepConfig& cfg);

/// Exit density against q_shape: x at each radius, the exit point at each
/// angle from x.
SweepResult exit_density_sweep(const SweepGrid& grid, const SweepConfig& cfg);

/// Summary over a record set (decades are the [10^k, 10^(k+1)] intervals
/// that meet the grid).
SweepReport summarize(const std::vector<RatioRecord>& records, const std::string& grid);

struct CheckResult {
  std::string name;
  double relative_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

CheckResult make_check(std::string name, double relative_error, double tolerance);

struct SemigroupQuadrature {
  /// Gauss-Legendre nodes per radial panel (n = 1: per panel of [-1, 1]).
  int radial = 64;
  int panels = 4;
  /// Equispaced angles (n = 2) or longitudes (n = 3).
  int azimuthal = 128;
  /// Gauss-Legendre nodes in the polar cosine (n = 3).
  int polar = 32;
};

/// Relative error of int_B k1(t,x,z) k1(t,z,y) dz against k1(2t,x,y). n <= 3.
CheckResult semigroup_check(int n, double t, const Vector& x, const Vector& y,
                            const SemigroupQuadrature& q = {});

struct HuntQuadrature {
  int time_nodes = 48;
  int time_panels = 4;
  int polar = 24;
  int azimuthal = 64;
};

/// int_0^t int_S k(t-s,z,y) q_x(s,z) dsigma(z) ds. With `reduced` (x = 0
/// only) the sphere integral uses that q_0 does not depend on z.
double hunt_subtraction(int n, double t, const Vector& x, const Vector& y,
                        const HuntQuadrature& q = {}, bool reduced = false);

/// Relative error of k - k1 against hunt_subtraction. n in {2, 3}.
CheckResult hunt_check(int n, double t, const Vector& x, const Vector& y,
                       const HuntQuadrature& q = {});

struct MidpointReport {
  double floor = 0.0;
  double max_ratio = 0.0;
  /// Smallest ratio per t, in grid order.
  std::vector<double> floor_by_t;
  /// Mass about the exact midpoint minus mass about the displaced centre,
  /// smallest over the grid.
  double centred_advantage = 0.0;
  bool pass = false;
};

/// midpoint_mass / k(2t,x,y) for centres a = (x+y)/2 and a displaced by
/// l sqrt(t) along e_1. Passes if every ratio lies in (0, 1] and the
/// per-t floors agree within a factor 2.
MidpointReport midpoint_check(int n, const std::vector<double>& ts,
                              const std::vector<std::pair<Vector, Vector>>& pairs, double c,
                              double l);

struct LongtimeReport {
  std::vector<double> ratios;  // k1 e^{lambda1 t} / ((1-|x|)(1-|y|)) per t
  double spread = 0.0;         // max / min
  bool pass = false;           // spread <= 1.05
};

LongtimeReport longtime_check(int n, const std::vector<double>& ts, const Vector& x, const Vector& y);

/// |int_0^inf int_S q_x(s,z) dsigma ds - 1|, with the sphere integral done by
/// quadrature of exit_density on [s_min, t_split] and the remainder in closed
/// form. s_min is where a Gaussian bound on the exit density drops below
/// 1e-10; for start points near the sphere (|x| >= ~0.5 when n <= 3) that is
/// below the spectral range and small_time_refusal is thrown.
CheckResult exit_mass_check(int n, const Vector& x, double t_split = 0.5, double tol = 1e-6);

}  // namespace ballheat
