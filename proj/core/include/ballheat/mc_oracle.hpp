#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ballheat/geometry.hpp"

namespace ballheat {

// Killed Brownian motion in the unit ball of R^n (n = 1 is the interval
// (-1, 1)). The process has generator Delta: each Euler increment has
// variance 2 dt per coordinate.

struct PathConfig {
  double dt = 1e-3;
  std::uint64_t n_paths = 100000;
  std::uint64_t seed = 0;
  bool bridge_correction = true;
  /// Worker threads; 0 means the available hardware parallelism.
  unsigned threads = 0;
  /// Paths per block. Blocks, not threads, fix the random streams.
  std::uint64_t block_size = 16384;
  /// Pair every path with its mirror (-increments).
  bool antithetic = true;
};

struct ExitSample {
  double tau = 0.0;
  Vector z;
  bool crossed_by_bridge = false;
};

struct MCEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  std::uint64_t n_paths = 0;
};

/// BALLHEAT_SEED if set (decimal 64-bit), otherwise `fallback`. A malformed
/// value throws input_error.
std::uint64_t seed_from_env(std::uint64_t fallback = 0);

/// Independent random streams for one block of paths.
class PathStream {
 public:
  PathStream(std::uint64_t seed, std::uint64_t block);

  double normal();
  double uniform();

 private:
  std::mt19937_64 gauss_engine_;
  std::mt19937_64 uniform_engine_;
};

/// One path from x up to `horizon`; nullopt if it survives. The step is the
/// largest t/N not exceeding cfg.dt.
std::optional<ExitSample> simulate_exit(std::span<const double> x, double horizon,
                                        const PathConfig& cfg, PathStream& stream);

/// P^x(tau > t).
MCEstimate mc_survival(std::span<const double> x, double t, const PathConfig& cfg);

/// Hunt estimator k(t,x,y) - E[1{tau < t} k(t - tau, W_tau, y)], one estimate
/// per target y, all from the same paths.
std::vector<MCEstimate> mc_kernel(double t, std::span<const double> x,
                                  const std::vector<Vector>& ys, const PathConfig& cfg);
MCEstimate mc_kernel(double t, std::span<const double> x, std::span<const double> y,
                     const PathConfig& cfg);

/// E^x[tau]; paths still alive at `horizon` count as horizon.
MCEstimate mc_exit_time(std::span<const double> x, const PathConfig& cfg, double horizon = 50.0);

/// Counts of exit places by cap. `cap` maps a boundary point to a cap index
/// in [0, caps) or -1 to ignore it. Paths alive at `horizon` are not counted.
std::vector<std::uint64_t> mc_exit_histogram(std::span<const double> x, double horizon,
                                             const PathConfig& cfg, int caps,
                                             const std::function<int(std::span<const double>)>& cap);

/// Survival on a coupled ladder of steps dt, dt/2, ..., dt/2^(levels-1): the
/// coarse increments are sums of the finest ones. Killing uses the bridge
/// probabilities as weights rather than coin flips.
struct SurvivalLadder {
  std::vector<double> dts;
  std::vector<MCEstimate> levels;
  /// differences[i] estimates levels[i] - levels[i+1], path by path.
  std::vector<MCEstimate> differences;
};
SurvivalLadder mc_survival_ladder(std::span<const double> x, double t, const PathConfig& cfg,
                                  int levels);

}  // namespace ballheat
