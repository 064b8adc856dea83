#include "ballheat/mc_oracle.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>

#include "ballheat/errors.hpp"
#include "ballheat/exact_kernels.hpp"

namespace ballheat {

namespace {

constexpr int kMaxDim = 16;
// exp(-40) is below 5e-18; skip the bridge draw beyond it.
constexpr double kBridgeCutoff = 40.0;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Point = std::array<double, kMaxDim>;

struct Outcome {
  bool exited = false;
  double tau = 0.0;
  Point z{};
  bool bridge = false;
};

double radius(const Point& p, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

void project(Point& p, int n) {
  const double r = radius(p, n);
  for (int i = 0; i < n; ++i) p[i] /= r;
}

struct Walk {
  int n;
  int steps;
  double h;
  double sd;
  bool bridge;
};

Walk make_walk(std::span<const double> x, double horizon, const PathConfig& cfg) {
  if (x.empty() || x.size() > static_cast<std::size_t>(kMaxDim)) {
    throw input_error("Monte Carlo dimension must be between 1 and " + std::to_string(kMaxDim));
  }
  if (!(horizon > 0) || !std::isfinite(horizon)) throw input_error("horizon must be positive");
  if (!(cfg.dt > 0)) throw input_error("dt must be positive");
  if (cfg.n_paths < 1) throw input_error("n_paths must be >= 1");
  if (cfg.block_size < 2) throw input_error("block_size must be >= 2");
  if (!(norm(x) < 1.0)) throw input_error("start point must lie inside the ball");
  Walk w;
  w.n = static_cast<int>(x.size());
  w.steps = std::max(1L, std::lround(horizon / cfg.dt));
  w.h = horizon / w.steps;
  w.sd = std::sqrt(2.0 * w.h);
  w.bridge = cfg.bridge_correction;
  return w;
}

void require_step(double t, const PathConfig& cfg) {
  if (!(t > 0)) throw input_error("time must be positive");
  if (cfg.dt > t / 10.0 * (1.0 + 1e-12)) throw input_error("dt must not exceed t/10");
}

// Advances one path by the increment sign*xi. Returns true if it died.
bool step_path(const Walk& w, Point& p, Outcome& out, const double* xi, double sign, int i,
               PathStream& stream) {
  Point next;
  for (int c = 0; c < w.n; ++c) next[c] = p[c] + sign * w.sd * xi[c];
  const double r_old = radius(p, w.n);
  const double r_new = radius(next, w.n);
  if (r_new >= 1.0) {
    const double d_old = 1.0 - r_old;
    const double frac = d_old / (d_old + (r_new - 1.0));
    out.exited = true;
    out.tau = (i + frac) * w.h;
    out.z = next;
    project(out.z, w.n);
    return true;
  }
  if (w.bridge) {
    const double e = (1.0 - r_old) * (1.0 - r_new) / w.h;
    if (e < kBridgeCutoff && stream.uniform() < std::exp(-e)) {
      out.exited = true;
      out.bridge = true;
      out.tau = (i + stream.uniform()) * w.h;
      for (int c = 0; c < w.n; ++c) out.z[c] = 0.5 * (p[c] + next[c]);
      if (radius(out.z, w.n) == 0.0) out.z = next;
      project(out.z, w.n);
      return true;
    }
  }
  p = next;
  return false;
}

// Simulates a path and, if antithetic, its mirror on the same stream.
void simulate_pair(const Walk& w, std::span<const double> x, bool antithetic, PathStream& stream,
                   Outcome& a, Outcome& b) {
  Point pa{}, pb{};
  for (int c = 0; c < w.n; ++c) pa[c] = pb[c] = x[c];
  a = Outcome{};
  b = Outcome{};
  bool alive_a = true;
  bool alive_b = antithetic;
  double xi[kMaxDim];
  for (int i = 0; i < w.steps && (alive_a || alive_b); ++i) {
    for (int c = 0; c < w.n; ++c) xi[c] = stream.normal();
    if (alive_a && step_path(w, pa, a, xi, 1.0, i, stream)) alive_a = false;
    if (alive_b && step_path(w, pb, b, xi, -1.0, i, stream)) alive_b = false;
  }
}

struct Accumulator {
  std::vector<double> sum;
  std::vector<double> sumsq;
  std::uint64_t samples = 0;  // pairs, or paths without pairing
};

// Runs all blocks and merges them in block order. `fn(a, b_or_null, values)`
// writes m values for one sample (a pair mean, or a single path).
template <class Fn>
Accumulator run_blocks(const Walk& w, std::span<const double> x, const PathConfig& cfg, int m,
                       Fn fn) {
  const std::uint64_t per_sample = cfg.antithetic ? 2 : 1;
  const std::uint64_t samples = (cfg.n_paths + per_sample - 1) / per_sample;
  const std::uint64_t block_samples = std::max<std::uint64_t>(1, cfg.block_size / per_sample);
  const std::uint64_t blocks = (samples + block_samples - 1) / block_samples;
  std::vector<Accumulator> parts(blocks);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&]() {
    std::vector<double> values(m);
    Outcome a, b;
    for (;;) {
      const std::uint64_t blk = next.fetch_add(1);
      if (blk >= blocks) return;
      Accumulator& acc = parts[blk];
      acc.sum.assign(m, 0.0);
      acc.sumsq.assign(m, 0.0);
      const std::uint64_t first = blk * block_samples;
      const std::uint64_t last = std::min(samples, first + block_samples);
      for (std::uint64_t s = first; s < last; ++s) {
        PathStream stream(cfg.seed, s);
        simulate_pair(w, x, cfg.antithetic, stream, a, b);
        fn(a, cfg.antithetic ? &b : nullptr, values.data());
        for (int j = 0; j < m; ++j) {
          acc.sum[j] += values[j];
          acc.sumsq[j] += values[j] * values[j];
        }
      }
      acc.samples = last - first;
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Accumulator total;
  total.sum.assign(m, 0.0);
  total.sumsq.assign(m, 0.0);
  for (const auto& p : parts) {
    for (int j = 0; j < m; ++j) {
      total.sum[j] += p.sum[j];
      total.sumsq[j] += p.sumsq[j];
    }
    total.samples += p.samples;
  }
  return total;
}

MCEstimate finish(const Accumulator& acc, int j, const PathConfig& cfg, double offset = 0.0,
                  double scale = 1.0) {
  const double k = static_cast<double>(acc.samples);
  const double mean = acc.sum[j] / k;
  double var = 0.0;
  if (acc.samples > 1) var = std::max(0.0, (acc.sumsq[j] - k * mean * mean) / (k - 1.0));
  MCEstimate e;
  e.mean = offset + scale * mean;
  e.stderr = std::abs(scale) * std::sqrt(var / k);
  e.n_paths = acc.samples * (cfg.antithetic ? 2 : 1);
  return e;
}

}  // namespace

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* v = std::getenv("BALLHEAT_SEED");
  if (!v || !*v) return fallback;
  std::uint64_t out = 0;
  const char* end = v + std::strlen(v);
  auto [ptr, ec] = std::from_chars(v, end, out);
  if (ec != std::errc() || ptr != end) throw input_error(std::string("BALLHEAT_SEED is not a 64-bit decimal: ") + v);
  return out;
}

PathStream::PathStream(std::uint64_t seed, std::uint64_t block)
    : gauss_engine_(splitmix64(splitmix64(seed) ^ (2 * block))),
      uniform_engine_(splitmix64(splitmix64(seed) ^ (2 * block + 1))) {}

double PathStream::normal() {
  static thread_local boost::random::normal_distribution<double> dist;
  return dist(gauss_engine_);
}

double PathStream::uniform() {
  static thread_local boost::random::uniform_01<double> dist;
  return dist(uniform_engine_);
}

std::optional<ExitSample> simulate_exit(std::span<const double> x, double horizon,
                                        const PathConfig& cfg, PathStream& stream) {
  const Walk w = make_walk(x, horizon, cfg);
  Outcome a, b;
  simulate_pair(w, x, false, stream, a, b);
  if (!a.exited) return std::nullopt;
  ExitSample s;
  s.tau = a.tau;
  s.z.assign(a.z.begin(), a.z.begin() + w.n);
  s.crossed_by_bridge = a.bridge;
  return s;
}

MCEstimate mc_survival(std::span<const double> x, double t, const PathConfig& cfg) {
  require_step(t, cfg);
  const Walk w = make_walk(x, t, cfg);
  auto acc = run_blocks(w, x, cfg, 1, [](const Outcome& a, const Outcome* b, double* v) {
    double s = a.exited ? 0.0 : 1.0;
    if (b) s = 0.5 * (s + (b->exited ? 0.0 : 1.0));
    v[0] = s;
  });
  return finish(acc, 0, cfg);
}

std::vector<MCEstimate> mc_kernel(double t, std::span<const double> x, const std::vector<Vector>& ys,
                                  const PathConfig& cfg) {
  require_step(t, cfg);
  const Walk w = make_walk(x, t, cfg);
  for (const auto& y : ys) {
    require_same_dimension(x, y);
    if (norm(y) > 1.0 + kSphereTolerance) throw input_error("target point outside the closed ball");
  }
  const int m = static_cast<int>(ys.size());
  auto subtract = [&](const Outcome& o, const Vector& y) {
    if (!o.exited || !(o.tau < t)) return 0.0;
    return gauss_kernel(t - o.tau, std::span<const double>(o.z.data(), w.n), y);
  };
  auto acc = run_blocks(w, x, cfg, m, [&](const Outcome& a, const Outcome* b, double* v) {
    for (int j = 0; j < m; ++j) {
      double s = subtract(a, ys[j]);
      if (b) s = 0.5 * (s + subtract(*b, ys[j]));
      v[j] = s;
    }
  });
  std::vector<MCEstimate> out;
  for (int j = 0; j < m; ++j) out.push_back(finish(acc, j, cfg, gauss_kernel(t, x, ys[j]), -1.0));
  return out;
}

MCEstimate mc_kernel(double t, std::span<const double> x, std::span<const double> y,
                     const PathConfig& cfg) {
  return mc_kernel(t, x, std::vector<Vector>{Vector(y.begin(), y.end())}, cfg).front();
}

MCEstimate mc_exit_time(std::span<const double> x, const PathConfig& cfg, double horizon) {
  const Walk w = make_walk(x, horizon, cfg);
  auto acc = run_blocks(w, x, cfg, 1, [&](const Outcome& a, const Outcome* b, double* v) {
    double s = a.exited ? a.tau : horizon;
    if (b) s = 0.5 * (s + (b->exited ? b->tau : horizon));
    v[0] = s;
  });
  return finish(acc, 0, cfg);
}

std::vector<std::uint64_t> mc_exit_histogram(std::span<const double> x, double horizon,
                                             const PathConfig& cfg, int caps,
                                             const std::function<int(std::span<const double>)>& cap) {
  if (caps < 1) throw input_error("need at least one cap");
  const Walk w = make_walk(x, horizon, cfg);
  auto acc = run_blocks(w, x, cfg, caps, [&](const Outcome& a, const Outcome* b, double* v) {
    std::fill(v, v + caps, 0.0);
    for (const Outcome* o : {&a, b}) {
      if (!o || !o->exited) continue;
      const int c = cap(std::span<const double>(o->z.data(), w.n));
      if (c >= 0 && c < caps) v[c] += 1.0;
    }
  });
  std::vector<std::uint64_t> counts(caps);
  for (int j = 0; j < caps; ++j) counts[j] = static_cast<std::uint64_t>(acc.sum[j]);
  return counts;
}

SurvivalLadder mc_survival_ladder(std::span<const double> x, double t, const PathConfig& cfg,
                                  int levels) {
  if (levels < 2) throw input_error("a ladder needs at least two levels");
  require_step(t, cfg);
  const Walk coarse = make_walk(x, t, cfg);
  const int n = coarse.n;
  const int refine = 1 << (levels - 1);
  const int fine_steps = coarse.steps * refine;
  const double hf = t / fine_steps;
  const double sdf = std::sqrt(2.0 * hf);
  const std::uint64_t per_sample = cfg.antithetic ? 2 : 1;
  const std::uint64_t samples = (cfg.n_paths + per_sample - 1) / per_sample;
  const std::uint64_t block_samples = std::max<std::uint64_t>(1, cfg.block_size / per_sample);
  const std::uint64_t blocks = (samples + block_samples - 1) / block_samples;
  const int m = 2 * levels - 1;
  std::vector<Accumulator> parts(blocks);
  std::atomic<std::uint64_t> next{0};

  struct Level {
    Point p;
    Point acc;  // increment accumulated since the last coarse step
    double weight;
    bool alive;
  };

  auto worker = [&]() {
    std::vector<double> values(m), path_value(levels);
    std::vector<Level> lv(levels);
    double xi[kMaxDim];
    for (;;) {
      const std::uint64_t blk = next.fetch_add(1);
      if (blk >= blocks) return;
      Accumulator& a = parts[blk];
      a.sum.assign(m, 0.0);
      a.sumsq.assign(m, 0.0);
      const std::uint64_t first = blk * block_samples;
      const std::uint64_t last = std::min(samples, first + block_samples);
      for (std::uint64_t s = first; s < last; ++s) {
        std::fill(values.begin(), values.end(), 0.0);
        for (std::uint64_t member = 0; member < per_sample; ++member) {
          const double sign = member == 0 ? 1.0 : -1.0;
          PathStream stream(cfg.seed, s);
          for (auto& L : lv) {
            for (int c = 0; c < n; ++c) {
              L.p[c] = x[c];
              L.acc[c] = 0.0;
            }
            L.weight = 1.0;
            L.alive = true;
          }
          for (int i = 0; i < fine_steps; ++i) {
            for (int c = 0; c < n; ++c) xi[c] = sign * sdf * stream.normal();
            bool any = false;
            for (int l = 0; l < levels; ++l) {
              Level& L = lv[l];
              if (!L.alive) continue;
              any = true;
              for (int c = 0; c < n; ++c) L.acc[c] += xi[c];
              const int stride = refine >> l;  // level 0 is the coarsest
              if ((i + 1) % stride != 0) continue;
              Point q;
              for (int c = 0; c < n; ++c) q[c] = L.p[c] + L.acc[c];
              const double r_old = radius(L.p, n);
              const double r_new = radius(q, n);
              if (r_new >= 1.0) {
                L.alive = false;
                continue;
              }
              if (cfg.bridge_correction) {
                const double e = (1.0 - r_old) * (1.0 - r_new) / (stride * hf);
                if (e < kBridgeCutoff) L.weight *= -std::expm1(-e);
              }
              L.p = q;
              for (int c = 0; c < n; ++c) L.acc[c] = 0.0;
            }
            if (!any) break;
          }
          for (int l = 0; l < levels; ++l) path_value[l] = lv[l].alive ? lv[l].weight : 0.0;
          const double share = 1.0 / per_sample;
          for (int l = 0; l < levels; ++l) values[l] += share * path_value[l];
          for (int l = 0; l + 1 < levels; ++l)
            values[levels + l] += share * (path_value[l] - path_value[l + 1]);
        }
        for (int j = 0; j < m; ++j) {
          a.sum[j] += values[j];
          a.sumsq[j] += values[j] * values[j];
        }
      }
      a.samples = last - first;
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  Accumulator total;
  total.sum.assign(m, 0.0);
  total.sumsq.assign(m, 0.0);
  for (const auto& p : parts) {
    for (int j = 0; j < m; ++j) {
      total.sum[j] += p.sum[j];
      total.sumsq[j] += p.sumsq[j];
    }
    total.samples += p.samples;
  }
  SurvivalLadder out;
  for (int l = 0; l < levels; ++l) {
    out.dts.push_back(t / (coarse.steps * (1 << l)));
    out.levels.push_back(finish(total, l, cfg));
  }
  for (int l = 0; l + 1 < levels; ++l) out.differences.push_back(finish(total, levels + l, cfg));
  return out;
}

}  // namespace ballheat
