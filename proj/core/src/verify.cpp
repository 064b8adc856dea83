#include "ballheat/verify.hpp"

#include <boost/math/constants/constants.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "ballheat/ball_spectral.hpp"
#include "ballheat/envelopes.hpp"
#include "ballheat/errors.hpp"
#include "ballheat/exact_kernels.hpp"
#include "ballheat/quadrature.hpp"

namespace ballheat {

namespace {

constexpr double kDeepTail = 1e-300;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = boost::math::constants::pi<double>();

Vector point_at(int n, double r, double theta) {
  Vector v(n, 0.0);
  if (n == 1) {
    v[0] = r;
    return v;
  }
  v[0] = r * std::cos(theta);
  v[1] = r * std::sin(theta);
  return v;
}

double envelope_value(const Envelope& e, double t, std::span<const double> x, std::span<const double> y) {
  switch (e.kind) {
    case EnvelopeKind::sharp:
      return sharp_shape(t, x, y);
    case EnvelopeKind::global:
      return global_shape(t, x, y);
    case EnvelopeKind::interval:
      if (x.size() != 1) throw input_error("the interval envelope needs n = 1");
      return interval_shape(t, x[0], y[0]);
    case EnvelopeKind::davies_zhang:
      return davies_zhang_shape(t, x, y, e.c_exp);
    case EnvelopeKind::exit:
      return q_shape(t, x, y);
  }
  return 0.0;
}

double default_tol(const SweepConfig& cfg) {
  if (cfg.tol > 0) return cfg.tol;
  return cfg.precision == Precision::binary128 ? 1e-32 : 1e-15;
}

// A series value usable as a ratio numerator, or nothing.
template <class Real>
bool accept(const Real& value, double error_bound, double rel) {
  using std::abs;
  return value > 0 && error_bound <= rel * static_cast<double>(abs(value));
}

void fill_ratio(RatioRecord& r) {
  if (r.source == KernelSource::skipped) {
    r.ratio = kNaN;
    return;
  }
  if (r.shape > 0) {
    r.ratio = r.kernel / r.shape;
  } else {
    r.flagged = true;
    r.ratio = kNaN;
  }
}

// Pending MC work: node indices sharing one start point.
struct McGroup {
  Vector x;
  std::vector<Vector> ys;
  std::vector<std::size_t> nodes;
};

void run_mc(double t, std::vector<McGroup>& groups, std::vector<RatioRecord>& recs, const SweepConfig& cfg) {
  for (auto& g : groups) {
    const auto est = mc_kernel(t, g.x, g.ys, cfg.mc);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      RatioRecord& r = recs[g.nodes[i]];
      r.kernel = std::max(0.0, est[i].mean);
      r.source = KernelSource::mc;
      fill_ratio(r);
    }
  }
}

bool has_source(const SweepConfig& cfg, KernelSource s) {
  return std::find(cfg.sources.begin(), cfg.sources.end(), s) != cfg.sources.end();
}

bool mc_allowed_at(double t, const SweepConfig& cfg) {
  return has_source(cfg, KernelSource::mc) && cfg.mc.dt <= t / 10.0 * (1.0 + 1e-12);
}

template <class Real>
std::vector<RatioRecord> sweep_ball_at(const SweepGrid& grid, const Envelope& env, const SweepConfig& cfg,
                                       double t, const BallSpectral<Real>& model) {
  const int n = grid.n;
  std::vector<RatioRecord> out;
  std::unique_ptr<typename BallSpectral<Real>::Slice> slice;
  if (has_source(cfg, KernelSource::spectral)) {
    try {
      slice = std::make_unique<typename BallSpectral<Real>::Slice>(model, t, default_tol(cfg),
                                                                    SpectralQuantity::kernel);
    } catch (const small_time_refusal&) {
    }
  }
  std::vector<McGroup> groups;
  for (std::size_t i = 0; i < grid.radii.size(); ++i) {
    McGroup g;
    g.x = point_at(n, grid.radii[i], 0.0);
    for (std::size_t j = i; j < grid.radii.size(); ++j) {
      for (double theta : grid.angles) {
        RatioRecord r;
        r.n = n;
        r.t = t;
        r.abs_x = grid.radii[i];
        r.abs_y = grid.radii[j];
        r.angle = theta;
        const Vector y = point_at(n, grid.radii[j], theta);
        r.shape = envelope_value(env, t, g.x, y);
        r.source = KernelSource::skipped;
        if (slice) {
          const auto v = slice->kernel(r.abs_x, r.abs_y, theta);
          if (accept(v.value, v.error_bound(), cfg.rel_accept)) {
            r.source = KernelSource::spectral;
            r.kernel = static_cast<double>(v.value);
            if (r.kernel < kDeepTail && r.shape < kDeepTail) r.source = KernelSource::skipped;
          }
        }
        if (r.source == KernelSource::skipped && mc_allowed_at(t, cfg) && r.shape >= kDeepTail) {
          g.ys.push_back(y);
          g.nodes.push_back(out.size());
        }
        if (r.source == KernelSource::skipped) r.kernel = kNaN;
        fill_ratio(r);
        out.push_back(r);
      }
    }
    if (!g.nodes.empty()) groups.push_back(std::move(g));
  }
  run_mc(t, groups, out, cfg);
  return out;
}

template <class Real>
std::vector<RatioRecord> sweep_interval_at(const SweepGrid& grid, const Envelope& env, const SweepConfig& cfg,
                                           double t) {
  std::vector<RatioRecord> out;
  const Real tol = Real(default_tol(cfg));
  std::vector<McGroup> groups;
  for (double xv : grid.radii) {
    McGroup g;
    g.x = {xv};
    for (double yv : grid.radii) {
      RatioRecord r;
      r.n = 1;
      r.t = t;
      r.abs_x = std::abs(xv);
      r.abs_y = std::abs(yv);
      r.angle = (xv * yv < 0) ? kPi : 0.0;
      const Vector x{xv}, y{yv};
      r.shape = envelope_value(env, t, x, y);
      r.source = KernelSource::skipped;
      for (KernelSource s : cfg.sources) {
        if (s == KernelSource::mc) continue;
        const auto v = s == KernelSource::spectral
                           ? interval_kernel_spectral<Real>(Real(t), Real(xv), Real(yv), tol)
                           : interval_kernel<Real>(Real(t), Real(xv), Real(yv), tol);
        if (accept(v.value, v.tail_bound + v.rounding_bound, cfg.rel_accept)) {
          r.source = s;
          r.kernel = static_cast<double>(v.value);
          if (r.kernel < kDeepTail && r.shape < kDeepTail) r.source = KernelSource::skipped;
          break;
        }
      }
      if (r.source == KernelSource::skipped && mc_allowed_at(t, cfg) && r.shape >= kDeepTail) {
        g.ys.push_back(y);
        g.nodes.push_back(out.size());
      }
      if (r.source == KernelSource::skipped) r.kernel = kNaN;
      fill_ratio(r);
      out.push_back(r);
    }
    if (!g.nodes.empty()) groups.push_back(std::move(g));
  }
  run_mc(t, groups, out, cfg);
  return out;
}

template <class Real>
std::vector<RatioRecord> exit_sweep_at(const SweepGrid& grid, const SweepConfig& cfg, double t,
                                       const BallSpectral<Real>& model) {
  const int n = grid.n;
  std::vector<RatioRecord> out;
  std::unique_ptr<typename BallSpectral<Real>::Slice> slice;
  try {
    slice = std::make_unique<typename BallSpectral<Real>::Slice>(model, t, default_tol(cfg),
                                                                  SpectralQuantity::exit_density);
  } catch (const small_time_refusal&) {
  }
  for (double rx : grid.radii) {
    if (!(rx < 1.0)) continue;
    const Vector x = point_at(n, rx, 0.0);
    for (double theta : grid.angles) {
      RatioRecord r;
      r.n = n;
      r.t = t;
      r.abs_x = rx;
      r.abs_y = 1.0;
      r.angle = theta;
      const Vector z = point_at(n, 1.0, theta);
      r.shape = q_shape(t, x, z);
      r.source = KernelSource::skipped;
      r.kernel = kNaN;
      if (slice) {
        const auto v = slice->exit_density(rx, theta);
        if (accept(v.value, v.error_bound(), cfg.rel_accept)) {
          r.source = KernelSource::spectral;
          r.kernel = static_cast<double>(v.value);
          if (r.kernel < kDeepTail && r.shape < kDeepTail) {
            r.source = KernelSource::skipped;
            r.kernel = kNaN;
          }
        }
      }
      fill_ratio(r);
      out.push_back(r);
    }
  }
  return out;
}

// Evaluates `per_t(t)` for every t, in parallel, concatenating in grid order.
template <class F>
std::vector<RatioRecord> over_times(const std::vector<double>& ts, unsigned threads, F per_t) {
  std::vector<std::vector<RatioRecord>> parts(ts.size());
  std::vector<std::exception_ptr> errors(ts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= ts.size()) return;
      try {
        parts[i] = per_t(ts[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, ts.size()));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<RatioRecord> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void check_grid(const SweepGrid& g) {
  if (g.n < 1) throw input_error("dimension must be >= 1");
  if (g.ts.empty() || g.radii.empty()) throw input_error("sweep grids must be nonempty");
  if (g.n >= 2 && g.angles.empty()) throw input_error("sweep grids must be nonempty");
  for (double t : g.ts)
    if (!(t > 0)) throw input_error("sweep times must be positive");
}

std::string describe(const SweepGrid& g, const std::string& what) {
  std::ostringstream s;
  s << what << " n=" << g.n << " t=[" << g.ts.front() << "," << g.ts.back() << "]x" << g.ts.size()
    << " radii=" << g.radii.size();
  if (g.n >= 2) s << " angles=" << g.angles.size();
  return s.str();
}

SweepResult finish_sweep(std::vector<RatioRecord> recs, const std::string& grid) {
  SweepResult r;
  r.report = summarize(recs, grid);
  r.records = std::move(recs);
  return r;
}

}  // namespace

std::string to_string(KernelSource s) {
  switch (s) {
    case KernelSource::spectral: return "spectral";
    case KernelSource::interval: return "interval";
    case KernelSource::mc: return "mc";
    case KernelSource::skipped: return "skipped";
  }
  return "?";
}

std::string to_string(const Envelope& e) {
  switch (e.kind) {
    case EnvelopeKind::sharp: return "sharp";
    case EnvelopeKind::global: return "global";
    case EnvelopeKind::interval: return "interval";
    case EnvelopeKind::exit: return "exit";
    case EnvelopeKind::davies_zhang: {
      std::ostringstream s;
      s << "davies_zhang(" << e.c_exp << ")";
      return s.str();
    }
  }
  return "?";
}

const DecadeReport& SweepReport::decade(double t_lo, double t_hi) const {
  for (const auto& d : decades)
    if (std::abs(d.t_lo - t_lo) <= 1e-12 * t_lo && std::abs(d.t_hi - t_hi) <= 1e-12 * t_hi) return d;
  throw input_error("no sub-report for the requested decade");
}

std::vector<double> log_grid(double t_lo, double t_hi, int per_decade) {
  if (!(t_lo > 0) || !(t_hi >= t_lo) || per_decade < 1) throw input_error("bad log grid");
  std::vector<double> out;
  const double span = std::log10(t_hi / t_lo);
  const int steps = static_cast<int>(std::lround(span * per_decade));
  for (int k = 0; k <= steps; ++k) out.push_back(t_lo * std::pow(10.0, static_cast<double>(k) / per_decade));
  if (steps > 0) out.back() = t_hi;
  return out;
}

SweepGrid standard_grid(int n, double t_lo, double t_hi) {
  if (n < 1) throw input_error("dimension must be >= 1");
  SweepGrid g;
  g.n = n;
  g.ts = log_grid(t_lo, t_hi, 8);
  if (n == 1) {
    const auto eps = log_grid(1e-3, 0.9, 19);  // 57 values; keep 20 of them
    std::vector<double> e;
    for (int k = 0; k < 20; ++k) e.push_back(eps[(eps.size() - 1) * k / 19]);
    for (auto it = e.rbegin(); it != e.rend(); ++it) g.radii.push_back(-(1.0 - *it));
    g.radii.push_back(0.0);
    for (double v : e) g.radii.push_back(1.0 - v);
    std::sort(g.radii.begin(), g.radii.end());
    return g;
  }
  g.radii = {0.0, 0.3, 0.6};
  for (double e : log_grid(1e-3, 0.1, 3)) g.radii.push_back(1.0 - e);
  std::sort(g.radii.begin(), g.radii.end());
  g.angles = {0.0, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, kPi - 1e-3, kPi};
  return g;
}

SweepReport summarize(const std::vector<RatioRecord>& records, const std::string& grid) {
  SweepReport rep;
  rep.grid = grid;
  rep.records = records.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::size_t evaluated = 0;
  std::size_t mc = 0;
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = 0.0;
  for (const auto& r : records) {
    tmin = std::min(tmin, r.t);
    tmax = std::max(tmax, r.t);
    if (r.source == KernelSource::skipped) {
      ++rep.skipped;
      continue;
    }
    ++evaluated;
    if (r.source == KernelSource::mc) ++mc;
    if (r.flagged) {
      ++rep.flagged;
      continue;
    }
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  auto constant = [](double mn, double mx) {
    if (!(mx > 0) || !(mn > 0)) return std::numeric_limits<double>::infinity();
    return std::max({mx, 1.0 / mn, 1.0});
  };
  rep.min_ratio = lo;
  rep.max_ratio = hi;
  rep.empirical_C = constant(lo, hi);
  rep.mc_fraction = evaluated ? static_cast<double>(mc) / evaluated : 0.0;
  if (records.empty()) return rep;
  const int k0 = static_cast<int>(std::floor(std::log10(tmin) + 1e-9));
  const int k1 = static_cast<int>(std::ceil(std::log10(tmax) - 1e-9));
  for (int k = k0; k < std::max(k1, k0 + 1); ++k) {
    DecadeReport d;
    d.t_lo = std::pow(10.0, k);
    d.t_hi = std::pow(10.0, k + 1);
    double dl = std::numeric_limits<double>::infinity();
    double dh = 0.0;
    for (const auto& r : records) {
      if (r.t < d.t_lo * (1 - 1e-9) || r.t > d.t_hi * (1 + 1e-9)) continue;
      if (r.source == KernelSource::skipped || r.flagged) continue;
      ++d.count;
      dl = std::min(dl, r.ratio);
      dh = std::max(dh, r.ratio);
    }
    d.min_ratio = dl;
    d.max_ratio = dh;
    d.empirical_C = constant(dl, dh);
    rep.decades.push_back(d);
  }
  return rep;
}

SweepResult ratio_sweep(const SweepGrid& grid, const Envelope& envelope, const SweepConfig& cfg) {
  check_grid(grid);
  if (cfg.sources.empty()) throw input_error("no kernel source selected");
  if (envelope.kind == EnvelopeKind::exit) throw input_error("use exit_density_sweep for the exit envelope");
  const std::string what = "kernel/" + to_string(envelope);
  const bool wide = cfg.precision == Precision::binary128;
  if (grid.n == 1) {
    auto recs = over_times(grid.ts, cfg.threads, [&](double t) {
      return wide ? sweep_interval_at<quad>(grid, envelope, cfg, t)
                  : sweep_interval_at<double>(grid, envelope, cfg, t);
    });
    return finish_sweep(std::move(recs), describe(grid, what));
  }
  std::vector<RatioRecord> recs;
  if (wide) {
    BallSpectral<quad> model(grid.n);
    recs = over_times(grid.ts, cfg.threads,
                      [&](double t) { return sweep_ball_at<quad>(grid, envelope, cfg, t, model); });
  } else {
    const auto& model = ball_spectral(grid.n);
    recs = over_times(grid.ts, cfg.threads,
                      [&](double t) { return sweep_ball_at<double>(grid, envelope, cfg, t, model); });
  }
  return finish_sweep(std::move(recs), describe(grid, what));
}

SweepResult exit_density_sweep(const SweepGrid& grid, const SweepConfig& cfg) {
  check_grid(grid);
  if (grid.n < 2) throw input_error("exit density sweeps need n >= 2");
  std::vector<RatioRecord> recs;
  if (cfg.precision == Precision::binary128) {
    BallSpectral<quad> model(grid.n);
    recs = over_times(grid.ts, cfg.threads, [&](double t) { return exit_sweep_at<quad>(grid, cfg, t, model); });
  } else {
    const auto& model = ball_spectral(grid.n);
    recs = over_times(grid.ts, cfg.threads, [&](double t) { return exit_sweep_at<double>(grid, cfg, t, model); });
  }
  return finish_sweep(std::move(recs), describe(grid, "exit/q_shape"));
}

CheckResult make_check(std::string name, double relative_error, double tolerance) {
  return {std::move(name), relative_error, tolerance, relative_error <= tolerance};
}

// ------------------------------------------------------------------ checks

namespace {

void require_check_dims(int n, const Vector& x, const Vector& y) {
  if (n < 1 || n > 3) throw input_error("checks support n = 1, 2, 3");
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw input_error("point has the wrong dimension");
  if (!(norm(x) < 1.0) || !(norm(y) < 1.0)) throw input_error("points must lie inside the ball");
}

// Integrates f over the unit ball in polar coordinates about the origin.
template <class F>
double ball_integral(int n, const SemigroupQuadrature& q, F&& f) {
  const GaussLegendre& gl = gauss_legendre(q.radial);
  if (n == 1) {
    double s = 0.0;
    const double w = 2.0 / q.panels;
    for (int p = 0; p < q.panels; ++p) {
      const double a = -1.0 + p * w;
      s += gl.integrate([&](double z) { return f(Vector{z}); }, a, a + w);
    }
    return s;
  }
  const SphereRule sphere = sphere_rule(n, q.polar, q.azimuthal);
  double s = 0.0;
  const double w = 1.0 / q.panels;
  for (int p = 0; p < q.panels; ++p) {
    s += gl.integrate(
        [&](double rho) {
          double inner = 0.0;
          Vector z(n);
          for (std::size_t k = 0; k < sphere.points.size(); ++k) {
            for (int c = 0; c < n; ++c) z[c] = rho * sphere.points[k][c];
            inner += sphere.weights[k] * f(z);
          }
          return inner * std::pow(rho, n - 1);
        },
        p * w, (p + 1) * w);
  }
  return s;
}

constexpr double kCheckTol = 1e-15;

}  // namespace

CheckResult semigroup_check(int n, double t, const Vector& x, const Vector& y, const SemigroupQuadrature& q) {
  require_check_dims(n, x, y);
  if (!(t > 0)) throw input_error("time must be positive");
  double lhs = 0.0;
  double rhs = 0.0;
  if (n == 1) {
    lhs = ball_integral(1, q, [&](const Vector& z) {
      return interval_kernel<double>(t, x[0], z[0], kCheckTol).value *
             interval_kernel<double>(t, z[0], y[0], kCheckTol).value;
    });
    rhs = interval_kernel<double>(2 * t, x[0], y[0], kCheckTol).value;
  } else {
    const auto& model = ball_spectral(n);
    BallSpectral<double>::Slice s1(model, t, kCheckTol, SpectralQuantity::kernel);
    BallSpectral<double>::Slice s2(model, 2 * t, kCheckTol, SpectralQuantity::kernel);
    const double rx = norm(x);
    const double ry = norm(y);
    lhs = ball_integral(n, q, [&](const Vector& z) {
      const double rz = norm(z);
      const double a = s1.kernel(rx, rz, angle(x, z)).value;
      const double b = s1.kernel(rz, ry, angle(z, y)).value;
      return a * b;
    });
    rhs = s2.kernel(rx, ry, angle(x, y)).value;
  }
  std::ostringstream name;
  name << "semigroup n=" << n << " t=" << t;
  const double err = std::abs(lhs - rhs) / std::abs(rhs);
  const double tol = n == 1 ? 1e-8 : 1e-6;
  return make_check(name.str(), err, tol);
}

double hunt_subtraction(int n, double t, const Vector& x, const Vector& y, const HuntQuadrature& q, bool reduced) {
  if (n < 2 || n > 3) throw input_error("the Hunt check supports n = 2, 3");
  require_check_dims(n, x, y);
  if (!(t > 0)) throw input_error("time must be positive");
  const double rx = norm(x);
  const double ry = norm(y);
  if (reduced && rx != 0.0) throw input_error("the reduced Hunt quadrature needs x = 0");
  const double area = sphere_area(n);
  // Head: q_x(s,z) <= (1 + |x|)/s (4 pi s)^{-n/2} exp(-(1-|x|)^2 / 4s) by
  // comparison with the tangent half-space at z; k(t - s, z, y) <= (4 pi (t-s))^{-n/2}.
  const double target = 1e-12 * gauss_kernel(t, x, y);
  auto head = [&](double s) {
    const double qb = (1 + rx) / s * std::pow(4 * kPi * s, -n / 2.0) * std::exp(-(1 - rx) * (1 - rx) / (4 * s));
    return s * area * qb * std::pow(4 * kPi * (t - s), -n / 2.0);
  };
  double s_min = t / 2;
  while (s_min > 1e-12 * t && head(s_min) > target) s_min /= 1.25;
  (void)ry;

  const auto& model = ball_spectral(n);
  // Shallow |x| can push s_min below what the series accepts; start at the
  // first admissible time instead as long as the dropped head stays negligible.
  for (;;) {
    try {
      BallSpectral<double>::Slice probe(model, s_min, 1e-13, SpectralQuantity::exit_density);
      break;
    } catch (const small_time_refusal&) {
      s_min *= 1.1;
      if (s_min >= t / 2 || head(s_min) > 1e-6 * gauss_kernel(t, x, y)) throw;
    }
  }
  const SphereRule sphere = sphere_rule(n, q.polar, q.azimuthal);
  const GaussLegendre& gl = gauss_legendre(q.time_nodes);
  const double span = t - s_min;
  double total = 0.0;
  const double w = 1.0 / q.time_panels;
  for (int p = 0; p < q.time_panels; ++p) {
    total += gl.integrate(
        [&](double u) {
          const double s = s_min + span * u * u;
          const double jac = 2.0 * span * u;
          if (!(t - s > 0)) return 0.0;
          BallSpectral<double>::Slice slice(model, s, 1e-13, SpectralQuantity::exit_density);
          double inner = 0.0;
          if (reduced) {
            const double qv = slice.exit_density(0.0, 0.0).value;
            for (std::size_t k = 0; k < sphere.points.size(); ++k)
              inner += sphere.weights[k] * gauss_kernel(t - s, sphere.points[k], y);
            inner *= qv;
          } else {
            for (std::size_t k = 0; k < sphere.points.size(); ++k) {
              const auto& z = sphere.points[k];
              inner += sphere.weights[k] * slice.exit_density(rx, angle(x, z)).value * gauss_kernel(t - s, z, y);
            }
          }
          return inner * jac;
        },
        p * w, (p + 1) * w);
  }
  return total;
}

CheckResult hunt_check(int n, double t, const Vector& x, const Vector& y, const HuntQuadrature& q) {
  const double rhs = hunt_subtraction(n, t, x, y, q, false);
  const double lhs = gauss_kernel(t, x, y) - ball_spectral(n).kernel(t, x, y, kCheckTol).value;
  std::ostringstream name;
  name << "hunt n=" << n << " t=" << t;
  return make_check(name.str(), std::abs(lhs - rhs) / std::abs(lhs), 1e-4);
}

MidpointReport midpoint_check(int n, const std::vector<double>& ts,
                              const std::vector<std::pair<Vector, Vector>>& pairs, double c, double l) {
  if (ts.empty() || pairs.empty()) throw input_error("midpoint grids must be nonempty");
  if (!(c > 0) || !(l >= 0)) throw input_error("need c > 0 and l >= 0");
  MidpointReport rep;
  rep.floor = std::numeric_limits<double>::infinity();
  rep.centred_advantage = std::numeric_limits<double>::infinity();
  bool in_range = true;
  for (double t : ts) {
    double f = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs) {
      if (static_cast<int>(x.size()) != n) throw input_error("point has the wrong dimension");
      require_same_dimension(x, y);
      const double k2 = gauss_kernel(2 * t, x, y);
      Vector mid(n);
      for (int i = 0; i < n; ++i) mid[i] = 0.5 * (x[i] + y[i]);
      Vector shifted = mid;
      shifted[0] += l * std::sqrt(t);
      const double centred = midpoint_mass(t, x, y, mid, c) / k2;
      const double displaced = midpoint_mass(t, x, y, shifted, c) / k2;
      for (double r : {centred, displaced}) {
        if (!(r > 0) || r > 1.0 + 1e-12) in_range = false;
        f = std::min(f, r);
        rep.max_ratio = std::max(rep.max_ratio, r);
      }
      rep.centred_advantage = std::min(rep.centred_advantage, centred - displaced);
    }
    rep.floor_by_t.push_back(f);
    rep.floor = std::min(rep.floor, f);
  }
  const double top = *std::max_element(rep.floor_by_t.begin(), rep.floor_by_t.end());
  rep.pass = in_range && rep.floor > 0 && top <= 2.0 * rep.floor;
  return rep;
}

LongtimeReport longtime_check(int n, const std::vector<double>& ts, const Vector& x, const Vector& y) {
  if (ts.empty()) throw input_error("time grid must be nonempty");
  require_check_dims(n, x, y);
  LongtimeReport rep;
  const double lam = lambda1(n);
  const double d = (1 - norm(x)) * (1 - norm(y));
  for (double t : ts) {
    const double k = ball_kernel(t, x, y, 1e-300 + 1e-16 * std::exp(-lam * t)).value;
    rep.ratios.push_back(k * std::exp(lam * t) / d);
  }
  const auto [lo, hi] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
  rep.spread = *lo > 0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  rep.pass = *lo > 0 && rep.spread <= 1.05;
  return rep;
}

CheckResult exit_mass_check(int n, const Vector& x, double t_split, double tol) {
  if (n < 2 || n > 3) throw input_error("the exit mass check supports n = 2, 3");
  if (static_cast<int>(x.size()) != n || !(norm(x) < 1.0)) throw input_error("bad start point");
  if (!(t_split > 0)) throw input_error("split time must be positive");
  const double rx = norm(x);
  const double area = sphere_area(n);
  auto head = [&](double s) {
    return area * (1 + rx) * std::pow(4 * kPi * s, -n / 2.0) * std::exp(-(1 - rx) * (1 - rx) / (4 * s));
  };
  double s_min = t_split / 2;
  while (head(s_min) > 1e-10) s_min /= 1.25;

  const auto& model = ball_spectral(n);
  const SphereRule sphere = sphere_rule(n, 24, 64);
  const GaussLegendre& gl = gauss_legendre(48);
  const double span = t_split - s_min;
  double total = 0.0;
  const int panels = 4;
  for (int p = 0; p < panels; ++p) {
    total += gl.integrate(
        [&](double u) {
          const double s = s_min + span * u * u;
          BallSpectral<double>::Slice slice(model, s, 1e-13, SpectralQuantity::exit_density);
          double inner = 0.0;
          for (std::size_t k = 0; k < sphere.points.size(); ++k)
            inner += sphere.weights[k] * slice.exit_density(rx, angle(x, sphere.points[k])).value;
          return inner * 2.0 * span * u;
        },
        static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels);
  }
  BallSpectral<double>::Slice tail(model, t_split, 1e-14, SpectralQuantity::exit_density);
  total += tail.exit_time_remainder(rx).value;
  std::ostringstream name;
  name << "exit mass n=" << n << " |x|=" << rx;
  return make_check(name.str(), std::abs(total - 1.0), tol);
}

}  // namespace ballheat
