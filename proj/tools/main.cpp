// ballheat command-line front end.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ballheat/ball_spectral.hpp"
#include "ballheat/envelopes.hpp"
#include "ballheat/errors.hpp"
#include "ballheat/exact_kernels.hpp"
#include "ballheat/mc_oracle.hpp"
#include "ballheat/report.hpp"
#include "ballheat/verify.hpp"

#ifndef BALLHEAT_VERSION
#define BALLHEAT_VERSION "dev"
#endif

using namespace ballheat;

namespace {

constexpr double kDefaultTol = 1e-10;
constexpr double kDefaultDt = 1e-3;
constexpr std::uint64_t kDefaultPaths = 100000;

struct Args {
  std::string domain = "ball";
  std::string shape = "sharp";
  std::string name;
  std::string quantity = "survival";
  std::string envelope = "sharp";
  std::string precision = "binary128";
  std::string out;
  std::string sources = "spectral";
  std::string x, y, z;
  std::string normal;
  int n = 0;
  double t = 0.0;
  double t_min = 0.01;
  double t_max = 1.0;
  double offset = 0.0;
  std::optional<double> tol;
  std::optional<double> dt;
  std::optional<std::uint64_t> paths;
  std::optional<std::uint64_t> seed;
  double c_exp = 4.0;
  double c = 1.0;
  double l = 1.0;
  bool no_bridge = false;
  unsigned threads = 0;
};

// Reported on stderr as "key=value", with "(default)" where nothing was given.
std::vector<std::string> provenance;

template <class T>
std::string show(const T& v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void note(const std::string& key, const std::string& value, bool defaulted = false) {
  provenance.push_back(key + "=" + value + (defaulted ? "(default)" : ""));
}

double resolved_tol(const Args& a) {
  note("tol", show(a.tol.value_or(kDefaultTol)), !a.tol);
  return a.tol.value_or(kDefaultTol);
}

Vector parse_point(const std::string& text, const std::string& flag, int n) {
  if (text.empty()) throw input_error(flag + " is required");
  Vector v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw input_error(flag + ": malformed number '" + cell + "'");
    }
    if (used != cell.size() || !std::isfinite(d)) throw input_error(flag + ": malformed number '" + cell + "'");
    v.push_back(d);
  }
  if (static_cast<int>(v.size()) != n)
    throw input_error(flag + " has " + std::to_string(v.size()) + " coordinates but --n is " + std::to_string(n));
  return v;
}

void print(double v) { std::printf("%.17g\n", v); }

PathConfig path_config(const Args& a) {
  PathConfig cfg;
  cfg.dt = a.dt.value_or(kDefaultDt);
  cfg.n_paths = a.paths.value_or(kDefaultPaths);
  if (a.seed) {
    cfg.seed = *a.seed;
    note("seed", show(cfg.seed));
  } else {
    const char* env = std::getenv("BALLHEAT_SEED");
    cfg.seed = seed_from_env(0);
    note("seed", show(cfg.seed) + (env && *env ? "(BALLHEAT_SEED)" : ""), !(env && *env));
  }
  cfg.bridge_correction = !a.no_bridge;
  cfg.threads = a.threads;
  note("dt", show(cfg.dt), !a.dt);
  note("paths", show(cfg.n_paths), !a.paths);
  note("bridge", cfg.bridge_correction ? "on" : "off");
  return cfg;
}

int eval_kernel(const Args& a) {
  const Vector x = parse_point(a.x, "--x", a.n);
  const Vector y = parse_point(a.y, "--y", a.n);
  note("domain", a.domain);
  if (a.domain == "free") {
    print(gauss_kernel(a.t, x, y));
  } else if (a.domain == "halfspace") {
    const Vector nrm = parse_point(a.normal, "--normal", a.n);
    note("offset", show(a.offset));
    print(halfspace_kernel(a.t, x, y, HalfSpace(nrm, a.offset)));
  } else if (a.domain == "interval") {
    if (a.n != 1) throw input_error("--domain interval needs --n 1");
    print(interval_kernel<double>(a.t, x[0], y[0], resolved_tol(a)).value);
  } else if (a.domain == "ball") {
    const double tol = resolved_tol(a);
    note("precision", a.precision);
    if (a.precision == "binary128" && a.n >= 2) {
      BallSpectral<quad> model(a.n);
      print(static_cast<double>(model.kernel(a.t, x, y, tol).value));
    } else {
      print(ball_kernel(a.t, x, y, tol).value);
    }
  } else {
    throw input_error("--domain must be ball, interval, halfspace or free");
  }
  return 0;
}

int eval_envelope(const Args& a) {
  const Vector x = parse_point(a.x, "--x", a.n);
  note("shape", a.shape);
  if (a.shape == "q") {
    print(q_shape(a.t, x, parse_point(a.z.empty() ? a.y : a.z, "--z", a.n)));
    return 0;
  }
  const Vector y = parse_point(a.y, "--y", a.n);
  if (a.shape == "h") {
    print(h_factor(a.t, x, y));
  } else if (a.shape == "sharp") {
    print(sharp_shape(a.t, x, y));
  } else if (a.shape == "global") {
    print(global_shape(a.t, x, y));
  } else if (a.shape == "interval") {
    if (a.n != 1) throw input_error("--shape interval needs --n 1");
    print(interval_shape(a.t, x[0], y[0]));
  } else if (a.shape == "davies-zhang") {
    note("c_exp", show(a.c_exp));
    print(davies_zhang_shape(a.t, x, y, a.c_exp));
  } else {
    throw input_error("--shape must be h, sharp, global, q, interval or davies-zhang");
  }
  return 0;
}

int eval_exit_density(const Args& a) {
  const Vector x = parse_point(a.x, "--x", a.n);
  const Vector z = parse_point(a.z, "--z", a.n);
  print(exit_density(a.t, x, z, resolved_tol(a)).value);
  return 0;
}

int sweep(const Args& a) {
  SweepGrid grid = standard_grid(a.n, a.t_min, a.t_max);
  SweepConfig cfg;
  cfg.threads = a.threads;
  cfg.precision = a.precision == "binary64" ? Precision::binary64 : Precision::binary128;
  if (a.precision != "binary64" && a.precision != "binary128") throw input_error("--precision must be binary64 or binary128");
  if (a.tol) cfg.tol = *a.tol;
  note("precision", a.precision);
  note("tol", a.tol ? show(*a.tol) : "auto", !a.tol);
  cfg.sources.clear();
  std::stringstream ss(a.sources);
  std::string s;
  while (std::getline(ss, s, ',')) {
    if (s == "spectral") cfg.sources.push_back(KernelSource::spectral);
    else if (s == "interval") cfg.sources.push_back(KernelSource::interval);
    else if (s == "mc") cfg.sources.push_back(KernelSource::mc);
    else throw input_error("--sources: unknown source '" + s + "'");
  }
  note("sources", a.sources);
  if (std::find(cfg.sources.begin(), cfg.sources.end(), KernelSource::mc) != cfg.sources.end()) cfg.mc = path_config(a);
  note("envelope", a.envelope);
  SweepResult res;
  if (a.envelope == "exit") {
    res = exit_density_sweep(grid, cfg);
  } else {
    Envelope e;
    if (a.envelope == "sharp") e.kind = EnvelopeKind::sharp;
    else if (a.envelope == "global") e.kind = EnvelopeKind::global;
    else if (a.envelope == "interval") e.kind = EnvelopeKind::interval;
    else if (a.envelope == "davies-zhang") {
      e.kind = EnvelopeKind::davies_zhang;
      e.c_exp = a.c_exp;
      note("c_exp", show(a.c_exp));
    } else throw input_error("--envelope must be sharp, global, interval, davies-zhang or exit");
    res = ratio_sweep(grid, e, cfg);
  }
  if (a.out.empty()) {
    write_records(std::cout, res.records, &res.report);
  } else {
    emit_report(a.out, res.records, &res.report);
    std::cout << summary_line(res.report) << '\n';
  }
  return 0;
}

int check(const Args& a) {
  note("check", a.name);
  if (a.name == "midpoint") {
    const Vector x = parse_point(a.x, "--x", a.n);
    const Vector y = parse_point(a.y, "--y", a.n);
    note("c", show(a.c));
    note("l", show(a.l));
    const auto rep = midpoint_check(a.n, log_grid(a.t_min, a.t_max, 4), {{x, y}}, a.c, a.l);
    std::printf("floor %.17g\nmax_ratio %.17g\n", rep.floor, rep.max_ratio);
    return rep.pass ? 0 : 1;
  }
  if (a.name == "longtime") {
    const Vector x = parse_point(a.x, "--x", a.n);
    const Vector y = parse_point(a.y, "--y", a.n);
    const auto rep = longtime_check(a.n, log_grid(1.0, 5.0, 8), x, y);
    std::printf("spread %.17g\n", rep.spread);
    return rep.pass ? 0 : 1;
  }
  CheckResult r;
  if (a.name == "semigroup") {
    r = semigroup_check(a.n, a.t, parse_point(a.x, "--x", a.n), parse_point(a.y, "--y", a.n));
  } else if (a.name == "hunt") {
    r = hunt_check(a.n, a.t, parse_point(a.x, "--x", a.n), parse_point(a.y, "--y", a.n));
  } else if (a.name == "exit-mass") {
    r = exit_mass_check(a.n, parse_point(a.x, "--x", a.n));
  } else {
    throw input_error("--name must be semigroup, hunt, midpoint, longtime or exit-mass");
  }
  std::printf("%s relative_error %.17g tolerance %.17g %s\n", r.name.c_str(), r.relative_error, r.tolerance,
              r.pass ? "pass" : "FAIL");
  return r.pass ? 0 : 1;
}

int mc(const Args& a) {
  const Vector x = parse_point(a.x, "--x", a.n);
  PathConfig cfg = path_config(a);
  note("quantity", a.quantity);
  MCEstimate e;
  if (a.quantity == "survival") {
    e = mc_survival(x, a.t, cfg);
  } else if (a.quantity == "kernel") {
    e = mc_kernel(a.t, x, parse_point(a.y, "--y", a.n), cfg);
  } else if (a.quantity == "exit-time") {
    e = mc_exit_time(x, cfg);
  } else {
    throw input_error("--quantity must be survival, kernel or exit-time");
  }
  print(e.mean);
  print(e.stderr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet heat kernels of the unit ball: evaluation, envelopes, sweeps and checks"};
  app.require_subcommand(1);
  // Lets --threads appear after the subcommand too.
  app.fallthrough();
  Args a;
  app.add_option("--threads", a.threads, "Worker threads (default: hardware parallelism)");

  auto common = [&](CLI::App* s, bool need_t) {
    s->add_option("--n", a.n, "Dimension")->required()->check(CLI::Range(1, 16));
    if (need_t) s->add_option("--t", a.t, "Time")->required()->check(CLI::PositiveNumber);
    s->add_option("--x", a.x, "Start point, comma separated");
  };

  auto* ek = app.add_subcommand("eval-kernel", "Dirichlet (or free/half-space) heat kernel");
  common(ek, true);
  ek->add_option("--y", a.y, "End point, comma separated")->required();
  ek->add_option("--domain", a.domain, "ball | interval | halfspace | free")->capture_default_str();
  ek->add_option("--tol", a.tol, "Absolute truncation tolerance (default 1e-10)")->check(CLI::PositiveNumber);
  ek->add_option("--precision", a.precision, "binary64 | binary128")->capture_default_str();
  ek->add_option("--normal", a.normal, "Half-space outward unit normal");
  ek->add_option("--offset", a.offset, "Half-space offset");

  auto* ee = app.add_subcommand("eval-envelope", "Envelope shapes");
  common(ee, true);
  ee->add_option("--y", a.y, "Second point");
  ee->add_option("--z", a.z, "Boundary point (shape q)");
  ee->add_option("--shape", a.shape, "h | sharp | global | q | interval | davies-zhang")->capture_default_str();
  ee->add_option("--c-exp", a.c_exp, "Exponent constant for davies-zhang")->check(CLI::PositiveNumber);

  auto* ed = app.add_subcommand("eval-exit-density", "Exit density q_x(t, z)");
  common(ed, true);
  ed->add_option("--z", a.z, "Boundary point")->required();
  ed->add_option("--tol", a.tol, "Absolute truncation tolerance (default 1e-10)")->check(CLI::PositiveNumber);

  auto* sw = app.add_subcommand("sweep", "Ratio sweep over the standard grid; CSV output");
  sw->add_option("--n", a.n, "Dimension")->required()->check(CLI::Range(1, 16));
  sw->add_option("--envelope", a.envelope, "sharp | global | interval | davies-zhang | exit")->capture_default_str();
  sw->add_option("--c-exp", a.c_exp, "Exponent constant for davies-zhang")->check(CLI::PositiveNumber);
  sw->add_option("--t-min", a.t_min, "Smallest time")->check(CLI::PositiveNumber)->capture_default_str();
  sw->add_option("--t-max", a.t_max, "Largest time")->check(CLI::PositiveNumber)->capture_default_str();
  sw->add_option("--precision", a.precision, "binary64 | binary128")->capture_default_str();
  sw->add_option("--tol", a.tol, "Absolute spectral tolerance (default by precision)")->check(CLI::PositiveNumber);
  sw->add_option("--sources", a.sources, "Comma list of spectral, interval, mc")->capture_default_str();
  sw->add_option("--out", a.out, "CSV file (default: standard output)");
  sw->add_option("--dt", a.dt, "MC time step (default 1e-3)")->check(CLI::PositiveNumber);
  sw->add_option("--paths", a.paths, "MC paths (default 1e5)")->check(CLI::PositiveNumber);
  sw->add_option("--seed", a.seed, "MC seed (overrides BALLHEAT_SEED; default 0)");

  auto* ck = app.add_subcommand("check", "Structural identity checks");
  ck->add_option("--name", a.name, "semigroup | hunt | midpoint | longtime | exit-mass")->required();
  ck->add_option("--n", a.n, "Dimension")->required()->check(CLI::Range(1, 3));
  ck->add_option("--t", a.t, "Time")->check(CLI::PositiveNumber);
  ck->add_option("--x", a.x, "First point");
  ck->add_option("--y", a.y, "Second point");
  ck->add_option("--t-min", a.t_min, "Smallest time (midpoint)")->check(CLI::PositiveNumber);
  ck->add_option("--t-max", a.t_max, "Largest time (midpoint)")->check(CLI::PositiveNumber);
  ck->add_option("--c", a.c, "Ball radius factor (midpoint)")->check(CLI::PositiveNumber);
  ck->add_option("--l", a.l, "Centre displacement factor (midpoint)")->check(CLI::NonNegativeNumber);

  auto* mcc = app.add_subcommand("mc", "Monte Carlo oracle");
  common(mcc, true);
  mcc->add_option("--quantity", a.quantity, "survival | kernel | exit-time")->capture_default_str();
  mcc->add_option("--y", a.y, "Kernel end point");
  mcc->add_option("--dt", a.dt, "Time step (default 1e-3)")->check(CLI::PositiveNumber);
  mcc->add_option("--paths", a.paths, "Number of paths (default 1e5)")->check(CLI::PositiveNumber);
  mcc->add_option("--seed", a.seed, "Seed (overrides BALLHEAT_SEED; default 0)");
  mcc->add_flag("--no-bridge", a.no_bridge, "Disable the Brownian-bridge crossing correction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ballheat: " << e.what() << '\n';
    return 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  int status = 0;
  try {
    if (a.n > 0) note("n", show(a.n));
    if (a.t > 0) note("t", show(a.t));
    if (!a.x.empty()) note("x", a.x);
    if (!a.y.empty()) note("y", a.y);
    if (!a.z.empty()) note("z", a.z);
    note("threads", a.threads ? show(a.threads) : show(std::max(1u, std::thread::hardware_concurrency())), !a.threads);
    if (sub == "eval-kernel") status = eval_kernel(a);
    else if (sub == "eval-envelope") status = eval_envelope(a);
    else if (sub == "eval-exit-density") status = eval_exit_density(a);
    else if (sub == "sweep") status = sweep(a);
    else if (sub == "check") status = check(a);
    else if (sub == "mc") status = mc(a);
  } catch (const input_error& e) {
    status = 2;
    std::cerr << "ballheat: " << e.what() << '\n';
  } catch (const domain_error& e) {
    status = 2;
    std::cerr << "ballheat: " << e.what() << '\n';
  } catch (const std::exception& e) {
    status = 1;
    std::cerr << "ballheat: " << e.what() << '\n';
  }
  std::cerr << "ballheat " << BALLHEAT_VERSION << ' ' << sub;
  for (const auto& p : provenance) std::cerr << ' ' << p;
  std::cerr << '\n';
  return status;
}
