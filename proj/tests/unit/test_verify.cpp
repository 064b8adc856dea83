#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ballheat/ball_spectral.hpp"
#include "ballheat/envelopes.hpp"
#include "ballheat/errors.hpp"
#include "ballheat/exact_kernels.hpp"
#include "ballheat/verify.hpp"

using namespace ballheat;

namespace {

SweepConfig double_config(std::vector<KernelSource> sources) {
  SweepConfig c;
  c.sources = std::move(sources);
  c.precision = Precision::binary64;
  return c;
}

void check_report_shape(const SweepReport& r) {
  CHECK(r.empirical_C >= 1.0);
  for (const auto& d : r.decades) {
    if (d.count == 0) continue;
    CHECK(d.min_ratio >= r.min_ratio);
    CHECK(d.max_ratio <= r.max_ratio);
    CHECK(d.empirical_C <= r.empirical_C);
  }
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("log grid") {
  const auto g = log_grid(0.01, 1.0, 8);
  REQUIRE(g.size() == 17);
  CHECK(g.front() == 0.01);
  CHECK(g.back() == 1.0);
  CHECK(g[8] == doctest::Approx(0.1).epsilon(1e-14));
  const auto s = standard_grid(1);
  CHECK(s.radii.size() == 41);
  CHECK(standard_grid(2).angles.size() == 9);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 8), input_error);
}

TEST_CASE("degenerate grid") {
  SweepGrid g{2, {1.0}, {0.0}, {0.0}};
  const auto res = ratio_sweep(g, Envelope{EnvelopeKind::sharp}, double_config({KernelSource::spectral}));
  REQUIRE(res.records.size() == 1);
  const Vector o{0.0, 0.0};
  const double expect = ball_kernel(1.0, o, o, 1e-15).value / sharp_shape(1.0, o, o);
  CHECK(res.records[0].ratio == doctest::Approx(expect).epsilon(1e-12));
  CHECK(res.records[0].source == KernelSource::spectral);
  CHECK(res.report.records == 1);
  CHECK(res.report.empirical_C == doctest::Approx(std::max(expect, 1 / expect)));
}

TEST_CASE("interval envelope is stable across decades") {
  SweepConfig cfg;
  cfg.sources = {KernelSource::interval};
  const auto res = ratio_sweep(standard_grid(1), Envelope{EnvelopeKind::interval}, cfg);
  CHECK(res.records.size() == 17 * 41 * 41);
  CHECK(res.report.skipped == 0);
  const auto& lo = res.report.decade(0.01, 0.1);
  const auto& hi = res.report.decade(0.1, 1.0);
  MESSAGE("C small t " << lo.empirical_C << ", C large t " << hi.empirical_C);
  CHECK(std::isfinite(res.report.empirical_C));
  CHECK(std::max(lo.empirical_C, hi.empirical_C) <= 2 * std::min(lo.empirical_C, hi.empirical_C));
  check_report_shape(res.report);
  for (const auto& r : res.records) {
    CHECK(r.kernel >= 0.0);
    CHECK(r.shape >= 0.0);
  }
}

TEST_CASE("sine series and images agree in 1D") {
  SweepGrid g = standard_grid(1, 0.1, 1.0);
  SweepConfig a;
  a.sources = {KernelSource::spectral};
  SweepConfig b;
  b.sources = {KernelSource::interval};
  const auto ra = ratio_sweep(g, Envelope{EnvelopeKind::sharp}, a);
  const auto rb = ratio_sweep(g, Envelope{EnvelopeKind::sharp}, b);
  REQUIRE(ra.records.size() == rb.records.size());
  int shared = 0;
  for (std::size_t i = 0; i < ra.records.size(); ++i) {
    const auto& p = ra.records[i];
    const auto& q = rb.records[i];
    if (p.source == KernelSource::skipped || q.source == KernelSource::skipped || p.flagged) continue;
    CHECK(p.ratio == doctest::Approx(q.ratio).epsilon(1e-10));
    ++shared;
  }
  CHECK(shared > 1000);
}

TEST_CASE("Davies-Zhang lower form stays away from zero") {
  SweepGrid g = standard_grid(2, 0.1, 1.0);
  g.ts = {0.1, 0.3, 1.0};
  const auto res = ratio_sweep(g, Envelope{EnvelopeKind::davies_zhang, 16.0}, double_config({KernelSource::spectral}));
  MESSAGE("min ratio " << res.report.min_ratio);
  CHECK(res.report.min_ratio > 0.0);
  CHECK(std::isfinite(res.report.empirical_C));
}

TEST_CASE("refused nodes are marked skipped") {
  SweepGrid g{2, {1e-5}, {0.0, 0.5}, {0.0, 1.0}};
  const auto res = ratio_sweep(g, Envelope{EnvelopeKind::sharp}, double_config({KernelSource::spectral}));
  REQUIRE(res.records.size() == 6);
  for (const auto& r : res.records) {
    CHECK(r.source == KernelSource::skipped);
    CHECK(std::isnan(r.ratio));
  }
  CHECK(res.report.skipped == 6);
}

TEST_CASE("MC fallback fills refused nodes") {
  SweepGrid g{2, {2e-4}, {0.0, 0.5}, {0.0}};
  SweepConfig cfg = double_config({KernelSource::spectral, KernelSource::mc});
  cfg.mc.dt = 2e-5;
  cfg.mc.n_paths = 4000;
  const auto res = ratio_sweep(g, Envelope{EnvelopeKind::sharp}, cfg);
  REQUIRE(res.records.size() == 3);
  for (const auto& r : res.records) CHECK(r.source == KernelSource::mc);
  CHECK(res.report.mc_fraction == 1.0);
}

TEST_CASE("summaries") {
  std::vector<RatioRecord> recs;
  for (double t : {0.01, 0.05, 0.1, 0.5, 1.0}) {
    RatioRecord r;
    r.n = 2;
    r.t = t;
    r.kernel = t;
    r.shape = 1.0;
    r.ratio = t;
    recs.push_back(r);
  }
  const auto rep = summarize(recs, "test");
  CHECK(rep.records == 5);
  CHECK(rep.min_ratio == 0.01);
  CHECK(rep.max_ratio == 1.0);
  CHECK(rep.empirical_C == doctest::Approx(100.0));
  // Closed decades: t = 0.1 belongs to both.
  CHECK(rep.decade(0.01, 0.1).count == 3);
  CHECK(rep.decade(0.1, 1.0).count == 3);
  CHECK_THROWS_AS(rep.decade(1.0, 10.0), input_error);
  check_report_shape(rep);
}

TEST_CASE("semigroup check") {
  const auto one = semigroup_check(1, 0.2, Vector{0.0}, Vector{0.4});
  CHECK(one.relative_error <= 1e-8);
  CHECK(one.pass);
  const auto two = semigroup_check(2, 0.25, Vector{0.0, 0.0}, Vector{0.3, 0.4});
  CHECK(two.relative_error <= 1e-6);
  CHECK(two.pass);
  CHECK(semigroup_check(3, 0.2, Vector{0.0, 0.0, 0.0}, Vector{0.0, 0.0, 0.0}).pass);
  CHECK(make_check("x", 2.0, 1.0).pass == false);
  CHECK(make_check("x", 1.0, 1.0).pass == true);
}

TEST_CASE("Hunt check") {
  const auto h = hunt_check(2, 0.5, Vector{0.0, 0.0}, Vector{0.3, 0.0});
  CHECK(h.relative_error <= 1e-4);
  CHECK(h.pass);
  const Vector o{0.0, 0.0};
  const Vector y{0.3, 0.0};
  CHECK(hunt_subtraction(2, 2.0, o, y) == doctest::Approx(gauss_kernel(2.0, o, y)).epsilon(0.01));
  CHECK_THROWS_AS(hunt_subtraction(2, 0.5, y, o, {}, true), input_error);
}

TEST_CASE("midpoint concentration") {
  const auto ts = log_grid(0.01, 1.0, 4);
  std::vector<std::pair<Vector, Vector>> pairs = {
      {{0.0, 0.0}, {0.0, 0.0}}, {{0.5, 0.0}, {-0.5, 0.0}}, {{0.9, 0.0}, {0.0, 0.9}}, {{0.2, 0.3}, {0.25, 0.3}}};
  const auto rep = midpoint_check(2, ts, pairs, 1.0, 1.0);
  CHECK(rep.max_ratio <= 1.0);
  CHECK(rep.floor > 0.0);
  CHECK(rep.floor_by_t.size() == ts.size());
  CHECK(rep.pass);
  MESSAGE("floor " << rep.floor << ", centred advantage " << rep.centred_advantage);
}

TEST_CASE("long-time comparability") {
  const auto r3 = longtime_check(3, {1.0, 2.0, 3.0, 4.0, 5.0}, Vector{0.0, 0.0, 0.0}, Vector{0.0, 0.0, 0.0});
  CHECK(r3.ratios.back() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-8));
  CHECK(r3.pass);
  const auto r1 = longtime_check(1, {1.0, 2.0, 3.0, 4.0, 5.0}, Vector{0.0}, Vector{0.0});
  CHECK(r1.ratios.back() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r1.pass);
  const auto r2 = longtime_check(2, {1.0, 3.0, 5.0}, Vector{0.7, 0.0}, Vector{0.0, -0.95});
  for (double v : r2.ratios) CHECK(v > 0.0);
  CHECK(r2.spread >= 1.0);
}

TEST_CASE("exit mass") {
  const auto m = exit_mass_check(2, Vector{0.3, 0.0});
  CHECK(m.relative_error <= 1e-6);
  CHECK(m.pass);
  CHECK(exit_mass_check(3, Vector{0.0, 0.3, 0.3}).pass);
  CHECK_THROWS_AS(exit_mass_check(3, Vector{0.0, 0.5, 0.5}), small_time_refusal);
}

}
