#include "ballheat/ball_spectral.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <type_traits>

#include "ballheat/errors.hpp"
#include "ballheat/exact_kernels.hpp"
#include "ballheat/geometry.hpp"
#include "ballheat/precision.hpp"
#include "ballheat/quadrature.hpp"

namespace ballheat {

namespace {

constexpr double kRoundingUlps = 256.0;

template <class Real>
Real order_for(int n, int l) {
  return Real(l) + Real(n) / 2 - 1;
}

template <class Real>
Real sphere_area_real(int n) {
  using std::pow;
  const Real pi = boost::math::constants::pi<Real>();
  return 2 * pow(pi, Real(n) / 2) / boost::math::tgamma(Real(n) / 2);
}

// Lower bound for j_{nu,1}, nu > 0.
double first_zero_lower_bound(double nu) { return nu + 1.8557571 * std::cbrt(nu); }

// Certified bound on the modes with eigenvalue >= Lambda via Cauchy-Schwarz
// at an intermediate time s and domination by the free or half-space kernel.
double tail_bound(double Lambda, double t, int n, SpectralQuantity q) {
  const double pi = boost::math::constants::pi<double>();
  double alpha = n / 2.0;
  double beta = 0.0;
  double extra = 0.0;
  if (q == SpectralQuantity::survival) {
    alpha = n / 4.0;
    extra = 0.5 * std::log(ball_volume(n));
  } else if (q == SpectralQuantity::exit_density) {
    beta = 0.5;
  }
  const double s = std::min((alpha + beta) / Lambda, t);
  const double logb = -Lambda * (t - s) - alpha * std::log(4.0 * pi * s) - beta * std::log(s) + extra;
  return std::exp(logb);
}

double weyl_estimate(int n, double Lambda) {
  const double pi = boost::math::constants::pi<double>();
  return ball_volume(n) * ball_volume(n) * std::pow(Lambda, n / 2.0) / std::pow(2.0 * pi, n);
}

template <class Real>
Real radial_norm(int n, Real nu, Real zero) {
  using std::abs;
  using std::sqrt;
  const Real closed = sqrt(Real(2)) / abs(bessel_j(nu + 1, zero));
  if constexpr (std::is_same_v<Real, double>) {
    // Quadrature of int_0^1 J_nu(j r)^2 r dr, checked against the closed form.
    const int points = 32 + 2 * static_cast<int>(std::ceil(zero));
    const double integral =
        gauss_legendre(points).integrate([&](double r) { double v = bessel_j(nu, zero * r); return v * v * r; }, 0.0, 1.0);
    const double quad_norm = 1.0 / std::sqrt(integral);
    if (std::abs(quad_norm - closed) > 1e-10 * closed) {
      throw numeric_error("radial normalisation disagrees with the closed form");
    }
    (void)n;
    return quad_norm;
  } else {
    (void)n;
    return closed;
  }
}

}  // namespace

double harmonic_dimension(int n, int l) {
  if (n < 1 || l < 0) throw input_error("harmonic dimension needs n >= 1, l >= 0");
  if (n == 1) return l <= 1 ? 1.0 : 0.0;
  if (l == 0) return 1.0;
  if (n == 2) return 2.0;
  // (2l + n - 2) (l + n - 3)! / (l! (n - 2)!)
  double c = 1.0;
  for (int i = 1; i <= n - 3; ++i) c *= static_cast<double>(l + i) / i;
  return c * (2.0 * l + n - 2) / (n - 2);
}

double lambda1(int n) {
  if (n < 1) throw input_error("dimension must be >= 1");
  if (n == 1) {
    const double pi = boost::math::constants::pi<double>();
    return pi * pi / 4.0;
  }
  const double j = bessel_zero(n / 2.0 - 1.0, 1);
  return j * j;
}

std::vector<EigenMode<double>> eigen_table(int n, int l_max, int k_max) {
  if (n < 2) throw input_error("eigen table needs n >= 2");
  if (l_max < 0 || k_max < 1) throw input_error("eigen table needs l_max >= 0 and k_max >= 1");
  std::vector<EigenMode<double>> out;
  for (int l = 0; l <= l_max; ++l) {
    const double nu = order_for<double>(n, l);
    const auto zeros = bessel_zeros(nu, k_max);
    for (int k = 1; k <= k_max; ++k) {
      const double j = zeros.zeros[k - 1];
      out.push_back({l, k, nu, j, j * j, radial_norm(n, nu, j)});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.eigenvalue < b.eigenvalue; });
  return out;
}

// ---------------------------------------------------------------- EigenTable

template <class Real>
void EigenTable<Real>::add_modes_for_degree(int l) {
  const Real nu = order_for<Real>(n_, l);
  if (static_cast<int>(zeros_.size()) <= l) zeros_.push_back({nu, {}});
  auto& zt = zeros_[l];
  std::size_t known = 0;
  for (const auto& m : modes_)
    if (m.l == l) ++known;
  extend_zeros(zt, Real(zero_limit_), std::numeric_limits<int>::max());
  for (std::size_t k = known; k < zt.zeros.size(); ++k) {
    const Real j = zt.zeros[k];
    if (!(j < Real(zero_limit_))) break;
    modes_.push_back({l, static_cast<int>(k) + 1, nu, j, j * j, radial_norm(n_, nu, j)});
  }
}

template <class Real>
EigenTable<Real> EigenTable<Real>::build(int n, double zero_limit) {
  EigenTable<Real> base;
  base.n_ = n;
  base.zero_limit_ = 0.0;
  return extend(base, zero_limit);
}

template <class Real>
EigenTable<Real> EigenTable<Real>::extend(const EigenTable& base, double zero_limit) {
  if (base.n_ < 2) throw input_error("eigen table needs n >= 2");
  EigenTable<Real> t = base;
  if (zero_limit <= t.zero_limit_) return t;
  t.zero_limit_ = zero_limit;
  for (int l = 0;; ++l) {
    const double nu = order_for<double>(t.n_, l);
    if (nu > 0 && first_zero_lower_bound(nu) >= zero_limit) break;
    // The radial norm and J' also evaluate J_{nu+1}.
    if (nu + 1.0 > kMaxBesselOrder) {
      throw small_time_refusal("spectral series needs Bessel order above " +
                               std::to_string(kMaxBesselOrder));
    }
    t.add_modes_for_degree(l);
    if (static_cast<int>(t.zeros_.size()) > l && !t.zeros_[l].zeros.empty() &&
        t.zeros_[l].zeros.front() >= Real(zero_limit))
      break;
  }
  std::stable_sort(t.modes_.begin(), t.modes_.end(), [](const auto& a, const auto& b) {
    return a.l != b.l ? a.l < b.l : a.k < b.k;
  });
  return t;
}

template <class Real>
void EigenTable<Real>::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write eigen table to " + path);
  char buf[256];
  std::snprintf(buf, sizeof buf, "# zero_limit %.17g\n", zero_limit_);
  out << buf;
  for (const auto& m : modes_) {
    std::snprintf(buf, sizeof buf, "%d %d %d %.17g %.17g %.17g\n", n_, m.l, m.k,
                  static_cast<double>(m.zero), static_cast<double>(m.eigenvalue),
                  static_cast<double>(m.radial_norm));
    out << buf;
  }
}

template <class Real>
EigenTable<Real> EigenTable<Real>::load(const std::string& path) {
  if constexpr (!std::is_same_v<Real, double>) {
    throw input_error("eigen table files hold binary64 values only");
  } else {
    std::ifstream in(path);
    if (!in) throw input_error("cannot read eigen table " + path);
    EigenTable<double> t;
    std::string line;
    bool have_limit = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      if (line[0] == '#') {
        std::string tag;
        ss >> tag >> tag;
        if (tag == "zero_limit" && (ss >> t.zero_limit_)) have_limit = true;
        continue;
      }
      EigenMode<double> m;
      int n = 0;
      if (!(ss >> n >> m.l >> m.k >> m.zero >> m.eigenvalue >> m.radial_norm)) {
        throw input_error("malformed eigen table row: " + line);
      }
      if (t.modes_.empty()) t.n_ = n;
      if (n != t.n_) throw input_error("eigen table mixes dimensions");
      m.nu = order_for<double>(n, m.l);
      while (static_cast<int>(t.zeros_.size()) <= m.l)
        t.zeros_.push_back({order_for<double>(n, static_cast<int>(t.zeros_.size())), {}});
      auto& zt = t.zeros_[m.l];
      if (static_cast<int>(zt.zeros.size()) != m.k - 1) throw input_error("eigen table rows out of order");
      zt.zeros.push_back(m.zero);
      t.modes_.push_back(m);
    }
    if (!have_limit) throw input_error("eigen table lacks its zero_limit line");
    return t;
  }
}

// -------------------------------------------------------------- BallSpectral

template <class Real>
BallSpectral<Real>::BallSpectral(int n, SpectralOptions options) : n_(n), options_(std::move(options)) {
  if (n < 2) throw input_error("ball spectral model needs n >= 2");
}

template <class Real>
Real BallSpectral<Real>::lambda1() const {
  const Real j = bessel_zero(order_for<Real>(n_, 0), 1);
  return j * j;
}

template <class Real>
std::shared_ptr<const EigenTable<Real>> BallSpectral<Real>::table_covering(double cutoff) const {
  const double limit = std::sqrt(cutoff);
  std::lock_guard<std::mutex> lock(mutex_);
  const bool use_file = std::is_same_v<Real, double> && !options_.cache_path.empty();
  if (!table_ && use_file) {
    std::ifstream probe(options_.cache_path);
    if (probe) {
      auto loaded = EigenTable<Real>::load(options_.cache_path);
      if (loaded.dimension() == n_) table_ = std::make_shared<const EigenTable<Real>>(std::move(loaded));
    }
  }
  if (table_ && table_->zero_limit() >= limit) return table_;
  // Grow with some headroom so repeated small increases stay cheap.
  double target = limit * 1.05;
  if (table_) target = std::max(target, table_->zero_limit() * 1.25);
  auto grow = [&](double lim) {
    return table_ ? EigenTable<Real>::extend(*table_, lim) : EigenTable<Real>::build(n_, lim);
  };
  EigenTable<Real> grown;
  try {
    grown = grow(target);
  } catch (const small_time_refusal&) {
    // The headroom alone may cross the order limit.
    grown = grow(limit);
  }
  table_ = std::make_shared<const EigenTable<Real>>(std::move(grown));
  if (use_file) table_->save(options_.cache_path);
  return table_;
}

template <class Real>
SpectralTruncation BallSpectral<Real>::plan(double t, double tol, SpectralQuantity q) const {
  if (!(t > 0) || !std::isfinite(t)) throw input_error("time must be positive");
  if (!(tol > 0)) throw input_error("tolerance must be positive");
  double hi = 1.0;
  while (tail_bound(hi, t, n_, q) > tol) {
    hi *= 2.0;
    if (hi > 1e14) throw small_time_refusal("spectral cut-off out of range");
  }
  double lo = hi / 2.0;
  for (int i = 0; i < 60 && hi - lo > 1e-3 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_bound(mid, t, n_, q) > tol ? lo : hi) = mid;
  }
  const double lam1 = static_cast<double>(lambda1());
  const double Lambda = std::max(hi, lam1 + 1.0);

  const double jcut = std::sqrt(Lambda);
  for (int l = 0;; ++l) {
    const double nu = order_for<double>(n_, l);
    if (nu > 0 && first_zero_lower_bound(nu) >= jcut) break;
    if (nu + 1.0 > kMaxBesselOrder) {
      throw small_time_refusal("t = " + std::to_string(t) + " needs Bessel order above " +
                               std::to_string(kMaxBesselOrder));
    }
  }
  if (weyl_estimate(n_, Lambda) > 4.0 * static_cast<double>(options_.mode_budget)) {
    throw small_time_refusal("t = " + std::to_string(t) + " needs too many spectral modes");
  }

  auto table = table_covering(Lambda);
  SpectralTruncation tr;
  tr.tol = tol;
  tr.tail_bound = tail_bound(Lambda, t, n_, q);
  tr.cutoff_eigenvalue = Lambda;
  double count = 0.0;
  for (const auto& m : table->modes()) {
    if (!(m.eigenvalue < Real(Lambda))) continue;
    tr.l_max = std::max(tr.l_max, m.l);
    tr.k_max = std::max(tr.k_max, m.k);
    count += harmonic_dimension(n_, m.l);
  }
  if (count > static_cast<double>(options_.mode_budget)) {
    throw small_time_refusal("t = " + std::to_string(t) + " needs " + std::to_string(count) +
                             " spectral modes");
  }
  tr.mode_count = static_cast<std::size_t>(count);
  return tr;
}

template <class Real>
BallSpectral<Real>::Slice::Slice(const BallSpectral& model, double t, double tol, SpectralQuantity q)
    : n_(model.n_), t_(t) {
  using std::exp;
  trunc_ = model.plan(t, tol, q);
  table_ = model.table_covering(trunc_.cutoff_eigenvalue);
  const auto& modes = table_->modes();
  const Real Lambda = Real(trunc_.cutoff_eigenvalue);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& m = modes[i];
    if (!(m.eigenvalue < Lambda)) continue;
    if (q != SpectralQuantity::kernel && q != SpectralQuantity::exit_density && m.l != 0) continue;
    included_.push_back(i);
    weight_.push_back(exp(-m.eigenvalue * Real(t)));
    l_max_ = std::max(l_max_, m.l);
  }
  if (q == SpectralQuantity::exit_density) {
    for (std::size_t i : included_) {
      const auto& m = modes[i];
      exit_coeff_.push_back(-m.radial_norm * m.zero * bessel_j_prime(m.nu, m.zero));
    }
  }
  if (q == SpectralQuantity::survival) {
    for (std::size_t i : included_) {
      const auto& m = modes[i];
      radial_mass_.push_back(m.radial_norm * bessel_j(m.nu + 1, m.zero) / m.zero);
    }
  }
}

template <class Real>
const std::vector<Real>& BallSpectral<Real>::Slice::radial_profile(double r) {
  using std::pow;
  if (r < 0 || r > 1) throw input_error("radius outside [0, 1]");
  auto it = profiles_.find(r);
  if (it != profiles_.end()) return it->second;
  std::vector<Real> p;
  p.reserve(included_.size());
  const auto& modes = table_->modes();
  const Real rr = Real(r);
  const Real power = r > 0 ? pow(rr, 1 - Real(n_) / 2) : Real(0);
  for (std::size_t i : included_) {
    const auto& m = modes[i];
    if (r == 0) {
      if (m.l != 0) {
        p.push_back(Real(0));
      } else {
        // r^{-nu} J_nu(j r) -> (j/2)^nu / Gamma(nu + 1)
        p.push_back(m.radial_norm * pow(m.zero / 2, m.nu) / boost::math::tgamma(m.nu + 1));
      }
    } else {
      p.push_back(m.radial_norm * power * bessel_j(m.nu, m.zero * rr));
    }
  }
  return profiles_.emplace(r, std::move(p)).first->second;
}

template <class Real>
void BallSpectral<Real>::Slice::compute_zonal(double theta) {
  using std::cos;
  const Real area = sphere_area_real<Real>(n_);
  zonal_.assign(l_max_ + 1, Real(0));
  const Real th = Real(theta);
  if (n_ == 2) {
    const Real pi = boost::math::constants::pi<Real>();
    zonal_[0] = 1 / (2 * pi);
    for (int l = 1; l <= l_max_; ++l) zonal_[l] = cos(Real(l) * th) / pi;
    return;
  }
  const Real lam = Real(n_ - 2) / 2;
  Real s = cos(th);
  if (s > 1) s = 1;
  if (s < -1) s = -1;
  std::vector<Real> c;
  gegenbauer_sequence(l_max_, lam, s, c);
  for (int l = 0; l <= l_max_; ++l) zonal_[l] = c[l] * Real(2 * l + n_ - 2) / Real(n_ - 2) / area;
}

template <class Real>
SpectralValue<Real> BallSpectral<Real>::Slice::finish(Real sum, Real abs_sum) const {
  SpectralValue<Real> v;
  v.value = sum;
  v.truncation = trunc_;
  v.rounding_bound =
      kRoundingUlps * static_cast<double>(std::numeric_limits<Real>::epsilon() * abs_sum);
  return v;
}

template <class Real>
SpectralValue<Real> BallSpectral<Real>::Slice::kernel(double rx, double ry, double theta) {
  using std::abs;
  if (rx >= 1 || ry >= 1) return finish(Real(0), Real(0));
  compute_zonal(theta);
  const auto& px = radial_profile(rx);
  const auto& py = radial_profile(ry);
  const auto& modes = table_->modes();
  Real sum = 0;
  Real abs_sum = 0;
  for (std::size_t a = 0; a < included_.size(); ++a) {
    const Real term = weight_[a] * px[a] * py[a] * zonal_[modes[included_[a]].l];
    sum += term;
    abs_sum += abs(term);
  }
  return finish(sum, abs_sum);
}

template <class Real>
SpectralValue<Real> BallSpectral<Real>::Slice::exit_density(double rx, double theta) {
  using std::abs;
  if (exit_coeff_.size() != included_.size()) throw input_error("slice was not planned for exit densities");
  if (rx >= 1) return finish(Real(0), Real(0));
  compute_zonal(theta);
  const auto& px = radial_profile(rx);
  const auto& modes = table_->modes();
  Real sum = 0;
  Real abs_sum = 0;
  for (std::size_t a = 0; a < included_.size(); ++a) {
    const Real term = weight_[a] * px[a] * exit_coeff_[a] * zonal_[modes[included_[a]].l];
    sum += term;
    abs_sum += abs(term);
  }
  return finish(sum, abs_sum);
}

template <class Real>
SpectralValue<Real> BallSpectral<Real>::Slice::exit_time_density(double rx) {
  using std::abs;
  if (exit_coeff_.size() != included_.size()) throw input_error("slice was not planned for exit densities");
  if (rx >= 1) return finish(Real(0), Real(0));
  const auto& px = radial_profile(rx);
  const auto& modes = table_->modes();
  Real sum = 0;
  Real abs_sum = 0;
  for (std::size_t a = 0; a < included_.size(); ++a) {
    if (modes[included_[a]].l != 0) continue;
    const Real term = weight_[a] * px[a] * exit_coeff_[a];
    sum += term;
    abs_sum += abs(term);
  }
  auto v = finish(sum, abs_sum);
  v.truncation.tail_bound *= sphere_area(n_);
  return v;
}

template <class Real>
SpectralValue<Real> BallSpectral<Real>::Slice::exit_time_remainder(double rx) {
  using std::abs;
  if (exit_coeff_.size() != included_.size()) throw input_error("slice was not planned for exit densities");
  if (rx >= 1) return finish(Real(0), Real(0));
  const auto& px = radial_profile(rx);
  const auto& modes = table_->modes();
  Real sum = 0;
  Real abs_sum = 0;
  for (std::size_t a = 0; a < included_.size(); ++a) {
    const auto& m = modes[included_[a]];
    if (m.l != 0) continue;
    const Real term = weight_[a] * px[a] * exit_coeff_[a] / m.eigenvalue;
    sum += term;
    abs_sum += abs(term);
  }
  auto v = finish(sum, abs_sum);
  // The excluded modes have eigenvalue >= cutoff, so integrating the pointwise
  // tail bound in time divides it by at least the cutoff.
  v.truncation.tail_bound *= sphere_area(n_) / trunc_.cutoff_eigenvalue;
  return v;
}

template <class Real>
SpectralValue<Real> BallSpectral<Real>::Slice::survival(double rx) {
  using std::abs;
  if (radial_mass_.size() != included_.size()) throw input_error("slice was not planned for survival");
  if (rx >= 1) return finish(Real(0), Real(0));
  const auto& px = radial_profile(rx);
  Real sum = 0;
  Real abs_sum = 0;
  for (std::size_t a = 0; a < included_.size(); ++a) {
    const Real term = weight_[a] * px[a] * radial_mass_[a];
    sum += term;
    abs_sum += abs(term);
  }
  return finish(sum, abs_sum);
}

namespace {

double checked_radius(std::span<const double> x, int n) {
  if (static_cast<int>(x.size()) != n) throw input_error("point has the wrong dimension");
  const double r = norm(x);
  if (r > 1.0 + kSphereTolerance) throw input_error("point outside the closed unit ball");
  return std::min(r, 1.0);
}

}  // namespace

template <class Real>
SpectralValue<Real> BallSpectral<Real>::kernel(double t, std::span<const double> x,
                                               std::span<const double> y, double tol) const {
  const double rx = checked_radius(x, n_);
  const double ry = checked_radius(y, n_);
  Slice s(*this, t, tol, SpectralQuantity::kernel);
  return s.kernel(rx, ry, angle(x, y));
}

template <class Real>
SpectralValue<Real> BallSpectral<Real>::survival(double t, std::span<const double> x, double tol) const {
  const double rx = checked_radius(x, n_);
  Slice s(*this, t, tol, SpectralQuantity::survival);
  return s.survival(rx);
}

template <class Real>
SpectralValue<Real> BallSpectral<Real>::exit_density(double t, std::span<const double> x,
                                                     std::span<const double> z, double tol) const {
  const double rx = checked_radius(x, n_);
  if (static_cast<int>(z.size()) != n_) throw input_error("exit point has the wrong dimension");
  if (std::abs(norm(z) - 1.0) > 1e-12) throw input_error("exit point must lie on the unit sphere");
  Slice s(*this, t, tol, SpectralQuantity::exit_density);
  return s.exit_density(rx, angle(x, z));
}

template class EigenTable<double>;
template class EigenTable<quad>;
template class BallSpectral<double>;
template class BallSpectral<quad>;

const BallSpectral<double>& ball_spectral(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<BallSpectral<double>>> models;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = models[n];
  if (!slot) slot = std::make_unique<BallSpectral<double>>(n);
  return *slot;
}

namespace {

KernelResult from_series(const SeriesEvalReport<double>& r, double tol) {
  KernelResult k;
  k.value = r.value;
  k.truncation.k_max = r.terms_used;
  k.truncation.mode_count = static_cast<std::size_t>(r.terms_used);
  k.truncation.tail_bound = r.tail_bound;
  k.truncation.tol = tol;
  k.rounding_bound = r.rounding_bound;
  return k;
}

KernelResult from_spectral(const SpectralValue<double>& v) {
  return {v.value, v.truncation, v.rounding_bound};
}

}  // namespace

KernelResult ball_kernel(double t, std::span<const double> x, std::span<const double> y, double tol) {
  require_same_dimension(x, y);
  if (x.size() == 1) return from_series(interval_kernel<double>(t, x[0], y[0], tol), tol);
  return from_spectral(ball_spectral(static_cast<int>(x.size())).kernel(t, x, y, tol));
}

KernelResult survival(double t, std::span<const double> x, double tol) {
  if (x.empty()) throw input_error("empty point");
  if (x.size() == 1) return from_series(interval_survival<double>(t, x[0], tol), tol);
  return from_spectral(ball_spectral(static_cast<int>(x.size())).survival(t, x, tol));
}

KernelResult exit_density(double t, std::span<const double> x, std::span<const double> z, double tol) {
  require_same_dimension(x, z);
  if (x.size() == 1) {
    if (std::abs(std::abs(z[0]) - 1.0) > 1e-12) throw input_error("exit point must be +1 or -1");
    return from_series(interval_exit_density<double>(t, x[0], z[0] > 0 ? 1 : -1, tol), tol);
  }
  return from_spectral(ball_spectral(static_cast<int>(x.size())).exit_density(t, x, z, tol));
}

}  // namespace ballheat
