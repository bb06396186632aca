#include "hyperspec/sphtransform.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "hyperspec/errors.hpp"
#include "hyperspec/quadrature.hpp"

namespace hyperspec {

using std::numbers::pi;

SpectralParameter SpectralParameter::principal(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("SpectralParameter: principal value must be >= 0");
  return {Series::Principal, v};
}

SpectralParameter SpectralParameter::complementary(double s0) {
  if (!(s0 > 0.0) || s0 > 0.5) throw ValidationError("SpectralParameter: complementary s0 must lie in (0, 1/2]");
  return {Series::Complementary, s0};
}

HeatTime::HeatTime(double t) : tau(t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("HeatTime: tau must be positive");
}

// ---------------------------------------------------------------------------
// Radial functions

RadialFunction make_radial(std::function<double(double)> profile, double support_radius, bool compact,
                           std::string description) {
  if (support_radius < 0.0) throw ValidationError("RadialFunction: support radius must be >= 0");
  return RadialFunction{std::move(profile), support_radius, compact, std::move(description), GenericShape{}};
}

RadialFunction ball_indicator(double r) {
  if (!(r > 0.0)) throw ValidationError("ball_indicator: radius must be positive");
  RadialFunction f;
  f.profile = [r](double s) { return s <= r ? 1.0 : 0.0; };
  f.support_radius = r;
  f.compact = true;
  f.description = "indicator of B_" + std::to_string(r);
  f.shape = BallShape{r};
  return f;
}

RadialFunction gaussian_profile(const Space& space, double a) {
  if (!(a > 0.0)) throw ValidationError("gaussian_profile: a must be positive");
  RadialFunction f;
  f.profile = [a](double s) { return std::exp(-a * s * s); };
  // exp(-2 a S^2) * volume growth below ~1e-18
  f.support_radius = space.is_hyperbolic() ? (1.0 + std::sqrt(1.0 + 8.0 * a * 42.0)) / (4.0 * a)
                                           : std::sqrt(42.0 / (2.0 * a)) + 1.0;
  f.compact = false;
  f.description = "gaussian exp(-" + std::to_string(a) + " s^2)";
  f.shape = GaussianShape{a};
  return f;
}

namespace {

struct Memo {
  std::mutex mutex;
  std::unordered_map<double, double> values;
};

}  // namespace

RadialFunction heat_profile(const Space& space, HeatTime tau) {
  RadialFunction f;
  f.compact = false;
  f.description = "heat kernel tau=" + std::to_string(tau.tau);
  f.shape = HeatShape{tau.tau};
  if (space.is_euclidean()) {
    f.profile = [space, tau](double s) { return heat_kernel_spatial(space, tau, s); };
    f.support_radius = std::sqrt(4.0 * tau.tau * 45.0) + 1.0;
  } else {
    auto memo = std::make_shared<Memo>();
    f.profile = [space, tau, memo](double s) {
      {
        std::lock_guard lock(memo->mutex);
        if (auto it = memo->values.find(s); it != memo->values.end()) return it->second;
      }
      const double v = heat_kernel_spatial(space, tau, s);
      std::lock_guard lock(memo->mutex);
      memo->values.emplace(s, v);
      return v;
    };
    // h ~ exp(-s/2 - s^2/(4 tau)); the squared profile against sinh(s) must fall below 1e-18.
    f.support_radius = std::sqrt(90.0 * tau.tau) + 1.0;
  }
  return f;
}

RadialFunction zero_function() {
  RadialFunction f;
  f.profile = [](double) { return 0.0; };
  f.support_radius = 0.0;
  f.description = "zero";
  return f;
}

// ---------------------------------------------------------------------------
// Spherical functions

namespace {

// Gamma(d/2) (2/x)^{d/2-1} J_{d/2-1}(x) for d = 1..4.
double euclidean_omega(int d, double x) {
  if (x < 2.0) {
    // sum_k (-x^2/4)^k Gamma(d/2) / (k! Gamma(d/2 + k))
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
      term *= q / (k * (0.5 * d + k - 1.0));
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  switch (d) {
    case 1: return std::cos(x);
    case 2: return specfun::bessel_j(0, x);
    case 3: return std::sin(x) / x;
    case 4: return 2.0 * specfun::bessel_j(1, x) / x;
    default: throw ValidationError("euclidean_omega: dimension out of range");
  }
}

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

// The integrals below run over w in R after tan(t/2) = exp(w - s). The integrand is flat
// (no oscillation) and decays like exp(-|w|) outside the core [-2, 2s + 2]; on those tails
// we substitute x = exp(-|w - edge|) so each tail becomes one smooth panel in x on (0, 1].
constexpr double kCoreMargin = 2.0;

template <typename F>
double integrate_over_w(const F& integrand, double s, double freq, const quad::Options& opts) {
  const double lo = -kCoreMargin;
  const double hi = 2.0 * s + kCoreMargin;
  const double width = freq > 0.0 ? std::min(2.0, 1.5 / freq) : 2.0;
  const auto core_breaks = quad::uniform_breaks(lo, hi, width);
  const double core = quad::integrate(integrand, core_breaks, opts).value;
  // w = lo + log x, dw = dx / x
  auto left = [&](double x) { return x > 0.0 ? integrand(lo + std::log(x)) / x : 0.0; };
  auto right = [&](double x) { return x > 0.0 ? integrand(hi - std::log(x)) / x : 0.0; };
  quad::Options tail_opts = opts;
  tail_opts.rel_tol = 1e-10;
  const double tails = quad::integrate(left, 0.0, 1.0, tail_opts).value + quad::integrate(right, 0.0, 1.0, tail_opts).value;
  return core + tails;
}

// ln B with B = cosh s - sinh s cos t, in the variable w (tan(t/2) = exp(w - s)).
double log_base(double s, double w) { return -s + softplus(2.0 * w) - softplus(2.0 * (w - s)); }

quad::Options omega_options(double s) {
  quad::Options o;
  o.abs_tol = 1e-13 * std::exp(-0.5 * s) * (1.0 + s);
  o.rel_tol = 1e-12;
  o.l1_rel_tol = 1e-13;
  o.max_intervals = 20000;
  return o;
}

double disk_omega(SpectralParameter p, double s) {
  if (s == 0.0) return 1.0;
  const bool principal = p.is_principal();
  const double lambda = p.value;
  if (!principal && lambda == 0.5) return 1.0;
  auto integrand = [&](double w) {
    const double lb = log_base(s, w);
    const double lsech = -log_cosh(w - s);
    if (principal) return std::exp(-0.5 * lb + lsech) * std::cos(lambda * lb);
    return std::exp((lambda - 0.5) * lb + lsech);
  };
  return integrate_over_w(integrand, s, principal ? lambda : 0.0, omega_options(s)) / pi;
}

double disk_omega_derivative(SpectralParameter p, double s) {
  const bool principal = p.is_principal();
  const double lambda = p.value;
  if (!principal && lambda == 0.5) return 0.0;
  if (s == 0.0) return 0.0;
  const double es = std::exp(-s);
  const double ch = std::cosh(s);
  auto integrand = [&](double w) {
    const double lb = log_base(s, w);
    const double lsech = -log_cosh(w - s);
    // dB/ds divided by B; lies in [-1, 1].
    const double db_over_b = (-es + 2.0 * ch * logistic(2.0 * (w - s))) * std::exp(-lb);
    if (principal) {
      const double phase = lambda * lb;
      return std::exp(-0.5 * lb + lsech) * (-0.5 * std::cos(phase) - lambda * std::sin(phase)) * db_over_b;
    }
    return std::exp((lambda - 0.5) * lb + lsech) * (lambda - 0.5) * db_over_b;
  };
  quad::Options o = omega_options(s);
  o.abs_tol *= (1.0 + lambda);
  return integrate_over_w(integrand, s, principal ? lambda : 0.0, o) / pi;
}

}  // namespace

double spherical_function(const Space& space, SpectralParameter p, double s) {
  if (s < 0.0) throw ValidationError("spherical_function: s must be >= 0");
  if (space.is_euclidean()) {
    if (!p.is_principal()) throw ValidationError("spherical_function: Euclidean spaces have no complementary series");
    return euclidean_omega(space.dimension(), 2.0 * pi * p.value * s);
  }
  return disk_omega(p, s);
}

double spherical_function_derivative(const Space& space, SpectralParameter p, double s) {
  if (space.is_euclidean()) {
    // Central difference is adequate here; the Euclidean path has closed forms elsewhere.
    const double h = 1e-5 * std::max(1.0, s);
    const double lo = std::max(0.0, s - h);
    return (spherical_function(space, p, s + h) - spherical_function(space, p, lo)) / (s + h - lo);
  }
  if (s < 0.0) throw ValidationError("spherical_function_derivative: s must be >= 0");
  return disk_omega_derivative(p, s);
}

double plancherel_density(const Space& space, SpectralParameter p) {
  if (!p.is_principal()) return 0.0;
  const double v = p.value;
  if (space.is_hyperbolic()) return 2.0 * v * std::tanh(pi * v);
  const int d = space.dimension();
  return sphere_area(d) * std::pow(v, d - 1);
}

// ---------------------------------------------------------------------------
// Transforms

double ball_indicator_transform(const Space& space, double r, SpectralParameter p) {
  if (!(r > 0.0)) throw ValidationError("ball_indicator_transform: radius must be positive");
  if (space.is_euclidean()) {
    if (!p.is_principal()) throw ValidationError("ball_indicator_transform: Euclidean spaces have no complementary series");
    const int d = space.dimension();
    const double vol = ball_volume(space, r);
    const double x = 2.0 * pi * r * p.value;
    if (x < 2.0) {
      // vol * Gamma(d/2+1) (2/x)^{d/2} J_{d/2}(x) as a power series
      const double q = -0.25 * x * x;
      double term = 1.0;
      double sum = 1.0;
      for (int k = 1; k < 40; ++k) {
        term *= q / (k * (0.5 * d + k));
        sum += term;
        if (std::abs(term) < 1e-18) break;
      }
      return vol * sum;
    }
    const double zeta = p.value;
    switch (d) {
      case 1: return std::sin(x) / (pi * zeta);
      case 2: return r / zeta * specfun::bessel_j(1, x);
      case 3: return r / (pi * zeta * zeta) * (std::sin(x) / x - std::cos(x));
      case 4: return (r / zeta) * (r / zeta) * specfun::bessel_j(2, x);
      default: break;
    }
    throw ValidationError("ball_indicator_transform: dimension out of range");
  }
  // Disk: integrate the radial eigen-equation (sinh s omega')' = -(1/4 + lambda^2) sinh s omega.
  const double eig = p.is_principal() ? 0.25 + p.value * p.value : 0.25 - p.value * p.value;
  if (eig <= 0.0) return ball_volume(space, r);
  return -std::sinh(r) * disk_omega_derivative(p, r) / (2.0 * eig);
}

namespace {

// Horocyclic (Abel) factorization on the disk: with G(u) = int_R f(d(u, v)) dv, where
// cosh d = cosh u + v^2 / 2, one has f^(lambda) = (1 / 2 pi) int_0^inf G(u) cos(lambda u) du.
double abel_profile(const RadialFunction& f, double u) {
  const double support = f.support_radius;
  if (u >= support) return 0.0;
  const double shu = std::sinh(0.5 * u);
  const double shu2 = shu * shu;
  auto v_of_s = [&](double s) {
    const double sh = std::sinh(0.5 * s);
    return 2.0 * std::sqrt(std::max(0.0, sh * sh - shu2));
  };
  // Breakpoints follow unit steps of the geodesic radius so profile features stay resolved.
  std::vector<double> br;
  for (double s : quad::uniform_breaks(u, support, 0.25)) br.push_back(v_of_s(s));
  br.front() = 0.0;
  auto integrand = [&](double v) { return f(2.0 * std::asinh(std::sqrt(shu2 + 0.25 * v * v))); };
  quad::Options o;
  o.abs_tol = 1e-16;
  o.rel_tol = 1e-12;
  o.l1_rel_tol = 1e-13;
  o.max_intervals = 4000;
  return 2.0 * quad::integrate(integrand, br, o).value;
}

double disk_transform_abel(const RadialFunction& f, SpectralParameter p) {
  const bool principal = p.is_principal();
  const double v = p.value;
  double width = 0.25;
  if (principal && v > 0.0) width = std::min(width, pi / (4.0 * v));
  const auto br = quad::uniform_breaks(0.0, f.support_radius, width);
  auto integrand = [&](double u) {
    const double g = abel_profile(f, u);
    return g * (principal ? std::cos(v * u) : std::cosh(v * u));
  };
  quad::Options o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-11;
  o.l1_rel_tol = 1e-12;
  o.max_intervals = 20000;
  const quad::Result r = quad::integrate(integrand, br, o);
  if (!r.converged && r.abs_error > 1e-8 * std::max(1.0, std::abs(r.value))) {
    throw NumericError("spherical_transform: quadrature did not converge", r.abs_error);
  }
  return r.value / (2.0 * pi);
}

}  // namespace

double spherical_transform_quadrature(const Space& space, const RadialFunction& f, SpectralParameter p) {
  if (f.is_zero()) return 0.0;
  const double support = f.support_radius;
  // A 15-point panel resolves a full period of the oscillation; keeping the layout independent of
  // p up to 4 periods per unit length lets memoized profiles reuse their nodes across parameters.
  double width = 0.25;
  const double freq = space.is_euclidean() ? 2.0 * pi * p.value : (p.is_principal() ? p.value : 0.0);
  if (freq > 0.0) width = std::min(width, 2.0 * pi / freq);
  auto br = quad::uniform_breaks(0.0, support, width);
  auto integrand = [&](double s) { return f(s) * spherical_function(space, p, s) * space.volume_element(s); };
  quad::Options o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-11;
  o.l1_rel_tol = 1e-12;
  o.max_intervals = 20000;
  const quad::Result r = quad::integrate(integrand, br, o);
  if (!r.converged && r.abs_error > 1e-8 * std::max(1.0, std::abs(r.value))) {
    throw NumericError("spherical_transform: quadrature did not converge", r.abs_error);
  }
  return r.value;
}

double spherical_transform(const Space& space, const RadialFunction& f, SpectralParameter p) {
  if (f.is_zero()) return 0.0;
  if (const auto* ball = std::get_if<BallShape>(&f.shape)) {
    return ball_indicator_transform(space, ball->radius, p);
  }
  if (space.is_euclidean() && p.is_principal()) {
    const int d = space.dimension();
    const double z2 = p.value * p.value;
    if (const auto* g = std::get_if<GaussianShape>(&f.shape)) {
      return std::pow(pi / g->a, 0.5 * d) * std::exp(-pi * pi * z2 / g->a);
    }
    if (const auto* h = std::get_if<HeatShape>(&f.shape)) {
      return std::exp(-4.0 * pi * pi * h->tau * z2);
    }
  }
  if (space.is_hyperbolic()) {
    if (const auto* h = std::get_if<HeatShape>(&f.shape)) return heat_kernel_transform(space, HeatTime(h->tau), p);
    return disk_transform_abel(f, p);
  }
  return spherical_transform_quadrature(space, f, p);
}

// ---------------------------------------------------------------------------
// Heat kernel

double heat_kernel_transform(const Space& space, HeatTime tau, SpectralParameter p) {
  const double v = p.value;
  if (space.is_euclidean()) {
    if (!p.is_principal()) throw ValidationError("heat_kernel_transform: Euclidean spaces have no complementary series");
    return std::exp(-4.0 * pi * pi * tau.tau * v * v);
  }
  if (p.is_principal()) return std::exp(-tau.tau * (0.25 + v * v));
  return std::exp(-tau.tau * (0.25 - v * v));
}

double log_heat_kernel_spatial(const Space& space, HeatTime tau, double s) {
  if (s < 0.0) throw ValidationError("heat_kernel_spatial: s must be >= 0");
  const double t = tau.tau;
  if (space.is_euclidean()) {
    const int d = space.dimension();
    return -0.5 * d * std::log(4.0 * pi * t) - s * s / (4.0 * t);
  }
  // McKean's integral for curvature -1, rescaled by 4 pi to the measure m_D:
  // h = 4 pi sqrt(2) e^{-t/4} (4 pi t)^{-3/2} int_s^inf r e^{-r^2/4t} (cosh r - cosh s)^{-1/2} dr.
  // With r = s + v^2 the integrand is smooth; e^{-s^2/4t} is factored out.
  auto integrand = [&](double v) {
    const double v2 = v * v;
    const double r = s + v2;
    const double denom2 = 2.0 * std::sinh(s + 0.5 * v2) * std::sinh(0.5 * v2);
    if (v == 0.0) return s > 0.0 ? 2.0 * s / std::sqrt(std::sinh(s)) : 0.0;
    return 2.0 * v * r * std::exp(-(2.0 * s * v2 + v2 * v2) / (4.0 * t)) / std::sqrt(denom2);
  };
  // Beyond vmax the Gaussian factor is below e^{-60}.
  const double vmax = std::sqrt(-s + std::sqrt(s * s + 240.0 * t)) + 1.0;
  quad::Options o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-13;
  const double integral =
      quad::integrate_checked(integrand, quad::uniform_breaks(0.0, vmax, vmax / 8.0), o, "heat_kernel_spatial");
  return std::log(4.0 * pi * std::sqrt(2.0)) - 0.25 * t - 1.5 * std::log(4.0 * pi * t) - s * s / (4.0 * t) +
         std::log(integral);
}

double heat_kernel_spatial(const Space& space, HeatTime tau, double s) {
  return std::exp(log_heat_kernel_spatial(space, tau, s));
}

double heat_kernel_inverse_transform(HeatTime tau, double s) {
  if (s < 0.0) throw ValidationError("heat_kernel_inverse_transform: s must be >= 0");
  const Space space = Space::hyperbolic_disk();
  const double t = tau.tau;
  const double lmax = std::sqrt(46.0 / t) + 1.0;
  const double width = s > 0.0 ? std::min(1.0, pi / s) : 1.0;
  const auto br = quad::uniform_breaks(0.0, lmax, width);
  auto integrand = [&](double lambda) {
    const SpectralParameter p{SpectralParameter::Series::Principal, lambda};
    return std::exp(-t * (0.25 + lambda * lambda)) * disk_omega(p, s) * plancherel_density(space, p);
  };
  quad::Options o;
  o.abs_tol = 1e-16;
  o.rel_tol = 1e-11;
  o.l1_rel_tol = 1e-12;
  o.max_intervals = 20000;
  const quad::Result r = quad::integrate(integrand, br, o);
  if (!r.converged && r.abs_error > 1e-9 * std::max(1e-6, std::abs(r.value))) {
    throw NumericError("heat_kernel_inverse_transform: quadrature did not converge", r.abs_error);
  }
  return r.value;
}

// ---------------------------------------------------------------------------
// Spectral integration helpers

std::optional<TailModel> transform_tail(const Space& space, const RadialFunction& f) {
  const auto* ball = std::get_if<BallShape>(&f.shape);
  if (ball == nullptr) return std::nullopt;
  const double r = ball->radius;
  if (space.is_hyperbolic()) {
    // omega ~ sqrt(2 / (pi lambda sinh s)) cos(lambda s - pi/4) at large lambda
    return TailModel{std::sqrt(std::sinh(r) / pi), r, -0.75 * pi};
  }
  const int d = space.dimension();
  return TailModel{std::sqrt(sphere_area(d) * std::pow(r, d - 1)) / pi, 2.0 * pi * r, -(d + 1) * 0.25 * pi};
}

namespace {

// int_P^inf cos(omega p + phase) / p^2 dp
double cos_over_p2_tail(double omega, double phase, double cutoff) {
  if (omega == 0.0) return std::cos(phase) / cutoff;
  if (std::abs(omega) * cutoff < 40.0) {
    // Integrate numerically up to where the asymptotic expansion is accurate.
    const double upper = 40.0 / std::abs(omega) + cutoff;
    const auto br = quad::uniform_breaks(cutoff, upper, std::min(1.0 / std::abs(omega), upper - cutoff));
    const double head = quad::integrate([&](double p) { return std::cos(omega * p + phase) / (p * p); }, br).value;
    return head + cos_over_p2_tail(omega, phase, upper);
  }
  const double arg = omega * cutoff + phase;
  return -std::sin(arg) / (omega * cutoff * cutoff) + 2.0 * std::cos(arg) / (omega * omega * cutoff * cutoff * cutoff);
}

}  // namespace

double tail_pairing(const TailModel& a, const TailModel& b, double cutoff) {
  const double amp = 0.5 * a.amplitude * b.amplitude;
  return amp * (cos_over_p2_tail(a.omega - b.omega, a.phase - b.phase, cutoff) +
                cos_over_p2_tail(a.omega + b.omega, a.phase + b.phase, cutoff));
}

double frequency_cutoff(const Space& space, const RadialFunction& f) {
  if (f.is_zero()) return 0.0;
  const bool hyp = space.is_hyperbolic();
  if (const auto* ball = std::get_if<BallShape>(&f.shape)) {
    const double r = ball->radius;
    return hyp ? std::max(100.0, 100.0 / r) : std::max(50.0, 50.0 / r);
  }
  if (const auto* g = std::get_if<GaussianShape>(&f.shape)) {
    return hyp ? std::sqrt(100.0 * g->a) + 2.0 : std::sqrt(22.0 * g->a) / pi;
  }
  if (const auto* h = std::get_if<HeatShape>(&f.shape)) {
    return hyp ? std::sqrt(22.0 / h->tau) + 1.0 : std::sqrt(22.0 / (8.0 * pi * pi * h->tau));
  }
  // Generic: probe until |f^|^2 plancherel stays negligible over several octaves.
  double scale = 0.0;
  int quiet = 0;
  double p = 0.5 / std::max(f.support_radius, 1e-3);
  for (int k = 0; k < 14; ++k, p *= 1.6) {
    const SpectralParameter sp = SpectralParameter::principal(p);
    const double v = spherical_transform(space, f, sp);
    const double w = v * v * plancherel_density(space, sp);
    scale = std::max(scale, w);
    quiet = (w < 1e-17 * scale) ? quiet + 1 : 0;
    if (quiet >= 3) return p;
  }
  return p;
}

double oscillation_scale(const Space& space, const RadialFunction& f) {
  const bool hyp = space.is_hyperbolic();
  if (const auto* g = std::get_if<GaussianShape>(&f.shape)) {
    // f^ is itself Gaussian-like with width ~ sqrt(a) (disk) or sqrt(a)/pi (Euclidean)
    return hyp ? std::min(0.5, 0.5 * std::sqrt(g->a)) : std::min(0.5, 0.25 * std::sqrt(g->a) / pi);
  }
  if (const auto* h = std::get_if<HeatShape>(&f.shape)) {
    return hyp ? std::min(0.5, 0.25 / std::sqrt(h->tau)) : std::min(0.5, 0.05 / std::sqrt(h->tau));
  }
  const double r = std::max(f.support_radius, hyp ? 0.5 : 0.25);
  return hyp ? std::min(0.5, 0.25 * pi / r) : 0.25 / r;
}

double integrate_principal(const Space& space, const std::function<double(double)>& g, double cutoff,
                           double oscillation_scale, std::span<const double> extra_breaks) {
  (void)space;
  if (!(cutoff > 0.0)) return 0.0;
  const double width = std::min(1.0, std::max(oscillation_scale, 1e-3));
  std::vector<double> br = quad::uniform_breaks(0.0, cutoff, width);
  for (double b : extra_breaks) {
    if (b > 0.0 && b < cutoff) br.push_back(b);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  // Integrands here carry the quadrature noise of nested transforms (~1e-13 relative).
  quad::Options o;
  o.abs_tol = 1e-14;
  o.rel_tol = 1e-10;
  o.max_intervals = 20000;
  const quad::Result r = quad::integrate(g, br, o);
  if (!r.converged && r.abs_error > 1e-7 * std::max(1e-12, std::abs(r.value))) {
    throw NumericError("integrate_principal: quadrature did not converge", r.abs_error);
  }
  return r.value;
}

double plancherel_identity_residual(const Space& space, const RadialFunction& f) {
  if (f.is_zero()) return 0.0;
  const auto br = quad::uniform_breaks(0.0, f.support_radius, f.compact ? 0.25 : 0.5);
  quad::Options o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-12;
  const double lhs = quad::integrate_checked(
      [&](double s) {
        const double v = f(s);
        return v * v * space.volume_element(s);
      },
      br, o, "plancherel_identity_residual");
  const double cutoff = frequency_cutoff(space, f);
  const double scale = oscillation_scale(space, f);
  double rhs = integrate_principal(
      space,
      [&](double p) {
        const SpectralParameter sp{SpectralParameter::Series::Principal, p};
        const double v = spherical_transform(space, f, sp);
        return v * v * plancherel_density(space, sp);
      },
      cutoff, scale);
  if (const auto tail = transform_tail(space, f)) rhs += tail_pairing(*tail, *tail, cutoff);
  if (lhs == 0.0 && rhs == 0.0) return 0.0;
  return std::abs(lhs - rhs) / std::max(lhs, 1e-300);
}

double functional_equation_residual(double lambda, double s, double t) {
  if (s < 0.0 || t < 0.0) throw ValidationError("functional_equation_residual: s, t must be >= 0");
  const Space disk = Space::hyperbolic_disk();
  const SpectralParameter p = SpectralParameter::principal(lambda);
  const double sh_s = std::sinh(s);
  const double sh_t = std::sinh(t);
  const double base = 2.0 * std::pow(std::sinh(0.5 * (s - t)), 2);
  auto integrand = [&](double theta) {
    const double st = std::sin(0.5 * theta);
    // cosh c - 1 without cancellation
    const double cm1 = base + 2.0 * sh_s * sh_t * st * st;
    const double c = 2.0 * std::asinh(std::sqrt(0.5 * cm1));
    return spherical_function(disk, p, c);
  };
  quad::Options o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-11;
  const auto br = quad::uniform_breaks(0.0, pi, pi / 8.0);
  const double avg = quad::integrate(integrand, br, o).value / pi;
  return std::abs(avg - spherical_function(disk, p, s) * spherical_function(disk, p, t));
}

}  // namespace hyperspec
