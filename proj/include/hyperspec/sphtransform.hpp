#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "hyperspec/geometry.hpp"
#include "hyperspec/specfun.hpp"

namespace hyperspec {

/// A point of the positive-definite spherical dual.
///
/// Euclidean spaces: `value` is the radial frequency zeta >= 0 under the character
/// exp(-2 pi i <x, zeta>). Disk: principal series lambda >= 0, or complementary series
/// lambda = i s0 with s0 in (0, 1/2]; s0 = 1/2 is the trivial spherical function.
struct SpectralParameter {
  enum class Series { Principal, Complementary };

  Series series = Series::Principal;
  double value = 0.0;

  static SpectralParameter principal(double v);
  static SpectralParameter complementary(double s0);
  bool is_principal() const noexcept { return series == Series::Principal; }
};

/// Heat time tau > 0, in units of squared length.
struct HeatTime {
  double tau;
  explicit HeatTime(double t);
};

struct GenericShape {};
struct BallShape {
  double radius;
};
/// exp(-a s^2)
struct GaussianShape {
  double a;
};
struct HeatShape {
  double tau;
};
using RadialShape = std::variant<GenericShape, BallShape, GaussianShape, HeatShape>;

/// A K-invariant function given by its radial profile s -> f(s), s the geodesic distance
/// to the base point. `support_radius` is the exact support for compact profiles, or the
/// radius beyond which the profile is negligible (< 1e-16 relative) for rapidly decaying ones.
/// Profiles are sampled on demand by the quadrature engine; nothing is tabulated.
struct RadialFunction {
  std::function<double(double)> profile;
  double support_radius = 0.0;
  bool compact = true;
  std::string description;
  RadialShape shape = GenericShape{};

  double operator()(double s) const { return profile(s); }
  bool is_zero() const { return support_radius <= 0.0; }
};

RadialFunction ball_indicator(double r);
/// exp(-a s^2); the cutoff radius is chosen per space so the truncated tail is negligible.
RadialFunction gaussian_profile(const Space& space, double a);
/// The heat kernel h_tau as a radial profile. On the disk each value is an inverse-spectral
/// integral; evaluations are memoized (thread-safe) since transforms revisit the same nodes.
RadialFunction heat_profile(const Space& space, HeatTime tau);
RadialFunction zero_function();
RadialFunction make_radial(std::function<double(double)> profile, double support_radius, bool compact,
                           std::string description);

/// Spherical function omega_p at geodesic radius s.
/// Euclidean: Gamma(d/2) (2/x)^{d/2-1} J_{d/2-1}(x), x = 2 pi zeta s.
/// Disk: (1/pi) int_0^pi (cosh s - sinh s cos t)^{-(1/2 + i lambda)} dt by adaptive quadrature
/// (after the substitution tan(t/2) = exp(w - s), which flattens the peak at t = 0).
double spherical_function(const Space& space, SpectralParameter p, double s);

/// d/ds omega_p(s) on the disk (used by the closed ball-indicator path).
double spherical_function_derivative(const Space& space, SpectralParameter p, double s);

/// Density of the Plancherel measure in the radial coordinate of the dual.
/// Euclidean: |S^{d-1}| zeta^{d-1}. Disk: 2 lambda tanh(pi lambda) (relative to m_D; see README).
/// Zero on the complementary series.
double plancherel_density(const Space& space, SpectralParameter p);

/// f^(p) = int_0^inf f(s) omega_p(s) volume_element(s) ds. Dispatches to closed forms for
/// ball indicators, Euclidean Gaussians and heat profiles. Other disk profiles go through the
/// horocyclic factorization f^(lambda) = (1/2pi) int_0^inf G(u) cos(lambda u) du with
/// G(u) = int_R f(arccosh(cosh u + v^2/2)) dv, which needs no spherical-function evaluations.
double spherical_transform(const Space& space, const RadialFunction& f, SpectralParameter p);

/// The defining integral against omega_p, always by quadrature (no closed forms, no factorization).
double spherical_transform_quadrature(const Space& space, const RadialFunction& f, SpectralParameter p);

/// Transform of the indicator of B_r. Euclidean: (r/zeta)^{d/2} J_{d/2}(2 pi r zeta).
/// Disk: -sinh(r) omega_p'(r) / (2 (1/4 + lambda^2)), from the radial eigen-equation.
double ball_indicator_transform(const Space& space, double r, SpectralParameter p);

/// Heat kernel as a function of geodesic radius, normalized so int h dm_X = 1.
/// Disk: McKean's positive integral over [s, infinity), accurate far into the Gaussian tail.
double heat_kernel_spatial(const Space& space, HeatTime tau, double s);
/// log of heat_kernel_spatial; finite where the kernel itself underflows.
double log_heat_kernel_spatial(const Space& space, HeatTime tau, double s);
/// Disk heat kernel by the inverse spherical transform int e^{-tau(1/4 + lambda^2)} omega_lambda(s) dsigma_P.
/// Limited to an absolute accuracy of about 1e-16.
double heat_kernel_inverse_transform(HeatTime tau, double s);

/// exp(-4 pi^2 tau zeta^2) (Euclidean) or exp(-tau (1/4 + lambda^2)) (disk, principal);
/// the complementary value exp(-tau (1/4 - s0^2)) is returned for complementary parameters.
double heat_kernel_transform(const Space& space, HeatTime tau, SpectralParameter p);

/// Large-frequency model f^(p) sqrt(plancherel(p)) ~ (amplitude / p) cos(omega p + phase),
/// available for ball indicators; used to add the analytic tail of slowly decaying spectral integrals.
struct TailModel {
  double amplitude;
  double omega;
  double phase;
};
std::optional<TailModel> transform_tail(const Space& space, const RadialFunction& f);

/// int_P^inf (a.amplitude b.amplitude / p^2) cos(a.omega p + a.phase) cos(b.omega p + b.phase) dp.
double tail_pairing(const TailModel& a, const TailModel& b, double cutoff);

/// Upper frequency for spectral integrals of f^2: beyond it either f^ is negligible or the tail model applies.
double frequency_cutoff(const Space& space, const RadialFunction& f);

/// Panel width in p for spectral integrals of transforms of f (a fraction of their oscillation period).
double oscillation_scale(const Space& space, const RadialFunction& f);

/// Integrates g over principal parameters [0, infinity) in panels suited to the oscillation
/// scale of f (period ~ 1/support). `cutoff` is the upper limit; `extra_breaks` are added
/// (kinks of a spectral density). Returns the integral over [0, cutoff].
double integrate_principal(const Space& space, const std::function<double(double)>& g, double cutoff,
                           double oscillation_scale, std::span<const double> extra_breaks = {});

/// |int f^2 dm_X - int |f^|^2 d sigma_P| / max(int f^2 dm_X, tiny).
double plancherel_identity_residual(const Space& space, const RadialFunction& f);

/// Residual of the spherical functional equation on the disk:
/// |(1/2pi) int_0^{2pi} omega(c(theta)) dtheta - omega(s) omega(t)|, cosh c = cosh s cosh t - sinh s sinh t cos theta.
double functional_equation_residual(double lambda, double s, double t);

}  // namespace hyperspec
