#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyperspec/geometry.hpp"
#include "hyperspec/sphtransform.hpp"

namespace hyperspec {

/// Point mass of a spectral measure.
struct SpectralAtom {
  SpectralParameter parameter;
  double mass;
};

/// Bartlett spectral measure: an absolutely continuous principal part, principal atoms and
/// (disk only) complementary-series masses. The principal part is held both as a density
/// relative to the Plancherel density and as a mass density dsigma/dp in the radial coordinate p.
/// The measure never carries an atom at the trivial spherical function.
struct SpectralMeasure {
  Space space = Space::euclidean(1);
  std::function<double(double)> relative_density;  // dsigma / dsigma_P
  std::function<double(double)> mass_density;      // dsigma / dp
  /// sigma((0, eps]) of the principal part in closed form, when known.
  std::function<double(double)> cumulative;
  /// Limit of relative_density as p -> infinity (weights the analytic tails of ball transforms).
  double relative_density_at_infinity = 0.0;
  /// Kinks of the density; added as quadrature breakpoints.
  std::vector<double> breakpoints;
  std::vector<SpectralAtom> atoms;
  std::vector<SpectralAtom> complementary;
  std::string kind;
  std::string convention_note;

  /// Principal part given relative to Plancherel.
  static SpectralMeasure from_relative_density(Space space, std::function<double(double)> relative,
                                               double relative_at_infinity, std::string kind);
  /// Principal part given as a mass density in p; the relative density is derived.
  static SpectralMeasure from_mass_density(Space space, std::function<double(double)> mass,
                                           double relative_at_infinity, std::string kind);

  double complementary_mass() const;
  /// Checks the structural invariants; throws ValidationError.
  void validate() const;
};

/// Determinantal kernel specification with intensity L(x_o, x_o).
struct DppKernelSpec {
  enum class Kind { WeylHeisenberg, Bergman, Custom };
  Kind kind = Kind::Bergman;
  int wh_dimension = 1;  // complex dimension d; the process lives on Euclidean(2d)
  double wh_lambda = 0.0;
  int wh_n = 0;
  double intensity = 1.0;
  Space custom_space = Space::euclidean(1);
  std::function<double(double)> custom_kappa_hat;
  std::string name;

  /// Weyl-Heisenberg ensemble on C^d (d in {1, 2}), lambda != 0, n >= 0.
  static DppKernelSpec weyl_heisenberg(int d, double lambda, int n);
  /// Modified Bergman kernel on the disk (law of the hyperbolic GAF zeros).
  static DppKernelSpec bergman();
  /// Arbitrary kappa_hat on a given space.
  static DppKernelSpec custom(Space space, double intensity, std::function<double(double)> kappa_hat,
                              std::string name);

  Space space() const;
  double kappa_hat(double p) const;
};

/// (2 pi / |lambda|) L_n(2 pi^2 zeta^2 / |lambda|)^2 exp(-2 pi^2 zeta^2 / |lambda|).
double polyanalytic_kappa_hat(double lambda, int n, double zeta);

/// Fourier transform on C^d = R^{2d} of |L_{lambda,n}(0, z)|^2 = L_n^{(d-1)}(|lambda| r^2/2)^2 exp(-|lambda| r^2/2),
/// by radial quadrature. At zeta = 0 this is the L^2 mass (2 pi/|lambda|)^d binom(n + d - 1, n).
double weyl_heisenberg_kappa_hat(int d, double lambda, int n, double zeta);

/// |Gamma(3/2 + i lambda)|^2.
double bergman_kappa_hat(double lambda);

SpectralMeasure poisson_spectrum(const Space& space, double intensity);

/// Signed density intensity - kappa_hat(p) relative to Plancherel; no positivity check.
double dpp_relative_density(const DppKernelSpec& kernel, double p);

/// Relative density intensity - kappa_hat(p). Throws ValidationError if kappa_hat exceeds the
/// intensity (the kernel is then not a DPP kernel) or if the kernel lives on another space.
SpectralMeasure dpp_spectrum(const Space& space, const DppKernelSpec& kernel);

/// int f^ g^ dsigma over principal part, atoms and complementary part.
double spectral_pairing(const SpectralMeasure& sigma, const RadialFunction& f, const RadialFunction& g);

/// Matrix of spectral_pairing over a panel. Entries share one panel layout and each
/// transform is evaluated once per node.
std::vector<std::vector<double>> spectral_pairing_matrix(const SpectralMeasure& sigma,
                                                         const std::vector<RadialFunction>& fs);

/// Var(S f) = int |f^|^2 dsigma.
double variance_of_statistic(const SpectralMeasure& sigma, const RadialFunction& f);

/// sigma((0, eps]) for the principal part and principal atoms.
double principal_mass(const SpectralMeasure& sigma, double eps);
/// sigma_P((0, eps]).
double plancherel_mass(const Space& space, double eps);

enum class Verdict { Hyperuniform, NotHyperuniform, Inconclusive };
std::string to_string(Verdict v);

struct HyperuniformityVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::pair<double, double>> ratio_trace;  // (eps, sigma((0,eps]) / sigma_P((0,eps]))
  double limit_estimate = 0.0;
  double complementary_mass = 0.0;
};

/// Thresholds of the classifier.
inline constexpr double kHyperuniformThreshold = 1e-3;
inline constexpr double kNotHyperuniformThreshold = 1e-2;

/// Default decreasing eps grid, 1e-1 down to 1e-4.
std::vector<double> default_eps_grid();

/// Ratio trace and its eps -> 0 extrapolation r(eps) ~ L + C eps^beta from the three smallest eps.
HyperuniformityVerdict classify_hyperuniform(const SpectralMeasure& sigma, const std::vector<double>& eps_grid);

/// Limit of r(eps) = L + C eps^beta from three samples with eps1 > eps2 > eps3. Falls back to
/// r3 when the samples do not determine a decaying power law.
double extrapolate_limit(double e1, double r1, double e2, double r2, double e3, double r3);

/// Tabular form: one row per grid point (parameter, relative density, plancherel density, mass density).
void write_measure_csv(const SpectralMeasure& sigma, const std::vector<double>& grid, std::ostream& out);
/// Metadata (space, kind, atoms, complementary part, tail limit, convention) as JSON text.
std::string measure_metadata_json(const SpectralMeasure& sigma);
/// Rebuilds a measure from the CSV table and JSON metadata; densities are linear between grid points.
SpectralMeasure read_measure(std::istream& csv, const std::string& metadata_json);

}  // namespace hyperspec
