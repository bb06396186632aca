#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hyperspec/geometry.hpp"
#include "hyperspec/rng.hpp"

namespace hyperspec {

struct Provenance {
  std::string sampler;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::map<std::string, double> parameters;  // truncation and model parameters
};

/// One sample of a point process restricted to a window.
struct PointConfiguration {
  Space space;
  std::vector<Point> points;
  Window window;
  Provenance provenance;

  /// Number of points at geodesic distance <= r from the origin.
  std::size_t count_within(double r) const;
};

/// CSV with one point per row (x1..xd, or re,im for the disk).
std::string configuration_csv(const PointConfiguration& config);
/// JSON sidecar with the provenance and window.
std::string configuration_provenance_json(const PointConfiguration& config);

PointConfiguration sample_poisson(const Space& space, double intensity, const Window& window, RngStream& rng);

enum class GinibreMethod {
  /// Exact sampling of the finite ensemble restricted to the window: the restricted kernel is
  /// diagonal in z^k with eigenvalues P(k+1, pi r^2), followed by sequential projection sampling.
  Restricted,
  /// Eigenvalues of a dense n x n complex Gaussian matrix.
  Dense,
};

/// Eigenvalues of an n x n matrix of standard complex Gaussians scaled by 1/sqrt(pi) (unit
/// bulk intensity), restricted to the window. The window radius must be <= 0.8 sqrt(n/pi).
PointConfiguration sample_ginibre(int n_matrix, const Window& window, RngStream& rng,
                                  GinibreMethod method = GinibreMethod::Restricted);

/// Coefficients (Gamma(t+n)/(n! Gamma(t)))^{1/2} a_n, n = 0..truncation, of the hyperbolic GAF F_t.
std::vector<std::complex<double>> gaf_coefficients(double t, int truncation, RngStream& rng);

/// Smallest truncation N with rho^{2(N+1)} / (1 - rho^2) < 1e-12 at rho = tanh(R/2).
int gaf_minimum_truncation(const Window& window);

/// Zeros of F_1 truncated at degree N inside the window: companion-matrix eigenvalues, each
/// refined by Newton iteration to relative residual < 1e-10.
PointConfiguration sample_gaf_zeros(int truncation, const Window& window, RngStream& rng);

/// Smallest M with rho^{2M} < 1e-12.
int bergman_minimum_modes(const Window& window);

/// Bergman DPP restricted to the window: mode k in {1..M} (function z^{k-1}) is kept with
/// probability rho^{2k}, then points are drawn sequentially from the projection kernel.
PointConfiguration sample_bergman_dpp(const Window& window, int mode_cap, RngStream& rng);

/// Named sampler with fixed parameters: a pure function of its stream.
struct SamplerSpec {
  std::string name;
  Space space;
  std::function<PointConfiguration(const Window&, RngStream&)> sample;
  /// Largest admissible window radius (infinity if unrestricted).
  double max_radius;
};

SamplerSpec poisson_sampler(const Space& space, double intensity);
SamplerSpec ginibre_sampler(int n_matrix, GinibreMethod method = GinibreMethod::Restricted);
/// Truncation chosen per window by gaf_minimum_truncation.
SamplerSpec gaf_sampler();
/// Mode cap chosen per window by bergman_minimum_modes.
SamplerSpec bergman_sampler();

}  // namespace hyperspec
