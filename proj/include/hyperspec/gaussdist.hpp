#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperspec/rng.hpp"
#include "hyperspec/spectral.hpp"

namespace hyperspec {

/// Finite-dimensional marginal of the invariant Gaussian random distribution with spectral
/// measure sigma: the joint law of (S f_1, ..., S f_k) for a panel of radial test functions.
struct GaussianPanel {
  Space space = Space::euclidean(1);
  std::vector<RadialFunction> test_functions;
  /// covariance(i, j) = int f_i^ f_j^ dsigma; symmetric, eigenvalues clipped at 0.
  Eigen::MatrixXd covariance;
  /// Symmetric square-root factor: covariance = factor factor^T.
  Eigen::MatrixXd factor;
  std::string sigma_kind;
};

/// Panel from an explicit covariance. Eigenvalues down to -1e-10 max(1, |largest|) are
/// clipped to 0; anything more negative is rejected with ValidationError.
GaussianPanel panel_from_covariance(const Eigen::MatrixXd& covariance, Space space = Space::euclidean(1));

GaussianPanel gaussian_covariance(const SpectralMeasure& sigma, const std::vector<RadialFunction>& fs);

/// replicas x k matrix of centered Gaussian vectors with the panel covariance.
Eigen::MatrixXd sample_gaussian_statistics(const GaussianPanel& panel, int replicas, RngStream& rng);

/// |mean(exp(i x)) - exp(-covariance(f, f) / 2)| over the samples of column f_index.
double characteristic_residual(const GaussianPanel& panel, int f_index, const Eigen::MatrixXd& samples);

/// Samples as CSV, one column per test function.
std::string samples_csv(const Eigen::MatrixXd& samples);
/// Test-function descriptions and covariance as JSON.
std::string panel_json(const GaussianPanel& panel);

}  // namespace hyperspec
