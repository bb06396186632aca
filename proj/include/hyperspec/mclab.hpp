#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperspec/processes.hpp"
#include "hyperspec/spectral.hpp"

namespace hyperspec {

/// Sample variance of a statistic across independent replicas.
struct VarianceEstimate {
  double radius = 0.0;
  double mean_count = 0.0;
  double variance = 0.0;
  /// Jackknife standard error of the variance.
  double stderr_variance = 0.0;
  int replicas = 0;
};

struct ComparisonRow {
  double radius;
  double mc_variance;
  double stderr_variance;
  double spectral_variance;
  double z_score;  // (mc - spectral) / stderr
};

struct ComparisonReport {
  std::string sampler;
  std::uint64_t base_seed = 0;
  int replicas = 0;
  std::vector<ComparisonRow> rows;
  bool pass = false;  // all |z| <= 3
};

/// Options for the replica loop. Results do not depend on the worker count.
struct ReplicaOptions {
  int workers = 0;  // 0: hardware concurrency
};

/// Sum after sorting, by pairwise recursion; independent of input order.
double sorted_pairwise_sum(std::vector<double> values);

/// Mean, unbiased variance and jackknife standard error of the variance of `values`.
VarianceEstimate summarize_replicas(const std::vector<double>& values, double radius);

/// counts[i][k]: points of replica i within radii[k]. Replica i samples one configuration from
/// stream (base_seed, i) on the window of the largest radius.
std::vector<std::vector<double>> sample_counts(const SamplerSpec& sampler, const std::vector<double>& radii,
                                               int replicas, std::uint64_t base_seed,
                                               const ReplicaOptions& options = {});

/// Number variance at each radius. Replica i samples one configuration from stream
/// (base_seed, i) on the window of the largest radius; every radius is counted on it.
std::vector<VarianceEstimate> estimate_number_variance(const SamplerSpec& sampler, const std::vector<double>& radii,
                                                       int replicas, std::uint64_t base_seed,
                                                       const ReplicaOptions& options = {});

/// Variance of S f = sum_x f(d(x, o)). The window is f's support radius unless given.
VarianceEstimate estimate_statistic_variance(const SamplerSpec& sampler, const RadialFunction& f, int replicas,
                                             std::uint64_t base_seed, double window_radius = 0.0,
                                             const ReplicaOptions& options = {});

/// Least-squares slope of log NV against log ball_volume. Needs >= 4 radii spanning a volume
/// factor >= 2 and positive variances.
double fit_variance_exponent(const std::vector<VarianceEstimate>& estimates, const Space& space);

ComparisonReport compare_mc_vs_spectral(const SamplerSpec& sampler, const SpectralMeasure& sigma,
                                        const std::vector<double>& radii, int replicas, std::uint64_t base_seed,
                                        const ReplicaOptions& options = {});

/// Report rows for precomputed estimates.
ComparisonReport compare_estimates_vs_spectral(const std::vector<VarianceEstimate>& estimates,
                                               const SpectralMeasure& sigma, const std::string& sampler_name,
                                               std::uint64_t base_seed);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Two-sample chi-square test of equal distributions for integer-valued samples. Sparse tail
/// values are pooled so every bin holds at least 10 pooled observations.
ChiSquareResult two_sample_chi_square(const std::vector<double>& a, const std::vector<double>& b);

std::string estimates_csv(const std::vector<VarianceEstimate>& estimates);
std::string report_csv(const ComparisonReport& report);
/// Summary with pass flag, seed, replica count and library version.
std::string report_json(const ComparisonReport& report);

}  // namespace hyperspec
