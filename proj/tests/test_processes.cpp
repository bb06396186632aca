#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "hyperspec/errors.hpp"
#include "hyperspec/mclab.hpp"
#include "hyperspec/processes.hpp"

using namespace hyperspec;
using std::numbers::pi;

namespace {
const Space kDisk = Space::hyperbolic_disk();

// |mc - expected| within 4 standard errors.
void check_within(double mc, double expected, double stderr_value) {
  CAPTURE(mc);
  CAPTURE(expected);
  CAPTURE(stderr_value);
  CHECK(std::abs(mc - expected) <= 4.0 * stderr_value);
}
}  // namespace

TEST_CASE("Poisson counts have mean and variance equal to the volume") {
  for (const Space& sp : {Space::euclidean(1), Space::euclidean(3), kDisk}) {
    const auto est = estimate_number_variance(poisson_sampler(sp, 1.0), {1.0, 2.0}, 4000, 3);
    for (const auto& e : est) {
      const double v = ball_volume(sp, e.radius);
      check_within(e.mean_count, v, std::sqrt(v / e.replicas));
      check_within(e.variance, v, e.stderr_variance);
    }
  }
}

TEST_CASE("Poisson points lie in the window") {
  RngStream rng(5, 0);
  const Window w(kDisk, 3.0);
  const auto c = sample_poisson(kDisk, 1.0, w, rng);
  for (const auto& p : c.points) CHECK(distance_from_origin(kDisk, p) <= 3.0);
  CHECK(c.count_within(3.0) == c.points.size());
  CHECK_THROWS_AS(c.count_within(3.5), ValidationError);
}

TEST_CASE("restricted Ginibre number variance matches the finite-n closed form") {
  const int n = 64;
  const double r = 2.0;
  const double x = pi * r * r;
  double mean = 0.0, var = 0.0;
  for (int k = 0; k < n; ++k) {
    const double p = boost::math::gamma_p(k + 1.0, x);
    mean += p;
    var += p * (1.0 - p);
  }
  const auto est = estimate_number_variance(ginibre_sampler(n), {r}, 3000, 11);
  check_within(est[0].mean_count, mean, std::sqrt(var / est[0].replicas));
  check_within(est[0].variance, var, est[0].stderr_variance);
}

TEST_CASE("restricted and dense Ginibre samplers have the same count law") {
  const auto a = sample_counts(ginibre_sampler(24, GinibreMethod::Restricted), {1.5}, 800, 21);
  const auto b = sample_counts(ginibre_sampler(24, GinibreMethod::Dense), {1.5}, 800, 22);
  std::vector<double> ca, cb;
  for (const auto& row : a) ca.push_back(row[0]);
  for (const auto& row : b) cb.push_back(row[0]);
  CHECK(two_sample_chi_square(ca, cb).p_value > 1e-3);
}

TEST_CASE("Ginibre window limit") {
  RngStream rng(1, 0);
  CHECK_THROWS_AS(sample_ginibre(16, Window(Space::euclidean(2), 3.0), rng), ValidationError);
  CHECK_THROWS_AS(sample_ginibre(16, Window(kDisk, 1.0), rng), ValidationError);
}

TEST_CASE("GAF zeros and the Bergman DPP match the Bergman spectral variance") {
  const double exact = 0.22375659028783959473;
  const double mean = std::pow(std::sinh(0.5), 2);
  for (const SamplerSpec& s : {gaf_sampler(), bergman_sampler()}) {
    CAPTURE(s.name);
    const auto est = estimate_number_variance(s, {1.0}, 4000, 13);
    check_within(est[0].mean_count, mean, std::sqrt(exact / est[0].replicas));
    check_within(est[0].variance, exact, est[0].stderr_variance);
  }
}

TEST_CASE("GAF coefficient variances") {
  RngStream rng(9, 0);
  const int reps = 4000;
  std::vector<double> m(4, 0.0);
  for (int i = 0; i < reps; ++i) {
    const auto c = gaf_coefficients(2.0, 3, rng);
    for (int k = 0; k < 4; ++k) m[static_cast<std::size_t>(k)] += std::norm(c[static_cast<std::size_t>(k)]) / reps;
  }
  // Gamma(2 + n) / (n! Gamma(2)) = n + 1.
  for (int k = 0; k < 4; ++k) CHECK(m[static_cast<std::size_t>(k)] == doctest::Approx(k + 1.0).epsilon(0.08));
}

TEST_CASE("truncation helpers") {
  const Window w(kDisk, 2.0);
  const double rho2 = std::pow(std::tanh(1.0), 2);
  const int n = gaf_minimum_truncation(w);
  CHECK(std::pow(rho2, n + 1) / (1.0 - rho2) < 1e-12);
  CHECK(std::pow(rho2, n) / (1.0 - rho2) >= 1e-12);
  const int m = bergman_minimum_modes(w);
  CHECK(std::pow(rho2, m) < 1e-12);
  CHECK(std::pow(rho2, m - 1) >= 1e-12);
}

TEST_CASE("samplers are pure functions of their stream") {
  for (const SamplerSpec& s : {poisson_sampler(kDisk, 1.0), gaf_sampler(), bergman_sampler()}) {
    const Window w(kDisk, 2.0);
    RngStream a(42, 7), b(42, 7);
    const auto ca = s.sample(w, a);
    const auto cb = s.sample(w, b);
    CHECK(configuration_csv(ca) == configuration_csv(cb));
    CHECK(configuration_provenance_json(ca) == configuration_provenance_json(cb));
  }
  RngStream a(42, 7), b(42, 7);
  const Window w(Space::euclidean(2), 3.0);
  CHECK(configuration_csv(sample_ginibre(128, w, a)) == configuration_csv(sample_ginibre(128, w, b)));
}
