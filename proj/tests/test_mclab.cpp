#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hyperspec/errors.hpp"
#include "hyperspec/mclab.hpp"

using namespace hyperspec;
using std::numbers::pi;

TEST_CASE("sorted_pairwise_sum is independent of input order") {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back(std::sin(i * 1.7) * std::pow(10.0, (i % 7) - 3));
  const double s0 = sorted_pairwise_sum(v);
  std::mt19937 g(1);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(v.begin(), v.end(), g);
    CHECK(sorted_pairwise_sum(v) == s0);
  }
}

TEST_CASE("summarize_replicas") {
  const auto e = summarize_replicas({1.0, 2.0, 3.0, 4.0}, 1.5);
  CHECK(e.radius == 1.5);
  CHECK(e.mean_count == doctest::Approx(2.5));
  CHECK(e.variance == doctest::Approx(5.0 / 3.0));
  CHECK(e.replicas == 4);
  CHECK(e.stderr_variance > 0.0);
  const auto c = summarize_replicas(std::vector<double>(10, 3.0), 1.0);
  CHECK(c.variance == 0.0);
  CHECK(c.stderr_variance == 0.0);
  CHECK_THROWS_AS(summarize_replicas({1.0}, 1.0), ValidationError);
}

TEST_CASE("jackknife standard error tracks the spread of the variance") {
  // Normal samples: sd(variance) ~ sqrt(2 / (n - 1)).
  std::mt19937_64 g(3);
  std::normal_distribution<double> nd;
  std::vector<double> v(4000);
  for (auto& x : v) x = nd(g);
  const auto e = summarize_replicas(v, 1.0);
  CHECK(e.stderr_variance == doctest::Approx(std::sqrt(2.0 / 3999.0)).epsilon(0.15));
}

TEST_CASE("estimates do not depend on the worker count") {
  const SamplerSpec s = poisson_sampler(Space::euclidean(2), 1.0);
  const auto a = estimate_number_variance(s, {1.0, 2.0}, 300, 17, {1});
  const auto b = estimate_number_variance(s, {1.0, 2.0}, 300, 17, {5});
  CHECK(estimates_csv(a) == estimates_csv(b));
}

TEST_CASE("fit_variance_exponent") {
  const Space sp = Space::euclidean(2);
  std::vector<VarianceEstimate> est;
  for (double r : {1.0, 2.0, 3.0, 4.0}) {
    VarianceEstimate e;
    e.radius = r;
    e.variance = 3.0 * std::pow(ball_volume(sp, r), 0.5);
    e.replicas = 100;
    est.push_back(e);
  }
  CHECK(fit_variance_exponent(est, sp) == doctest::Approx(0.5).epsilon(1e-12));
  auto three = est;
  three.pop_back();
  CHECK_THROWS_AS(fit_variance_exponent(three, sp), ValidationError);
  auto bad = est;
  bad[1].variance = 0.0;
  CHECK_THROWS_AS(fit_variance_exponent(bad, sp), ValidationError);
}

TEST_CASE("two-sample chi-square") {
  std::mt19937_64 g(5);
  std::poisson_distribution<int> p5(5.0), p7(7.0);
  std::vector<double> a, b, c;
  for (int i = 0; i < 2000; ++i) {
    a.push_back(p5(g));
    b.push_back(p5(g));
    c.push_back(p7(g));
  }
  const auto same = two_sample_chi_square(a, b);
  CHECK(same.p_value > 1e-3);
  CHECK(same.degrees_of_freedom > 0);
  CHECK(two_sample_chi_square(a, c).p_value < 1e-10);
}

TEST_CASE("Poisson MC agrees with the spectral prediction") {
  const Space sp = Space::hyperbolic_disk();
  const auto rep = compare_mc_vs_spectral(poisson_sampler(sp, 1.0), poisson_spectrum(sp, 1.0), {0.5, 1.0, 2.0}, 2000, 8);
  CHECK(rep.pass);
  CHECK(rep.rows.size() == 3);
  CHECK(report_json(rep).find("\"pass\"") != std::string::npos);
  CHECK(report_csv(rep).find("radius") != std::string::npos);
}

TEST_CASE("statistic variance for a smooth test function") {
  const Space sp = Space::euclidean(2);
  const RadialFunction f = gaussian_profile(sp, 1.0);
  // Poisson: Var = int f^2 = pi / 2.
  const auto e = estimate_statistic_variance(poisson_sampler(sp, 1.0), f, 4000, 2);
  CHECK(std::abs(e.variance - pi / 2.0) <= 4.0 * e.stderr_variance);
}
