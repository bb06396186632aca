#include <doctest.h>

#include <cmath>

#include "hyperspec/errors.hpp"
#include "hyperspec/gaussdist.hpp"

using namespace hyperspec;

TEST_CASE("panel_from_covariance factors the covariance") {
  Eigen::MatrixXd c(3, 3);
  c << 2.0, 0.5, 0.1, 0.5, 1.0, 0.2, 0.1, 0.2, 0.5;
  const GaussianPanel p = panel_from_covariance(c);
  CHECK((p.factor * p.factor.transpose() - c).norm() < 1e-12);
  CHECK((p.factor - p.factor.transpose()).norm() < 1e-12);
}

TEST_CASE("tiny negative eigenvalues are clipped, larger ones rejected") {
  Eigen::MatrixXd c(2, 2);
  c << 1.0, 1.0, 1.0, 1.0 - 1e-13;
  const GaussianPanel p = panel_from_covariance(c);
  CHECK(p.covariance.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() >= -1e-15);
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(panel_from_covariance(bad), ValidationError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(panel_from_covariance(asym), ValidationError);
}

TEST_CASE("samples reproduce the covariance and the characteristic function") {
  Eigen::MatrixXd c(2, 2);
  c << 1.0, 0.3, 0.3, 0.5;
  const GaussianPanel p = panel_from_covariance(c);
  RngStream rng(3, 0);
  const Eigen::MatrixXd x = sample_gaussian_statistics(p, 40000, rng);
  CHECK(x.rows() == 40000);
  CHECK(x.cols() == 2);
  const Eigen::MatrixXd emp = x.transpose() * x / 40000.0;
  CHECK((emp - c).cwiseAbs().maxCoeff() < 0.03);
  CHECK(characteristic_residual(p, 0, x) < 0.02);
  CHECK(characteristic_residual(p, 1, x) < 0.02);
}

TEST_CASE("spectral covariance diagonal matches variance_of_statistic") {
  const Space sp = Space::hyperbolic_disk();
  const SpectralMeasure s = dpp_spectrum(sp, DppKernelSpec::bergman());
  const std::vector<RadialFunction> fs = {ball_indicator(1.0), gaussian_profile(sp, 2.0)};
  const GaussianPanel p = gaussian_covariance(s, fs);
  for (int i = 0; i < 2; ++i) {
    CHECK(p.covariance(i, i) == doctest::Approx(variance_of_statistic(s, fs[static_cast<std::size_t>(i)])).epsilon(1e-6));
  }
  CHECK(p.covariance(0, 1) == doctest::Approx(p.covariance(1, 0)));
  CHECK(panel_json(p).find("covariance") != std::string::npos);
}

TEST_CASE("samples_csv has a header and one row per replica") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  const std::string csv = samples_csv(x);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
