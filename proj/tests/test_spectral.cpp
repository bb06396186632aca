#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperspec/errors.hpp"
#include "hyperspec/spectral.hpp"

using namespace hyperspec;
using std::numbers::pi;

namespace {
const Space kDisk = Space::hyperbolic_disk();
}

TEST_CASE("Poisson number variance equals the ball volume") {
  for (const Space& sp : {Space::euclidean(1), Space::euclidean(2), Space::euclidean(3), kDisk}) {
    const SpectralMeasure s = poisson_spectrum(sp, 1.0);
    for (double r : {0.5, 1.0, 2.0}) {
      CHECK(variance_of_statistic(s, ball_indicator(r)) == doctest::Approx(ball_volume(sp, r)).epsilon(1e-6));
    }
  }
}

TEST_CASE("Bergman number variance matches the closed form") {
  const SpectralMeasure s = dpp_spectrum(kDisk, DppKernelSpec::bergman());
  CHECK(variance_of_statistic(s, ball_indicator(1.0)) == doctest::Approx(0.22375659028783959473).epsilon(1e-6));
  CHECK(variance_of_statistic(s, ball_indicator(2.0)) == doctest::Approx(0.87409836556238794186).epsilon(1e-6));
}

TEST_CASE("Ginibre number variance matches sum P(k+1, pi r^2)(1 - P)") {
  const SpectralMeasure s = dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, 2.0 * pi, 0));
  CHECK(variance_of_statistic(s, ball_indicator(1.0)) == doctest::Approx(0.97943841696066043238).epsilon(1e-6));
  CHECK(variance_of_statistic(s, ball_indicator(2.0)) == doctest::Approx(1.9899766749520875716).epsilon(1e-6));
  CHECK(variance_of_statistic(s, ball_indicator(4.0)) == doctest::Approx(3.9950170734892544573).epsilon(1e-6));
}

TEST_CASE("Weyl-Heisenberg kernel transforms") {
  const DppKernelSpec wh = DppKernelSpec::weyl_heisenberg(2, 1.0, 1);
  // At zeta = 0: (2 pi / |lambda|)^d binom(n + d - 1, n).
  CHECK(weyl_heisenberg_kappa_hat(1, 1.0, 0, 0.0) == doctest::Approx(2.0 * pi).epsilon(1e-10));
  CHECK(weyl_heisenberg_kappa_hat(2, 2.0, 1, 0.0) == doctest::Approx(pi * pi * 2.0).epsilon(1e-9));
  for (int n : {0, 1, 3}) {
    for (double z : {0.0, 0.2, 0.7}) {
      CHECK(weyl_heisenberg_kappa_hat(1, 2.0, n, z) == doctest::Approx(polyanalytic_kappa_hat(2.0, n, z)).epsilon(1e-8));
    }
  }
  CHECK(wh.space() == Space::euclidean(4));
}

TEST_CASE("Bergman kernel transform is |Gamma(3/2 + i lambda)|^2") {
  CHECK(bergman_kappa_hat(0.0) == doctest::Approx(pi / 4.0));
  CHECK(DppKernelSpec::bergman().kappa_hat(1.0) == doctest::Approx(0.33876868924927293486).epsilon(1e-12));
}

TEST_CASE("DPP relative density signs and the non-DPP rejection") {
  CHECK(dpp_relative_density(DppKernelSpec::weyl_heisenberg(1, pi, 0), 0.0) == doctest::Approx(-1.0));
  CHECK(dpp_relative_density(DppKernelSpec::weyl_heisenberg(1, 4.0 * pi, 0), 0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, pi, 0)), ValidationError);
  CHECK_THROWS_AS(dpp_spectrum(kDisk, DppKernelSpec::weyl_heisenberg(1, 4.0 * pi, 0)), ValidationError);
  CHECK_NOTHROW(dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, 4.0 * pi, 0)).validate());
}

TEST_CASE("Weyl-Heisenberg d = 2, n = 1 at zero frequency") {
  CHECK(DppKernelSpec::weyl_heisenberg(2, 2.0 * pi, 1).kappa_hat(0.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("Plancherel masses") {
  CHECK(plancherel_mass(Space::euclidean(2), 0.5) == doctest::Approx(pi * 0.25).epsilon(1e-12));
  CHECK(plancherel_mass(Space::euclidean(3), 0.5) == doctest::Approx(4.0 * pi / 3.0 * 0.125).epsilon(1e-12));
  // Near zero the disk density is 2 pi lambda^2.
  CHECK(plancherel_mass(kDisk, 1e-3) == doctest::Approx(2.0 * pi * 1e-9 / 3.0).epsilon(1e-5));
}

TEST_CASE("classifier verdicts") {
  const auto eps = default_eps_grid();
  const auto gin = classify_hyperuniform(dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, 2.0 * pi, 0)), eps);
  CHECK(gin.verdict == Verdict::Hyperuniform);
  const auto berg = classify_hyperuniform(dpp_spectrum(kDisk, DppKernelSpec::bergman()), eps);
  CHECK(berg.verdict == Verdict::NotHyperuniform);
  CHECK(berg.limit_estimate == doctest::Approx(1.0 - pi / 4.0).epsilon(1e-3));
  const auto poi = classify_hyperuniform(poisson_spectrum(kDisk, 1.0), eps);
  CHECK(poi.verdict == Verdict::NotHyperuniform);
  CHECK(poi.limit_estimate == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("extrapolate_limit recovers an exact power law") {
  const auto r = [](double e) { return 0.3 + 2.0 * std::pow(e, 1.5); };
  CHECK(extrapolate_limit(1e-2, r(1e-2), 1e-3, r(1e-3), 1e-4, r(1e-4)) == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("pairing matrix is symmetric and matches scalar pairings") {
  const SpectralMeasure s = dpp_spectrum(kDisk, DppKernelSpec::bergman());
  const std::vector<RadialFunction> fs = {ball_indicator(1.0), ball_indicator(2.0), gaussian_profile(kDisk, 1.0)};
  const auto m = spectral_pairing_matrix(s, fs);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = 0; j < fs.size(); ++j) {
      CHECK(m[i][j] == doctest::Approx(m[j][i]).epsilon(1e-12));
      CHECK(m[i][j] == doctest::Approx(spectral_pairing(s, fs[i], fs[j])).epsilon(1e-6));
    }
  }
}

TEST_CASE("variance is additive over superposed independent spectra") {
  // Poisson(2) = Poisson(1) + Poisson(1).
  const RadialFunction f = gaussian_profile(kDisk, 0.5);
  CHECK(variance_of_statistic(poisson_spectrum(kDisk, 2.0), f) ==
        doctest::Approx(2.0 * variance_of_statistic(poisson_spectrum(kDisk, 1.0), f)).epsilon(1e-9));
}

TEST_CASE("measure serialization round-trip") {
  const SpectralMeasure s = dpp_spectrum(kDisk, DppKernelSpec::bergman());
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(0.025 * i);
  std::ostringstream csv;
  write_measure_csv(s, grid, csv);
  std::istringstream in(csv.str());
  const SpectralMeasure back = read_measure(in, measure_metadata_json(s));
  CHECK(back.space == s.space);
  for (double p : {0.1, 1.0, 3.3, 7.5}) {
    CHECK(back.relative_density(p) == doctest::Approx(s.relative_density(p)).epsilon(2e-3));
  }
}

TEST_CASE("measure validation rejects atoms at the trivial parameter") {
  SpectralMeasure s = poisson_spectrum(kDisk, 1.0);
  s.complementary.push_back({SpectralParameter::complementary(0.5), 1.0});
  CHECK_THROWS_AS(s.validate(), ValidationError);
  SpectralMeasure t = poisson_spectrum(kDisk, 1.0);
  t.atoms.push_back({SpectralParameter::principal(1.0), -1.0});
  CHECK_THROWS_AS(t.validate(), ValidationError);
}
