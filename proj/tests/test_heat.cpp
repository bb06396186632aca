#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyperspec/errors.hpp"
#include "hyperspec/heat.hpp"

using namespace hyperspec;
using std::numbers::pi;

namespace {
const Space kDisk = Space::hyperbolic_disk();
}

TEST_CASE("Euclidean Poisson heat variance is 1 / (8 pi tau) in the plane") {
  const SpectralMeasure s = poisson_spectrum(Space::euclidean(2), 1.0);
  for (double t : {0.5, 1.0, 7.0}) {
    CHECK(heat_variance(s, HeatTime(t)) == doctest::Approx(1.0 / (8.0 * pi * t)).epsilon(1e-8));
    CHECK(scaled_heat_variance(s, HeatTime(t)) == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-8));
  }
}

TEST_CASE("disk Poisson heat variance is int h^2 dm") {
  const SpectralMeasure s = poisson_spectrum(kDisk, 1.0);
  const HeatTime t(1.0);
  // Semigroup: int h_t^2 dm = h_{2t}(0).
  CHECK(heat_variance(s, t) == doctest::Approx(heat_kernel_spatial(kDisk, HeatTime(2.0), 0.0)).epsilon(1e-7));
}

TEST_CASE("heat verdicts on reference measures") {
  const auto grid = default_tau_grid();
  CHECK(grid.size() == 12);
  CHECK(grid.front() == doctest::Approx(1.0));
  CHECK(grid.back() == doctest::Approx(40.0));
  const auto gin = heat_criterion_trace(dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, 2.0 * pi, 0)), grid);
  CHECK(gin.verdict == Verdict::Hyperuniform);
  CHECK(gin.decays_to_zero);
  CHECK(gin.fitted_exponent == doctest::Approx(-1.0).epsilon(1e-2));
  CHECK(heat_criterion_trace(dpp_spectrum(kDisk, DppKernelSpec::bergman()), grid).verdict == Verdict::NotHyperuniform);
  CHECK(heat_criterion_trace(poisson_spectrum(kDisk, 1.0), grid).verdict == Verdict::NotHyperuniform);
}

TEST_CASE("heat and spectral criteria agree on synthetic measures") {
  for (double alpha : {2.5, 3.5, 4.0}) {
    CAPTURE(alpha);
    const auto r = equivalence_check(synthetic_tempered_measure(kDisk, alpha), default_tau_grid(), default_eps_grid());
    CHECK(r.agree);
    CHECK(r.heat_verdict == (alpha > 3.0 ? Verdict::Hyperuniform : Verdict::NotHyperuniform));
  }
  for (double alpha : {1.5, 2.5}) {
    CAPTURE(alpha);
    const auto r = equivalence_check(synthetic_tempered_measure(Space::euclidean(2), alpha), default_tau_grid(),
                                     default_eps_grid());
    CHECK(r.agree);
    CHECK(r.heat_verdict == (alpha > 2.0 ? Verdict::Hyperuniform : Verdict::NotHyperuniform));
  }
}

TEST_CASE("synthetic measure cumulative is eps^alpha") {
  const SpectralMeasure s = synthetic_tempered_measure(kDisk, 3.5);
  for (double e : {1e-3, 0.1, 0.7}) CHECK(principal_mass(s, e) == doctest::Approx(std::pow(e, 3.5)).epsilon(1e-6));
}

TEST_CASE("a complementary mass blows up the scaled trace") {
  SpectralMeasure s = dpp_spectrum(kDisk, DppKernelSpec::bergman());
  s.complementary.push_back({SpectralParameter::complementary(0.4), 1.0});
  const auto tr = heat_criterion_trace(s, default_tau_grid());
  CHECK(tr.verdict == Verdict::NotHyperuniform);
  CHECK(tr.rows.back().scaled_value > 1e6);
}

TEST_CASE("tau grid validation") {
  const SpectralMeasure s = poisson_spectrum(kDisk, 1.0);
  CHECK_THROWS_AS(heat_criterion_trace(s, {2.0, 1.0, 3.0, 4.0}), ValidationError);
  CHECK_THROWS_AS(heat_criterion_trace(s, {1.0, 2.0, 3.0, 60.0}), ValidationError);
  CHECK_THROWS_AS(heat_criterion_trace(s, {-1.0, 2.0, 3.0, 4.0}), ValidationError);
}

TEST_CASE("trace serialization") {
  const auto tr = heat_criterion_trace(poisson_spectrum(kDisk, 1.0), default_tau_grid());
  CHECK(heat_trace_csv(tr).find("tau") != std::string::npos);
  CHECK(heat_trace_json(tr).find("verdict") != std::string::npos);
}
