#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyperspec/errors.hpp"
#include "hyperspec/sphtransform.hpp"

using namespace hyperspec;
using std::numbers::pi;

namespace {
const Space kDisk = Space::hyperbolic_disk();
SpectralParameter P(double v) { return SpectralParameter::principal(v); }
}  // namespace

TEST_CASE("disk spherical function matches reference values") {
  CHECK(spherical_function(kDisk, P(0.0), 2.0) == doctest::Approx(0.79565169560597401944).epsilon(1e-10));
  CHECK(spherical_function(kDisk, P(1.0), 2.0) == doctest::Approx(0.19728188012250963282).epsilon(1e-10));
  CHECK(spherical_function(kDisk, P(2.5), 0.7) == doctest::Approx(0.36087040602766387985).epsilon(1e-10));
  CHECK(spherical_function(kDisk, P(5.0), 3.0) == doctest::Approx(-0.0058903186269392645099).epsilon(1e-8));
  CHECK(spherical_function(kDisk, SpectralParameter::complementary(0.3), 1.5) ==
        doctest::Approx(0.91914245872334632103).epsilon(1e-10));
}

TEST_CASE("spherical functions are 1 at the origin and bounded by 1 on the principal series") {
  for (double l = 0.0; l < 6.0; l += 0.7) {
    CHECK(spherical_function(kDisk, P(l), 0.0) == doctest::Approx(1.0));
    for (double s = 0.0; s < 6.0; s += 0.9) CHECK(std::abs(spherical_function(kDisk, P(l), s)) <= 1.0 + 1e-12);
  }
  for (int d = 1; d <= 4; ++d) {
    CHECK(spherical_function(Space::euclidean(d), P(1.3), 0.0) == doctest::Approx(1.0));
  }
  // Trivial spherical function.
  CHECK(spherical_function(kDisk, SpectralParameter::complementary(0.5), 2.3) == doctest::Approx(1.0));
}

TEST_CASE("Euclidean spherical functions in closed form") {
  for (double x = 0.1; x < 10.0; x += 0.77) {
    // d = 1: cos(2 pi zeta s); d = 3: sin(x)/x.
    CHECK(spherical_function(Space::euclidean(1), P(1.0), x) == doctest::Approx(std::cos(2.0 * pi * x)).epsilon(1e-12));
    const double y = 2.0 * pi * x;
    CHECK(spherical_function(Space::euclidean(3), P(1.0), x) == doctest::Approx(std::sin(y) / y).epsilon(1e-10));
  }
}

TEST_CASE("disk spherical function solves the radial eigen-equation") {
  // omega'' + coth(s) omega' = -(1/4 + lambda^2) omega
  const double l = 1.2, h = 1e-3;
  for (double s = 0.5; s < 4.0; s += 0.5) {
    const double wm = spherical_function(kDisk, P(l), s - h);
    const double w0 = spherical_function(kDisk, P(l), s);
    const double wp = spherical_function(kDisk, P(l), s + h);
    const double d2 = (wp - 2.0 * w0 + wm) / (h * h);
    const double d1 = spherical_function_derivative(kDisk, P(l), s);
    CHECK(d1 == doctest::Approx((wp - wm) / (2.0 * h)).epsilon(1e-5));
    CHECK(d2 + d1 / std::tanh(s) == doctest::Approx(-(0.25 + l * l) * w0).epsilon(1e-4));
  }
}

TEST_CASE("Plancherel densities") {
  CHECK(plancherel_density(kDisk, P(1.0)) == doctest::Approx(1.9925441524414998885).epsilon(1e-14));
  CHECK(plancherel_density(kDisk, SpectralParameter::complementary(0.2)) == 0.0);
  CHECK(plancherel_density(Space::euclidean(3), P(2.0)) == doctest::Approx(16.0 * pi));
}

TEST_CASE("disk ball transform matches reference values and the quadrature route") {
  CHECK(ball_indicator_transform(kDisk, 1.0, P(1.0)) == doctest::Approx(0.23129068461774458781).epsilon(1e-9));
  CHECK(ball_indicator_transform(kDisk, 2.0, P(0.5)) == doctest::Approx(1.0660267787707792804).epsilon(1e-9));
  CHECK(ball_indicator_transform(kDisk, 1.5, P(3.0)) == doctest::Approx(-0.072152716674350625356).epsilon(1e-8));
  const RadialFunction b = ball_indicator(1.5);
  for (double l : {0.0, 0.4, 2.0}) {
    CHECK(spherical_transform_quadrature(kDisk, b, P(l)) ==
          doctest::Approx(ball_indicator_transform(kDisk, 1.5, P(l))).epsilon(1e-8));
  }
}

TEST_CASE("transform at the trivial parameter is the integral") {
  // Complementary s0 = 1/2 gives omega = 1, so f^ is int f dm.
  CHECK(ball_indicator_transform(kDisk, 2.0, SpectralParameter::complementary(0.5)) ==
        doctest::Approx(ball_volume(kDisk, 2.0)).epsilon(1e-9));
  CHECK(ball_indicator_transform(Space::euclidean(2), 1.0, P(0.0)) == doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("Abel factorization agrees with the defining integral for a generic profile") {
  const RadialFunction f = make_radial([](double s) { return std::exp(-s) * (1.0 + s * s); }, 40.0, false, "test");
  for (double l : {0.0, 0.8, 2.5}) {
    const double a = spherical_transform(kDisk, f, P(l));
    const double b = spherical_transform_quadrature(kDisk, f, P(l));
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
  }
}

TEST_CASE("Euclidean Gaussian transform in closed form") {
  for (int d = 1; d <= 4; ++d) {
    const Space sp = Space::euclidean(d);
    const RadialFunction g = gaussian_profile(sp, 1.0);
    for (double z : {0.0, 0.3, 1.0}) {
      const double expected = std::pow(pi, d / 2.0) * std::exp(-pi * pi * z * z);
      CHECK(spherical_transform(sp, g, P(z)) == doctest::Approx(expected).epsilon(1e-12));
      CHECK(spherical_transform_quadrature(sp, g, P(z)) == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("heat kernel: unit mass, agreement with the inverse transform, positivity") {
  const HeatTime t(1.0);
  for (double s : {0.0, 0.5, 1.0, 3.0}) {
    const double h = heat_kernel_spatial(kDisk, t, s);
    CHECK(h > 0.0);
    CHECK(h == doctest::Approx(heat_kernel_inverse_transform(t, s)).epsilon(1e-6));
  }
  CHECK(heat_kernel_spatial(kDisk, t, 60.0) >= 0.0);
  CHECK(std::isfinite(log_heat_kernel_spatial(kDisk, t, 60.0)));
  const RadialFunction hp = heat_profile(kDisk, t);
  CHECK(spherical_transform_quadrature(kDisk, hp, SpectralParameter::complementary(0.5)) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(spherical_transform_quadrature(kDisk, hp, P(1.5)) ==
        doctest::Approx(heat_kernel_transform(kDisk, t, P(1.5))).epsilon(1e-7));
  CHECK_THROWS_AS(HeatTime(0.0), ValidationError);
}

TEST_CASE("semigroup: h_t^ h_u^ = h_{t+u}^") {
  for (double l : {0.0, 0.7, 2.0}) {
    CHECK(heat_kernel_transform(kDisk, HeatTime(0.5), P(l)) * heat_kernel_transform(kDisk, HeatTime(1.5), P(l)) ==
          doctest::Approx(heat_kernel_transform(kDisk, HeatTime(2.0), P(l))).epsilon(1e-14));
  }
}

TEST_CASE("Plancherel identity and functional equation residuals are small") {
  CHECK(plancherel_identity_residual(kDisk, ball_indicator(1.0)) < 1e-5);
  CHECK(plancherel_identity_residual(Space::euclidean(2), ball_indicator(1.0)) < 1e-6);
  CHECK(functional_equation_residual(1.0, 0.5, 2.0) < 1e-8);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SpectralParameter::complementary(0.0), ValidationError);
  CHECK_THROWS_AS(SpectralParameter::complementary(0.6), ValidationError);
  CHECK_THROWS_AS(SpectralParameter::principal(-1.0), ValidationError);
  CHECK_THROWS_AS(ball_indicator(0.0), ValidationError);
}
