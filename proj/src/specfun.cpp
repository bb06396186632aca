#include "hyperspec/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "hyperspec/errors.hpp"

namespace hyperspec::specfun {

void Accuracy::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw ValidationError("Accuracy: abs_tol and rel_tol must be strictly positive");
  }
}

namespace {

// Lanczos coefficients for g = 7, n = 9. Accurate to ~1e-15 relative on Re z >= 1/2.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

std::complex<double> ln_gamma_complex(std::complex<double> z) {
  if (!(z.real() > 0.0)) {
    throw DomainError("ln_gamma_complex: requires Re z > 0");
  }
  // Re z in (0, 1/2): shift up once with Gamma(z) = Gamma(z + 1) / z.
  if (z.real() < 0.5) {
    return ln_gamma_complex(z + 1.0) - std::log(z);
  }
  const std::complex<double> zm = z - 1.0;
  std::complex<double> series = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) {
    series += kLanczos[k] / (zm + static_cast<double>(k));
  }
  const std::complex<double> t = zm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (zm + 0.5) * std::log(t) - t + std::log(series);
}

double laguerre(int n, double alpha, double x) {
  if (n < 0) {
    throw ValidationError("laguerre: degree must be nonnegative");
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

double bessel_series(int nu, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  // First term (x/2)^nu / nu!
  double term = 1.0;
  for (int k = 1; k <= nu; ++k) term *= half / k;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's algorithm: recur downward from a start order far above max(nu, x),
// then normalize with J_0 + 2 sum_k J_2k = 1.
double bessel_miller(int nu, double x) {
  const double top = std::max(static_cast<double>(nu), x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(60.0 * top));
  if (start % 2 == 1) ++start;
  constexpr double kRescale = 1e250;
  double jp1 = 0.0;
  double j = 1e-300;
  double norm = 0.0;
  double result = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k > 0; --k) {
    const double jm1 = k * two_over_x * j - jp1;
    jp1 = j;
    j = jm1;
    // j now holds the (unnormalized) value of J_{k-1}
    if (std::abs(j) > kRescale) {
      j /= kRescale;
      jp1 /= kRescale;
      norm /= kRescale;
      result /= kRescale;
    }
    if (k - 1 == nu) result = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
  }
  norm += j;  // J_0 term
  return result / norm;
}

}  // namespace

double bessel_j(int nu, double x) {
  if (nu < 0) throw ValidationError("bessel_j: order must be nonnegative");
  if (x < 0.0) throw ValidationError("bessel_j: argument must be nonnegative");
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  if (x < 12.0) return bessel_series(nu, x);
  return bessel_miller(nu, x);
}

double gamma_abs2_three_half(double lambda) {
  const std::complex<double> lg = ln_gamma_complex({1.5, lambda});
  return std::exp(2.0 * lg.real());
}

}  // namespace hyperspec::specfun
