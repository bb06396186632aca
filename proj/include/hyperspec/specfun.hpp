#pragma once

#include <complex>

namespace hyperspec::specfun {

/// Absolute/relative tolerance pair used by numerical routines throughout the library.
struct Accuracy {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;

  /// Throws ValidationError unless both tolerances are strictly positive.
  void validate() const;
};

/// Principal-branch log Gamma for Re z > 0 (Lanczos, g = 7, nine terms).
/// Throws DomainError for Re z <= 0.
std::complex<double> ln_gamma_complex(std::complex<double> z);

/// Generalized Laguerre polynomial L_n^(alpha)(x) by the three-term recurrence.
double laguerre(int n, double alpha, double x);

/// Bessel function of the first kind J_nu(x), integer nu >= 0, x >= 0.
/// Power series below x = 12, normalized backward (Miller) recurrence above.
double bessel_j(int nu, double x);

/// |Gamma(3/2 + i lambda)|^2, evaluated through ln_gamma_complex.
double gamma_abs2_three_half(double lambda);

}  // namespace hyperspec::specfun
