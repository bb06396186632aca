#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hyperspec::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
  int evaluations = 0;
};

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  /// Tolerance relative to int |f|; for oscillatory integrands whose value may cancel far below their scale.
  double l1_rel_tol = 0.0;
  int max_intervals = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod integration over the panels defined by
/// consecutive entries of `breakpoints` (at least two, increasing). Bisects the panel
/// with the largest error estimate until the total error meets the tolerance.
Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const Options& opts = {});

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opts = {});

/// Same as `integrate`, but throws NumericError when the tolerance is not met.
double integrate_checked(const std::function<double(double)>& f, std::span<const double> breakpoints,
                         const Options& opts, const char* what);

/// Uniform breakpoints a, a+w, ..., b with panel width at most `max_width`.
std::vector<double> uniform_breaks(double a, double b, double max_width);

}  // namespace hyperspec::quad
