#pragma once

#include <string>
#include <vector>

#include "hyperspec/spectral.hpp"

namespace hyperspec {

struct HeatTraceRow {
  double tau;
  double raw_variance;
  double scaled_value;
};

/// Scaled heat variances over a tau grid. Prefactor tau^{d/2} (Euclidean) or
/// tau^{3/2} e^{tau/2} (disk).
struct HeatCriterionTrace {
  std::vector<HeatTraceRow> rows;
  std::string scaling;
  /// The last three scaled values decrease and lie below the first.
  bool decays_to_zero = false;
  /// b in the fit log(scaled) = a + b log tau + c / tau.
  double fitted_exponent = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Exponent thresholds of the heat verdict: b < -0.1 is hyperuniform, b > -0.05 is not.
inline constexpr double kHeatHyperuniformSlope = -0.1;
inline constexpr double kHeatNotHyperuniformSlope = -0.05;

/// int h^_tau(p)^2 dsigma(p): principal part, principal atoms and complementary masses.
/// h^_tau is exp(-4 pi^2 tau zeta^2) (Euclidean) or exp(-tau (1/4 + lambda^2)) (disk).
double heat_variance(const SpectralMeasure& sigma, HeatTime tau);

/// prefactor(tau) heat_variance(sigma, tau), evaluated without forming e^{tau/2} separately.
double scaled_heat_variance(const SpectralMeasure& sigma, HeatTime tau);

/// Geometric grid of 12 heat times from 1 to 40.
std::vector<double> default_tau_grid();

/// tau_grid must be increasing, positive and <= 50.
HeatCriterionTrace heat_criterion_trace(const SpectralMeasure& sigma, const std::vector<double>& tau_grid);

/// Principal part with sigma((0, eps]) = eps^alpha for eps <= cutoff, and constant density
/// relative to Plancherel (continuous at the cutoff) beyond it.
SpectralMeasure synthetic_tempered_measure(const Space& space, double alpha, double cutoff = 1.0);

struct EquivalenceResult {
  Verdict spectral_verdict = Verdict::Inconclusive;
  Verdict heat_verdict = Verdict::Inconclusive;
  /// Both verdicts identical and neither Inconclusive.
  bool agree = false;
  HyperuniformityVerdict spectral;
  HeatCriterionTrace heat;
};

EquivalenceResult equivalence_check(const SpectralMeasure& sigma, const std::vector<double>& tau_grid,
                                    const std::vector<double>& eps_grid);

/// CSV rows (tau, raw_variance, scaled_value).
std::string heat_trace_csv(const HeatCriterionTrace& trace);
/// JSON header with the scaling convention, fitted exponent and verdict.
std::string heat_trace_json(const HeatCriterionTrace& trace);

}  // namespace hyperspec
