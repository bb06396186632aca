#include "hyperspec/heat.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "json.hpp"

#include "hyperspec/errors.hpp"
#include "hyperspec/quadrature.hpp"
#include "hyperspec/version.hpp"

namespace hyperspec {

using std::numbers::pi;

namespace {

// Coefficient k in h^_tau(p)^2 = exp(-k tau p^2) (times e^{-tau/2} on the disk).
double decay_rate(const Space& space) { return space.is_hyperbolic() ? 2.0 : 8.0 * pi * pi; }

// int exp(-k tau p^2) dsigma over the principal part and principal atoms.
double principal_heat_integral(const SpectralMeasure& sigma, double tau) {
  const double k = decay_rate(sigma.space) * tau;
  double total = 0.0;
  if (sigma.mass_density) {
    // exp(-k p^2) < e^{-50} beyond pmax
    const double pmax = std::sqrt(50.0 / k);
    std::vector<double> br = quad::uniform_breaks(0.0, pmax, pmax / 16.0);
    for (double b : sigma.breakpoints) {
      if (b > 0.0 && b < pmax) br.push_back(b);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    quad::Options opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-12;
    opts.max_intervals = 20000;
    const auto& density = sigma.mass_density;
    total = quad::integrate_checked([&](double p) { return std::exp(-k * p * p) * density(p); }, br, opts,
                                    "heat_variance");
  }
  for (const auto& a : sigma.atoms) total += a.mass * std::exp(-k * a.parameter.value * a.parameter.value);
  return total;
}

void check_tau_grid(const std::vector<double>& grid) {
  if (grid.size() < 3) throw ValidationError("heat_criterion_trace: tau grid needs at least 3 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || grid[i] > 50.0) throw ValidationError("heat_criterion_trace: tau must lie in (0, 50]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("heat_criterion_trace: tau grid must increase");
  }
}

std::string fmt(double x) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << std::setprecision(17) << x;
  return o.str();
}

}  // namespace

double heat_variance(const SpectralMeasure& sigma, HeatTime tau) {
  const double t = tau.tau;
  const double principal = principal_heat_integral(sigma, t);
  if (!sigma.space.is_hyperbolic()) return principal;
  double total = std::exp(-0.5 * t) * principal;
  for (const auto& c : sigma.complementary) {
    const double s0 = c.parameter.value;
    total += c.mass * std::exp(-2.0 * t * (0.25 - s0 * s0));
  }
  return total;
}

double scaled_heat_variance(const SpectralMeasure& sigma, HeatTime tau) {
  const double t = tau.tau;
  const double principal = principal_heat_integral(sigma, t);
  if (!sigma.space.is_hyperbolic()) return std::pow(t, 0.5 * sigma.space.dimension()) * principal;
  double total = principal;
  for (const auto& c : sigma.complementary) {
    const double s0 = c.parameter.value;
    total += c.mass * std::exp(2.0 * t * s0 * s0);
  }
  return std::pow(t, 1.5) * total;
}

std::vector<double> default_tau_grid() {
  std::vector<double> g;
  const int n = 12;
  for (int i = 0; i < n; ++i) g.push_back(std::exp(std::log(40.0) * i / (n - 1)));
  g.back() = 40.0;
  return g;
}

HeatCriterionTrace heat_criterion_trace(const SpectralMeasure& sigma, const std::vector<double>& tau_grid) {
  check_tau_grid(tau_grid);
  HeatCriterionTrace trace;
  trace.scaling = sigma.space.is_hyperbolic() ? "tau^{3/2} e^{tau/2} Var(S h_tau)"
                                              : "tau^{" + std::to_string(sigma.space.dimension()) + "/2} Var(S h_tau)";
  for (double t : tau_grid) {
    const HeatTime tau(t);
    trace.rows.push_back({t, heat_variance(sigma, tau), scaled_heat_variance(sigma, tau)});
  }
  const std::size_t n = trace.rows.size();
  const double first = trace.rows.front().scaled_value;
  const double a = trace.rows[n - 3].scaled_value, b = trace.rows[n - 2].scaled_value,
               c = trace.rows[n - 1].scaled_value;
  trace.decays_to_zero = a > b && b > c && c < first;

  const bool all_zero =
      std::all_of(trace.rows.begin(), trace.rows.end(), [](const HeatTraceRow& r) { return r.scaled_value == 0.0; });
  if (all_zero) {
    trace.fitted_exponent = -std::numeric_limits<double>::infinity();
    trace.verdict = Verdict::Hyperuniform;
    return trace;
  }
  const bool positive =
      std::all_of(trace.rows.begin(), trace.rows.end(), [](const HeatTraceRow& r) { return r.scaled_value > 0.0; });
  if (!positive) {
    trace.verdict = Verdict::Inconclusive;
    return trace;
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    design(k, 0) = 1.0;
    design(k, 1) = std::log(trace.rows[i].tau);
    design(k, 2) = 1.0 / trace.rows[i].tau;
    y(k) = std::log(trace.rows[i].scaled_value);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(y);
  trace.fitted_exponent = coef(1);
  if (sigma.complementary_mass() > 0.0 || trace.fitted_exponent > kHeatNotHyperuniformSlope) {
    trace.verdict = Verdict::NotHyperuniform;
  } else if (trace.fitted_exponent < kHeatHyperuniformSlope) {
    trace.verdict = Verdict::Hyperuniform;
  } else {
    trace.verdict = Verdict::Inconclusive;
  }
  return trace;
}

SpectralMeasure synthetic_tempered_measure(const Space& space, double alpha, double cutoff) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("synthetic_tempered_measure: alpha must be > 0");
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw ValidationError("synthetic_tempered_measure: cutoff must be > 0");
  const double pl_c = plancherel_density(space, SpectralParameter::principal(cutoff));
  const double rel_c = alpha * std::pow(cutoff, alpha - 1.0) / pl_c;
  auto mass = [space, alpha, cutoff, rel_c](double p) {
    if (p <= 0.0) return alpha < 1.0 ? std::numeric_limits<double>::infinity() : (alpha == 1.0 ? 1.0 : 0.0);
    if (p <= cutoff) return alpha * std::pow(p, alpha - 1.0);
    return rel_c * plancherel_density(space, SpectralParameter::principal(p));
  };
  std::ostringstream kind;
  kind.imbue(std::locale::classic());
  kind << "synthetic(alpha=" << std::setprecision(17) << alpha << ",cutoff=" << cutoff << ")";
  SpectralMeasure m = SpectralMeasure::from_mass_density(space, mass, rel_c, kind.str());
  const double pm_c = plancherel_mass(space, cutoff);
  m.cumulative = [space, alpha, cutoff, rel_c, pm_c](double eps) {
    if (eps <= cutoff) return std::pow(eps, alpha);
    return std::pow(cutoff, alpha) + rel_c * (plancherel_mass(space, eps) - pm_c);
  };
  m.breakpoints = {cutoff};
  m.convention_note = "sigma((0, eps]) = eps^alpha up to the cutoff, then constant density relative to Plancherel";
  return m;
}

EquivalenceResult equivalence_check(const SpectralMeasure& sigma, const std::vector<double>& tau_grid,
                                    const std::vector<double>& eps_grid) {
  EquivalenceResult r;
  r.spectral = classify_hyperuniform(sigma, eps_grid);
  r.heat = heat_criterion_trace(sigma, tau_grid);
  r.spectral_verdict = r.spectral.verdict;
  r.heat_verdict = r.heat.verdict;
  r.agree = r.spectral_verdict == r.heat_verdict && r.spectral_verdict != Verdict::Inconclusive;
  return r;
}

std::string heat_trace_csv(const HeatCriterionTrace& trace) {
  std::string s = "tau,raw_variance,scaled_value\n";
  for (const auto& r : trace.rows) s += fmt(r.tau) + ',' + fmt(r.raw_variance) + ',' + fmt(r.scaled_value) + '\n';
  return s;
}

std::string heat_trace_json(const HeatCriterionTrace& trace) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["scaling"] = trace.scaling;
  j["fitted_exponent"] = trace.fitted_exponent;
  j["decays_to_zero"] = trace.decays_to_zero;
  j["verdict"] = to_string(trace.verdict);
  return j.dump(2);
}

}  // namespace hyperspec
