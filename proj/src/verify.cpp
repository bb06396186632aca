#include "hyperspec/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

#include "hyperspec/errors.hpp"
#include "hyperspec/gaussdist.hpp"
#include "hyperspec/heat.hpp"
#include "hyperspec/mclab.hpp"
#include "hyperspec/processes.hpp"
#include "hyperspec/spectral.hpp"
#include "hyperspec/sphtransform.hpp"
#include "hyperspec/version.hpp"

namespace hyperspec {

using std::numbers::pi;
using json = nlohmann::ordered_json;

namespace {

constexpr double kNoBudget = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << std::setprecision(17) << x;
  return o.str();
}

std::string short_fmt(double x) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << std::setprecision(4) << x;
  return o.str();
}

// Rows of comma-joined cells with a header.
class Csv {
 public:
  explicit Csv(std::string header) : text_(std::move(header) + '\n') {}
  Csv& row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
    return *this;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

std::string b(bool v) { return v ? "true" : "false"; }

void finish(CriterionResult& r, json& j) {
  j["criterion"] = r.id;
  j["title"] = r.title;
  j["numeric_pass"] = r.numeric_pass;
  r.artifacts.emplace_back("criterion" + std::to_string(r.id) + ".json", j.dump(2) + "\n");
}

// 1. Plancherel identity on five profiles per space.
void plancherel(CriterionResult& r) {
  r.title = "Plancherel identity";
  r.budget_seconds = 30.0;
  struct Case {
    Space space;
    RadialFunction f;
    double tol;
  };
  std::vector<Case> cases;
  for (int d = 1; d <= 4; ++d) {
    const Space e = Space::euclidean(d);
    for (RadialFunction f : {ball_indicator(0.5), ball_indicator(1.0), ball_indicator(2.0), gaussian_profile(e, 1.0),
                             heat_profile(e, HeatTime(0.05))}) {
      cases.push_back({e, f, 1e-6});
    }
  }
  const Space disk = Space::hyperbolic_disk();
  for (RadialFunction f : {gaussian_profile(disk, 1.0), ball_indicator(1.0), ball_indicator(2.0),
                           heat_profile(disk, HeatTime(1.0)), heat_profile(disk, HeatTime(0.5))}) {
    cases.push_back({disk, f, 1e-5});
  }
  Csv csv("space,profile,residual,tolerance,pass");
  bool pass = true;
  double worst_e = 0.0, worst_h = 0.0;
  for (const auto& c : cases) {
    const double res = plancherel_identity_residual(c.space, c.f);
    const bool ok = res <= c.tol;
    pass = pass && ok;
    (c.space.is_hyperbolic() ? worst_h : worst_e) = std::max(c.space.is_hyperbolic() ? worst_h : worst_e, res);
    csv.row({c.space.name(), c.f.description, fmt(res), fmt(c.tol), b(ok)});
  }
  r.numeric_pass = pass;
  r.summary = "max residual Euclidean " + short_fmt(worst_e) + " (tol 1e-6), disk " + short_fmt(worst_h) +
              " (tol 1e-5), " + std::to_string(cases.size()) + " profiles";
  json j;
  j["max_residual_euclidean"] = worst_e;
  j["max_residual_disk"] = worst_h;
  r.artifacts.emplace_back("criterion1_plancherel.csv", csv.str());
  finish(r, j);
}

// 2. Spherical functional equation on a 5 x 5 x 5 grid.
void functional_equation(CriterionResult& r) {
  r.title = "Spherical functional equation";
  r.budget_seconds = 60.0;
  const double lambdas[] = {0.0, 0.5, 1.0, 2.0, 4.0};
  const double radii[] = {0.25, 0.5, 1.0, 2.0, 3.0};
  Csv csv("lambda,s,t,residual");
  double worst = 0.0;
  for (double l : lambdas) {
    for (double s : radii) {
      for (double t : radii) {
        const double res = functional_equation_residual(l, s, t);
        worst = std::max(worst, res);
        csv.row({fmt(l), fmt(s), fmt(t), fmt(res)});
      }
    }
  }
  r.numeric_pass = worst <= 1e-6;
  r.summary = "max residual " + short_fmt(worst) + " over 125 points (tol 1e-6)";
  json j;
  j["max_residual"] = worst;
  r.artifacts.emplace_back("criterion2_functional_equation.csv", csv.str());
  finish(r, j);
}

// 3. Heat transform pairs and the spatial envelope.
void heat_transform(CriterionResult& r) {
  r.title = "Heat transform";
  r.budget_seconds = kNoBudget;
  const Space disk = Space::hyperbolic_disk();
  Csv csv("space,tau,parameter,transform,closed_form,abs_error");
  double worst_disk = 0.0;
  for (double tau : {0.5, 1.0, 2.0}) {
    const RadialFunction h = heat_profile(disk, HeatTime(tau));
    for (int i = 0; i <= 10; ++i) {
      const double l = 0.5 * i;
      const double v = spherical_transform_quadrature(disk, h, SpectralParameter::principal(l));
      const double exact = std::exp(-tau * (0.25 + l * l));
      worst_disk = std::max(worst_disk, std::abs(v - exact));
      csv.row({disk.name(), fmt(tau), fmt(l), fmt(v), fmt(exact), fmt(std::abs(v - exact))});
    }
  }
  double worst_euclid = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const Space e = Space::euclidean(d);
    for (double tau : {0.5, 1.0, 2.0}) {
      const RadialFunction h = heat_profile(e, HeatTime(tau));
      for (int i = 0; i <= 8; ++i) {
        const double z = 0.25 * i;
        const double v = spherical_transform_quadrature(e, h, SpectralParameter::principal(z));
        const double exact = std::exp(-4.0 * pi * pi * tau * z * z);
        worst_euclid = std::max(worst_euclid, std::abs(v - exact));
        csv.row({e.name(), fmt(tau), fmt(z), fmt(v), fmt(exact), fmt(std::abs(v - exact))});
      }
    }
  }
  // Ratio of the kernel to tau^{-1} (1+tau+s)^{-1/2} (1+s) e^{-tau/4 - s/2 - s^2/(4 tau)}.
  Csv env("tau,s,log_kernel,log_shape,log_ratio");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i <= 20; ++i) {
    const double tau = 0.1 * std::pow(100.0, i / 20.0);
    for (int k = 0; k <= 20; ++k) {
      const double s = 0.5 * k;
      const double lk = log_heat_kernel_spatial(disk, HeatTime(tau), s);
      const double ls = -std::log(tau) - 0.5 * std::log(1.0 + tau + s) + std::log1p(s) - 0.25 * tau - 0.5 * s -
                        s * s / (4.0 * tau);
      lo = std::min(lo, lk - ls);
      hi = std::max(hi, lk - ls);
      env.row({fmt(tau), fmt(s), fmt(lk), fmt(ls), fmt(lk - ls)});
    }
  }
  const double spread = std::exp(hi - lo);
  const bool ok_disk = worst_disk <= 1e-5;
  const bool ok_euclid = worst_euclid <= 1e-10;
  const bool ok_env = spread <= 10.0;
  r.numeric_pass = ok_disk && ok_euclid && ok_env;
  r.summary = "disk max error " + short_fmt(worst_disk) + " (tol 1e-5), Euclidean " + short_fmt(worst_euclid) +
              " (tol 1e-10), envelope ratio spread " + short_fmt(spread) + " (limit 10)";
  json j;
  j["max_error_disk"] = worst_disk;
  j["max_error_euclidean"] = worst_euclid;
  j["envelope_ratio_spread"] = spread;
  j["envelope_constant"] = std::exp(0.5 * (hi + lo));
  r.artifacts.emplace_back("criterion3_heat_transform.csv", csv.str());
  r.artifacts.emplace_back("criterion3_envelope.csv", env.str());
  finish(r, j);
}

// 4. Ginibre hyperuniformity.
void ginibre(CriterionResult& r, const SuiteOptions& o) {
  r.title = "Ginibre hyperuniformity";
  r.budget_seconds = 600.0;
  Csv dens("lambda,density_at_zero,expected");
  bool ok_density = true;
  for (double lambda : {2.0 * pi, pi, 4.0 * pi}) {
    const double v = dpp_relative_density(DppKernelSpec::weyl_heisenberg(1, lambda, 0), 0.0);
    const double expected = 1.0 - 2.0 * pi / lambda;
    ok_density = ok_density && std::abs(v - expected) <= 1e-12;
    dens.row({fmt(lambda), fmt(v), fmt(expected)});
  }
  const SpectralMeasure sigma =
      dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, 2.0 * pi, 0));
  const std::vector<double> radii = {2.0, 3.0, 4.0, 5.0, 6.0};
  const SamplerSpec sampler = ginibre_sampler(1024);
  const auto estimates = estimate_number_variance(sampler, radii, 2000, o.seed, {o.workers});
  const ComparisonReport report = compare_estimates_vs_spectral(estimates, sigma, sampler.name, o.seed);
  const double gamma = fit_variance_exponent(estimates, Space::euclidean(2));
  const bool ok_gamma = std::abs(gamma - 0.5) <= 0.1;
  double max_z = 0.0;
  for (const auto& row : report.rows) max_z = std::max(max_z, std::abs(row.z_score));
  r.numeric_pass = ok_density && report.pass && ok_gamma;
  r.summary = "density(0) checks " + std::string(ok_density ? "ok" : "failed") + ", max |z| " + short_fmt(max_z) +
              ", gamma " + short_fmt(gamma) + " (0.5 +- 0.1)";
  json j;
  j["density_checks_pass"] = ok_density;
  j["comparison_pass"] = report.pass;
  j["max_abs_z"] = max_z;
  j["fitted_exponent"] = gamma;
  r.artifacts.emplace_back("criterion4_density.csv", dens.str());
  r.artifacts.emplace_back("criterion4_comparison.csv", report_csv(report));
  r.artifacts.emplace_back("criterion4_estimates.csv", estimates_csv(estimates));
  finish(r, j);
}

// 5. Poisson baseline on both spaces.
void poisson(CriterionResult& r, const SuiteOptions& o) {
  r.title = "Poisson baseline";
  r.budget_seconds = 120.0;
  Csv csv("space,radius,mc_variance,stderr,expected,spectral,z_score");
  bool pass = true;
  double max_z = 0.0, max_spectral_dev = 0.0;
  for (const Space& space : {Space::euclidean(2), Space::hyperbolic_disk()}) {
    const std::vector<double> radii = {0.5, 1.0, 2.0, 3.0};
    const SpectralMeasure sigma = poisson_spectrum(space, 1.0);
    const auto est = estimate_number_variance(poisson_sampler(space, 1.0), radii, 10000, o.seed, {o.workers});
    for (const auto& e : est) {
      const double expected = ball_volume(space, e.radius);
      const double spectral = variance_of_statistic(sigma, ball_indicator(e.radius));
      const double z = (e.variance - expected) / e.stderr_variance;
      const double dev = std::abs(spectral - expected) / expected;
      max_z = std::max(max_z, std::abs(z));
      max_spectral_dev = std::max(max_spectral_dev, dev);
      pass = pass && std::abs(z) <= 3.0 && dev <= 1e-6;
      csv.row({space.name(), fmt(e.radius), fmt(e.variance), fmt(e.stderr_variance), fmt(expected), fmt(spectral),
               fmt(z)});
    }
  }
  r.numeric_pass = pass;
  r.summary = "max |z| " + short_fmt(max_z) + ", spectral vs volume relative deviation " +
              short_fmt(max_spectral_dev);
  json j;
  j["max_abs_z"] = max_z;
  j["max_spectral_relative_deviation"] = max_spectral_dev;
  r.artifacts.emplace_back("criterion5_poisson.csv", csv.str());
  finish(r, j);
}

// 6. Bergman spectrum and GAF zeros.
void bergman_gaf(CriterionResult& r, const SuiteOptions& o) {
  r.title = "Bergman / GAF";
  r.budget_seconds = 900.0;
  const Space disk = Space::hyperbolic_disk();
  const SpectralMeasure sigma = dpp_spectrum(disk, DppKernelSpec::bergman());
  const HyperuniformityVerdict v = classify_hyperuniform(sigma, {0.05, 0.02, 0.01, 0.005, 0.002, 0.001});
  const double target = 1.0 - pi / 4.0;
  const bool ok_limit = std::abs(v.limit_estimate - target) <= 1e-3;
  Csv trace("eps,ratio");
  for (const auto& [eps, ratio] : v.ratio_trace) trace.row({fmt(eps), fmt(ratio)});

  const std::vector<double> radii = {1.0, 2.0};
  const int replicas = 2000;
  const auto gaf = sample_counts(gaf_sampler(), radii, replicas, o.seed, {o.workers});
  const auto berg = sample_counts(bergman_sampler(), radii, replicas, o.seed + 1, {o.workers});
  std::vector<VarianceEstimate> est;
  Csv chi("radius,statistic,degrees_of_freedom,p_value");
  bool ok_chi = true;
  double min_p = 1.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    std::vector<double> a(gaf.size()), bb(berg.size());
    for (std::size_t i = 0; i < gaf.size(); ++i) a[i] = gaf[i][k];
    for (std::size_t i = 0; i < berg.size(); ++i) bb[i] = berg[i][k];
    est.push_back(summarize_replicas(a, radii[k]));
    const ChiSquareResult c = two_sample_chi_square(a, bb);
    ok_chi = ok_chi && c.p_value >= 0.01;
    min_p = std::min(min_p, c.p_value);
    chi.row({fmt(radii[k]), fmt(c.statistic), std::to_string(c.degrees_of_freedom), fmt(c.p_value)});
  }
  const ComparisonReport report = compare_estimates_vs_spectral(est, sigma, "gaf-zeros", o.seed);
  double max_z = 0.0;
  for (const auto& row : report.rows) max_z = std::max(max_z, std::abs(row.z_score));
  r.numeric_pass = ok_limit && report.pass && ok_chi;
  r.summary = "ratio limit " + short_fmt(v.limit_estimate) + " vs 1-pi/4 (tol 1e-3), GAF max |z| " + short_fmt(max_z) +
              ", min chi-square p " + short_fmt(min_p);
  json j;
  j["ratio_limit"] = v.limit_estimate;
  j["expected_limit"] = target;
  j["gaf_comparison_pass"] = report.pass;
  j["max_abs_z"] = max_z;
  j["min_chi_square_p"] = min_p;
  r.artifacts.emplace_back("criterion6_ratio_trace.csv", trace.str());
  r.artifacts.emplace_back("criterion6_gaf_comparison.csv", report_csv(report));
  r.artifacts.emplace_back("criterion6_chi_square.csv", chi.str());
  finish(r, j);
}

// 7. Heat-kernel and spectral hyperuniformity agree.
void heat_equivalence(CriterionResult& r) {
  r.title = "Heat-kernel / spectral equivalence";
  r.budget_seconds = 300.0;
  const Space disk = Space::hyperbolic_disk();
  std::vector<std::pair<std::string, SpectralMeasure>> cases = {
      {"ginibre", dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, 2.0 * pi, 0))},
      {"bergman", dpp_spectrum(disk, DppKernelSpec::bergman())},
      {"poisson-disk", poisson_spectrum(disk, 1.0)},
      {"synthetic-2.5", synthetic_tempered_measure(disk, 2.5)},
      {"synthetic-3.5", synthetic_tempered_measure(disk, 3.5)},
  };
  Csv csv("measure,spectral_verdict,ratio_limit,heat_verdict,heat_exponent,agree");
  bool all_agree = true;
  for (const auto& [name, sigma] : cases) {
    const EquivalenceResult e = equivalence_check(sigma, default_tau_grid(), default_eps_grid());
    all_agree = all_agree && e.agree;
    csv.row({name, to_string(e.spectral_verdict), fmt(e.spectral.limit_estimate), to_string(e.heat_verdict),
             fmt(e.heat.fitted_exponent), b(e.agree)});
  }
  SpectralMeasure fixture = poisson_spectrum(disk, 1.0);
  fixture.kind = "poisson + complementary atom (s0 = 0.4, mass 1)";
  fixture.complementary.push_back({SpectralParameter::complementary(0.4), 1.0});
  const HeatCriterionTrace trace = heat_criterion_trace(fixture, default_tau_grid());
  const double at40 = trace.rows.back().scaled_value;
  const bool ok_fixture = trace.rows.back().tau == 40.0 && at40 > 1e6;
  r.numeric_pass = all_agree && ok_fixture;
  r.summary = std::string(all_agree ? "all 5 measures agree" : "disagreement found") +
              ", complementary fixture scaled value at tau=40: " + short_fmt(at40) + " (> 1e6)";
  json j;
  j["all_agree"] = all_agree;
  j["fixture_scaled_at_40"] = at40;
  r.artifacts.emplace_back("criterion7_equivalence.csv", csv.str());
  r.artifacts.emplace_back("criterion7_complementary_trace.csv", heat_trace_csv(trace));
  finish(r, j);
}

// 8. Gaussian panel for a synthetic hyperuniform measure.
void gaussian(CriterionResult& r, const SuiteOptions& o) {
  r.title = "Gaussian random distribution";
  r.budget_seconds = 300.0;
  const Space disk = Space::hyperbolic_disk();
  const SpectralMeasure sigma = synthetic_tempered_measure(disk, 4.0);
  std::vector<RadialFunction> fs;
  for (double radius : {1.0, 1.5, 2.0, 2.5, 3.0}) fs.push_back(ball_indicator(radius));
  const GaussianPanel panel = gaussian_covariance(sigma, fs);
  RngStream rng(o.seed, 0);
  const Eigen::MatrixXd x = sample_gaussian_statistics(panel, 10000, rng);
  std::vector<VarianceEstimate> est;
  double max_res = 0.0;
  Csv csv("radius,panel_variance,sample_variance,stderr,characteristic_residual");
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    std::vector<double> col(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index k = 0; k < x.rows(); ++k) col[static_cast<std::size_t>(k)] = x(k, i);
    const double radius = fs[static_cast<std::size_t>(i)].support_radius;
    est.push_back(summarize_replicas(col, radius));
    const double res = characteristic_residual(panel, static_cast<int>(i), x);
    max_res = std::max(max_res, res);
    csv.row({fmt(radius), fmt(panel.covariance(i, i)), fmt(est.back().variance), fmt(est.back().stderr_variance),
             fmt(res)});
  }
  const double gamma = fit_variance_exponent(est, disk);
  r.numeric_pass = gamma < 1.0 && max_res < 0.02;
  r.summary = "gamma " + short_fmt(gamma) + " (< 1), max characteristic residual " + short_fmt(max_res) + " (< 0.02)";
  json j;
  j["fitted_exponent"] = gamma;
  j["max_characteristic_residual"] = max_res;
  r.artifacts.emplace_back("criterion8_panel.csv", csv.str());
  r.artifacts.emplace_back("criterion8_panel.json", panel_json(panel) + "\n");
  finish(r, j);
}

const std::vector<std::pair<int, std::string>>& criterion_names() {
  static const std::vector<std::pair<int, std::string>> names = {
      {1, "plancherel"}, {2, "functional-equation"}, {3, "heat-transform"},   {4, "ginibre"},
      {5, "poisson"},    {6, "bergman-gaf"},         {7, "heat-equivalence"}, {8, "gaussian"},
  };
  return names;
}

}  // namespace

std::vector<int> parse_suite(const std::string& suite) {
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8};
  std::set<int> ids;
  std::stringstream ss(suite);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int id = 0;
    for (const auto& [k, name] : criterion_names()) {
      if (item == name || item == std::to_string(k)) id = k;
    }
    if (id == 0) throw ValidationError("unknown suite '" + item + "'");
    ids.insert(id);
  }
  if (ids.empty()) throw ValidationError("empty suite");
  return {ids.begin(), ids.end()};
}

CriterionResult run_criterion(int id, const SuiteOptions& options) {
  CriterionResult r;
  r.id = id;
  const auto start = std::chrono::steady_clock::now();
  switch (id) {
    case 1: plancherel(r); break;
    case 2: functional_equation(r); break;
    case 3: heat_transform(r); break;
    case 4: ginibre(r, options); break;
    case 5: poisson(r, options); break;
    case 6: bergman_gaf(r, options); break;
    case 7: heat_equivalence(r); break;
    case 8: gaussian(r, options); break;
    default: throw ValidationError("criterion id must lie in 1..8");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void write_suite_artifacts(const std::vector<CriterionResult>& results, const SuiteOptions& options,
                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json summary;
  summary["version"] = kVersion;
  summary["seed"] = options.seed;
  summary["criteria"] = json::array();
  bool all = true;
  for (const auto& r : results) {
    for (const auto& [name, content] : r.artifacts) {
      std::ofstream out(dir / name, std::ios::binary);
      out << content;
      if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    }
    summary["criteria"].push_back({{"criterion", r.id}, {"title", r.title}, {"numeric_pass", r.numeric_pass}});
    all = all && r.numeric_pass;
  }
  summary["numeric_pass"] = all;
  std::ofstream out(dir / "summary.json", std::ios::binary);
  out << summary.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
}

std::string format_result_line(const CriterionResult& r) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << (r.pass() ? "PASS" : "FAIL") << " [criterion " << r.id << "] " << r.title << ": " << r.summary << " ("
    << std::fixed << std::setprecision(1) << r.seconds << " s";
  if (std::isfinite(r.budget_seconds)) o << ", budget " << std::setprecision(0) << r.budget_seconds << " s";
  if (!r.within_budget()) o << ", over budget";
  o << ")";
  return o.str();
}

std::vector<std::string> compare_directories(const std::filesystem::path& a, const std::filesystem::path& b) {
  auto list = [](const std::filesystem::path& d) {
    std::set<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(d)) {
      if (e.is_regular_file()) names.insert(e.path().filename().string());
    }
    return names;
  };
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto na = list(a);
  const auto nb = list(b);
  std::set<std::string> all(na.begin(), na.end());
  all.insert(nb.begin(), nb.end());
  std::vector<std::string> diff;
  for (const auto& n : all) {
    if (!na.count(n) || !nb.count(n) || read(a / n) != read(b / n)) diff.push_back(n);
  }
  return diff;
}

}  // namespace hyperspec
