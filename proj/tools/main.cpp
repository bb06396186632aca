#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json.hpp"

#include "hyperspec/errors.hpp"
#include "hyperspec/gaussdist.hpp"
#include "hyperspec/heat.hpp"
#include "hyperspec/mclab.hpp"
#include "hyperspec/processes.hpp"
#include "hyperspec/spectral.hpp"
#include "hyperspec/verify.hpp"
#include "hyperspec/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hyperspec;

namespace {

constexpr const char* kOutEnv = "HYPERSPEC_OUT_DIR";

struct Config {
  std::string command;
  std::string space = "hyperbolic-disk";
  std::string kernel = "poisson";
  std::string process = "poisson";
  double lambda = 2.0 * std::numbers::pi;
  int n = 0;
  int d = 1;
  double alpha = 4.0;
  double cutoff = 1.0;
  double intensity = 1.0;
  int n_matrix = 1024;
  std::string grid = "0:5:0.05";
  std::string eps = "";
  std::string tau = "";
  std::string radii = "1:3:0.5";
  std::string profile = "ball";
  double radius = 2.0;
  int replicas = 1000;
  std::uint64_t seed = 7;
  std::uint64_t stream = 0;
  std::string suite = "all";
  int workers = 0;
  std::string out;
};

// "start:stop:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
  std::vector<double> out;
  auto num = [&](const std::string& s) {
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    double v = 0.0;
    in >> v;
    if (in.fail() || !in.eof() || !std::isfinite(v)) throw ValidationError(what + ": malformed number '" + s + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError(what + ": grid must be start:stop:step");
    const double a = num(parts[0]), b = num(parts[1]), h = num(parts[2]);
    if (!(h > 0.0) || b < a) throw ValidationError(what + ": grid needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
    if (count > 1000000) throw ValidationError(what + ": grid has too many points");
    for (long i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * h);
  } else {
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ',')) out.push_back(num(p));
  }
  if (out.empty()) throw ValidationError(what + ": empty grid");
  return out;
}

std::string fmt(double x) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << std::setprecision(17) << x;
  return o.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

fs::path output_dir(const Config& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv(kOutEnv); env != nullptr && *env != '\0') return env;
  return "hyperspec-out";
}

SpectralMeasure build_measure(const Config& c) {
  if (c.kernel == "poisson") return poisson_spectrum(Space::parse(c.space), c.intensity);
  if (c.kernel == "bergman") return dpp_spectrum(Space::hyperbolic_disk(), DppKernelSpec::bergman());
  if (c.kernel == "ginibre") {
    return dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, 2.0 * std::numbers::pi, 0));
  }
  if (c.kernel == "weyl-heisenberg") {
    const DppKernelSpec k = DppKernelSpec::weyl_heisenberg(c.d, c.lambda, c.n);
    return dpp_spectrum(k.space(), k);
  }
  if (c.kernel == "synthetic") return synthetic_tempered_measure(Space::parse(c.space), c.alpha, c.cutoff);
  throw ValidationError("unknown kernel '" + c.kernel + "'");
}

SamplerSpec build_sampler(const Config& c) {
  if (c.process == "poisson") return poisson_sampler(Space::parse(c.space), c.intensity);
  if (c.process == "ginibre") return ginibre_sampler(c.n_matrix);
  if (c.process == "gaf") return gaf_sampler();
  if (c.process == "bergman") return bergman_sampler();
  throw ValidationError("unknown process '" + c.process + "'");
}

// The spectral measure of the process sampled by build_sampler.
SpectralMeasure process_measure(const Config& c) {
  if (c.process == "poisson") return poisson_spectrum(Space::parse(c.space), c.intensity);
  if (c.process == "ginibre") {
    return dpp_spectrum(Space::euclidean(2), DppKernelSpec::weyl_heisenberg(1, 2.0 * std::numbers::pi, 0));
  }
  return dpp_spectrum(Space::hyperbolic_disk(), DppKernelSpec::bergman());
}

RadialFunction build_profile(const Config& c, const Space& space, double param) {
  if (c.profile == "ball") return ball_indicator(param);
  if (c.profile == "gaussian") return gaussian_profile(space, param);
  if (c.profile == "heat") return heat_profile(space, HeatTime(param));
  throw ValidationError("unknown profile '" + c.profile + "'");
}

json kernel_echo(const Config& c) {
  json j;
  j["kernel"] = c.kernel;
  if (c.kernel == "poisson" || c.kernel == "synthetic") j["space"] = c.space;
  if (c.kernel == "poisson") j["intensity"] = c.intensity;
  if (c.kernel == "weyl-heisenberg") {
    j["d"] = c.d;
    j["lambda"] = c.lambda;
    j["n"] = c.n;
  }
  if (c.kernel == "synthetic") {
    j["alpha"] = c.alpha;
    j["cutoff"] = c.cutoff;
  }
  return j;
}

json process_echo(const Config& c) {
  json j;
  j["process"] = c.process;
  if (c.process == "poisson") {
    j["space"] = c.space;
    j["intensity"] = c.intensity;
  }
  if (c.process == "ginibre") j["n_matrix"] = c.n_matrix;
  return j;
}

void write_manifest(const fs::path& dir, const Config& c, json config, json results) {
  json m;
  m["version"] = kVersion;
  m["command"] = c.command;
  m["config"] = std::move(config);
  m["results"] = std::move(results);
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

int cmd_spectrum(const Config& c, const fs::path& dir) {
  const SpectralMeasure sigma = build_measure(c);
  const auto grid = parse_grid(c.grid, "--grid");
  const auto eps = c.eps.empty() ? default_eps_grid() : parse_grid(c.eps, "--eps");
  std::ostringstream csv;
  write_measure_csv(sigma, grid, csv);
  write_file(dir / "spectrum.csv", csv.str());
  write_file(dir / "spectrum_metadata.json", measure_metadata_json(sigma) + "\n");
  const HyperuniformityVerdict v = classify_hyperuniform(sigma, eps);
  std::string trace = "eps,ratio\n";
  for (const auto& [e, r] : v.ratio_trace) trace += fmt(e) + ',' + fmt(r) + '\n';
  write_file(dir / "ratio_trace.csv", trace);
  json config = kernel_echo(c);
  config["grid"] = c.grid;
  config["eps"] = c.eps.empty() ? "default" : c.eps;
  json results;
  results["verdict"] = to_string(v.verdict);
  results["limit_estimate"] = v.limit_estimate;
  results["complementary_mass"] = v.complementary_mass;
  write_manifest(dir, c, config, results);
  std::cout << sigma.kind << ": " << to_string(v.verdict) << " (ratio limit " << fmt(v.limit_estimate) << ")\n";
  return 0;
}

int cmd_variance(const Config& c, const fs::path& dir) {
  const SpectralMeasure sigma = build_measure(c);
  const auto params = parse_grid(c.radii, "--radii");
  std::string csv = "parameter,variance\n";
  json rows = json::array();
  for (double p : params) {
    const double v = variance_of_statistic(sigma, build_profile(c, sigma.space, p));
    csv += fmt(p) + ',' + fmt(v) + '\n';
    rows.push_back({{"parameter", p}, {"variance", v}});
  }
  write_file(dir / "variance.csv", csv);
  json config = kernel_echo(c);
  config["profile"] = c.profile;
  config["radii"] = c.radii;
  write_manifest(dir, c, config, {{"rows", rows}});
  std::cout << csv;
  return 0;
}

int cmd_sample(const Config& c, const fs::path& dir) {
  const SamplerSpec sampler = build_sampler(c);
  RngStream rng(c.seed, c.stream);
  const PointConfiguration conf = sampler.sample(Window(sampler.space, c.radius), rng);
  write_file(dir / "configuration.csv", configuration_csv(conf));
  write_file(dir / "provenance.json", configuration_provenance_json(conf) + "\n");
  json config = process_echo(c);
  config["radius"] = c.radius;
  config["seed"] = c.seed;
  config["stream"] = c.stream;
  write_manifest(dir, c, config, {{"count", conf.points.size()}});
  std::cout << sampler.name << ": " << conf.points.size() << " points\n";
  return 0;
}

int cmd_nv(const Config& c, const fs::path& dir) {
  const SamplerSpec sampler = build_sampler(c);
  const auto radii = parse_grid(c.radii, "--radii");
  const auto est = estimate_number_variance(sampler, radii, c.replicas, c.seed, {c.workers});
  const ComparisonReport report = compare_estimates_vs_spectral(est, process_measure(c), sampler.name, c.seed);
  write_file(dir / "nv.csv", estimates_csv(est));
  write_file(dir / "comparison.csv", report_csv(report));
  write_file(dir / "comparison.json", report_json(report) + "\n");
  json config = process_echo(c);
  config["radii"] = c.radii;
  config["replicas"] = c.replicas;
  config["seed"] = c.seed;
  json results;
  results["pass"] = report.pass;
  if (radii.size() >= 4) {
    try {
      results["fitted_exponent"] = fit_variance_exponent(est, sampler.space);
    } catch (const ValidationError&) {
      results["fitted_exponent"] = nullptr;
    }
  }
  write_manifest(dir, c, config, results);
  std::cout << report_csv(report) << (report.pass ? "pass" : "fail") << "\n";
  return 0;
}

int cmd_heat(const Config& c, const fs::path& dir) {
  const SpectralMeasure sigma = build_measure(c);
  const auto tau = c.tau.empty() ? default_tau_grid() : parse_grid(c.tau, "--tau");
  const auto eps = c.eps.empty() ? default_eps_grid() : parse_grid(c.eps, "--eps");
  const EquivalenceResult e = equivalence_check(sigma, tau, eps);
  write_file(dir / "heat_trace.csv", heat_trace_csv(e.heat));
  write_file(dir / "heat_trace.json", heat_trace_json(e.heat) + "\n");
  json config = kernel_echo(c);
  config["tau"] = c.tau.empty() ? "default" : c.tau;
  config["eps"] = c.eps.empty() ? "default" : c.eps;
  json results;
  results["spectral_verdict"] = to_string(e.spectral_verdict);
  results["heat_verdict"] = to_string(e.heat_verdict);
  results["heat_exponent"] = e.heat.fitted_exponent;
  results["agree"] = e.agree;
  write_manifest(dir, c, config, results);
  std::cout << heat_trace_csv(e.heat) << "spectral " << to_string(e.spectral_verdict) << ", heat "
            << to_string(e.heat_verdict) << (e.agree ? ", agree" : ", no agreement") << "\n";
  return 0;
}

int cmd_gaussian(const Config& c, const fs::path& dir) {
  const SpectralMeasure sigma = build_measure(c);
  std::vector<RadialFunction> fs;
  for (double p : parse_grid(c.radii, "--radii")) fs.push_back(build_profile(c, sigma.space, p));
  const GaussianPanel panel = gaussian_covariance(sigma, fs);
  RngStream rng(c.seed, c.stream);
  const Eigen::MatrixXd x = sample_gaussian_statistics(panel, c.replicas, rng);
  write_file(dir / "samples.csv", samples_csv(x));
  write_file(dir / "panel.json", panel_json(panel) + "\n");
  json residuals = json::array();
  for (int i = 0; i < static_cast<int>(fs.size()); ++i) residuals.push_back(characteristic_residual(panel, i, x));
  json config = kernel_echo(c);
  config["profile"] = c.profile;
  config["radii"] = c.radii;
  config["replicas"] = c.replicas;
  config["seed"] = c.seed;
  config["stream"] = c.stream;
  json results;
  results["characteristic_residuals"] = residuals;
  write_manifest(dir, c, config, results);
  std::cout << "characteristic residuals " << residuals.dump() << "\n";
  return 0;
}

int cmd_verify(const Config& c, const fs::path& dir) {
  SuiteOptions o;
  o.seed = c.seed;
  o.workers = c.workers;
  std::vector<CriterionResult> results;
  bool all = true;
  for (int id : parse_suite(c.suite)) {
    results.push_back(run_criterion(id, o));
    std::cout << format_result_line(results.back()) << std::endl;
    all = all && results.back().pass();
  }
  write_suite_artifacts(results, o, dir);
  json config;
  config["suite"] = c.suite;
  config["seed"] = c.seed;
  json flags = json::array();
  for (const auto& r : results) flags.push_back({{"criterion", r.id}, {"numeric_pass", r.numeric_pass}});
  write_manifest(dir, c, config, {{"criteria", flags}});
  return all ? 0 : 1;
}

int report_error(const char* kind, const std::string& message, int code) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_status"] = code;
  std::cerr << j.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral variance of invariant random measures on Euclidean spaces and the hyperbolic plane"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Config c;

  auto add_kernel = [&](CLI::App* s) {
    s->add_option("--kernel", c.kernel, "poisson | bergman | ginibre | weyl-heisenberg | synthetic")
        ->check(CLI::IsMember({"poisson", "bergman", "ginibre", "weyl-heisenberg", "synthetic"}));
    s->add_option("--space", c.space, "hyperbolic-disk | euclidean-1 .. euclidean-4");
    s->add_option("--lambda", c.lambda, "Weyl-Heisenberg lambda");
    s->add_option("--n", c.n, "Weyl-Heisenberg level n");
    s->add_option("--d", c.d, "Weyl-Heisenberg complex dimension");
    s->add_option("--alpha", c.alpha, "synthetic small-frequency exponent");
    s->add_option("--cutoff", c.cutoff, "synthetic cutoff");
    s->add_option("--intensity", c.intensity, "Poisson intensity");
  };
  auto add_process = [&](CLI::App* s) {
    s->add_option("--process", c.process, "poisson | ginibre | gaf | bergman")
        ->check(CLI::IsMember({"poisson", "ginibre", "gaf", "bergman"}));
    s->add_option("--space", c.space, "space of the Poisson process");
    s->add_option("--intensity", c.intensity, "Poisson intensity");
    s->add_option("--n", c.n_matrix, "Ginibre matrix size");
  };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--out", c.out, std::string("output directory (default $") + kOutEnv + " or ./hyperspec-out)");
    s->add_option("--workers", c.workers, "replica worker threads (0: all cores)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "tabulate a spectral measure and classify it");
  add_kernel(spectrum);
  spectrum->add_option("--grid", c.grid, "parameter grid start:stop:step");
  spectrum->add_option("--eps", c.eps, "classifier eps grid (decreasing list)");
  add_common(spectrum);

  auto* variance = app.add_subcommand("variance", "variance of radial linear statistics from the spectrum");
  add_kernel(variance);
  variance->add_option("--profile", c.profile, "ball | gaussian | heat")->check(CLI::IsMember({"ball", "gaussian", "heat"}));
  variance->add_option("--radii", c.radii, "profile parameters (radius, a or tau)");
  add_common(variance);

  auto* sample = app.add_subcommand("sample", "sample one configuration");
  add_process(sample);
  sample->add_option("--radius", c.radius, "window radius");
  sample->add_option("--seed", c.seed, "base seed");
  sample->add_option("--stream", c.stream, "stream id");
  add_common(sample);

  auto* nv = app.add_subcommand("nv", "Monte Carlo number variance against the spectral prediction");
  add_process(nv);
  nv->add_option("--radii", c.radii, "radii start:stop:step");
  nv->add_option("--replicas", c.replicas, "replica count");
  nv->add_option("--seed", c.seed, "base seed");
  add_common(nv);

  auto* heat = app.add_subcommand("heat", "heat-kernel criterion trace and equivalence check");
  add_kernel(heat);
  heat->add_option("--tau", c.tau, "tau grid (increasing, <= 50)");
  heat->add_option("--eps", c.eps, "classifier eps grid");
  add_common(heat);

  auto* gaussian = app.add_subcommand("gaussian", "sample the Gaussian panel of linear statistics");
  add_kernel(gaussian);
  gaussian->add_option("--profile", c.profile, "ball | gaussian | heat")->check(CLI::IsMember({"ball", "gaussian", "heat"}));
  gaussian->add_option("--radii", c.radii, "profile parameters");
  gaussian->add_option("--replicas", c.replicas, "sample count");
  gaussian->add_option("--seed", c.seed, "seed");
  gaussian->add_option("--stream", c.stream, "stream id");
  add_common(gaussian);

  auto* verify = app.add_subcommand("verify", "run acceptance suites");
  verify->add_option("--suite", c.suite, "all, or a comma list of criterion ids or names");
  verify->add_option("--seed", c.seed, "base seed");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("validation", e.what(), 2);
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    if (c.command == "spectrum") return cmd_spectrum(c, dir);
    if (c.command == "variance") return cmd_variance(c, dir);
    if (c.command == "sample") return cmd_sample(c, dir);
    if (c.command == "nv") return cmd_nv(c, dir);
    if (c.command == "heat") return cmd_heat(c, dir);
    if (c.command == "gaussian") return cmd_gaussian(c, dir);
    return cmd_verify(c, dir);
  } catch (const ValidationError& e) {
    return report_error("validation", e.what(), 2);
  } catch (const DomainError& e) {
    return report_error("validation", e.what(), 2);
  } catch (const NumericError& e) {
    return report_error("numeric", e.what(), 3);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
}
