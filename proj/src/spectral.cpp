#include "hyperspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "hyperspec/errors.hpp"
#include "hyperspec/quadrature.hpp"
#include "hyperspec/specfun.hpp"

namespace hyperspec {

using std::numbers::pi;

namespace {

SpectralParameter principal_at(double p) { return {SpectralParameter::Series::Principal, p}; }

// Smallest parameter at which the relative density is evaluated for mass-density measures.
constexpr double kTinyParameter = 1e-12;

}  // namespace

SpectralMeasure SpectralMeasure::from_relative_density(Space space, std::function<double(double)> relative,
                                                       double relative_at_infinity, std::string kind) {
  SpectralMeasure m;
  m.space = space;
  m.relative_density = relative;
  m.mass_density = [space, relative](double p) { return relative(p) * plancherel_density(space, principal_at(p)); };
  m.relative_density_at_infinity = relative_at_infinity;
  m.kind = std::move(kind);
  return m;
}

SpectralMeasure SpectralMeasure::from_mass_density(Space space, std::function<double(double)> mass,
                                                   double relative_at_infinity, std::string kind) {
  SpectralMeasure m;
  m.space = space;
  m.mass_density = mass;
  m.relative_density = [space, mass](double p) {
    const double q = std::max(p, kTinyParameter);
    return mass(q) / plancherel_density(space, principal_at(q));
  };
  m.relative_density_at_infinity = relative_at_infinity;
  m.kind = std::move(kind);
  return m;
}

double SpectralMeasure::complementary_mass() const {
  double total = 0.0;
  for (const auto& a : complementary) total += a.mass;
  return total;
}

void SpectralMeasure::validate() const {
  if (!relative_density || !mass_density) throw ValidationError("SpectralMeasure: densities are not set");
  if (space.is_euclidean() && !complementary.empty()) {
    throw ValidationError("SpectralMeasure: Euclidean spaces have no complementary series");
  }
  for (const auto& a : atoms) {
    if (!(a.mass >= 0.0)) throw ValidationError("SpectralMeasure: atom masses must be >= 0");
    if (!a.parameter.is_principal()) throw ValidationError("SpectralMeasure: atoms live on the principal series");
    if (space.is_euclidean() && a.parameter.value == 0.0) {
      throw ValidationError("SpectralMeasure: no atom at the trivial spherical function");
    }
  }
  for (const auto& a : complementary) {
    if (!(a.mass >= 0.0)) throw ValidationError("SpectralMeasure: complementary masses must be >= 0");
    if (a.parameter.is_principal()) throw ValidationError("SpectralMeasure: complementary entries need s0 in (0, 1/2)");
    if (a.parameter.value >= 0.5) throw ValidationError("SpectralMeasure: no atom at the trivial spherical function");
  }
  if (!(relative_density_at_infinity >= 0.0)) {
    throw ValidationError("SpectralMeasure: density at infinity must be >= 0");
  }
}

// ---------------------------------------------------------------------------
// Kernels

DppKernelSpec DppKernelSpec::weyl_heisenberg(int d, double lambda, int n) {
  if (d < 1 || d > 2) throw ValidationError("weyl_heisenberg: complex dimension must be 1 or 2");
  if (lambda == 0.0 || !std::isfinite(lambda)) throw ValidationError("weyl_heisenberg: lambda must be nonzero");
  if (n < 0) throw ValidationError("weyl_heisenberg: n must be >= 0");
  DppKernelSpec k;
  k.kind = Kind::WeylHeisenberg;
  k.wh_dimension = d;
  k.wh_lambda = lambda;
  k.wh_n = n;
  std::ostringstream name;
  name << "weyl-heisenberg(d=" << d << ",lambda=" << std::setprecision(17) << lambda << ",n=" << n << ")";
  k.name = name.str();
  return k;
}

DppKernelSpec DppKernelSpec::bergman() {
  DppKernelSpec k;
  k.kind = Kind::Bergman;
  k.name = "bergman";
  return k;
}

DppKernelSpec DppKernelSpec::custom(Space space, double intensity, std::function<double(double)> kappa_hat,
                                    std::string name) {
  if (!(intensity > 0.0)) throw ValidationError("DppKernelSpec: intensity must be positive");
  DppKernelSpec k;
  k.kind = Kind::Custom;
  k.custom_space = space;
  k.intensity = intensity;
  k.custom_kappa_hat = std::move(kappa_hat);
  k.name = std::move(name);
  return k;
}

Space DppKernelSpec::space() const {
  switch (kind) {
    case Kind::WeylHeisenberg: return Space::euclidean(2 * wh_dimension);
    case Kind::Bergman: return Space::hyperbolic_disk();
    case Kind::Custom: return custom_space;
  }
  return custom_space;
}

double DppKernelSpec::kappa_hat(double p) const {
  switch (kind) {
    case Kind::WeylHeisenberg:
      return wh_dimension == 1 ? polyanalytic_kappa_hat(wh_lambda, wh_n, p)
                               : weyl_heisenberg_kappa_hat(wh_dimension, wh_lambda, wh_n, p);
    case Kind::Bergman: return bergman_kappa_hat(p);
    case Kind::Custom: return custom_kappa_hat ? custom_kappa_hat(p) : 0.0;
  }
  return 0.0;
}

double polyanalytic_kappa_hat(double lambda, int n, double zeta) {
  if (lambda == 0.0) throw ValidationError("polyanalytic_kappa_hat: lambda must be nonzero");
  if (n < 0) throw ValidationError("polyanalytic_kappa_hat: n must be >= 0");
  const double l = std::abs(lambda);
  const double x = 2.0 * pi * pi * zeta * zeta / l;
  const double lag = specfun::laguerre(n, 0.0, x);
  return (2.0 * pi / l) * lag * lag * std::exp(-x);
}

double weyl_heisenberg_kappa_hat(int d, double lambda, int n, double zeta) {
  if (d < 1 || d > 2) throw ValidationError("weyl_heisenberg_kappa_hat: d must be 1 or 2");
  if (lambda == 0.0) throw ValidationError("weyl_heisenberg_kappa_hat: lambda must be nonzero");
  if (n < 0) throw ValidationError("weyl_heisenberg_kappa_hat: n must be >= 0");
  if (zeta < 0.0) throw ValidationError("weyl_heisenberg_kappa_hat: zeta must be >= 0");
  const double l = std::abs(lambda);
  const double alpha = d - 1.0;
  // exp(-x) L_n(x)^2 < 1e-20 beyond x_max
  const double x_max = 50.0 + 6.0 * n;
  auto profile = [l, n, alpha](double r) {
    const double x = 0.5 * l * r * r;
    const double lag = specfun::laguerre(n, alpha, x);
    return lag * lag * std::exp(-x);
  };
  const RadialFunction g = make_radial(profile, std::sqrt(2.0 * x_max / l), false, "weyl-heisenberg |L|^2");
  return spherical_transform_quadrature(Space::euclidean(2 * d), g, SpectralParameter::principal(zeta));
}

double bergman_kappa_hat(double lambda) { return specfun::gamma_abs2_three_half(lambda); }

// ---------------------------------------------------------------------------
// Spectra

SpectralMeasure poisson_spectrum(const Space& space, double intensity) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) throw ValidationError("poisson_spectrum: intensity must be positive");
  SpectralMeasure m = SpectralMeasure::from_relative_density(space, [intensity](double) { return intensity; }, intensity,
                                                             "poisson");
  m.cumulative = [space, intensity](double eps) { return intensity * plancherel_mass(space, eps); };
  m.convention_note = "density relative to the Plancherel measure of " + space.name();
  return m;
}

double dpp_relative_density(const DppKernelSpec& kernel, double p) { return kernel.intensity - kernel.kappa_hat(p); }

SpectralMeasure dpp_spectrum(const Space& space, const DppKernelSpec& kernel) {
  if (!(kernel.space() == space)) {
    throw ValidationError("dpp_spectrum: kernel " + kernel.name + " lives on " + kernel.space().name() + ", not " +
                          space.name());
  }
  // kappa_hat is maximal at p = 0 for the shipped kernels; a grid guards custom ones.
  const double tol = 1e-12;
  for (int i = 0; i <= 200; ++i) {
    const double p = 0.05 * i;
    const double k = kernel.kappa_hat(p);
    if (k > kernel.intensity + tol) {
      std::ostringstream msg;
      msg << "dpp_spectrum: kappa_hat(" << p << ") = " << std::setprecision(10) << k << " exceeds the intensity "
          << kernel.intensity << "; " << kernel.name << " is not a determinantal kernel";
      throw ValidationError(msg.str());
    }
  }
  const DppKernelSpec k = kernel;
  SpectralMeasure m = SpectralMeasure::from_relative_density(
      space, [k](double p) { return std::max(0.0, dpp_relative_density(k, p)); }, kernel.intensity, "dpp:" + kernel.name);
  m.convention_note = "density intensity - kappa_hat relative to the Plancherel measure of " + space.name();
  return m;
}

// ---------------------------------------------------------------------------
// Variances

namespace {

// Past the cutoff of a transform without a tail model the product is negligible.
double principal_cutoff(const Space& space, const RadialFunction& f, const RadialFunction& g) {
  const double cf = frequency_cutoff(space, f);
  const double cg = frequency_cutoff(space, g);
  const bool tf = transform_tail(space, f).has_value();
  const bool tg = transform_tail(space, g).has_value();
  if (tf && tg) return std::max(cf, cg);
  if (tf) return cg;
  if (tg) return cf;
  return std::min(cf, cg);
}

}  // namespace

namespace {

using TransformFn = std::function<double(SpectralParameter)>;

double pairing_impl(const SpectralMeasure& sigma, const RadialFunction& f, const RadialFunction& g, const TransformFn& fhat,
                    const TransformFn& ghat, bool same, double cutoff, double scale) {
  const Space& space = sigma.space;
  auto integrand = [&](double p) {
    const double w = sigma.mass_density(p);
    if (w == 0.0) return 0.0;
    const SpectralParameter sp = principal_at(p);
    const double a = fhat(sp);
    const double b = same ? a : ghat(sp);
    return a * b * w;
  };
  double total = integrate_principal(space, integrand, cutoff, scale, sigma.breakpoints);
  const auto tf = transform_tail(space, f);
  const auto tg = transform_tail(space, g);
  if (tf && tg && sigma.relative_density_at_infinity > 0.0) {
    total += sigma.relative_density_at_infinity * tail_pairing(*tf, *tg, cutoff);
  }
  for (const auto& a : sigma.atoms) total += a.mass * fhat(a.parameter) * ghat(a.parameter);
  for (const auto& a : sigma.complementary) total += a.mass * fhat(a.parameter) * ghat(a.parameter);
  return total;
}

}  // namespace

double spectral_pairing(const SpectralMeasure& sigma, const RadialFunction& f, const RadialFunction& g) {
  if (f.is_zero() || g.is_zero()) return 0.0;
  const Space& space = sigma.space;
  const double cutoff = principal_cutoff(space, f, g);
  const double scale = std::min(oscillation_scale(space, f), oscillation_scale(space, g));
  const TransformFn fhat = [&](SpectralParameter p) { return spherical_transform(space, f, p); };
  const TransformFn ghat = [&](SpectralParameter p) { return spherical_transform(space, g, p); };
  return pairing_impl(sigma, f, g, fhat, ghat, &f == &g, cutoff, scale);
}

std::vector<std::vector<double>> spectral_pairing_matrix(const SpectralMeasure& sigma,
                                                         const std::vector<RadialFunction>& fs) {
  const Space& space = sigma.space;
  const std::size_t k = fs.size();
  double scale = std::numeric_limits<double>::infinity();
  for (const auto& f : fs) {
    if (!f.is_zero()) scale = std::min(scale, oscillation_scale(space, f));
  }
  // Memoized transforms: keyed by (series, value), so all entries reuse shared quadrature nodes.
  std::vector<std::map<std::pair<int, double>, double>> memo(k);
  std::vector<TransformFn> hats;
  for (std::size_t i = 0; i < k; ++i) {
    hats.push_back([&, i](SpectralParameter p) {
      const auto key = std::make_pair(p.is_principal() ? 0 : 1, p.value);
      auto it = memo[i].find(key);
      if (it != memo[i].end()) return it->second;
      const double v = spherical_transform(space, fs[i], p);
      memo[i].emplace(key, v);
      return v;
    });
  }
  std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      if (fs[i].is_zero() || fs[j].is_zero()) continue;
      const double cutoff = principal_cutoff(space, fs[i], fs[j]);
      out[i][j] = pairing_impl(sigma, fs[i], fs[j], hats[i], hats[j], i == j, cutoff, scale);
      out[j][i] = out[i][j];
    }
  }
  return out;
}

double variance_of_statistic(const SpectralMeasure& sigma, const RadialFunction& f) {
  return std::max(0.0, spectral_pairing(sigma, f, f));
}

double plancherel_mass(const Space& space, double eps) {
  if (!(eps > 0.0)) return 0.0;
  if (space.is_euclidean()) {
    const int d = space.dimension();
    return sphere_area(d) * std::pow(eps, d) / d;
  }
  auto dens = [&](double p) { return plancherel_density(space, principal_at(p)); };
  quad::Options o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-13;
  return quad::integrate(dens, quad::uniform_breaks(0.0, eps, 0.5), o).value;
}

double principal_mass(const SpectralMeasure& sigma, double eps) {
  if (!(eps > 0.0)) return 0.0;
  double total = 0.0;
  if (sigma.cumulative) {
    total = sigma.cumulative(eps);
  } else {
    std::vector<double> br = quad::uniform_breaks(0.0, eps, std::max(eps / 4.0, std::min(eps, 0.5)));
    for (double b : sigma.breakpoints) {
      if (b > 0.0 && b < eps) br.push_back(b);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    quad::Options o;
    o.abs_tol = 0.0;
    o.rel_tol = 1e-12;
    o.max_intervals = 20000;
    total = quad::integrate(sigma.mass_density, br, o).value;
  }
  for (const auto& a : sigma.atoms) {
    if (a.parameter.value > 0.0 && a.parameter.value <= eps) total += a.mass;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Classifier

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Hyperuniform: return "Hyperuniform";
    case Verdict::NotHyperuniform: return "NotHyperuniform";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<double> default_eps_grid() { return {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4}; }

double extrapolate_limit(double e1, double r1, double e2, double r2, double e3, double r3) {
  const double d12 = r1 - r2;
  const double d23 = r2 - r3;
  const double scale = std::max({std::abs(r1), std::abs(r2), std::abs(r3), 1e-300});
  if (std::abs(d12) <= 1e-12 * scale || std::abs(d23) <= 1e-12 * scale) return r3;
  const double q = d12 / d23;
  if (!(q > 0.0)) return r3;  // non-monotone trace
  // Solve (e1^b - e2^b) / (e2^b - e3^b) = q for b > 0; the left side increases in b.
  auto h = [&](double b) { return (std::pow(e1, b) - std::pow(e2, b)) / (std::pow(e2, b) - std::pow(e3, b)) - q; };
  double lo = 1e-6;
  double hi = 20.0;
  if (h(lo) > 0.0 || h(hi) < 0.0) return r3;  // not a decaying power law
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? hi : lo) = mid;
  }
  const double b = 0.5 * (lo + hi);
  const double c = d23 / (std::pow(e2, b) - std::pow(e3, b));
  return r3 - c * std::pow(e3, b);
}

HyperuniformityVerdict classify_hyperuniform(const SpectralMeasure& sigma, const std::vector<double>& eps_grid) {
  if (eps_grid.size() < 3) throw ValidationError("classify_hyperuniform: need at least three eps values");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] >= 1e-4)) throw ValidationError("classify_hyperuniform: eps values must be >= 1e-4");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) {
      throw ValidationError("classify_hyperuniform: eps grid must be strictly decreasing");
    }
  }
  HyperuniformityVerdict out;
  out.complementary_mass = sigma.complementary_mass();
  for (double eps : eps_grid) {
    out.ratio_trace.emplace_back(eps, principal_mass(sigma, eps) / plancherel_mass(sigma.space, eps));
  }
  const std::size_t n = out.ratio_trace.size();
  const auto& [e1, r1] = out.ratio_trace[n - 3];
  const auto& [e2, r2] = out.ratio_trace[n - 2];
  const auto& [e3, r3] = out.ratio_trace[n - 1];
  out.limit_estimate = std::max(0.0, extrapolate_limit(e1, r1, e2, r2, e3, r3));
  if (out.complementary_mass > 0.0 || out.limit_estimate > kNotHyperuniformThreshold) {
    out.verdict = Verdict::NotHyperuniform;
  } else if (out.limit_estimate < kHyperuniformThreshold) {
    out.verdict = Verdict::Hyperuniform;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::json atom_json(const SpectralAtom& a) {
  return {{"series", a.parameter.is_principal() ? "principal" : "complementary"},
          {"value", a.parameter.value},
          {"mass", a.mass}};
}

SpectralAtom atom_from_json(const nlohmann::json& j) {
  const std::string series = j.at("series").get<std::string>();
  const double v = j.at("value").get<double>();
  const SpectralParameter p = series == "principal" ? SpectralParameter::principal(v)
                                                    : SpectralParameter::complementary(v);
  return {p, j.at("mass").get<double>()};
}

// Piecewise-linear interpolation on a sorted grid, constant outside.
std::function<double(double)> interpolant(std::vector<double> xs, std::vector<double> ys) {
  return [xs = std::move(xs), ys = std::move(ys)](double x) {
    if (xs.empty()) return 0.0;
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
  };
}

}  // namespace

void write_measure_csv(const SpectralMeasure& sigma, const std::vector<double>& grid, std::ostream& out) {
  out << "parameter,relative_density,plancherel_density,mass_density\n";
  std::ostringstream line;
  line.imbue(std::locale::classic());
  line << std::setprecision(17);
  for (double p : grid) {
    const double pd = plancherel_density(sigma.space, principal_at(p));
    line.str("");
    line << p << ',' << sigma.relative_density(p) << ',' << pd << ',' << sigma.mass_density(p) << '\n';
    out << line.str();
  }
}

std::string measure_metadata_json(const SpectralMeasure& sigma) {
  nlohmann::json j;
  j["space"] = sigma.space.name();
  j["kind"] = sigma.kind;
  j["convention"] = sigma.convention_note;
  j["relative_density_at_infinity"] = sigma.relative_density_at_infinity;
  j["breakpoints"] = sigma.breakpoints;
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : sigma.atoms) j["atoms"].push_back(atom_json(a));
  j["complementary"] = nlohmann::json::array();
  for (const auto& a : sigma.complementary) j["complementary"].push_back(atom_json(a));
  return j.dump(2);
}

SpectralMeasure read_measure(std::istream& csv, const std::string& metadata_json) {
  const nlohmann::json j = nlohmann::json::parse(metadata_json);
  const Space space = Space::parse(j.at("space").get<std::string>());
  std::string line;
  if (!std::getline(csv, line)) throw ValidationError("read_measure: empty table");
  std::vector<double> ps, rel, mass;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double v[4];
    char comma = 0;
    row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3];
    if (!row) throw ValidationError("read_measure: malformed row '" + line + "'");
    if (!ps.empty() && !(v[0] > ps.back())) throw ValidationError("read_measure: grid must be increasing");
    ps.push_back(v[0]);
    rel.push_back(v[1]);
    mass.push_back(v[3]);
  }
  SpectralMeasure m;
  m.space = space;
  m.relative_density = interpolant(ps, rel);
  m.mass_density = interpolant(ps, mass);
  m.relative_density_at_infinity = j.at("relative_density_at_infinity").get<double>();
  m.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  for (const auto& a : j.at("atoms")) m.atoms.push_back(atom_from_json(a));
  for (const auto& a : j.at("complementary")) m.complementary.push_back(atom_from_json(a));
  m.kind = j.at("kind").get<std::string>();
  m.convention_note = j.at("convention").get<std::string>();
  m.validate();
  return m;
}

}  // namespace hyperspec
