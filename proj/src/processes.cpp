#include "hyperspec/processes.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"

#include "hyperspec/errors.hpp"

namespace hyperspec {

using std::numbers::pi;
using cplx = std::complex<double>;

std::size_t PointConfiguration::count_within(double r) const {
  if (r > window.radius * (1.0 + 1e-12)) {
    throw ValidationError("count_within: radius exceeds the observation window");
  }
  std::size_t n = 0;
  for (const Point& p : points) {
    if (distance_from_origin(space, p) <= r) ++n;
  }
  return n;
}

std::string configuration_csv(const PointConfiguration& config) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(17);
  if (config.space.is_hyperbolic()) {
    out << "re,im\n";
    for (const Point& p : config.points) out << p.z.real() << ',' << p.z.imag() << '\n';
  } else {
    const int d = config.space.dimension();
    for (int i = 0; i < d; ++i) out << (i ? "," : "") << 'x' << (i + 1);
    out << '\n';
    for (const Point& p : config.points) {
      for (int i = 0; i < d; ++i) out << (i ? "," : "") << p.coords[static_cast<std::size_t>(i)];
      out << '\n';
    }
  }
  return out.str();
}

std::string configuration_provenance_json(const PointConfiguration& config) {
  nlohmann::ordered_json j;
  j["sampler"] = config.provenance.sampler;
  j["seed"] = config.provenance.seed;
  j["stream_id"] = config.provenance.stream_id;
  j["space"] = config.space.name();
  j["window_radius"] = config.window.radius;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.provenance.parameters) j["parameters"][k] = v;
  j["count"] = config.points.size();
  return j.dump(2);
}

namespace {

PointConfiguration empty_configuration(const Space& space, const Window& window, const std::string& sampler,
                                       const RngStream& rng) {
  if (!(window.space == space)) throw ValidationError(sampler + ": window lives on a different space");
  PointConfiguration c{space, {}, window, {}};
  c.provenance.sampler = sampler;
  c.provenance.seed = rng.seed();
  c.provenance.stream_id = rng.stream_id();
  c.provenance.parameters["window_radius"] = window.radius;
  return c;
}

// Sequential sampling of a projection DPP spanned by N orthonormal functions. `propose(i, rng)`
// draws a point from |psi_i|^2 and `eval(z, out)` fills (psi_0(z), ..., psi_{N-1}(z)).
// The next point has density ||P v(z)||^2 / (N - j), P the projection orthogonal to the vectors of
// the points already placed; proposals from (1/N) sum |psi_i|^2 are accepted with ||P v||^2 / ||v||^2.
template <typename Propose, typename Eval>
std::vector<cplx> sample_projection_dpp(int N, Propose propose, Eval eval, RngStream& rng) {
  std::vector<cplx> points;
  if (N == 0) return points;
  const auto n = static_cast<std::size_t>(N);
  std::vector<std::vector<cplx>> basis;
  basis.reserve(n);
  std::vector<cplx> v(n);
  constexpr long kMaxTries = 10000000;
  for (std::size_t j = 0; j < n; ++j) {
    long tries = 0;
    while (true) {
      if (++tries > kMaxTries) {
        throw NumericError("projection DPP sampling: conditional density vanished", static_cast<double>(j));
      }
      const int i = std::min(N - 1, static_cast<int>(rng.uniform() * N));
      const cplx z = propose(i, rng);
      eval(z, v);
      double norm_v = 0.0;
      for (const cplx& c : v) norm_v += std::norm(c);
      if (!(norm_v > 0.0)) continue;
      std::vector<cplx> r = v;
      for (const auto& e : basis) {
        cplx dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += std::conj(e[k]) * r[k];
        for (std::size_t k = 0; k < n; ++k) r[k] -= dot * e[k];
      }
      double norm_r = 0.0;
      for (const cplx& c : r) norm_r += std::norm(c);
      if (rng.uniform() * norm_v < norm_r) {
        const double inv = 1.0 / std::sqrt(norm_r);
        for (cplx& c : r) c *= inv;
        basis.push_back(std::move(r));
        points.push_back(z);
        break;
      }
    }
  }
  return points;
}

// P(k+1, x) for k = 0..n-1, truncated where it drops below 1e-17.
std::vector<double> ginibre_mode_probabilities(int n, double x) {
  std::vector<double> p;
  for (int k = 0; k < n; ++k) {
    const double v = boost::math::gamma_p(static_cast<double>(k + 1), x);
    if (v < 1e-17) break;
    p.push_back(v);
  }
  return p;
}

std::vector<cplx> ginibre_restricted(const std::vector<double>& mode_prob, RngStream& rng) {
  std::vector<int> modes;
  std::vector<double> log_norm;  // -log gamma(k+1, x), the lower incomplete gamma
  for (std::size_t k = 0; k < mode_prob.size(); ++k) {
    if (rng.bernoulli(mode_prob[k])) {
      modes.push_back(static_cast<int>(k));
      log_norm.push_back(-(std::lgamma(static_cast<double>(k) + 1.0) + std::log(mode_prob[k])));
    }
  }
  const int N = static_cast<int>(modes.size());
  // psi_k(z) = z^k exp(-pi |z|^2 / 2) sqrt(pi^k / gamma(k+1, pi r^2)) on |z| <= r
  auto propose = [&](int i, RngStream& g) {
    const double k1 = modes[static_cast<std::size_t>(i)] + 1.0;
    const double u = g.uniform_open() * mode_prob[static_cast<std::size_t>(modes[static_cast<std::size_t>(i)])];
    const double t = boost::math::gamma_p_inv(k1, u) / pi;  // |z|^2
    const double theta = 2.0 * pi * g.uniform();
    return std::polar(std::sqrt(t), theta);
  };
  auto eval = [&](cplx z, std::vector<cplx>& out) {
    const double a2 = std::norm(z);
    const double la = 0.5 * std::log(pi * a2);
    const double theta = std::arg(z);
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double k = modes[i];
      const double lmod = (a2 > 0.0 ? k * la : (k == 0 ? 0.0 : -std::numeric_limits<double>::infinity())) -
                          0.5 * pi * a2 + 0.5 * log_norm[i];
      out[i] = std::polar(std::exp(lmod), k * theta);
    }
  };
  return sample_projection_dpp(N, propose, eval, rng);
}

std::vector<cplx> ginibre_dense(int n, RngStream& rng) {
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = rng.complex_normal();
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
  if (es.info() != Eigen::Success) throw NumericError("sample_ginibre: eigenvalue solver failed", 0.0);
  std::vector<cplx> out(static_cast<std::size_t>(n));
  const double scale = 1.0 / std::sqrt(pi);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i) * scale;
  return out;
}

void check_ginibre(int n, const Window& window) {
  if (n < 1) throw ValidationError("sample_ginibre: n_matrix must be >= 1");
  if (!(window.space == Space::euclidean(2))) throw ValidationError("sample_ginibre: window must lie in Euclidean(2)");
  const double limit = 0.8 * std::sqrt(n / pi);
  if (window.radius > limit) {
    std::ostringstream msg;
    msg << "sample_ginibre: window radius " << window.radius << " exceeds the bulk limit 0.8 sqrt(n/pi) = " << limit;
    throw ValidationError(msg.str());
  }
}

PointConfiguration ginibre_configuration(int n, const Window& window, RngStream& rng, GinibreMethod method,
                                         const std::vector<double>* mode_prob) {
  check_ginibre(n, window);
  PointConfiguration c = empty_configuration(window.space, window, "ginibre", rng);
  c.provenance.parameters["n_matrix"] = n;
  c.provenance.parameters["method_dense"] = method == GinibreMethod::Dense ? 1.0 : 0.0;
  std::vector<cplx> zs;
  if (method == GinibreMethod::Dense) {
    zs = ginibre_dense(n, rng);
  } else if (mode_prob != nullptr) {
    zs = ginibre_restricted(*mode_prob, rng);
  } else {
    zs = ginibre_restricted(ginibre_mode_probabilities(n, pi * window.radius * window.radius), rng);
  }
  for (const cplx& z : zs) {
    if (std::abs(z) <= window.radius) c.points.push_back(Point::euclidean({z.real(), z.imag()}));
  }
  return c;
}

double window_rho(const Window& window) { return std::tanh(0.5 * window.radius); }

}  // namespace

PointConfiguration sample_poisson(const Space& space, double intensity, const Window& window, RngStream& rng) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) throw ValidationError("sample_poisson: intensity must be positive");
  PointConfiguration c = empty_configuration(space, window, "poisson", rng);
  c.provenance.parameters["intensity"] = intensity;
  const double r = window.radius;
  const std::uint64_t count = rng.poisson(intensity * ball_volume(space, r));
  c.points.reserve(count);
  if (space.is_hyperbolic()) {
    // m(B_s) / m(B_R) = sinh^2(s/2) / sinh^2(R/2)
    const double sh = std::sinh(0.5 * r);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double s = 2.0 * std::asinh(std::sqrt(rng.uniform()) * sh);
      const double theta = 2.0 * pi * rng.uniform();
      c.points.push_back(Point::disk(std::polar(std::tanh(0.5 * s), theta)));
    }
    return c;
  }
  const int d = space.dimension();
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<double> x(static_cast<std::size_t>(d));
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& xi : x) {
        xi = rng.normal();
        norm += xi * xi;
      }
    } while (!(norm > 0.0));
    const double rad = r * std::pow(rng.uniform(), 1.0 / d) / std::sqrt(norm);
    for (double& xi : x) xi *= rad;
    c.points.push_back(Point::euclidean(std::move(x)));
  }
  return c;
}

PointConfiguration sample_ginibre(int n_matrix, const Window& window, RngStream& rng, GinibreMethod method) {
  return ginibre_configuration(n_matrix, window, rng, method, nullptr);
}

std::vector<cplx> gaf_coefficients(double t, int truncation, RngStream& rng) {
  if (!(t > 0.0)) throw ValidationError("gaf_coefficients: t must be positive");
  if (truncation < 1) throw ValidationError("gaf_coefficients: truncation must be >= 1");
  std::vector<cplx> a(static_cast<std::size_t>(truncation) + 1);
  const double lgt = std::lgamma(t);
  for (int n = 0; n <= truncation; ++n) {
    const double w = std::exp(0.5 * (std::lgamma(t + n) - std::lgamma(n + 1.0) - lgt));
    a[static_cast<std::size_t>(n)] = w * rng.complex_normal();
  }
  return a;
}

int gaf_minimum_truncation(const Window& window) {
  const double rho2 = std::pow(window_rho(window), 2);
  // rho^{2(N+1)} < 1e-12 (1 - rho^2)
  const double need = std::log(1e-12 * (1.0 - rho2)) / std::log(rho2) - 1.0;
  return std::max(1, static_cast<int>(std::floor(need)) + 1);
}

PointConfiguration sample_gaf_zeros(int truncation, const Window& window, RngStream& rng) {
  if (!window.space.is_hyperbolic()) throw ValidationError("sample_gaf_zeros: window must lie in the disk");
  const double rho = window_rho(window);
  const double rho2 = rho * rho;
  if (truncation < 1 || !(std::pow(rho2, truncation + 1) / (1.0 - rho2) < 1e-12)) {
    std::ostringstream msg;
    msg << "sample_gaf_zeros: truncation " << truncation << " leaves a tail variance >= 1e-12 at rho = " << rho
        << "; need N >= " << gaf_minimum_truncation(window);
    throw ValidationError(msg.str());
  }
  PointConfiguration c = empty_configuration(window.space, window, "gaf-zeros", rng);
  c.provenance.parameters["truncation"] = truncation;
  c.provenance.parameters["t"] = 1.0;
  const std::vector<cplx> a = gaf_coefficients(1.0, truncation, rng);
  const int n = truncation;
  // Companion matrix of the monic polynomial p(z) / a_N.
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  const cplx lead = a[static_cast<std::size_t>(n)];
  for (int j = 0; j < n; ++j) comp(0, j) = -a[static_cast<std::size_t>(n - 1 - j)] / lead;
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericError("sample_gaf_zeros: companion eigenvalue solver failed", 0.0);
  auto evaluate = [&](cplx z, cplx& p, cplx& dp, double& scale) {
    p = 0.0;
    dp = 0.0;
    scale = 0.0;
    const double az = std::abs(z);
    for (int k = n; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + a[static_cast<std::size_t>(k)];
      scale = scale * az + std::abs(a[static_cast<std::size_t>(k)]);
    }
  };
  std::vector<cplx> roots;
  for (int i = 0; i < n; ++i) {
    cplx z = es.eigenvalues()(i);
    if (std::abs(z) > rho * 1.01 + 1e-6) continue;
    cplx p, dp;
    double scale = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 30; ++it) {
      evaluate(z, p, dp, scale);
      residual = std::abs(p) / scale;
      if (residual < 1e-14 || dp == cplx(0.0)) break;
      z -= p / dp;
    }
    evaluate(z, p, dp, scale);
    residual = std::abs(p) / scale;
    if (!(residual < 1e-10)) {
      throw NumericError("sample_gaf_zeros: Newton refinement did not reach residual 1e-10 (|p'(z)| = " +
                             std::to_string(std::abs(dp)) + ")",
                         residual);
    }
    if (std::abs(z) <= rho) roots.push_back(z);
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) < 1e-9) {
        throw NumericError("sample_gaf_zeros: refinement merged two roots", std::abs(roots[i] - roots[j]));
      }
    }
  }
  for (const cplx& z : roots) c.points.push_back(Point::disk(z));
  return c;
}

int bergman_minimum_modes(const Window& window) {
  const double rho2 = std::pow(window_rho(window), 2);
  return std::max(1, static_cast<int>(std::floor(std::log(1e-12) / std::log(rho2))) + 1);
}

PointConfiguration sample_bergman_dpp(const Window& window, int mode_cap, RngStream& rng) {
  if (!window.space.is_hyperbolic()) throw ValidationError("sample_bergman_dpp: window must lie in the disk");
  const double rho = window_rho(window);
  const double rho2 = rho * rho;
  if (mode_cap < 1 || !(std::pow(rho2, mode_cap) < 1e-12)) {
    throw ValidationError("sample_bergman_dpp: mode_cap must satisfy rho^{2M} < 1e-12; need M >= " +
                          std::to_string(bergman_minimum_modes(window)));
  }
  PointConfiguration c = empty_configuration(window.space, window, "bergman-dpp", rng);
  c.provenance.parameters["mode_cap"] = mode_cap;
  std::vector<int> modes;
  double eig = 1.0;
  for (int k = 1; k <= mode_cap; ++k) {
    eig *= rho2;
    if (rng.bernoulli(eig)) modes.push_back(k);
  }
  const double log_rho = std::log(rho);
  std::vector<double> log_norm;  // log sqrt(k / (pi rho^{2k}))
  for (int k : modes) log_norm.push_back(0.5 * (std::log(static_cast<double>(k)) - std::log(pi)) - k * log_rho);
  auto propose = [&](int i, RngStream& g) {
    const double k = modes[static_cast<std::size_t>(i)];
    const double t = rho2 * std::pow(g.uniform_open(), 1.0 / k);  // |z|^2 with density ~ t^{k-1}
    return std::polar(std::sqrt(t), 2.0 * pi * g.uniform());
  };
  auto eval = [&](cplx z, std::vector<cplx>& out) {
    const double az = std::abs(z);
    const double la = az > 0.0 ? std::log(az) : -std::numeric_limits<double>::infinity();
    const double theta = std::arg(z);
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double k1 = modes[i] - 1.0;
      const double lmod = (k1 == 0.0 ? 0.0 : k1 * la) + log_norm[i];
      out[i] = std::polar(std::exp(lmod), k1 * theta);
    }
  };
  for (const cplx& z : sample_projection_dpp(static_cast<int>(modes.size()), propose, eval, rng)) {
    if (std::abs(z) <= rho) c.points.push_back(Point::disk(z));
  }
  return c;
}

SamplerSpec poisson_sampler(const Space& space, double intensity) {
  if (!(intensity > 0.0)) throw ValidationError("poisson_sampler: intensity must be positive");
  return {"poisson", space,
          [space, intensity](const Window& w, RngStream& rng) { return sample_poisson(space, intensity, w, rng); },
          std::numeric_limits<double>::infinity()};
}

SamplerSpec ginibre_sampler(int n_matrix, GinibreMethod method) {
  if (n_matrix < 1) throw ValidationError("ginibre_sampler: n_matrix must be >= 1");
  struct Cache {
    std::mutex mutex;
    std::map<double, std::shared_ptr<const std::vector<double>>> probs;
  };
  auto cache = std::make_shared<Cache>();
  auto sample = [n_matrix, method, cache](const Window& w, RngStream& rng) {
    if (method == GinibreMethod::Dense) return ginibre_configuration(n_matrix, w, rng, method, nullptr);
    check_ginibre(n_matrix, w);
    std::shared_ptr<const std::vector<double>> probs;
    {
      std::lock_guard lock(cache->mutex);
      auto& slot = cache->probs[w.radius];
      if (!slot) {
        slot = std::make_shared<const std::vector<double>>(
            ginibre_mode_probabilities(n_matrix, pi * w.radius * w.radius));
      }
      probs = slot;
    }
    return ginibre_configuration(n_matrix, w, rng, method, probs.get());
  };
  return {"ginibre", Space::euclidean(2), sample, 0.8 * std::sqrt(n_matrix / pi)};
}

SamplerSpec gaf_sampler() {
  return {"gaf-zeros", Space::hyperbolic_disk(),
          [](const Window& w, RngStream& rng) { return sample_gaf_zeros(gaf_minimum_truncation(w), w, rng); },
          std::numeric_limits<double>::infinity()};
}

SamplerSpec bergman_sampler() {
  return {"bergman-dpp", Space::hyperbolic_disk(),
          [](const Window& w, RngStream& rng) { return sample_bergman_dpp(w, bergman_minimum_modes(w), rng); },
          std::numeric_limits<double>::infinity()};
}

}  // namespace hyperspec
