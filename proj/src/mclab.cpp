#include "hyperspec/mclab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "json.hpp"

#include "hyperspec/errors.hpp"
#include "hyperspec/version.hpp"

namespace hyperspec {

namespace {

double pairwise(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise(x, h) + pairwise(x + h, n - h);
}

// Runs fn(i) for i in [0, n) and returns the results in index order.
template <typename Fn>
std::vector<std::vector<double>> run_replicas(int n, const ReplicaOptions& options, Fn fn) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  int workers = options.workers > 0 ? options.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, n));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  auto work = [&] {
    while (!failed.load()) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        failed.store(true);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void check_replicas(int replicas) {
  if (replicas < 2) throw ValidationError("replicas must be >= 2");
}

std::string fmt(double x) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << std::setprecision(17) << x;
  return o.str();
}

}  // namespace

double sorted_pairwise_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return pairwise(values.data(), values.size());
}

VarianceEstimate summarize_replicas(const std::vector<double>& values, double radius) {
  const std::size_t n = values.size();
  if (n < 2) throw ValidationError("summarize_replicas: need at least 2 replicas");
  const double dn = static_cast<double>(n);
  const double mean = sorted_pairwise_sum(values) / dn;
  std::vector<double> dev2(n);
  for (std::size_t i = 0; i < n; ++i) dev2[i] = (values[i] - mean) * (values[i] - mean);
  const double ss = sorted_pairwise_sum(dev2);
  VarianceEstimate e;
  e.radius = radius;
  e.mean_count = mean;
  e.variance = ss / (dn - 1.0);
  e.replicas = static_cast<int>(n);
  if (n == 2) {
    e.stderr_variance = e.variance * std::sqrt(2.0);
    return e;
  }
  // Leave-one-out variances: (ss - n/(n-1) (x_i - mean)^2) / (n - 2).
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) loo[i] = std::max(0.0, ss - dn / (dn - 1.0) * dev2[i]) / (dn - 2.0);
  const double loo_mean = sorted_pairwise_sum(loo) / dn;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (loo[i] - loo_mean) * (loo[i] - loo_mean);
  e.stderr_variance = std::sqrt((dn - 1.0) / dn * sorted_pairwise_sum(d));
  return e;
}

std::vector<std::vector<double>> sample_counts(const SamplerSpec& sampler, const std::vector<double>& radii,
                                               int replicas, std::uint64_t base_seed, const ReplicaOptions& options) {
  check_replicas(replicas);
  if (radii.empty()) throw ValidationError("sample_counts: empty radius list");
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("sample_counts: radii must be positive");
  }
  const double rmax = *std::max_element(radii.begin(), radii.end());
  if (rmax > sampler.max_radius) {
    throw ValidationError("sample_counts: radius " + fmt(rmax) + " exceeds the sampler limit " +
                          fmt(sampler.max_radius));
  }
  const Window window(sampler.space, rmax);
  return run_replicas(replicas, options, [&](int i) {
    RngStream rng(base_seed, static_cast<std::uint64_t>(i));
    const PointConfiguration c = sampler.sample(window, rng);
    std::vector<double> row;
    row.reserve(radii.size());
    for (double r : radii) row.push_back(static_cast<double>(c.count_within(r)));
    return row;
  });
}

std::vector<VarianceEstimate> estimate_number_variance(const SamplerSpec& sampler, const std::vector<double>& radii,
                                                       int replicas, std::uint64_t base_seed,
                                                       const ReplicaOptions& options) {
  const auto counts = sample_counts(sampler, radii, replicas, base_seed, options);
  std::vector<VarianceEstimate> out;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    std::vector<double> v(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) v[i] = counts[i][k];
    out.push_back(summarize_replicas(v, radii[k]));
  }
  return out;
}

VarianceEstimate estimate_statistic_variance(const SamplerSpec& sampler, const RadialFunction& f, int replicas,
                                             std::uint64_t base_seed, double window_radius,
                                             const ReplicaOptions& options) {
  check_replicas(replicas);
  if (f.is_zero()) {
    VarianceEstimate e;
    e.replicas = replicas;
    return e;
  }
  const double r = window_radius > 0.0 ? window_radius : f.support_radius;
  if (r > sampler.max_radius) {
    throw ValidationError("estimate_statistic_variance: window radius " + fmt(r) + " exceeds the sampler limit " +
                          fmt(sampler.max_radius));
  }
  const Window window(sampler.space, r);
  auto values = run_replicas(replicas, options, [&](int i) {
    RngStream rng(base_seed, static_cast<std::uint64_t>(i));
    const PointConfiguration c = sampler.sample(window, rng);
    std::vector<double> terms;
    terms.reserve(c.points.size());
    for (const Point& p : c.points) terms.push_back(f(distance_from_origin(c.space, p)));
    return std::vector<double>{sorted_pairwise_sum(std::move(terms))};
  });
  std::vector<double> v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i][0];
  return summarize_replicas(v, r);
}

double fit_variance_exponent(const std::vector<VarianceEstimate>& estimates, const Space& space) {
  if (estimates.size() < 4) throw ValidationError("fit_variance_exponent: need at least 4 radii");
  std::vector<double> x, y;
  for (const auto& e : estimates) {
    if (!(e.variance > 0.0)) throw ValidationError("fit_variance_exponent: variances must be positive");
    x.push_back(std::log(ball_volume(space, e.radius)));
    y.push_back(std::log(e.variance));
  }
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*hi - *lo == 0.0) throw ValidationError("fit_variance_exponent: singular fit (all volumes equal)");
  if (*hi - *lo < std::log(2.0)) throw ValidationError("fit_variance_exponent: radii must span a volume factor >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

ComparisonReport compare_estimates_vs_spectral(const std::vector<VarianceEstimate>& estimates,
                                               const SpectralMeasure& sigma, const std::string& sampler_name,
                                               std::uint64_t base_seed) {
  ComparisonReport report;
  report.sampler = sampler_name;
  report.base_seed = base_seed;
  report.replicas = estimates.empty() ? 0 : estimates.front().replicas;
  report.pass = true;
  for (const auto& e : estimates) {
    const double spectral = variance_of_statistic(sigma, ball_indicator(e.radius));
    double z = 0.0;
    if (e.stderr_variance > 0.0) {
      z = (e.variance - spectral) / e.stderr_variance;
    } else if (e.variance != spectral) {
      z = std::numeric_limits<double>::infinity();
    }
    report.rows.push_back({e.radius, e.variance, e.stderr_variance, spectral, z});
    if (!(std::abs(z) <= 3.0)) report.pass = false;
  }
  return report;
}

ComparisonReport compare_mc_vs_spectral(const SamplerSpec& sampler, const SpectralMeasure& sigma,
                                        const std::vector<double>& radii, int replicas, std::uint64_t base_seed,
                                        const ReplicaOptions& options) {
  if (!(sigma.space == sampler.space)) throw ValidationError("compare_mc_vs_spectral: sampler and measure spaces differ");
  return compare_estimates_vs_spectral(estimate_number_variance(sampler, radii, replicas, base_seed, options), sigma,
                                       sampler.name, base_seed);
}

ChiSquareResult two_sample_chi_square(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ValidationError("two_sample_chi_square: empty sample");
  std::map<long, std::pair<double, double>> table;
  for (double x : a) table[std::lround(x)].first += 1.0;
  for (double x : b) table[std::lround(x)].second += 1.0;
  // Pool consecutive values until each bin has >= 10 observations; a short last bin joins its predecessor.
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> acc{0.0, 0.0};
  for (const auto& [value, counts] : table) {
    acc.first += counts.first;
    acc.second += counts.second;
    if (acc.first + acc.second >= 10.0) {
      bins.push_back(acc);
      acc = {0.0, 0.0};
    }
  }
  if (acc.first + acc.second > 0.0) {
    if (bins.empty()) {
      bins.push_back(acc);
    } else {
      bins.back().first += acc.first;
      bins.back().second += acc.second;
    }
  }
  ChiSquareResult r;
  r.degrees_of_freedom = static_cast<int>(bins.size()) - 1;
  if (r.degrees_of_freedom < 1) return r;
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double k1 = std::sqrt(n2 / n1);
  const double k2 = std::sqrt(n1 / n2);
  for (const auto& [o1, o2] : bins) {
    const double d = k1 * o1 - k2 * o2;
    r.statistic += d * d / (o1 + o2);
  }
  r.p_value = boost::math::gamma_q(0.5 * r.degrees_of_freedom, 0.5 * r.statistic);
  return r;
}

std::string estimates_csv(const std::vector<VarianceEstimate>& estimates) {
  std::string s = "radius,mean_count,variance,stderr_variance,replicas\n";
  for (const auto& e : estimates) {
    s += fmt(e.radius) + ',' + fmt(e.mean_count) + ',' + fmt(e.variance) + ',' + fmt(e.stderr_variance) + ',' +
         std::to_string(e.replicas) + '\n';
  }
  return s;
}

std::string report_csv(const ComparisonReport& report) {
  std::string s = "radius,mc_variance,stderr_variance,spectral_variance,z_score\n";
  for (const auto& r : report.rows) {
    s += fmt(r.radius) + ',' + fmt(r.mc_variance) + ',' + fmt(r.stderr_variance) + ',' + fmt(r.spectral_variance) +
         ',' + fmt(r.z_score) + '\n';
  }
  return s;
}

std::string report_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["sampler"] = report.sampler;
  j["base_seed"] = report.base_seed;
  j["replicas"] = report.replicas;
  double max_z = 0.0;
  for (const auto& r : report.rows) max_z = std::max(max_z, std::abs(r.z_score));
  j["max_abs_z"] = max_z;
  j["pass"] = report.pass;
  return j.dump(2);
}

}  // namespace hyperspec
