#include "hyperspec/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "hyperspec/errors.hpp"

namespace hyperspec::quad {

namespace {

// Kronrod abscissae (positive half, descending) and weights; Gauss-7 weights on the odd nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};
  double kronrod = fc * kWk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    kronrod += kWk[j] * (fv1[j] + fv2[j]);
    abs_sum += kWk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (fv1[j] + fv2[j]);
  }
  const double value = kronrod * half;
  double err = std::abs((kronrod - gauss) * half);
  // QUADPACK-style error scaling.
  const double mean = kronrod * 0.5;
  double asc = std::abs(fc - mean) * kWk[7];
  for (int j = 0; j < 7; ++j) {
    asc += kWk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }
  asc *= std::abs(half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  const double resabs = abs_sum * std::abs(half);
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(err, 50.0 * eps * resabs);
  }
  return {a, b, value, err, resabs};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const Options& opts) {
  if (breakpoints.size() < 2) {
    throw ValidationError("integrate: need at least two breakpoints");
  }
  std::priority_queue<Panel> heap;
  Result res;
  double total = 0.0;
  double total_err = 0.0;
  double total_l1 = 0.0;
  auto tolerance = [&]() {
    return std::max({opts.abs_tol, opts.rel_tol * std::abs(total), opts.l1_rel_tol * total_l1});
  };
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] == breakpoints[i]) continue;
    Panel p = gk15(f, breakpoints[i], breakpoints[i + 1]);
    res.evaluations += 15;
    total += p.value;
    total_err += p.error;
    total_l1 += p.l1;
    heap.push(p);
  }
  int intervals = static_cast<int>(heap.size());
  const double eps = std::numeric_limits<double>::epsilon();
  while (!heap.empty()) {
    if (total_err <= tolerance()) break;
    if (intervals >= opts.max_intervals) {
      res.converged = false;
      break;
    }
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Panel too narrow to split further in double precision.
    if (std::abs(worst.b - worst.a) <= 4.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      res.converged = false;
      break;
    }
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum from the panels to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  total_l1 = 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : panels) {
    total += p.value;
    total_err += p.error;
    total_l1 += p.l1;
  }
  res.value = total;
  res.abs_error = total_err;
  if (total_err <= tolerance()) res.converged = true;
  return res;
}

Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opts) {
  const std::array<double, 2> br = {a, b};
  return integrate(f, br, opts);
}

double integrate_checked(const std::function<double(double)>& f, std::span<const double> breakpoints,
                         const Options& opts, const char* what) {
  const Result r = integrate(f, breakpoints, opts);
  if (!r.converged) {
    throw NumericError(std::string(what) + ": quadrature did not converge", r.abs_error);
  }
  return r.value;
}

std::vector<double> uniform_breaks(double a, double b, double max_width) {
  if (!(b > a)) return {a, b};
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / n;
  out[n] = b;
  return out;
}

}  // namespace hyperspec::quad
