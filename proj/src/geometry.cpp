#include "hyperspec/geometry.hpp"

#include <cmath>
#include <numbers>

#include "hyperspec/errors.hpp"

namespace hyperspec {

using std::numbers::pi;

Space Space::euclidean(int d) {
  if (d < 1 || d > 4) throw ValidationError("Space: Euclidean dimension must be in {1,2,3,4}");
  return Space(d);
}

Space Space::hyperbolic_disk() { return Space(0); }

std::string Space::name() const {
  return is_hyperbolic() ? std::string("hyperbolic-disk") : "euclidean-" + std::to_string(dim_);
}

Space Space::parse(const std::string& name) {
  if (name == "hyperbolic-disk" || name == "hyperbolic" || name == "disk") return hyperbolic_disk();
  const std::string prefix = "euclidean-";
  if (name.rfind(prefix, 0) == 0 && name.size() == prefix.size() + 1) {
    return euclidean(name.back() - '0');
  }
  if (name == "complex-plane") return euclidean(2);
  throw ValidationError("Space: unknown space '" + name + "'");
}

double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    case 4: return 2.0 * pi * pi;
    default: throw ValidationError("sphere_area: dimension must be in {1,2,3,4}");
  }
}

double Space::volume_element(double s) const {
  if (is_hyperbolic()) return 0.5 * std::sinh(s);
  return sphere_area(dim_) * std::pow(s, dim_ - 1);
}

Window::Window(Space sp, double r) : space(sp), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("Window: radius must be positive and finite");
  if (space.is_hyperbolic() && !(std::tanh(0.5 * r) < 1.0)) {
    throw ValidationError("Window: hyperbolic radius too large for double precision");
  }
}

double Window::model_radius() const { return space.is_hyperbolic() ? std::tanh(0.5 * radius) : radius; }

namespace {

void check_disk(std::complex<double> z) {
  if (!(std::norm(z) < 1.0)) throw DomainError("disk point must satisfy |z| < 1");
}

}  // namespace

double distance(const Space& space, const Point& p, const Point& q) {
  if (space.is_hyperbolic()) {
    check_disk(p.z);
    check_disk(q.z);
    const double num = 2.0 * std::norm(p.z - q.z);
    const double den = (1.0 - std::norm(p.z)) * (1.0 - std::norm(q.z));
    // arccosh(1 + x) = log1p(x + sqrt(x (x + 2))) keeps precision near zero.
    const double x = num / den;
    return std::log1p(x + std::sqrt(x * (x + 2.0)));
  }
  const auto d = static_cast<std::size_t>(space.dimension());
  if (p.coords.size() != d || q.coords.size() != d) {
    throw ValidationError("distance: point dimension does not match space");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = p.coords[i] - q.coords[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double distance_from_origin(const Space& space, const Point& p) {
  if (space.is_hyperbolic()) {
    check_disk(p.z);
    return 2.0 * std::atanh(std::abs(p.z));
  }
  double sum = 0.0;
  for (double c : p.coords) sum += c * c;
  return std::sqrt(sum);
}

double ball_volume(const Space& space, double r) {
  if (r < 0.0) throw ValidationError("ball_volume: radius must be nonnegative");
  if (space.is_hyperbolic()) {
    const double sh = std::sinh(0.5 * r);
    return sh * sh;
  }
  const int d = space.dimension();
  return sphere_area(d) * std::pow(r, d) / d;
}

std::complex<double> mobius_apply(const Mobius& g, std::complex<double> z) {
  if (std::abs(std::norm(g.u) - std::norm(g.v) - 1.0) > 1e-10) {
    throw ValidationError("mobius_apply: matrix violates |u|^2 - |v|^2 = 1");
  }
  check_disk(z);
  return (g.u * z + g.v) / (std::conj(g.v) * z + std::conj(g.u));
}

}  // namespace hyperspec
