#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace hyperspec {

/// The commutative spaces we can compute on: R^d (1 <= d <= 4) and the Poincare disk model of H^2.
class Space {
 public:
  static Space euclidean(int d);
  static Space hyperbolic_disk();

  bool is_euclidean() const noexcept { return dim_ > 0; }
  bool is_hyperbolic() const noexcept { return dim_ == 0; }
  /// Topological dimension: d for R^d, 2 for the disk.
  int dimension() const noexcept { return is_hyperbolic() ? 2 : dim_; }
  /// Short tag: "euclidean-<d>" or "hyperbolic-disk".
  std::string name() const;
  static Space parse(const std::string& name);

  /// Radial density of the invariant measure m_X in geodesic radius s: m_X(B_r) = int_0^r volume_element(s) ds.
  /// Euclidean: |S^{d-1}| s^{d-1}. Disk: sinh(s)/2 (density dA / (pi (1-|z|^2)^2)).
  double volume_element(double s) const;

  bool operator==(const Space&) const = default;

 private:
  explicit Space(int dim) : dim_(dim) {}
  int dim_;  // 0 encodes the hyperbolic disk
};

/// |S^{d-1}|: 2, 2 pi, 4 pi, 2 pi^2 for d = 1..4.
double sphere_area(int d);

/// Point of a Space: Euclidean coordinates, or a complex number in the open unit disk.
struct Point {
  std::vector<double> coords;  // Euclidean
  std::complex<double> z{};    // disk

  static Point euclidean(std::vector<double> x) { return Point{std::move(x), {}}; }
  static Point disk(std::complex<double> w) { return Point{{}, w}; }
};

/// Centered geodesic ball observation window.
struct Window {
  Space space;
  double radius;

  Window(Space sp, double r);
  /// For the disk: Euclidean radius tanh(R/2) of the window; for R^d: the radius itself.
  double model_radius() const;
};

/// Geodesic distance. Throws DomainError for disk points with |z| >= 1, ValidationError on dimension mismatch.
double distance(const Space& space, const Point& p, const Point& q);

/// Geodesic distance from the base point (origin).
double distance_from_origin(const Space& space, const Point& p);

/// m_X(B_r) in the library normalization (Lebesgue on R^d; sinh^2(r/2) on the disk).
double ball_volume(const Space& space, double r);

/// Element of SU(1,1) acting by z -> (u z + v) / (conj(v) z + conj(u)).
struct Mobius {
  std::complex<double> u{1.0, 0.0};
  std::complex<double> v{0.0, 0.0};
};

/// Applies g to a disk point. Throws ValidationError if |u|^2 - |v|^2 deviates from 1 by more than 1e-10.
std::complex<double> mobius_apply(const Mobius& g, std::complex<double> z);

}  // namespace hyperspec
