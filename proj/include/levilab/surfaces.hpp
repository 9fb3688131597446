#pragma once

// Defining functions over C^{n+1} = R^{2n+2}.
//
// Real coordinates are interleaved (x_1, y_1, ..., x_{n+1}, y_{n+1}) with
// z_k = x_k + i y_k. Every family is written so that f < 0 inside the domain
// and f = 0 on its boundary. Derivatives come from forward-mode jets
// (taylor.hpp), never from finite differences.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "levilab/hermitian.hpp"
#include "levilab/reinhardt.hpp"

namespace levilab {

inline constexpr int kMaxComplexDim = 4;  // n + 1 <= 4

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[std::size_t(i)]; }
  double& operator[](int i) { return coords_[std::size_t(i)]; }
  std::span<const double> coords() const { return coords_; }
  Complex z(int k) const { return {coords_[std::size_t(2 * k)], coords_[std::size_t(2 * k + 1)]}; }

  static Point from_z(const std::vector<Complex>& z);

 private:
  std::vector<double> coords_;
};

/// Value, real gradient and real Hessian of a defining function at a point,
/// with the Wirtinger quantities derived from them.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd rgrad;
  Eigen::MatrixXd rhess;

  int complex_dim() const { return static_cast<int>(rgrad.size() / 2); }
  /// f_k = (df/dx_k - i df/dy_k) / 2
  ComplexVector wgrad() const;
  /// f_{k lbar} = d^2 f / dz_k dzbar_l
  HermitianMatrix whess() const;
  /// |df| = sqrt(sum_k |f_k|^2) = |grad f| / 2
  double pgrad_norm() const;
};

// --- families ---------------------------------------------------------------

struct SphereFamily {
  double radius = 1.0;  // |x|^2 - R^2
};

struct EllipsoidFamily {
  std::vector<double> axes;  // scale * (sum x_k^2 / a_k^2 - 1)
  double scale = 1.0;
};

/// coef * prod_k z_k^{powers_k}
struct HoloTerm {
  Complex coef;
  std::vector<int> powers;
};

/// -c + |z|^2 / (n+1) + Re h(z), h holomorphic with h(0) = 0, dh(0) = 0, so
/// Re h is pluriharmonic and the complex Hessian is I / (n+1) everywhere.
struct PerturbedQuadricFamily {
  double c = 1.0;
  std::vector<HoloTerm> h;
};

/// sum_{i in coords} x_i^2 - R^2 over a subset of the real coordinates.
/// Unbounded; usable for pointwise curvature only.
struct CylinderFamily {
  std::vector<int> coords;
  double radius = 1.0;
};

/// |z1|^2 - f(|z2|^2) for an integrated constant-curvature profile (n = 1).
struct ReinhardtFamily {
  std::shared_ptr<const ReinhardtProfile> profile;
};

/// coef * z^{zpow} zbar^{zbarpow}
struct PolyTerm {
  Complex coef;
  std::vector<int> zpow;
  std::vector<int> zbarpow;
};

/// Re sum of terms. `length` is the characteristic size used to bound ray
/// searches.
struct PolynomialFamily {
  std::vector<PolyTerm> terms;
  double length = 1.0;
  bool star_shaped = true;
};

using Family = std::variant<SphereFamily, EllipsoidFamily, PerturbedQuadricFamily, CylinderFamily,
                            ReinhardtFamily, PolynomialFamily>;

/// none: f;  exponential: e^f - 1 (same zero set, different defining function)
enum class Reparametrization { none, exponential };

class SurfaceSpec {
 public:
  /// Validates parameters; star-shaped families are also checked for radial
  /// solvability on a coarse direction grid. Throws ConstructionError.
  SurfaceSpec(int n, Family family, std::vector<double> center = {},
              Reparametrization reparam = Reparametrization::none, std::string name = {});

  int n() const { return n_; }
  int real_dim() const { return 2 * n_ + 2; }
  const Family& family() const { return family_; }
  const Point& center() const { return center_; }
  Reparametrization reparametrization() const { return reparam_; }
  const std::string& name() const { return name_; }
  std::string family_name() const;
  bool star_shaped() const;
  double characteristic_scale() const;

  SurfaceSpec with_reparametrization(Reparametrization r) const;
  SurfaceSpec translated(std::span<const double> offset) const;

  double value(const Point& p) const;
  /// f(center + t * direction) and its t-derivative
  std::pair<double, double> along_ray(std::span<const double> direction, double t) const;
  Jet2 jet(const Point& p) const;

 private:
  void validate() const;

  int n_;
  Family family_;
  Point center_;
  Reparametrization reparam_;
  std::string name_;
};

Jet2 jet(const SurfaceSpec& spec, const Point& p);

struct RadialHit {
  double rho = 0.0;
  double grad_dot_direction = 0.0;  // <grad f, omega> at the root, > 0
  double residual = 0.0;            // f at the root
};

/// Root of f(center + rho * omega) for a unit direction omega. Newton with a
/// bisection safeguard inside a bracket found by doubling from the center.
/// Throws NotStarShapedError (no sign change within 1e3 * scale, or
/// f(center) >= 0) or TransversalityError (<grad f, omega> <= 0).
RadialHit radial_root(const SurfaceSpec& spec, std::span<const double> direction);

// Convenience constructors.
SurfaceSpec make_sphere(int n, double radius, std::vector<double> center = {});
SurfaceSpec make_ellipsoid(std::vector<double> axes, std::vector<double> center = {});
/// Ellipsoid with the Dirichlet normalization: trace ddbar f = 1.
SurfaceSpec make_dirichlet_ellipsoid(std::vector<double> axes, std::vector<double> center = {});
SurfaceSpec make_perturbed_quadric(int n, double c, std::vector<HoloTerm> h,
                                   std::vector<double> center = {});
SurfaceSpec make_cylinder(int n, std::vector<int> coords, double radius);
SurfaceSpec make_reinhardt(std::shared_ptr<const ReinhardtProfile> profile,
                           std::vector<double> center = {});

/// Closed-form Dirichlet scale 2 / sum(1/a_k^2) for the ellipsoid axes.
double dirichlet_scale(std::span<const double> axes);

}  // namespace levilab
