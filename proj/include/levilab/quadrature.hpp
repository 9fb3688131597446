#pragma once

// Surface and volume integrals over star-shaped domains in R^{2n+2}, through
// the radial parametrization x = c + rho(omega) M omega over the unit sphere
// S^{2n+1} (d = 2n+2):
//
//   int_{dOmega} g dsigma = |det M| int_S g * rho^{d-1} |grad f| / <grad f, M omega> domega
//   |Omega|               = |det M| int_S rho^d / d domega
//   int_Omega g dx        = |det M| int_S int_0^rho g(c + r M omega) r^{d-1} dr domega
//
// M is the star frame. With the identity frame this is the plain radial
// graph. The automatic frame is the ellipsoid of the second-order Taylor
// expansion of f at the center, M = sqrt(-f(c)) (Hess f(c) / 2)^{-1/2}, which
// maps quadric domains exactly onto the unit sphere; it falls back to the
// identity when that Hessian is not positive definite.
//
// The unit sphere is covered either by a product rule in hyperspherical
// angles (Gauss-Legendre in the polar angles, the periodic trapezoid rule in
// the azimuth) or by seeded Monte Carlo directions. Results are bitwise
// independent of the worker count: nodes are processed in fixed chunks, each
// reduced with compensated summation, combined in chunk order.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levilab/surfaces.hpp"

namespace levilab {

struct ProductGauss {
  int order = 24;        // nodes per angle, >= 2
  int radial_order = 0;  // bulk integrals; 0 means same as order
};

struct MonteCarlo {
  std::uint64_t samples = 1000000;  // >= 1000
  std::uint64_t seed = 42;
  int radial_order = 16;
};

enum class StarFrame { automatic, identity };

struct QuadratureSpec {
  std::variant<ProductGauss, MonteCarlo> method = ProductGauss{};
  StarFrame frame = StarFrame::automatic;
  unsigned threads = 1;  // worker count; never affects results

  std::string describe() const;  // "gauss:order=24,frame=auto" / "mc:samples=...,seed=...,..."
  void validate() const;         // ArgumentError on invalid parameters
};

/// Default rule per the desk-scale budget: order 24 on S^3, 12 on S^5, 8 above.
QuadratureSpec default_quadrature(int n);

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;  // order-refinement delta or MC standard error
  std::uint64_t nodes_used = 0;
  std::string method;  // describe() plus the resolved frame
};

/// Integral plus the extreme field values seen at the nodes.
struct FieldSummary {
  IntegralResult integral;
  double min = 0.0;
  double max = 0.0;
};

struct BoundarySample {
  std::span<const double> direction;  // ray direction M omega; point = c + rho * direction
  double rho;
  const Point& point;
  const Jet2& jet;
};

struct InteriorSample {
  const Point& point;
  const Jet2& jet;
};

/// Writes one value per field into `out`.
using BoundaryField = std::function<void(const BoundarySample&, std::span<double> out)>;
using InteriorField = std::function<void(const InteriorSample&, std::span<double> out)>;

std::vector<FieldSummary> surface_integrals(const SurfaceSpec& spec, std::size_t nfields,
                                            const BoundaryField& field, const QuadratureSpec& q);
IntegralResult surface_integral(const SurfaceSpec& spec,
                                const std::function<double(const BoundarySample&)>& field,
                                const QuadratureSpec& q);

IntegralResult volume(const SurfaceSpec& spec, const QuadratureSpec& q);

std::vector<FieldSummary> bulk_integrals(const SurfaceSpec& spec, std::size_t nfields,
                                         const InteriorField& field, const QuadratureSpec& q);
IntegralResult bulk_integral(const SurfaceSpec& spec,
                             const std::function<double(const InteriorSample&)>& field,
                             const QuadratureSpec& q);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// Closed-form area of the unit sphere S^{d-1}.
double unit_sphere_area(int d);

/// Number of nodes on S^{d-1} used by a product rule of the given order.
std::uint64_t product_node_count(int d, int order);

/// The frame matrix M actually used for `spec` (identity on fallback).
Eigen::MatrixXd star_frame(const SurfaceSpec& spec, StarFrame frame);

}  // namespace levilab
