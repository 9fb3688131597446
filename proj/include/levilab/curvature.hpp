#pragma once

// Pointwise boundary geometry: bordered minors, Levi curvatures and the
// Euclidean mean curvature of {f = 0}.

#include <span>

#include "levilab/hermitian.hpp"
#include "levilab/surfaces.hpp"

namespace levilab {

inline constexpr double kBoundaryValueTolerance = 1e-10;
inline constexpr double kDegeneracyThreshold = 1e-10;

/// Everything the curvature formulas need at one boundary point.
struct BoundaryFrame {
  Point point;
  Jet2 jet;
  ComplexVector wgrad;    // f_k
  HermitianMatrix whess;  // f_{k lbar}
  double pgrad_norm;      // |df|
  Eigen::VectorXd normal; // grad f / |grad f|, outward since f < 0 inside
  ComplexVector nu;       // f_k / |df|

  int n() const { return static_cast<int>(wgrad.size()) - 1; }
};

/// Throws DomainError if |f(point)| > value_tol, DegeneracyError if
/// |df| <= kDegeneracyThreshold.
BoundaryFrame make_frame(const Point& point, const Jet2& jet,
                         double value_tol = kBoundaryValueTolerance);
BoundaryFrame make_frame(const SurfaceSpec& spec, const Point& point,
                         double value_tol = kBoundaryValueTolerance);

/// det [[0, f_{ibar}], [f_i, f_{i kbar}]] over the strictly increasing 0-based
/// index list; real up to rounding for real f.
Complex bordered_minor(const BoundaryFrame& frame, std::span<const int> indices);

/// K^(j) = -1/C(n,j) * |df|^{-(j+2)} * sum over (j+1)-subsets I of Delta_I.
double levi(const BoundaryFrame& frame, int j);

/// -sum_I Delta_I(f) / C(n, j): the numerator of levi, free of the |df| power.
double levi_numerator(const BoundaryFrame& frame, int j);

/// H = div(grad f / |grad f|) / (2n+1), normalized so a sphere of radius R
/// has H = 1/R.
double mean_curvature(const BoundaryFrame& frame);

}  // namespace levilab
