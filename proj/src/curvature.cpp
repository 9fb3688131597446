#include "levilab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "levilab/combinatorics.hpp"
#include "levilab/errors.hpp"

namespace levilab {

namespace {

void check_indices(const BoundaryFrame& frame, std::span<const int> indices) {
  const int m = frame.n() + 1;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] < 0 || indices[t] >= m)
      throw RangeError("bordered_minor: index " + std::to_string(indices[t]) + " outside [0, " +
                       std::to_string(m) + ")");
    for (std::size_t u = 0; u < t; ++u)
      if (indices[u] == indices[t]) throw ArgumentError("bordered_minor: duplicate index");
  }
}

}  // namespace

BoundaryFrame make_frame(const Point& point, const Jet2& jet, double value_tol) {
  if (!(std::abs(jet.value) <= value_tol))
    throw DomainError("make_frame: |f| = " + std::to_string(std::abs(jet.value)) +
                      " exceeds boundary tolerance");
  const ComplexVector wgrad = jet.wgrad();
  const double pg = wgrad.norm();
  if (!(pg > kDegeneracyThreshold))
    throw DegeneracyError("make_frame: |df| = " + std::to_string(pg) + " (characteristic point)");
  return BoundaryFrame{point, jet, wgrad, jet.whess(), pg, jet.rgrad / jet.rgrad.norm(), wgrad / pg};
}

BoundaryFrame make_frame(const SurfaceSpec& spec, const Point& point, double value_tol) {
  return make_frame(point, spec.jet(point), value_tol);
}

Complex bordered_minor(const BoundaryFrame& frame, std::span<const int> indices) {
  check_indices(frame, indices);
  const Eigen::Index s = static_cast<Eigen::Index>(indices.size());
  ComplexMatrix b = ComplexMatrix::Zero(s + 1, s + 1);
  for (Eigen::Index r = 0; r < s; ++r) {
    const int ir = indices[std::size_t(r)];
    b(0, r + 1) = std::conj(frame.wgrad(ir));
    b(r + 1, 0) = frame.wgrad(ir);
    for (Eigen::Index c = 0; c < s; ++c) b(r + 1, c + 1) = frame.whess(ir, indices[std::size_t(c)]);
  }
  return b.determinant();
}

double levi_numerator(const BoundaryFrame& frame, int j) {
  const int n = frame.n();
  if (j < 1 || j > n) throw RangeError("levi: j = " + std::to_string(j) + " outside [1, " + std::to_string(n) + "]");
  Complex sum{0.0, 0.0};
  for_each_subset(n + 1, j + 1, [&](const std::vector<int>& idx) { sum += bordered_minor(frame, idx); });
  if (std::abs(sum.imag()) > 1e-10 * std::max(1.0, std::abs(sum)))
    throw ArgumentError("levi: bordered minors have imaginary part " + std::to_string(sum.imag()));
  return -sum.real() / binomial(n, j);
}

double levi(const BoundaryFrame& frame, int j) {
  return levi_numerator(frame, j) / std::pow(frame.pgrad_norm, j + 2);
}

double mean_curvature(const BoundaryFrame& frame) {
  const Eigen::VectorXd& g = frame.jet.rgrad;
  const Eigen::MatrixXd& h = frame.jet.rhess;
  const double norm = g.norm();
  if (!(norm > kDegeneracyThreshold)) throw DegeneracyError("mean_curvature: vanishing gradient");
  const double div = h.trace() / norm - g.dot(h * g) / (norm * norm * norm);
  return div / (2 * frame.n() + 1);
}

}  // namespace levilab
