#include "levilab/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "levilab/combinatorics.hpp"
#include "levilab/errors.hpp"

namespace levilab {

namespace {

Complex det(const ComplexMatrix& m) {
  if (m.rows() == 0) return {1.0, 0.0};
  return m.determinant();
}

ComplexMatrix submatrix(const ComplexMatrix& a, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
  ComplexMatrix s(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) s(Eigen::Index(r), Eigen::Index(c)) = a(rows[r], cols[c]);
  return s;
}

void check_order(const ComplexMatrix& a, int j, int lo) {
  if (a.rows() != a.cols()) throw ArgumentError("sigma: matrix is not square");
  if (j < lo || j > a.rows())
    throw RangeError("sigma: order j=" + std::to_string(j) + " outside [" + std::to_string(lo) +
                     ", " + std::to_string(a.rows()) + "]");
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& entries, double tol) {
  if (entries.rows() != entries.cols() || entries.rows() < 1)
    throw ConstructionError("HermitianMatrix: entries must form a non-empty square matrix");
  const double dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (!(dev <= tol))
    throw ConstructionError("HermitianMatrix: max |a_kl - conj(a_lk)| = " + std::to_string(dev) +
                            " exceeds tolerance");
  a_ = 0.5 * (entries + entries.adjoint());
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const Eigen::VectorXd& d) {
  return HermitianMatrix(ComplexMatrix(d.cast<Complex>().asDiagonal()));
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

namespace detail {

Complex sigma_by_minors(const ComplexMatrix& a, int j) {
  Complex s{0.0, 0.0};
  for_each_subset(static_cast<int>(a.rows()), j,
                  [&](const std::vector<int>& idx) { s += det(submatrix(a, idx, idx)); });
  return s;
}

// Characteristic polynomial det(x I - A) = sum_i c_i x^i by Faddeev-LeVerrier;
// sigma_j = (-1)^j c_{dim-j}.
Complex sigma_by_charpoly(const ComplexMatrix& a, int j) {
  const Eigen::Index d = a.rows();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  Complex c_prev{1.0, 0.0};  // c_{d-k+1}
  Complex c{1.0, 0.0};
  for (int k = 1; k <= j; ++k) {
    m = a * m + c_prev * ComplexMatrix::Identity(d, d);
    c = -(a * m).trace() / static_cast<double>(k);
    c_prev = c;
  }
  return (j % 2 == 0) ? c : -c;
}

ComplexMatrix sigma_grad_by_cofactors(const ComplexMatrix& a, int j) {
  const int d = static_cast<int>(a.rows());
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  for_each_subset(d, j, [&](const std::vector<int>& idx) {
    for (int p = 0; p < j; ++p) {
      for (int q = 0; q < j; ++q) {
        std::vector<int> rows, cols;
        for (int t = 0; t < j; ++t) {
          if (t != p) rows.push_back(idx[std::size_t(t)]);
          if (t != q) cols.push_back(idx[std::size_t(t)]);
        }
        const double sign = ((p + q) % 2 == 0) ? 1.0 : -1.0;
        g(idx[std::size_t(p)], idx[std::size_t(q)]) += sign * det(submatrix(a, rows, cols));
      }
    }
  });
  return g;
}

ComplexMatrix sigma_grad_by_polynomial(const ComplexMatrix& a, int j) {
  const Eigen::Index d = a.rows();
  const ComplexMatrix at = a.transpose();
  ComplexMatrix power = ComplexMatrix::Identity(d, d);
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < j; ++i) {
    const int order = j - 1 - i;
    const Complex s = order == 0 ? Complex{1.0, 0.0} : sigma_general(a, order);
    g += ((i % 2 == 0) ? 1.0 : -1.0) * s * power;
    power = power * at;
  }
  return g;
}

Complex sigma_general(const ComplexMatrix& a, int j) {
  check_order(a, j, 1);
  return a.rows() <= kMinorExpansionMaxDim ? sigma_by_minors(a, j) : sigma_by_charpoly(a, j);
}

ComplexMatrix sigma_grad_general(const ComplexMatrix& a, int j) {
  check_order(a, j, 1);
  return a.rows() <= kMinorExpansionMaxDim ? sigma_grad_by_cofactors(a, j)
                                           : sigma_grad_by_polynomial(a, j);
}

}  // namespace detail

double sigma(const HermitianMatrix& a, int j) {
  const Complex s = detail::sigma_general(a.entries(), j);
  const double scale = std::pow(std::max(1.0, a.entries().cwiseAbs().maxCoeff()), j);
  if (std::abs(s.imag()) > kHermitianTolerance * scale * binomial(a.dim(), j))
    throw ArgumentError("sigma: imaginary part " + std::to_string(s.imag()) +
                        " of a Hermitian sigma_j is not rounding noise");
  return s.real();
}

ComplexMatrix sigma_grad(const HermitianMatrix& a, int j) {
  return detail::sigma_grad_general(a.entries(), j);
}

double newton_gap(const HermitianMatrix& a, int j) {
  check_order(a.entries(), j, 2);
  const int d = a.dim();
  return binomial(d, j) * std::pow(a.trace() / d, j) - sigma(a, j);
}

}  // namespace levilab
