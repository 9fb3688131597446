#pragma once

// Hermitian matrices and the elementary symmetric functions of their
// eigenvalues, computed algebraically (principal minors / characteristic
// polynomial), never through an eigendecomposition.
//
// Derivative convention: the entries a_{lk} and a_{kl} are treated as
// independent variables. sigma_grad(A, j)(l, k) is d sigma_j / d a_{lk},
// which is the (l, k) cofactor summed over the principal j x j minors that
// contain row l and column k. With this convention
//
//   sum_{l,k} sigma_grad(A, j)(l, k) * a_{lk} = j * sigma_j(A).

#include <complex>

#include <Eigen/Dense>

namespace levilab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-12;

class HermitianMatrix {
 public:
  /// Throws ConstructionError if max |a_{kl} - conj(a_{lk})| exceeds `tol`.
  /// The stored matrix is the exact Hermitian part (A + A^H) / 2.
  explicit HermitianMatrix(const ComplexMatrix& entries, double tol = kHermitianTolerance);

  static HermitianMatrix identity(int dim);
  static HermitianMatrix diagonal(const Eigen::VectorXd& d);

  int dim() const { return static_cast<int>(a_.rows()); }
  const ComplexMatrix& entries() const { return a_; }
  Complex operator()(int l, int k) const { return a_(l, k); }
  double trace() const { return a_.diagonal().real().sum(); }

 private:
  ComplexMatrix a_;
};

/// j-th elementary symmetric function of the eigenvalues, 1 <= j <= dim.
double sigma(const HermitianMatrix& a, int j);

/// d sigma_j / d a_{lk} for every (l, k), 1 <= j <= dim.
ComplexMatrix sigma_grad(const HermitianMatrix& a, int j);

/// C(dim, j) (trace/dim)^j - sigma_j, 2 <= j <= dim. Nonnegative for every
/// Hermitian matrix, zero exactly on real multiples of the identity.
double newton_gap(const HermitianMatrix& a, int j);

namespace detail {

// Same quantities for an arbitrary square complex matrix. sigma_general
// sums principal minors for dim <= 6 and uses the Faddeev-LeVerrier recursion
// above; sigma_grad_general uses cofactors for dim <= 6 and the matrix
// polynomial sum_i (-1)^i sigma_{j-1-i} (A^T)^i above.
Complex sigma_general(const ComplexMatrix& a, int j);
ComplexMatrix sigma_grad_general(const ComplexMatrix& a, int j);

Complex sigma_by_minors(const ComplexMatrix& a, int j);
Complex sigma_by_charpoly(const ComplexMatrix& a, int j);
ComplexMatrix sigma_grad_by_cofactors(const ComplexMatrix& a, int j);
ComplexMatrix sigma_grad_by_polynomial(const ComplexMatrix& a, int j);

inline constexpr int kMinorExpansionMaxDim = 6;

}  // namespace detail

/// Binomial coefficient as a double (exact for the small arguments used here).
double binomial(int n, int k);

}  // namespace levilab
