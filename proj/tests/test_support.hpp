#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "levilab/hermitian.hpp"

namespace levilab::test {

inline ComplexMatrix random_complex(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = Complex(u(rng), u(rng));
  return m;
}

inline HermitianMatrix random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0) {
  const ComplexMatrix m = random_complex(dim, rng, scale);
  return HermitianMatrix(ComplexMatrix(0.5 * (m + m.adjoint())));
}

/// B B^H: Hermitian positive semidefinite.
inline HermitianMatrix random_psd(int dim, std::mt19937_64& rng, double scale = 1.0) {
  const ComplexMatrix b = random_complex(dim, rng, scale);
  return HermitianMatrix(ComplexMatrix(b * b.adjoint()));
}

/// e_j of the eigenvalues, through an eigendecomposition (test oracle only).
inline double sigma_from_eigenvalues(const HermitianMatrix& a, int j) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.entries(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lambda = es.eigenvalues();
  std::vector<double> e(static_cast<std::size_t>(j + 1), 0.0);
  e[0] = 1.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    for (int k = j; k >= 1; --k) e[std::size_t(k)] += lambda(i) * e[std::size_t(k - 1)];
  return e[std::size_t(j)];
}

inline std::vector<double> random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(d));
  double s = 0.0;
  for (auto& x : v) {
    x = g(rng);
    s += x * x;
  }
  s = std::sqrt(s);
  for (auto& x : v) x /= s;
  return v;
}

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace levilab::test
