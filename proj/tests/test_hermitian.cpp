#include <cmath>
#include <random>

#include "doctest.h"

#include "levilab/errors.hpp"
#include "levilab/hermitian.hpp"
#include "test_support.hpp"

using namespace levilab;
using levilab::test::random_hermitian;
using levilab::test::random_psd;
using levilab::test::sigma_from_eigenvalues;

namespace {

HermitianMatrix diag123() { return HermitianMatrix::diagonal(Eigen::Vector3d(1, 2, 3)); }

}  // namespace

TEST_CASE("sigma examples") {
  CHECK(sigma(HermitianMatrix::identity(2), 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sigma(diag123(), 2) == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(sigma(diag123(), 3) == doctest::Approx(6.0).epsilon(1e-15));
  for (int d = 1; d <= 6; ++d) CHECK(sigma(HermitianMatrix::identity(d), d) == doctest::Approx(1.0));
}

TEST_CASE("sigma rejects out-of-range orders") {
  CHECK_THROWS_AS(sigma(diag123(), 0), RangeError);
  CHECK_THROWS_AS(sigma(diag123(), 4), RangeError);
  CHECK_THROWS_AS(sigma_grad(diag123(), 4), RangeError);
  CHECK_THROWS_AS(newton_gap(diag123(), 1), RangeError);
  CHECK_THROWS_AS(newton_gap(diag123(), 4), RangeError);
}

TEST_CASE("construction rejects non-Hermitian entries") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = Complex(0.0, 1e-9);
  CHECK_THROWS_AS(HermitianMatrix{m}, ConstructionError);
  m(0, 1) = Complex(0.0, 1e-13);
  CHECK_NOTHROW(HermitianMatrix{m});
  CHECK_THROWS_AS(HermitianMatrix{ComplexMatrix(2, 3)}, ConstructionError);
  m = ComplexMatrix::Identity(2, 2);
  m(1, 1) = Complex(1.0, 1e-6);
  CHECK_THROWS_AS(HermitianMatrix{m}, ConstructionError);
}

TEST_CASE("sigma matches the eigenvalue oracle on 2x2 to 6x6") {
  std::mt19937_64 rng(7);
  for (int d = 2; d <= 6; ++d)
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_hermitian(d, rng);
      for (int j = 1; j <= d; ++j) CHECK(std::abs(sigma(a, j) - sigma_from_eigenvalues(a, j)) <= 1e-9);
    }
}

TEST_CASE("random 3x3 sigma_2 against eigenvalues") {
  std::mt19937_64 rng(11);
  const auto a = random_hermitian(3, rng, 2.0);
  CHECK(std::abs(sigma(a, 2) - sigma_from_eigenvalues(a, 2)) <= 1e-10);
}

TEST_CASE("minor and characteristic-polynomial routes agree") {
  std::mt19937_64 rng(13);
  for (int d = 2; d <= 6; ++d) {
    const ComplexMatrix a = levilab::test::random_complex(d, rng);
    for (int j = 1; j <= d; ++j) {
      CHECK(std::abs(detail::sigma_by_minors(a, j) - detail::sigma_by_charpoly(a, j)) <= 1e-10);
      const ComplexMatrix g1 = detail::sigma_grad_by_cofactors(a, j);
      const ComplexMatrix g2 = detail::sigma_grad_by_polynomial(a, j);
      CHECK((g1 - g2).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("general route above the minor-expansion size") {
  std::mt19937_64 rng(17);
  const auto a = random_hermitian(7, rng);
  for (int j = 1; j <= 7; ++j) CHECK(std::abs(sigma(a, j) - sigma_from_eigenvalues(a, j)) <= 1e-9);
}

TEST_CASE("sigma_grad examples") {
  const ComplexMatrix g = sigma_grad(HermitianMatrix::identity(3), 2);
  CHECK((g - 2.0 * ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);

  std::mt19937_64 rng(3);
  const auto a = random_hermitian(4, rng);
  CHECK((sigma_grad(a, 1) - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);

  ComplexMatrix expect = ComplexMatrix::Zero(3, 3);
  expect(0, 0) = 6;
  expect(1, 1) = 3;
  expect(2, 2) = 2;
  CHECK((sigma_grad(diag123(), 3) - expect).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("sigma_grad matches central finite differences") {
  // a_{lk} and a_{kl} are independent: perturb one entry of the general matrix.
  std::mt19937_64 rng(19);
  const double h = 1e-5;
  for (int d = 2; d <= 5; ++d) {
    const auto a = random_hermitian(d, rng);
    for (int j = 1; j <= d; ++j) {
      const ComplexMatrix g = sigma_grad(a, j);
      for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k) {
          ComplexMatrix p = a.entries(), m = a.entries();
          p(l, k) += h;
          m(l, k) -= h;
          const Complex fd = (detail::sigma_general(p, j) - detail::sigma_general(m, j)) / (2 * h);
          CHECK(std::abs(fd - g(l, k)) <= 1e-6);
        }
    }
  }
}

TEST_CASE("homogeneity and Euler identity") {
  std::mt19937_64 rng(23);
  for (int d = 2; d <= 6; ++d)
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_hermitian(d, rng);
      for (int j = 1; j <= d; ++j) {
        for (double t : {-2.0, 0.5, 3.0}) {
          const HermitianMatrix ta(ComplexMatrix(t * a.entries()));
          CHECK(std::abs(sigma(ta, j) - std::pow(t, j) * sigma(a, j)) <= 1e-10 * std::max(1.0, std::abs(sigma(ta, j))));
        }
        const Complex contraction = (sigma_grad(a, j).cwiseProduct(a.entries())).sum();
        CHECK(std::abs(contraction - double(j) * sigma(a, j)) <= 1e-10);
      }
    }
}

TEST_CASE("newton_gap examples") {
  CHECK(std::abs(newton_gap(diag123(), 2) - 1.0) <= 1e-12);
  for (int d = 2; d <= 6; ++d)
    for (double c : {-3.0, 0.25, 1.0, 7.0}) {
      const HermitianMatrix ci(ComplexMatrix(c * ComplexMatrix::Identity(d, d)));
      for (int j = 2; j <= d; ++j) CHECK(std::abs(newton_gap(ci, j)) <= 1e-10 * std::max(1.0, std::pow(std::abs(c), j)));
    }
}

TEST_CASE("newton_gap is nonnegative on 100 random matrices") {
  // Order 2 holds for every Hermitian matrix; higher orders are sampled on
  // positive semidefinite matrices, where the Maclaurin inequalities hold.
  std::mt19937_64 rng(29);
  double worst = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 5;
    const auto a = random_hermitian(d, rng);
    worst = std::min(worst, newton_gap(a, 2));
    const auto p = random_psd(d, rng);
    for (int j = 2; j <= d; ++j) worst = std::min(worst, newton_gap(p, j));
  }
  CHECK(worst >= -1e-10);
}

TEST_CASE("newton_gap of order 3 can be negative on indefinite matrices") {
  const HermitianMatrix a = HermitianMatrix::diagonal(Eigen::Vector3d(1, 1, -10));
  // (-8/3)^3 - (-10) = -512/27 + 10
  CHECK(newton_gap(a, 3) == doctest::Approx(-512.0 / 27.0 + 10.0).epsilon(1e-14));
  CHECK(newton_gap(a, 3) < 0.0);
}

TEST_CASE("binomial") {
  CHECK(binomial(4, 2) == 6.0);
  CHECK(binomial(3, 0) == 1.0);
  CHECK(binomial(3, 4) == 0.0);
  CHECK(binomial(6, 3) == 20.0);
}
