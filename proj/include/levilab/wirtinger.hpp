#pragma once

// Exact polynomials in z_1..z_m and zbar_1..zbar_m (m <= 4) with
// rational-complex coefficients, and the symbolic checks of the identities
// behind the Levi-curvature integral formula.
//
// z_i and zbar_i are independent indeterminates: wd(p, Var::z, i) is the
// Wirtinger derivative d/dz_i, wd(p, Var::zbar, i) is d/dzbar_i.
// Complex indices are 0-based.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace levilab::wirtinger {

inline constexpr int kMaxVars = 4;

struct Rational2 {
  mpq_class re;
  mpq_class im;

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  friend bool operator==(const Rational2& a, const Rational2& b) { return a.re == b.re && a.im == b.im; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

/// Exponent vector: entries [0, m) are powers of z_i, [m, 2m) powers of zbar_i.
using Exponent = std::array<std::uint8_t, 2 * kMaxVars>;

enum class Var { z, zbar };

class WPoly {
 public:
  explicit WPoly(int nvars = 1);

  static WPoly constant(int nvars, Rational2 c);
  static WPoly constant(int nvars, long re, long im = 0);
  static WPoly z(int nvars, int i);
  static WPoly zbar(int nvars, int i);
  static WPoly monomial(int nvars, const Exponent& e, Rational2 c);

  int nvars() const { return nvars_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponent, Rational2>& terms() const { return terms_; }
  int degree() const;

  WPoly& operator+=(const WPoly& o);
  WPoly& operator-=(const WPoly& o);
  friend WPoly operator+(WPoly a, const WPoly& b) { return a += b; }
  friend WPoly operator-(WPoly a, const WPoly& b) { return a -= b; }
  friend WPoly operator-(const WPoly& a);
  friend WPoly operator*(const WPoly& a, const WPoly& b);
  friend WPoly operator*(const Rational2& s, const WPoly& p);
  friend bool operator==(const WPoly& a, const WPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Swaps the z / zbar exponent blocks and conjugates every coefficient.
  WPoly conj() const;

  /// Evaluates at z (zbar taken as conj(z)) in double precision.
  std::complex<double> evaluate(const std::vector<std::complex<double>>& z) const;

  std::string to_string() const;

 private:
  void add_term(const Exponent& e, const Rational2& c);

  int nvars_;
  std::map<Exponent, Rational2> terms_;  // canonical: no zero coefficient stored
};

WPoly wd(const WPoly& p, Var which, int i);

class WMatrix {
 public:
  WMatrix(int rows, int cols, int nvars);
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  WPoly& operator()(int r, int c) { return entries_[std::size_t(r * cols_ + c)]; }
  const WPoly& operator()(int r, int c) const { return entries_[std::size_t(r * cols_ + c)]; }
  WMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;
  WPoly det() const;  // cofactor expansion; square only

 private:
  int rows_, cols_, nvars_;
  std::vector<WPoly> entries_;
};

/// Complex Hessian [d^2 f / dz_l dzbar_k].
WMatrix complex_hessian(const WPoly& f);

/// Symbolic sigma_j and d sigma_j / d a_{lk} of a square matrix.
WPoly sym_sigma(const WMatrix& a, int j);
WMatrix sym_sigma_grad(const WMatrix& a, int j);

/// Determinant of the bordered matrix [[0, f_{ibar}], [f_i, f_{i kbar}]]
/// restricted to the strictly increasing index list `indices`.
WPoly sym_bordered_det(const WPoly& f, const std::vector<int>& indices);

/// Real-valued (f == conj(f)) polynomial of total degree <= `degree` with
/// every monomial present and seeded random rational coefficients.
WPoly random_real_poly(int nvars, int degree, std::mt19937_64& rng);

/// Outcome of one symbolic identity check: the residual polynomials (all
/// zero when the identity holds) and the largest term count of any
/// intermediate polynomial built for it.
struct IdentityCheck {
  std::string name;
  std::vector<WPoly> residuals;
  std::size_t max_terms = 0;
  bool passed() const;
};

// All three build a generic real polynomial of degree 3 from `rng`.
// Preconditions: 1 <= n, n + 1 <= kMaxVars (CostError otherwise), 1 <= j <= n.

/// sum_l d/dz_l (d sigma_{j+1}(ddbar f) / d a_{lk}) for every k.
IdentityCheck check_null_lagrangian(int n, int j, std::mt19937_64& rng, int degree = 3);
/// sum_{l,k} (d sigma_{j+1}/d a_{lk}) f_l f_kbar + sum_I Delta_I(f).
IdentityCheck check_lemma_identity(int n, int j, std::mt19937_64& rng, int degree = 3);
/// (j+1) sigma_{j+1}(ddbar f) - sum_{l,k} (d sigma_{j+1}/d a_{lk}) f_{l kbar}.
IdentityCheck check_euler_sigma(int n, int j, std::mt19937_64& rng, int degree = 3);

}  // namespace levilab::wirtinger
