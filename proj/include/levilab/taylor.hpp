#pragma once

// Forward-mode automatic differentiation types used to evaluate defining
// functions.
//
//   Dual    value and one directional derivative (used along rays)
//   Taylor2 value, gradient and Hessian in up to kMaxVars real variables
//
// Both are plain value types with no heap storage. Family evaluators are
// written once as templates over the scalar and instantiated for double,
// Dual and Taylor2.

#include <array>
#include <cassert>
#include <cmath>

namespace levilab {

class Dual {
 public:
  constexpr Dual() = default;
  constexpr Dual(double v) : v_(v) {}  // NOLINT(implicit constant)
  constexpr Dual(double v, double d) : v_(v), d_(d) {}

  constexpr double value() const { return v_; }
  constexpr double deriv() const { return d_; }

  friend constexpr Dual operator+(Dual a, Dual b) { return {a.v_ + b.v_, a.d_ + b.d_}; }
  friend constexpr Dual operator-(Dual a, Dual b) { return {a.v_ - b.v_, a.d_ - b.d_}; }
  friend constexpr Dual operator-(Dual a) { return {-a.v_, -a.d_}; }
  friend constexpr Dual operator*(Dual a, Dual b) {
    return {a.v_ * b.v_, a.d_ * b.v_ + a.v_ * b.d_};
  }
  friend constexpr Dual operator/(Dual a, Dual b) {
    return {a.v_ / b.v_, (a.d_ * b.v_ - a.v_ * b.d_) / (b.v_ * b.v_)};
  }
  Dual& operator+=(Dual b) { return *this = *this + b; }
  Dual& operator-=(Dual b) { return *this = *this - b; }
  Dual& operator*=(Dual b) { return *this = *this * b; }

  // f(u) given f(u0), f'(u0)
  friend constexpr Dual chain(Dual u, double f0, double f1, double /*f2*/) {
    return {f0, f1 * u.d_};
  }

 private:
  double v_ = 0.0;
  double d_ = 0.0;
};

/// Second-order truncated Taylor jet. The Hessian is stored as a packed
/// lower triangle; variables beyond `nvars()` are implicitly zero.
class Taylor2 {
 public:
  static constexpr int kMaxVars = 8;

  constexpr Taylor2() = default;
  constexpr Taylor2(double v) : v_(v) {}  // NOLINT(implicit constant)

  /// The independent variable number `index` of `nvars`, at value `v`.
  static Taylor2 variable(double v, int index, int nvars) {
    assert(nvars <= kMaxVars && index < nvars);
    Taylor2 t(v);
    t.n_ = nvars;
    t.g_[index] = 1.0;
    return t;
  }

  int nvars() const { return n_; }
  double value() const { return v_; }
  double grad(int i) const { return g_[i]; }
  double hess(int i, int k) const { return i >= k ? h_[tri(i, k)] : h_[tri(k, i)]; }

  friend Taylor2 operator+(const Taylor2& a, const Taylor2& b) {
    Taylor2 r;
    r.n_ = a.n_ > b.n_ ? a.n_ : b.n_;
    r.v_ = a.v_ + b.v_;
    for (int i = 0; i < r.n_; ++i) r.g_[i] = a.g_[i] + b.g_[i];
    for (int t = 0; t < tri(r.n_, 0); ++t) r.h_[t] = a.h_[t] + b.h_[t];
    return r;
  }
  friend Taylor2 operator-(const Taylor2& a) {
    Taylor2 r = a;
    r.v_ = -r.v_;
    for (int i = 0; i < r.n_; ++i) r.g_[i] = -r.g_[i];
    for (int t = 0; t < tri(r.n_, 0); ++t) r.h_[t] = -r.h_[t];
    return r;
  }
  friend Taylor2 operator-(const Taylor2& a, const Taylor2& b) { return a + (-b); }
  friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    Taylor2 r;
    r.n_ = a.n_ > b.n_ ? a.n_ : b.n_;
    r.v_ = a.v_ * b.v_;
    for (int i = 0; i < r.n_; ++i) {
      r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
      for (int k = 0; k <= i; ++k) {
        const int t = tri(i, k);
        r.h_[t] = a.h_[t] * b.v_ + a.v_ * b.h_[t] + a.g_[i] * b.g_[k] + a.g_[k] * b.g_[i];
      }
    }
    return r;
  }
  friend Taylor2 operator*(double s, Taylor2 a) {
    a.v_ *= s;
    for (int i = 0; i < a.n_; ++i) a.g_[i] *= s;
    for (int t = 0; t < tri(a.n_, 0); ++t) a.h_[t] *= s;
    return a;
  }
  friend Taylor2 operator*(const Taylor2& a, double s) { return s * a; }
  friend Taylor2 operator/(const Taylor2& a, const Taylor2& b) {
    const double inv = 1.0 / b.v_;
    return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  Taylor2& operator+=(const Taylor2& b) { return *this = *this + b; }
  Taylor2& operator-=(const Taylor2& b) { return *this = *this - b; }
  Taylor2& operator*=(const Taylor2& b) { return *this = *this * b; }

  /// f(u) from f(u0), f'(u0), f''(u0).
  friend Taylor2 chain(const Taylor2& u, double f0, double f1, double f2) {
    Taylor2 r;
    r.n_ = u.n_;
    r.v_ = f0;
    for (int i = 0; i < r.n_; ++i) {
      r.g_[i] = f1 * u.g_[i];
      for (int k = 0; k <= i; ++k) {
        const int t = tri(i, k);
        r.h_[t] = f1 * u.h_[t] + f2 * u.g_[i] * u.g_[k];
      }
    }
    return r;
  }

 private:
  static constexpr int tri(int i, int k) { return i * (i + 1) / 2 + k; }

  int n_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxVars> g_{};
  std::array<double, kMaxVars*(kMaxVars + 1) / 2> h_{};
};

// Elementary functions, uniform across double / Dual / Taylor2.
inline double chain(double /*u*/, double f0, double, double) { return f0; }

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Dual& x) { return x.value(); }
inline double scalar_value(const Taylor2& x) { return x.value(); }

template <class T>
T exp_of(const T& u) {
  const double e = std::exp(scalar_value(u));
  return chain(u, e, e, e);
}

template <class T>
T sqrt_of(const T& u) {
  const double s = std::sqrt(scalar_value(u));
  return chain(u, s, 0.5 / s, -0.25 / (s * scalar_value(u)));
}

template <class T>
T square(const T& u) {
  return u * u;
}

}  // namespace levilab
