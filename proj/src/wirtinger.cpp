#include "levilab/wirtinger.hpp"

#include <algorithm>
#include <sstream>

#include "levilab/combinatorics.hpp"
#include "levilab/errors.hpp"

namespace levilab::wirtinger {

namespace {

Rational2 mul(const Rational2& a, const Rational2& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

void check_nvars(int nvars) {
  if (nvars < 1 || nvars > kMaxVars)
    throw CostError("WPoly: " + std::to_string(nvars) + " complex variables; supported 1.." +
                    std::to_string(kMaxVars));
}

void check_index(int nvars, int i) {
  if (i < 0 || i >= nvars)
    throw RangeError("WPoly: variable index " + std::to_string(i) + " outside [0, " +
                     std::to_string(nvars) + ")");
}

}  // namespace

WPoly::WPoly(int nvars) : nvars_(nvars) { check_nvars(nvars); }

WPoly WPoly::constant(int nvars, Rational2 c) { return monomial(nvars, Exponent{}, std::move(c)); }

WPoly WPoly::constant(int nvars, long re, long im) {
  return constant(nvars, Rational2{mpq_class(re), mpq_class(im)});
}

WPoly WPoly::z(int nvars, int i) {
  check_index(nvars, i);
  Exponent e{};
  e[std::size_t(i)] = 1;
  return monomial(nvars, e, Rational2{1, 0});
}

WPoly WPoly::zbar(int nvars, int i) {
  check_index(nvars, i);
  Exponent e{};
  e[std::size_t(nvars + i)] = 1;
  return monomial(nvars, e, Rational2{1, 0});
}

WPoly WPoly::monomial(int nvars, const Exponent& e, Rational2 c) {
  WPoly p(nvars);
  p.add_term(e, c);
  return p;
}

int WPoly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (int i = 0; i < 2 * nvars_; ++i) t += e[std::size_t(i)];
    d = std::max(d, t);
  }
  return d;
}

void WPoly::add_term(const Exponent& e, const Rational2& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second.re += c.re;
    it->second.im += c.im;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

WPoly& WPoly::operator+=(const WPoly& o) {
  if (o.nvars_ != nvars_) throw ArgumentError("WPoly: variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

WPoly& WPoly::operator-=(const WPoly& o) { return *this += -o; }

WPoly operator-(const WPoly& a) {
  WPoly r = a;
  for (auto& [e, c] : r.terms_) {
    c.re = -c.re;
    c.im = -c.im;
  }
  return r;
}

WPoly operator*(const WPoly& a, const WPoly& b) {
  if (a.nvars_ != b.nvars_) throw ArgumentError("WPoly: variable count mismatch");
  WPoly r(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::uint8_t(ea[i] + eb[i]);
      r.add_term(e, mul(ca, cb));
    }
  }
  return r;
}

WPoly operator*(const Rational2& s, const WPoly& p) {
  WPoly r(p.nvars_);
  for (const auto& [e, c] : p.terms_) r.add_term(e, mul(s, c));
  return r;
}

WPoly WPoly::conj() const {
  WPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponent s{};
    for (int i = 0; i < nvars_; ++i) {
      s[std::size_t(i)] = e[std::size_t(nvars_ + i)];
      s[std::size_t(nvars_ + i)] = e[std::size_t(i)];
    }
    r.add_term(s, Rational2{c.re, -c.im});
  }
  return r;
}

std::complex<double> WPoly::evaluate(const std::vector<std::complex<double>>& z) const {
  if (static_cast<int>(z.size()) != nvars_) throw ArgumentError("WPoly::evaluate: wrong point dimension");
  std::complex<double> acc{0.0, 0.0};
  for (const auto& [e, c] : terms_) {
    std::complex<double> m = c.to_complex();
    for (int i = 0; i < nvars_; ++i) {
      for (int p = 0; p < e[std::size_t(i)]; ++p) m *= z[std::size_t(i)];
      for (int p = 0; p < e[std::size_t(nvars_ + i)]; ++p) m *= std::conj(z[std::size_t(i)]);
    }
    acc += m;
  }
  return acc;
}

std::string WPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.re.get_str() << (sgn(c.im) < 0 ? "" : "+") << c.im.get_str() << "i)";
    for (int i = 0; i < nvars_; ++i) {
      if (int p = e[std::size_t(i)]; p > 0) os << "*z" << i + 1 << (p > 1 ? "^" + std::to_string(p) : "");
      if (int p = e[std::size_t(nvars_ + i)]; p > 0)
        os << "*zb" << i + 1 << (p > 1 ? "^" + std::to_string(p) : "");
    }
  }
  return os.str();
}

WPoly wd(const WPoly& p, Var which, int i) {
  check_index(p.nvars(), i);
  const std::size_t slot = std::size_t(which == Var::z ? i : p.nvars() + i);
  WPoly r(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[slot] == 0) continue;
    Exponent d = e;
    const long power = d[slot];
    d[slot] = std::uint8_t(d[slot] - 1);
    r += WPoly::monomial(p.nvars(), d, Rational2{c.re * power, c.im * power});
  }
  return r;
}

// --- matrices ---------------------------------------------------------------

WMatrix::WMatrix(int rows, int cols, int nvars)
    : rows_(rows), cols_(cols), nvars_(nvars), entries_(std::size_t(rows * cols), WPoly(nvars)) {}

WMatrix WMatrix::submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
  WMatrix s(int(rows.size()), int(cols.size()), nvars_);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) s(int(r), int(c)) = (*this)(rows[r], cols[c]);
  return s;
}

WPoly WMatrix::det() const {
  if (rows_ != cols_) throw ArgumentError("WMatrix::det: matrix is not square");
  if (rows_ == 0) return WPoly::constant(nvars_, 1);
  if (rows_ == 1) return (*this)(0, 0);
  WPoly acc(nvars_);
  std::vector<int> rest(std::size_t(rows_ - 1));
  for (int c = 0; c < cols_; ++c) {
    if ((*this)(0, c).is_zero()) continue;
    std::vector<int> rows, cols;
    for (int t = 1; t < rows_; ++t) rows.push_back(t);
    for (int t = 0; t < cols_; ++t)
      if (t != c) cols.push_back(t);
    const WPoly term = (*this)(0, c) * submatrix(rows, cols).det();
    if (c % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

WMatrix complex_hessian(const WPoly& f) {
  const int m = f.nvars();
  WMatrix h(m, m, m);
  for (int l = 0; l < m; ++l) {
    const WPoly fl = wd(f, Var::z, l);
    for (int k = 0; k < m; ++k) h(l, k) = wd(fl, Var::zbar, k);
  }
  return h;
}

WPoly sym_sigma(const WMatrix& a, int j) {
  WPoly s(a.rows() > 0 ? a(0, 0).nvars() : 1);
  for_each_subset(a.rows(), j, [&](const std::vector<int>& idx) { s += a.submatrix(idx, idx).det(); });
  return s;
}

WMatrix sym_sigma_grad(const WMatrix& a, int j) {
  const int d = a.rows();
  const int nv = a(0, 0).nvars();
  WMatrix g(d, d, nv);
  for_each_subset(d, j, [&](const std::vector<int>& idx) {
    for (int p = 0; p < j; ++p) {
      for (int q = 0; q < j; ++q) {
        std::vector<int> rows, cols;
        for (int t = 0; t < j; ++t) {
          if (t != p) rows.push_back(idx[std::size_t(t)]);
          if (t != q) cols.push_back(idx[std::size_t(t)]);
        }
        const WPoly minor = a.submatrix(rows, cols).det();
        WPoly& slot = g(idx[std::size_t(p)], idx[std::size_t(q)]);
        if ((p + q) % 2 == 0)
          slot += minor;
        else
          slot -= minor;
      }
    }
  });
  return g;
}

WPoly sym_bordered_det(const WPoly& f, const std::vector<int>& indices) {
  const int m = f.nvars();
  for (std::size_t t = 0; t < indices.size(); ++t) {
    check_index(m, indices[t]);
    if (t > 0 && indices[t] <= indices[t - 1])
      throw ArgumentError("sym_bordered_det: indices must be strictly increasing and distinct");
  }
  const int s = int(indices.size());
  WMatrix b(s + 1, s + 1, m);
  for (int r = 0; r < s; ++r) {
    const WPoly fr = wd(f, Var::z, indices[std::size_t(r)]);
    b(0, r + 1) = wd(f, Var::zbar, indices[std::size_t(r)]);
    b(r + 1, 0) = fr;
    for (int c = 0; c < s; ++c) b(r + 1, c + 1) = wd(fr, Var::zbar, indices[std::size_t(c)]);
  }
  return b.det();
}

WPoly random_real_poly(int nvars, int degree, std::mt19937_64& rng) {
  check_nvars(nvars);
  std::uniform_int_distribution<long> num(-20, 20);
  std::uniform_int_distribution<long> den(1, 9);
  auto coef = [&] {
    mpq_class re(num(rng), den(rng)), im(num(rng), den(rng));
    re.canonicalize();
    im.canonicalize();
    return Rational2{re, im};
  };
  // Enumerate exponent vectors of total degree <= degree over 2*nvars slots.
  WPoly q(nvars);
  const int slots = 2 * nvars;
  Exponent e{};
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == slots) {
      q += WPoly::monomial(nvars, e, coef());
      return;
    }
    for (int p = 0; p <= left; ++p) {
      e[std::size_t(slot)] = std::uint8_t(p);
      rec(slot + 1, left - p);
    }
    e[std::size_t(slot)] = 0;
  };
  rec(0, degree);
  return q + q.conj();
}

// --- identity checks --------------------------------------------------------

bool IdentityCheck::passed() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const WPoly& p) { return p.is_zero(); });
}

namespace {

struct Generic {
  WPoly f;
  WMatrix hess;
  WMatrix grad;  // d sigma_{j+1} / d a_{lk}
  std::size_t max_terms;
};

void check_bounds(int n, int j) {
  if (n < 1) throw RangeError("identity check: n must be >= 1");
  if (n + 1 > kMaxVars)
    throw CostError("identity check: n+1 = " + std::to_string(n + 1) + " exceeds " +
                    std::to_string(kMaxVars) + " complex variables");
  if (j < 1 || j > n) throw RangeError("identity check: j must lie in [1, n]");
}

std::size_t max_size(const WMatrix& m) {
  std::size_t s = 0;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) s = std::max(s, m(r, c).size());
  return s;
}

Generic make_generic(int n, int j, std::mt19937_64& rng, int degree) {
  check_bounds(n, j);
  WPoly f = random_real_poly(n + 1, degree, rng);
  WMatrix h = complex_hessian(f);
  WMatrix g = sym_sigma_grad(h, j + 1);
  const std::size_t mt = std::max({f.size(), max_size(h), max_size(g)});
  return {std::move(f), std::move(h), std::move(g), mt};
}

}  // namespace

IdentityCheck check_null_lagrangian(int n, int j, std::mt19937_64& rng, int degree) {
  Generic gen = make_generic(n, j, rng, degree);
  IdentityCheck out{"null_lagrangian", {}, gen.max_terms};
  const int m = n + 1;
  for (int k = 0; k < m; ++k) {
    WPoly div(m);
    for (int l = 0; l < m; ++l) div += wd(gen.grad(l, k), Var::z, l);
    out.max_terms = std::max(out.max_terms, div.size());
    out.residuals.push_back(std::move(div));
  }
  return out;
}

IdentityCheck check_lemma_identity(int n, int j, std::mt19937_64& rng, int degree) {
  Generic gen = make_generic(n, j, rng, degree);
  IdentityCheck out{"lemma_bordered", {}, gen.max_terms};
  const int m = n + 1;
  WPoly lhs(m);
  for (int l = 0; l < m; ++l) {
    const WPoly fl = wd(gen.f, Var::z, l);
    for (int k = 0; k < m; ++k) lhs += gen.grad(l, k) * fl * wd(gen.f, Var::zbar, k);
  }
  WPoly bordered(m);
  for_each_subset(m, j + 1, [&](const std::vector<int>& idx) {
    WPoly d = sym_bordered_det(gen.f, idx);
    out.max_terms = std::max(out.max_terms, d.size());
    bordered += d;
  });
  out.max_terms = std::max({out.max_terms, lhs.size(), bordered.size()});
  out.residuals.push_back(lhs + bordered);
  return out;
}

IdentityCheck check_euler_sigma(int n, int j, std::mt19937_64& rng, int degree) {
  Generic gen = make_generic(n, j, rng, degree);
  IdentityCheck out{"euler_sigma", {}, gen.max_terms};
  const int m = n + 1;
  WPoly s = sym_sigma(gen.hess, j + 1);
  WPoly contraction(m);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k) contraction += gen.grad(l, k) * gen.hess(l, k);
  out.max_terms = std::max({out.max_terms, s.size(), contraction.size()});
  out.residuals.push_back(Rational2{mpq_class(j + 1), mpq_class(0)} * s - contraction);
  return out;
}

}  // namespace levilab::wirtinger
