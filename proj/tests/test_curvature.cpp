#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "levilab/combinatorics.hpp"
#include "levilab/curvature.hpp"
#include "levilab/errors.hpp"
#include "levilab/wirtinger.hpp"
#include "test_support.hpp"

using namespace levilab;
using levilab::test::random_unit;

namespace {

Point boundary_point(const SurfaceSpec& s, const std::vector<double>& omega) {
  const RadialHit hit = radial_root(s, omega);
  std::vector<double> x(omega.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = s.center()[int(i)] + hit.rho * omega[i];
  return Point(x);
}

Point random_boundary_point(const SurfaceSpec& s, std::mt19937_64& rng) {
  return boundary_point(s, random_unit(s.real_dim(), rng));
}

SurfaceSpec as_surface(const wirtinger::WPoly& p) {
  std::vector<PolyTerm> terms;
  const int m = p.nvars();
  for (const auto& [e, c] : p.terms()) {
    PolyTerm t{c.to_complex(), std::vector<int>(std::size_t(m)), std::vector<int>(std::size_t(m))};
    for (int i = 0; i < m; ++i) {
      t.zpow[std::size_t(i)] = e[std::size_t(i)];
      t.zbarpow[std::size_t(i)] = e[std::size_t(m + i)];
    }
    terms.push_back(t);
  }
  return SurfaceSpec(m - 1, PolynomialFamily{terms, 1.0, false});
}

double fd_mean_curvature(const SurfaceSpec& s, const Point& p, double h) {
  // div (grad f / |grad f|) / (2n + 1) by central differences of the unit normal
  double div = 0.0;
  for (int i = 0; i < s.real_dim(); ++i) {
    Point a = p, b = p;
    a[i] += h;
    b[i] -= h;
    const Eigen::VectorXd na = s.jet(a).rgrad.normalized(), nb = s.jet(b).rgrad.normalized();
    div += (na(i) - nb(i)) / (2 * h);
  }
  return div / (2 * s.n() + 1);
}

}  // namespace

TEST_CASE("bordered minor of the sphere is -R^2") {
  std::mt19937_64 rng(201);
  const SurfaceSpec s = make_sphere(1, 2.0);
  const std::vector<int> idx{0, 1};
  for (int trial = 0; trial < 20; ++trial) {
    const BoundaryFrame f = make_frame(s, random_boundary_point(s, rng));
    const Complex d = bordered_minor(f, idx);
    CHECK(std::abs(d - Complex(-4.0, 0.0)) <= 1e-12);
  }
}

TEST_CASE("Levi-flat cylinder") {
  const SurfaceSpec c = make_cylinder(1, {0, 1}, 1.0);
  std::mt19937_64 rng(203);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = u(rng);
    const BoundaryFrame f = make_frame(c, Point({std::cos(t), std::sin(t), u(rng), u(rng)}));
    CHECK(std::abs(bordered_minor(f, std::vector<int>{0, 1})) <= 1e-14);
    CHECK(std::abs(levi(f, 1)) <= 1e-14);
    CHECK(mean_curvature(f) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("bordered minor matches the exact symbolic determinant") {
  std::mt19937_64 rng(205);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int m = 2; m <= 3; ++m) {
    const wirtinger::WPoly p = wirtinger::random_real_poly(m, 2, rng);
    const SurfaceSpec s = as_surface(p);
    for (const auto& idx : subsets(m, 2)) {
      const wirtinger::WPoly sym = wirtinger::sym_bordered_det(p, idx);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> z(static_cast<std::size_t>(m));
        for (auto& v : z) v = Complex(u(rng), u(rng));
        const BoundaryFrame f = make_frame(s, Point::from_z(z), 1e300);
        const Complex a = bordered_minor(f, idx), b = sym.evaluate(z);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
      }
    }
  }
}

TEST_CASE("sphere curvatures are powers of 1/R") {
  std::mt19937_64 rng(207);
  for (int n = 1; n <= 2; ++n)
    for (double R : {0.5, 1.0, 2.0}) {
      const SurfaceSpec s = make_sphere(n, R);
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x = random_unit(s.real_dim(), rng);
        for (auto& v : x) v *= R;
        const BoundaryFrame f = make_frame(s, Point(x));
        for (int j = 1; j <= n; ++j) CHECK(std::abs(levi(f, j) - std::pow(R, -j)) <= 1e-10);
        CHECK(std::abs(mean_curvature(f) - 1.0 / R) <= 1e-12);
      }
    }
}

TEST_CASE("perturbed quadric curvature depends only on |df|") {
  std::mt19937_64 rng(209);
  std::vector<SurfaceSpec> qs{make_perturbed_quadric(1, 1.0, {{Complex(0.25, 0), {2, 0}}, {Complex(0.25, 0), {0, 2}}}),
                              make_perturbed_quadric(1, 0.7, {{Complex(0.3, -0.1), {1, 1}}}),
                              make_perturbed_quadric(2, 1.0, {{Complex(0.1, 0.1), {1, 1, 0}}, {Complex(0.05, 0), {0, 0, 3}}})};
  for (const auto& q : qs)
    for (int trial = 0; trial < 30; ++trial) {
      const BoundaryFrame f = make_frame(q, random_boundary_point(q, rng));
      for (int j = 1; j <= q.n(); ++j) {
        const double expect = std::pow(1.0 / ((q.n() + 1) * f.pgrad_norm), j);
        CHECK(std::abs(levi(f, j) - expect) <= 1e-10 * std::max(1.0, expect));
      }
    }
}

TEST_CASE("curved cylinders") {
  // |z1|^2 + (Re z2)^2 = R^2 at Re z2 = 0: K = 1/(2R), H = 2/(3R)
  for (double R : {0.5, 1.0, 3.0}) {
    const SurfaceSpec c = make_cylinder(1, {0, 1, 2}, R);
    const BoundaryFrame f = make_frame(c, Point({R * std::cos(0.4), R * std::sin(0.4), 0.0, 1.7}));
    CHECK(levi(f, 1) == doctest::Approx(1.0 / (2 * R)).epsilon(1e-13));
    CHECK(mean_curvature(f) == doctest::Approx(2.0 / (3 * R)).epsilon(1e-13));
  }
  // (Re z1)^2 + (Re z2)^2 = 1: K = 1/2 and H = 1/3 at every point
  const SurfaceSpec c = make_cylinder(1, {0, 2}, 1.0);
  std::mt19937_64 rng(211);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const double t = u(rng);
    const BoundaryFrame f = make_frame(c, Point({std::cos(t), u(rng), std::sin(t), u(rng)}));
    CHECK(levi(f, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(mean_curvature(f) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("mean curvature of an ellipsoid matches a finite-difference divergence") {
  const SurfaceSpec e = make_ellipsoid({1, 1, 1, 2});
  const Point p({1, 0, 0, 0});
  const BoundaryFrame f = make_frame(e, p);
  CHECK(std::abs(mean_curvature(f) - fd_mean_curvature(e, p, 1e-5)) <= 1e-6);
  std::mt19937_64 rng(213);
  const SurfaceSpec e2 = make_ellipsoid({1, 1.3, 0.8, 1.1, 0.9, 1.4});
  for (int trial = 0; trial < 10; ++trial) {
    const Point q = random_boundary_point(e2, rng);
    CHECK(std::abs(mean_curvature(make_frame(e2, q)) - fd_mean_curvature(e2, q, 1e-5)) <= 1e-6);
  }
}

TEST_CASE("curvatures do not depend on the defining function") {
  std::mt19937_64 rng(215);
  const std::vector<SurfaceSpec> specs{make_ellipsoid({1, 1.3, 0.8, 1.1}), make_ellipsoid({1, 1, 1, 2, 0.7, 1.2}),
                                       make_perturbed_quadric(1, 1.0, {{Complex(0.3, 0.1), {1, 1}}}),
                                       make_sphere(2, 1.5, {0.1, 0, 0, 0.2, 0, 0})};
  for (const auto& s : specs) {
    const SurfaceSpec g = s.with_reparametrization(Reparametrization::exponential);
    for (int trial = 0; trial < 20; ++trial) {
      const Point p = random_boundary_point(s, rng);
      const BoundaryFrame ff = make_frame(s, p), fg = make_frame(g, p);
      for (int j = 1; j <= s.n(); ++j) CHECK(std::abs(levi(ff, j) - levi(fg, j)) <= 1e-9);
      CHECK(std::abs(mean_curvature(ff) - mean_curvature(fg)) <= 1e-9);
    }
  }
}

TEST_CASE("curvatures are translation invariant") {
  std::mt19937_64 rng(217);
  const SurfaceSpec s = make_ellipsoid({1, 1.3, 0.8, 1.1});
  const std::vector<double> a{2.0, -1.0, 0.5, 3.0};
  const SurfaceSpec t = s.translated(a);
  for (int trial = 0; trial < 20; ++trial) {
    const Point p = random_boundary_point(s, rng);
    Point q = p;
    for (int i = 0; i < 4; ++i) q[i] += a[std::size_t(i)];
    const BoundaryFrame fp = make_frame(s, p), fq = make_frame(t, q, 1e-9);
    CHECK(std::abs(levi(fp, 1) - levi(fq, 1)) <= 1e-12);
    CHECK(std::abs(mean_curvature(fp) - mean_curvature(fq)) <= 1e-12);
  }
}

TEST_CASE("bordered minors agree with the sigma-gradient contraction") {
  std::mt19937_64 rng(219);
  const std::vector<SurfaceSpec> specs{make_ellipsoid({1, 1.3, 0.8, 1.1}), make_ellipsoid({1, 1, 1, 2, 0.7, 1.2}),
                                       make_ellipsoid({1, 1, 1, 2, 0.7, 1.2, 1.1, 0.9})};
  for (const auto& s : specs)
    for (int trial = 0; trial < 20; ++trial) {
      const BoundaryFrame f = make_frame(s, random_boundary_point(s, rng));
      const int m = s.n() + 1;
      for (int j = 1; j <= s.n(); ++j) {
        Complex minors{0, 0};
        for (const auto& idx : subsets(m, j + 1)) minors += bordered_minor(f, idx);
        const ComplexMatrix g = sigma_grad(f.whess, j + 1);
        Complex contraction{0, 0};
        for (int l = 0; l < m; ++l)
          for (int k = 0; k < m; ++k) contraction += g(l, k) * f.wgrad(l) * std::conj(f.wgrad(k));
        CHECK(std::abs(-minors - contraction) <= 1e-9 * std::max(1.0, std::abs(minors)));
      }
    }
}

TEST_CASE("K^(j) = (K^(1))^j holds on spheres only") {
  std::mt19937_64 rng(221);
  const SurfaceSpec s = make_sphere(2, 1.7);
  for (int trial = 0; trial < 20; ++trial) {
    const BoundaryFrame f = make_frame(s, random_boundary_point(s, rng));
    CHECK(std::abs(levi(f, 2) - std::pow(levi(f, 1), 2)) <= 1e-10);
  }
  const SurfaceSpec e = make_ellipsoid({1, 1.3, 0.8, 1.1, 0.9, 1.4});
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const BoundaryFrame f = make_frame(e, random_boundary_point(e, rng));
    worst = std::max(worst, std::abs(levi(f, 2) - std::pow(levi(f, 1), 2)));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("frame invariants") {
  std::mt19937_64 rng(223);
  const SurfaceSpec s = make_ellipsoid({1, 1.3, 0.8, 1.1, 0.9, 1.4});
  for (int trial = 0; trial < 20; ++trial) {
    const BoundaryFrame f = make_frame(s, random_boundary_point(s, rng));
    CHECK(std::abs(f.normal.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(f.nu.squaredNorm() - 1.0) <= 1e-12);
    CHECK(std::abs(f.pgrad_norm * f.pgrad_norm - f.wgrad.squaredNorm()) <= 1e-12 * f.wgrad.squaredNorm());
    CHECK(f.n() == 2);
    // outward: moving along N increases f
    Point q = f.point;
    for (int i = 0; i < 6; ++i) q[i] += 1e-3 * f.normal(i);
    CHECK(s.value(q) > 0.0);
  }
}

TEST_CASE("curvature error paths") {
  const SurfaceSpec s = make_sphere(1, 1.0);
  const BoundaryFrame f = make_frame(s, Point({1, 0, 0, 0}));
  CHECK_THROWS_AS(bordered_minor(f, std::vector<int>{0, 0}), ArgumentError);
  CHECK_THROWS_AS(bordered_minor(f, std::vector<int>{0, 2}), RangeError);
  CHECK_THROWS_AS(levi(f, 0), RangeError);
  CHECK_THROWS_AS(levi(f, 2), RangeError);
  CHECK_THROWS_AS(make_frame(s, Point({1.1, 0, 0, 0})), DomainError);
  // |z1|^2 - |z2|^2 vanishes to first order at the origin
  const SurfaceSpec cone(1, PolynomialFamily{{{Complex(1, 0), {1, 0}, {1, 0}}, {Complex(-1, 0), {0, 1}, {0, 1}}}, 1.0, false});
  CHECK_THROWS_AS(make_frame(cone, Point({0, 0, 0, 0})), DegeneracyError);
}
