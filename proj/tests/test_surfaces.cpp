#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"

#include "levilab/errors.hpp"
#include "levilab/surfaces.hpp"
#include "test_support.hpp"

using namespace levilab;

namespace {

std::vector<HoloTerm> quarter_squares() {
  // Re(z1^2 + z2^2) / 4
  return {{Complex(0.25, 0.0), {2, 0}}, {Complex(0.25, 0.0), {0, 2}}};
}

std::shared_ptr<const ReinhardtProfile> sphere_profile(double radius, bool extend) {
  ProfileOptions o;
  o.extend = extend;
  return std::make_shared<ReinhardtProfile>(1.0 / radius, 1.0, radius * radius - 1.0, -1.0, 0.05,
                                            radius * radius - 0.05, o);
}

SurfaceSpec cubic_polynomial() {
  // |z|^2 + Re(z1 z2 zbar2) / 2 - 1
  std::vector<PolyTerm> t{{Complex(1, 0), {1, 0}, {1, 0}},
                          {Complex(1, 0), {0, 1}, {0, 1}},
                          {Complex(0.5, 0), {1, 1}, {0, 1}},
                          {Complex(-1, 0), {0, 0}, {0, 0}}};
  return SurfaceSpec(1, PolynomialFamily{t, 1.0, true});
}

struct Case {
  std::string label;
  SurfaceSpec spec;
  double box;
};

std::vector<Case> all_families() {
  std::vector<Case> c;
  c.push_back({"sphere", make_sphere(1, 2.0, {0.1, -0.2, 0.3, 0.0}), 2.5});
  c.push_back({"ellipsoid", make_ellipsoid({1, 1.3, 0.8, 1.1}), 1.5});
  c.push_back({"ellipsoid n=2", make_ellipsoid({1, 1, 1, 2, 0.7, 1.2}), 1.5});
  c.push_back({"quadric", make_perturbed_quadric(1, 1.0, quarter_squares()), 1.5});
  c.push_back({"quadric mixed", make_perturbed_quadric(1, 1.0, {{Complex(0.1, 0.2), {1, 1}}, {Complex(0.05, -0.1), {3, 0}}}), 1.5});
  c.push_back({"cylinder", make_cylinder(1, {0, 1, 2}, 1.0), 1.5});
  c.push_back({"polynomial", cubic_polynomial(), 1.2});
  c.push_back({"sphere exp", make_sphere(1, 1.0).with_reparametrization(Reparametrization::exponential), 1.2});
  return c;
}

Point random_point(const SurfaceSpec& s, double box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<double> x(static_cast<std::size_t>(s.real_dim()));
  for (auto& v : x) v = u(rng);
  return Point(x);
}

Point on_boundary(const SurfaceSpec& s, const std::vector<double>& omega) {
  const RadialHit hit = radial_root(s, omega);
  std::vector<double> x(omega.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = s.center()[int(i)] + hit.rho * omega[i];
  return Point(x);
}

void check_jet_against_differences(const SurfaceSpec& s, const Point& p) {
  const double h = 1e-6;
  const Jet2 j = s.jet(p);
  CHECK(std::abs(j.value - s.value(p)) <= 1e-14 * std::max(1.0, std::abs(j.value)));
  CHECK((j.rhess - j.rhess.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  const int d = s.real_dim();
  for (int i = 0; i < d; ++i) {
    Point a = p, b = p;
    a[i] += h;
    b[i] -= h;
    const double fd = (s.value(a) - s.value(b)) / (2 * h);
    CHECK(std::abs(fd - j.rgrad(i)) <= 1e-6 * std::max(1.0, std::abs(j.rgrad(i))));
    const Eigen::VectorXd gd = (s.jet(a).rgrad - s.jet(b).rgrad) / (2 * h);
    for (int k = 0; k < d; ++k) CHECK(std::abs(gd(k) - j.rhess(k, i)) <= 1e-6 * std::max(1.0, std::abs(j.rhess(k, i))));
  }
}

}  // namespace

TEST_CASE("jet examples") {
  const SurfaceSpec sphere = make_sphere(1, 2.0);
  const Jet2 js = sphere.jet(Point({2, 0, 0, 0}));
  CHECK(js.value == 0.0);
  CHECK((js.rgrad - Eigen::Vector4d(4, 0, 0, 0)).norm() <= 1e-15);
  CHECK((js.whess().entries() - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);

  const SurfaceSpec ell = make_ellipsoid({1, 1, 1, 2});
  const Jet2 je = ell.jet(Point({1, 0, 0, 0}));
  CHECK(std::abs(je.value) <= 1e-15);
  CHECK((je.rgrad - Eigen::Vector4d(2, 0, 0, 0)).norm() <= 1e-15);

  const SurfaceSpec q = make_perturbed_quadric(1, 1.0, quarter_squares());
  const Point p = on_boundary(q, {0.6, 0.0, 0.0, 0.8});
  CHECK(std::abs(q.value(p)) <= 1e-12);
  CHECK((q.jet(p).whess().entries() - 0.5 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Wirtinger quantities from a jet") {
  // f = |z1|^2 + 2 Re(z1) - 3 at (1 + i, 0): f_1 = zbar1 + 1.
  const SurfaceSpec s(1, PolynomialFamily{{{Complex(1, 0), {1, 0}, {1, 0}},
                                           {Complex(2, 0), {1, 0}, {0, 0}},
                                           {Complex(-3, 0), {0, 0}, {0, 0}}},
                                          1.0, false});
  const Jet2 j = s.jet(Point({1, 1, 0, 0}));
  const ComplexVector g = j.wgrad();
  CHECK(std::abs(g(0) - Complex(2, -1)) <= 1e-15);
  CHECK(std::abs(g(1)) <= 1e-15);
  CHECK(j.pgrad_norm() == doctest::Approx(std::sqrt(5.0)));
  CHECK(j.pgrad_norm() == doctest::Approx(j.rgrad.norm() / 2));
  CHECK(std::abs(j.whess()(0, 0) - 1.0) <= 1e-15);
}

TEST_CASE("jets match finite differences on every family") {
  std::mt19937_64 rng(101);
  for (const Case& c : all_families()) {
    INFO(c.label);
    for (int trial = 0; trial < 100; ++trial) check_jet_against_differences(c.spec, random_point(c.spec, c.box, rng));
  }
}

TEST_CASE("Reinhardt jets match finite differences inside the profile range") {
  const SurfaceSpec s = make_reinhardt(std::make_shared<ReinhardtProfile>(0.5, 1.0, 2.0, -0.5, 0.3, 2.0));
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double r2 = std::sqrt(0.4 + 1.4 * u(rng));
    const double t2 = 2 * M_PI * u(rng), t1 = 2 * M_PI * u(rng), r1 = 2.0 * u(rng);
    check_jet_against_differences(s, Point({r1 * std::cos(t1), r1 * std::sin(t1), r2 * std::cos(t2), r2 * std::sin(t2)}));
  }
  CHECK_THROWS_AS(s.jet(Point({0, 0, 2.0, 0})), DomainError);
}

TEST_CASE("perturbed quadric Hessian is independent of the perturbation") {
  std::mt19937_64 rng(107);
  const std::vector<std::vector<HoloTerm>> hs{
      quarter_squares(), {{Complex(0.3, 0), {1, 1}}}, {{Complex(0.1, -0.2), {2, 0}}, {Complex(0.02, 0.05), {1, 2}}}};
  for (int n = 1; n <= 2; ++n)
    for (const auto& h0 : hs) {
      std::vector<HoloTerm> h = h0;
      for (auto& t : h) t.powers.resize(std::size_t(n + 1), 0);
      const SurfaceSpec q = make_perturbed_quadric(n, 1.0, h);
      for (int trial = 0; trial < 20; ++trial) {
        const Jet2 j = q.jet(random_point(q, 1.5, rng));
        const ComplexMatrix expect = ComplexMatrix::Identity(n + 1, n + 1) / double(n + 1);
        CHECK((j.whess().entries() - expect).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
}

TEST_CASE("radial root examples") {
  std::mt19937_64 rng(109);
  const SurfaceSpec sphere = make_sphere(1, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const RadialHit h = radial_root(sphere, levilab::test::random_unit(4, rng));
    CHECK(std::abs(h.rho - 2.0) <= 1e-14);
    CHECK(h.grad_dot_direction > 0.0);
  }
  const std::vector<double> axes{1, 1.3, 0.8, 1.1};
  const SurfaceSpec ell = make_ellipsoid(axes);
  for (int k = 0; k < 4; ++k) {
    std::vector<double> e(4, 0.0);
    e[std::size_t(k)] = 1.0;
    CHECK(std::abs(radial_root(ell, e).rho - axes[std::size_t(k)]) <= 1e-14);
  }
  const SurfaceSpec q = make_perturbed_quadric(1, 1.0, quarter_squares());
  CHECK(std::abs(radial_root(q, std::vector<double>{1, 0, 0, 0}).rho - std::sqrt(4.0 / 3.0)) <= 1e-14);
}

TEST_CASE("radial root lands on the zero set") {
  std::mt19937_64 rng(113);
  for (const Case& c : all_families()) {
    if (!c.spec.star_shaped()) continue;
    INFO(c.label);
    for (int trial = 0; trial < 50; ++trial) {
      const auto omega = levilab::test::random_unit(c.spec.real_dim(), rng);
      const RadialHit h = radial_root(c.spec, omega);
      CHECK(std::abs(c.spec.value(on_boundary(c.spec, omega))) <= 1e-12);
      CHECK(std::abs(h.residual) <= 1e-12);
    }
  }
}

TEST_CASE("radial root error paths") {
  CHECK_THROWS_AS(radial_root(make_cylinder(1, {0, 1}, 1.0), std::vector<double>{1, 0, 0, 0}), NotStarShapedError);
  CHECK_THROWS_AS(radial_root(make_sphere(1, 1.0), std::vector<double>{1, 0, 0}), ArgumentError);
  // |x1|^2 + |x2|^2 + |x3|^2 + |x4|^2 + 1 is positive everywhere.
  CHECK_THROWS_AS(SurfaceSpec(1, PolynomialFamily{{{Complex(1, 0), {1, 0}, {1, 0}}, {Complex(1, 0), {0, 0}, {0, 0}}}, 1.0, true}),
                  ConstructionError);
}

TEST_CASE("construction rejects invalid parameters") {
  CHECK_THROWS_AS(make_sphere(1, -1.0), ConstructionError);
  CHECK_THROWS_AS(make_sphere(4, 1.0), ConstructionError);
  CHECK_THROWS_AS(make_ellipsoid({1, 1, 1}), ConstructionError);
  CHECK_THROWS_AS(make_ellipsoid({1, 1, 0, 1}), ConstructionError);
  CHECK_THROWS_AS(make_perturbed_quadric(1, 1.0, {{Complex(1, 0), {1, 0}}}), ConstructionError);
  CHECK_THROWS_AS(make_perturbed_quadric(1, -1.0, {}), ConstructionError);
  CHECK_THROWS_AS(make_cylinder(1, {0, 0}, 1.0), ConstructionError);
  CHECK_THROWS_AS(make_cylinder(1, {4}, 1.0), ConstructionError);
  CHECK_THROWS_AS(make_sphere(1, 1.0).value(Point({0, 0, 0})), ArgumentError);
}

TEST_CASE("reparametrization keeps the zero set and the normal direction") {
  std::mt19937_64 rng(127);
  for (const Case& c : all_families()) {
    if (!c.spec.star_shaped() || c.spec.reparametrization() != Reparametrization::none) continue;
    INFO(c.label);
    const SurfaceSpec g = c.spec.with_reparametrization(Reparametrization::exponential);
    for (int trial = 0; trial < 20; ++trial) {
      const auto omega = levilab::test::random_unit(c.spec.real_dim(), rng);
      CHECK(std::abs(radial_root(c.spec, omega).rho - radial_root(g, omega).rho) <= 1e-12);
      const Point p = on_boundary(c.spec, omega);
      const Eigen::VectorXd nf = c.spec.jet(p).rgrad.normalized();
      const Eigen::VectorXd ng = g.jet(p).rgrad.normalized();
      CHECK((nf - ng).norm() <= 1e-10);
      const Point q = random_point(c.spec, c.box, rng);
      CHECK(std::abs(g.value(q) - std::expm1(c.spec.value(q))) <= 1e-12 * std::max(1.0, std::abs(g.value(q))));
    }
  }
}

TEST_CASE("translation moves the surface rigidly") {
  std::mt19937_64 rng(131);
  const std::vector<double> a{0.5, -1.0, 0.25, 2.0};
  for (const Case& c : all_families()) {
    if (c.spec.n() != 1) continue;
    INFO(c.label);
    const SurfaceSpec t = c.spec.translated(a);
    for (int trial = 0; trial < 20; ++trial) {
      const Point p = random_point(c.spec, c.box, rng);
      Point q = p;
      for (int i = 0; i < 4; ++i) q[i] += a[std::size_t(i)];
      const Jet2 jp = c.spec.jet(p), jq = t.jet(q);
      CHECK(std::abs(jp.value - jq.value) <= 1e-12 * std::max(1.0, std::abs(jp.value)));
      CHECK((jp.rgrad - jq.rgrad).norm() <= 1e-12 * std::max(1.0, jp.rgrad.norm()));
      CHECK((jp.rhess - jq.rhess).norm() <= 1e-12 * std::max(1.0, jp.rhess.norm()));
    }
  }
  CHECK_THROWS_AS(make_sphere(1, 1.0).translated(std::vector<double>{1, 2}), ArgumentError);
}

TEST_CASE("dirichlet ellipsoid normalization") {
  const std::vector<double> axes{1, 1, 1, 2};
  const SurfaceSpec s = make_dirichlet_ellipsoid(axes);
  CHECK(dirichlet_scale(axes) == doctest::Approx(2.0 / 3.25));
  std::mt19937_64 rng(137);
  const Jet2 j = s.jet(random_point(s, 1.0, rng));
  CHECK(std::abs(j.whess().trace() - 1.0) <= 1e-14);
  CHECK(std::abs(j.rhess.trace() - 4.0) <= 1e-13);
}

TEST_CASE("point helpers") {
  const Point p = Point::from_z({Complex(1, 2), Complex(3, 4)});
  CHECK(p.dim() == 4);
  CHECK(p[0] == 1.0);
  CHECK(p[3] == 4.0);
  CHECK(p.z(1) == Complex(3, 4));
}
