#include <cmath>
#include <memory>

#include "doctest.h"

#include "levilab/curvature.hpp"
#include "levilab/errors.hpp"
#include "levilab/reinhardt.hpp"
#include "levilab/surfaces.hpp"

using namespace levilab;

namespace {

Point profile_point(const ReinhardtProfile& p, double s, double t1, double t2) {
  const double r1 = std::sqrt(p.eval(s).f), r2 = std::sqrt(s);
  return Point({r1 * std::cos(t1), r1 * std::sin(t1), r2 * std::cos(t2), r2 * std::sin(t2)});
}

}  // namespace

TEST_CASE("residual of the sphere profile in closed form") {
  for (double r : {0.5, 1.0, 2.0})
    for (double s : {0.01, 0.1, 0.2, 0.24})
      if (s < r * r) CHECK(std::abs(reinhardt_ode_residual(1.0 / r, s, {r * r - s, -1.0, 0.0})) <= 1e-14);
  // a non-solution leaves a residual
  CHECK(std::abs(reinhardt_ode_residual(1.0, 0.5, {0.5, -2.0, 0.0})) > 1e-3);
}

TEST_CASE("integrated sphere profile satisfies the equation along the range") {
  const double R = 2.0;
  const ReinhardtProfile p(1.0 / R, 1.0, R * R - 1.0, -1.0, 0.05, 3.95);
  CHECK(p.knots().size() >= 200);
  double worst = 0.0, worst_f = 0.0;
  for (const auto& k : p.knots()) {
    worst = std::max(worst, std::abs(reinhardt_ode_residual(p.k(), k.s, k.jet)));
    worst_f = std::max(worst_f, std::abs(k.jet.f - (R * R - k.s)));
  }
  CHECK(worst <= 1e-9);
  CHECK(worst_f <= 1e-9);
  for (int i = 0; i <= 1000; ++i) {
    const double s = 0.05 + 3.9 * i / 1000.0;
    const ProfileJet j = p.eval(s);
    CHECK(std::abs(reinhardt_ode_residual(p.k(), s, j)) <= 1e-9);
    CHECK(std::abs(j.fp + 1.0) <= 1e-9);
  }
}

TEST_CASE("knots increase and bracket the initial point") {
  const ReinhardtProfile p(0.5, 1.0, 2.0, -0.5, 0.3, 2.0);
  CHECK(p.knots().front().s == doctest::Approx(0.3));
  CHECK(p.knots().back().s == doctest::Approx(2.0));
  for (std::size_t i = 1; i < p.knots().size(); ++i) CHECK(p.knots()[i].s > p.knots()[i - 1].s);
  const ProfileJet j0 = p.eval(1.0);
  CHECK(j0.f == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(j0.fp == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("generic k = 0.5 profile has constant Levi curvature") {
  auto p = std::make_shared<ReinhardtProfile>(0.5, 1.0, 2.0, -0.5, 0.3, 2.0);
  const SurfaceSpec s = make_reinhardt(p);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double si = 0.35 + 1.6 * i / 19.0;
    const Point x = profile_point(*p, si, 0.3 * i, 1.7 * i);
    const BoundaryFrame f = make_frame(s, x);
    worst = std::max(worst, std::abs(levi(f, 1) - 0.5));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("extended sphere profile closes up into the sphere") {
  ProfileOptions o;
  o.extend = true;
  auto p = std::make_shared<ReinhardtProfile>(0.5, 1.0, 3.0, -1.0, 0.05, 3.95, o);
  const SurfaceSpec s = make_reinhardt(p);
  CHECK(s.star_shaped());
  for (double t : {0.0, 0.02, 3.99, 4.0}) {
    const ProfileJet j = p->eval(t);
    CHECK(std::abs(j.f - (4.0 - t)) <= 1e-9);
  }
}

TEST_CASE("profile error paths") {
  CHECK_THROWS_AS(ReinhardtProfile(0.5, 1.0, 0.1, -1.0, 0.5, 5.0), SingularityError);  // f -> 0
  CHECK_THROWS_AS(ReinhardtProfile(2.0, 1.0, 0.5, -1.0, 0.5, 5.0), SingularityError);  // vertical tangent
  CHECK_THROWS_AS(ReinhardtProfile(-1.0, 1.0, 2.0, 0.0, 0.5, 2.0), ConstructionError);
  CHECK_THROWS_AS(ReinhardtProfile(1.0, 1.0, -2.0, 0.0, 0.5, 2.0), ConstructionError);
  CHECK_THROWS_AS(ReinhardtProfile(1.0, 3.0, 2.0, 0.0, 0.5, 2.0), ConstructionError);
  const ReinhardtProfile p(0.5, 1.0, 2.0, -0.5, 0.3, 2.0);
  CHECK_THROWS_AS(p.eval(2.5), DomainError);
  CHECK_THROWS_AS(p.eval(0.1), DomainError);
}
