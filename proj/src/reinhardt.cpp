#include "levilab/reinhardt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "levilab/errors.hpp"

namespace levilab {

namespace {

using State = std::array<double, 2>;  // (f, f')

double second_derivative(double k, double s, double f, double fp) {
  const double q = f + s * fp * fp;
  if (!(q > 0.0))
    throw SingularityError("reinhardt_profile: f + s f'^2 = " + std::to_string(q) +
                           " <= 0 at s = " + std::to_string(s));
  if (!(s * f > 0.0))
    throw SingularityError("reinhardt_profile: s f = " + std::to_string(s * f) +
                           " <= 0 at s = " + std::to_string(s));
  return (s * fp * fp - k * q * std::sqrt(q) - f * fp) / (s * f);
}

// Step-size collapse next to f = 0 or a vertical tangent (f' unbounded) is a
// singularity of the equation, anything else is reported as stiffness.
[[noreturn]] void throw_underflow(double s, const State& x, const State& start) {
  const double f_floor = 1e-6 * std::max(1.0, start[0]);
  const double fp_ceiling = 1e4 * std::max(1.0, std::abs(start[1]));
  if (x[0] < f_floor)
    throw SingularityError("reinhardt_profile: f -> 0 (f = " + std::to_string(x[0]) + ") near s = " +
                           std::to_string(s));
  if (std::abs(x[1]) > fp_ceiling)
    throw SingularityError("reinhardt_profile: f' unbounded (f' = " + std::to_string(x[1]) +
                           ") near s = " + std::to_string(s));
  throw StiffnessError("reinhardt_profile: step size underflow near s = " + std::to_string(s));
}

// Integrates from (s0, x0) to `target`, appending a knot after every accepted
// step.
void integrate_leg(double k, double s0, State x, double target, const ProfileOptions& opt,
                   std::vector<ReinhardtProfile::Knot>& out) {
  namespace odeint = boost::numeric::odeint;
  const State start = x;
  auto rhs = [k](const State& y, State& dy, double s) {
    dy[0] = y[1];
    dy[1] = second_derivative(k, s, y[0], y[1]);
  };
  auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());

  const double span = std::abs(target - s0);
  if (span == 0.0) return;
  const double dir = target > s0 ? 1.0 : -1.0;
  const double hmax = span / opt.min_knots;
  const double hmin = span * 1e-14;
  double s = s0;
  double dt = dir * hmax;
  int rejected = 0;
  while (dir * (target - s) > 0.0) {
    if (std::abs(dt) > hmax) dt = dir * hmax;
    // absorb a sliver left by rounding into this step rather than a tiny last one
    if (dir * (s + dt - target) > -0.01 * std::abs(dt)) dt = target - s;
    try {
      if (stepper.try_step(rhs, x, s, dt) == odeint::fail) {
        if (++rejected > 1000 || std::abs(dt) < hmin)
          throw_underflow(s, x, start);
        continue;
      }
      rejected = 0;
      if (dir * (target - s) < hmin) s = target;  // snap the final knot
      out.push_back({s, {x[0], x[1], second_derivative(k, s, x[0], x[1])}});
    } catch (const SingularityError&) {
      // a trial stage left the admissible region; retry smaller before giving up
      if (std::abs(dt) < hmin) throw;
      dt *= 0.25;
    }
  }
}

// Quintic Hermite basis on [0, 1]: value and first two derivatives.
struct Basis {
  std::array<double, 6> v, d1, d2;
};

Basis quintic_basis(double t) {
  const std::array<std::array<double, 6>, 6> c = {{
      {1, 0, 0, -10, 15, -6},     // f_left
      {0, 1, 0, -6, 8, -3},       // h f'_left
      {0, 0, 0.5, -1.5, 1.5, -0.5},  // h^2 f''_left
      {0, 0, 0, 10, -15, 6},      // f_right
      {0, 0, 0, -4, 7, -3},       // h f'_right
      {0, 0, 0, 0.5, -1, 0.5},    // h^2 f''_right
  }};
  Basis b{};
  for (std::size_t i = 0; i < 6; ++i) {
    double v = 0, d1 = 0, d2 = 0;
    for (int p = 5; p >= 0; --p) v = v * t + c[i][std::size_t(p)];
    for (int p = 5; p >= 1; --p) d1 = d1 * t + p * c[i][std::size_t(p)];
    for (int p = 5; p >= 2; --p) d2 = d2 * t + p * (p - 1) * c[i][std::size_t(p)];
    b.v[i] = v;
    b.d1[i] = d1;
    b.d2[i] = d2;
  }
  return b;
}

}  // namespace

double reinhardt_ode_residual(double k, double s, const ProfileJet& p) {
  const double q = p.f + s * p.fp * p.fp;
  return s * p.f * p.fpp - s * p.fp * p.fp + k * q * std::sqrt(std::max(q, 0.0)) + p.f * p.fp;
}

ReinhardtProfile::ReinhardtProfile(double k, double s0, double f0, double fp0, double smin,
                                   double smax, ProfileOptions options)
    : k_(k), s0_(s0), f0_(f0), fp0_(fp0), smin_(smin), smax_(smax), options_(options) {
  if (!(k > 0.0)) throw ConstructionError("reinhardt_profile: k must be positive");
  if (!(s0 > 0.0) || !(f0 > 0.0))
    throw ConstructionError("reinhardt_profile: initial data need s0 > 0 and f(s0) > 0");
  if (!(smin > 0.0) || !(smin <= s0) || !(s0 <= smax) || !(smin < smax))
    throw ConstructionError("reinhardt_profile: need 0 < smin <= s0 <= smax, smin < smax");
  if (options_.min_knots < 1) throw ConstructionError("reinhardt_profile: min_knots must be >= 1");

  const Knot start{s0, {f0, fp0, second_derivative(k, s0, f0, fp0)}};
  std::vector<Knot> backward;
  integrate_leg(k, s0, {f0, fp0}, smin, options_, backward);
  std::vector<Knot> forward;
  integrate_leg(k, s0, {f0, fp0}, smax, options_, forward);

  knots_.reserve(backward.size() + forward.size() + 1);
  knots_.assign(backward.rbegin(), backward.rend());
  knots_.push_back(start);
  knots_.insert(knots_.end(), forward.begin(), forward.end());
}

ProfileJet ReinhardtProfile::eval(double s) const {
  const Knot& first = knots_.front();
  const Knot& last = knots_.back();
  if (s < first.s || s > last.s) {
    if (!options_.extend)
      throw DomainError("reinhardt profile: s = " + std::to_string(s) + " outside [" +
                        std::to_string(first.s) + ", " + std::to_string(last.s) + "]");
    const Knot& e = s < first.s ? first : last;
    const double ds = s - e.s;
    return {e.jet.f + e.jet.fp * ds + 0.5 * e.jet.fpp * ds * ds, e.jet.fp + e.jet.fpp * ds, e.jet.fpp};
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), s,
                             [](double v, const Knot& kn) { return v < kn.s; });
  if (it == knots_.end()) --it;
  if (it == knots_.begin()) ++it;
  const Knot& a = *(it - 1);
  const Knot& b = *it;
  const double h = b.s - a.s;
  const double t = (s - a.s) / h;
  const Basis B = quintic_basis(t);
  const std::array<double, 6> w = {a.jet.f, h * a.jet.fp, h * h * a.jet.fpp,
                                   b.jet.f, h * b.jet.fp, h * h * b.jet.fpp};
  ProfileJet r;
  for (std::size_t i = 0; i < 6; ++i) {
    r.f += w[i] * B.v[i];
    r.fp += w[i] * B.d1[i];
    r.fpp += w[i] * B.d2[i];
  }
  r.fp /= h;
  r.fpp /= h * h;
  return r;
}

}  // namespace levilab
