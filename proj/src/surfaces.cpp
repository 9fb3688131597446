#include "levilab/surfaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <limits>
#include <set>
#include <tuple>

#include "levilab/errors.hpp"
#include "levilab/taylor.hpp"

namespace levilab {

Point Point::from_z(const std::vector<Complex>& z) {
  std::vector<double> c;
  c.reserve(2 * z.size());
  for (const Complex& v : z) {
    c.push_back(v.real());
    c.push_back(v.imag());
  }
  return Point(std::move(c));
}

ComplexVector Jet2::wgrad() const {
  const int m = complex_dim();
  ComplexVector g(m);
  for (int k = 0; k < m; ++k) g(k) = 0.5 * Complex(rgrad(2 * k), -rgrad(2 * k + 1));
  return g;
}

HermitianMatrix Jet2::whess() const {
  const int m = complex_dim();
  ComplexMatrix h(m, m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      const double re = rhess(2 * k, 2 * l) + rhess(2 * k + 1, 2 * l + 1);
      const double im = rhess(2 * k, 2 * l + 1) - rhess(2 * k + 1, 2 * l);
      h(k, l) = 0.25 * Complex(re, im);
    }
  }
  return HermitianMatrix(h);
}

double Jet2::pgrad_norm() const { return 0.5 * rgrad.norm(); }

namespace {

template <class T>
struct Cx {
  T re;
  T im;
};

template <class T>
Cx<T> cmul(const Cx<T>& a, const Cx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class T>
using Coords = std::array<T, 2 * kMaxComplexDim>;

// Re(coef * prod z^a zbar^b)
template <class T>
T re_monomial(const Coords<T>& u, int m, Complex coef, const std::vector<int>& zpow,
              const std::vector<int>* zbarpow) {
  Cx<T> acc{T(coef.real()), T(coef.imag())};
  for (int k = 0; k < m; ++k) {
    const Cx<T> zk{u[std::size_t(2 * k)], u[std::size_t(2 * k + 1)]};
    for (int p = 0; p < zpow[std::size_t(k)]; ++p) acc = cmul(acc, zk);
    if (zbarpow) {
      const Cx<T> zbk{zk.re, T(0.0) - zk.im};
      for (int p = 0; p < (*zbarpow)[std::size_t(k)]; ++p) acc = cmul(acc, zbk);
    }
  }
  return acc.re;
}

template <class T>
T eval_family(const Family& family, const Coords<T>& u, int n) {
  const int d = 2 * n + 2;
  const int m = n + 1;
  return std::visit(
      [&](const auto& fam) -> T {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, SphereFamily>) {
          T s(0.0);
          for (int i = 0; i < d; ++i) s += u[std::size_t(i)] * u[std::size_t(i)];
          return s - T(fam.radius * fam.radius);
        } else if constexpr (std::is_same_v<F, EllipsoidFamily>) {
          T s(0.0);
          for (int i = 0; i < d; ++i) {
            const double w = 1.0 / (fam.axes[std::size_t(i)] * fam.axes[std::size_t(i)]);
            s += w * (u[std::size_t(i)] * u[std::size_t(i)]);
          }
          return fam.scale * (s - T(1.0));
        } else if constexpr (std::is_same_v<F, PerturbedQuadricFamily>) {
          T s(0.0);
          for (int i = 0; i < d; ++i) s += u[std::size_t(i)] * u[std::size_t(i)];
          T r = (1.0 / m) * s - T(fam.c);
          for (const HoloTerm& t : fam.h) r += re_monomial<T>(u, m, t.coef, t.powers, nullptr);
          return r;
        } else if constexpr (std::is_same_v<F, CylinderFamily>) {
          T s(0.0);
          for (int i : fam.coords) s += u[std::size_t(i)] * u[std::size_t(i)];
          return s - T(fam.radius * fam.radius);
        } else if constexpr (std::is_same_v<F, ReinhardtFamily>) {
          const T r1 = u[0] * u[0] + u[1] * u[1];
          const T s = u[2] * u[2] + u[3] * u[3];
          const ProfileJet pj = fam.profile->eval(scalar_value(s));
          return r1 - chain(s, pj.f, pj.fp, pj.fpp);
        } else {
          T r(0.0);
          for (const PolyTerm& t : fam.terms) r += re_monomial<T>(u, m, t.coef, t.zpow, &t.zbarpow);
          return r;
        }
      },
      family);
}

template <class T>
T apply_reparam(const T& f, Reparametrization r) {
  if (r == Reparametrization::exponential) return exp_of(f) - T(1.0);
  return f;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConstructionError("surface: " + what);
}

std::vector<std::vector<double>> coarse_directions(int d) {
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < d; ++i) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> v(std::size_t(d), 0.0);
      v[std::size_t(i)] = s;
      dirs.push_back(v);
    }
  }
  const double inv = 1.0 / std::sqrt(double(d));
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<double> v(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) v[std::size_t(i)] = (mask >> i & 1) ? -inv : inv;
    dirs.push_back(v);
  }
  return dirs;
}

}  // namespace

SurfaceSpec::SurfaceSpec(int n, Family family, std::vector<double> center, Reparametrization reparam,
                         std::string name)
    : n_(n), family_(std::move(family)), reparam_(reparam), name_(std::move(name)) {
  if (center.empty()) center.assign(std::size_t(2 * n + 2), 0.0);
  center_ = Point(std::move(center));
  validate();
}

void SurfaceSpec::validate() const {
  require(n_ >= 1 && n_ + 1 <= kMaxComplexDim,
          "n = " + std::to_string(n_) + " outside [1, " + std::to_string(kMaxComplexDim - 1) + "]");
  const int d = real_dim();
  const int m = n_ + 1;
  require(center_.dim() == d, "center has " + std::to_string(center_.dim()) + " coordinates, expected " +
                                  std::to_string(d));
  for (double c : center_.coords()) require(std::isfinite(c), "center must be finite");

  std::visit(
      [&](const auto& fam) {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, SphereFamily>) {
          require(fam.radius > 0.0, "sphere radius must be positive");
        } else if constexpr (std::is_same_v<F, EllipsoidFamily>) {
          require(int(fam.axes.size()) == d,
                  "ellipsoid needs " + std::to_string(d) + " semi-axes, got " + std::to_string(fam.axes.size()));
          for (double a : fam.axes) require(a > 0.0 && std::isfinite(a), "semi-axes must be positive");
          require(fam.scale > 0.0, "ellipsoid scale must be positive");
        } else if constexpr (std::is_same_v<F, PerturbedQuadricFamily>) {
          require(fam.c > 0.0, "perturbed quadric needs c = -f(0) > 0");
          for (const HoloTerm& t : fam.h) {
            require(int(t.powers.size()) == m, "holomorphic term needs " + std::to_string(m) + " powers");
            int total = 0;
            for (int p : t.powers) {
              require(p >= 0, "negative power in holomorphic term");
              total += p;
            }
            require(total >= 2, "pluriharmonic term must vanish to second order at 0 (degree >= 2)");
          }
        } else if constexpr (std::is_same_v<F, CylinderFamily>) {
          require(!fam.coords.empty(), "cylinder needs at least one coordinate");
          std::set<int> seen;
          for (int i : fam.coords) {
            require(i >= 0 && i < d, "cylinder coordinate index outside [0, " + std::to_string(d) + ")");
            require(seen.insert(i).second, "cylinder coordinates must be distinct");
          }
          require(fam.radius > 0.0, "cylinder radius must be positive");
        } else if constexpr (std::is_same_v<F, ReinhardtFamily>) {
          require(n_ == 1, "Reinhardt profile surfaces live in C^2 (n = 1)");
          require(fam.profile != nullptr, "Reinhardt family without profile");
        } else {
          require(fam.length > 0.0, "polynomial length scale must be positive");
          for (const PolyTerm& t : fam.terms) {
            require(int(t.zpow.size()) == m && int(t.zbarpow.size()) == m,
                    "polynomial term needs " + std::to_string(m) + " z and zbar powers");
            for (int p : t.zpow) require(p >= 0, "negative power");
            for (int p : t.zbarpow) require(p >= 0, "negative power");
          }
        }
      },
      family_);

  if (star_shaped()) {
    for (const auto& omega : coarse_directions(d)) {
      RadialHit hit;
      try {
        hit = radial_root(*this, omega);
      } catch (const Error& e) {
        throw ConstructionError(std::string("surface: radial validation failed: ") + e.what());
      }
      std::vector<double> x(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) x[std::size_t(i)] = center_[i] + hit.rho * omega[std::size_t(i)];
      const Jet2 j = jet(Point(x));
      require(j.rgrad.norm() > 1e-10, "vanishing gradient on the boundary");
    }
  }
}

std::string SurfaceSpec::family_name() const {
  static constexpr const char* names[] = {"sphere",   "ellipsoid", "perturbed_quadric",
                                          "cylinder", "reinhardt", "polynomial"};
  return names[family_.index()];
}

bool SurfaceSpec::star_shaped() const {
  if (std::holds_alternative<CylinderFamily>(family_)) return false;
  if (const auto* r = std::get_if<ReinhardtFamily>(&family_)) return r->profile && r->profile->options().extend;
  if (const auto* p = std::get_if<PolynomialFamily>(&family_)) return p->star_shaped;
  return true;
}

double SurfaceSpec::characteristic_scale() const {
  return std::visit(
      [&](const auto& fam) -> double {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, SphereFamily> || std::is_same_v<F, CylinderFamily>) {
          return fam.radius;
        } else if constexpr (std::is_same_v<F, EllipsoidFamily>) {
          return *std::max_element(fam.axes.begin(), fam.axes.end());
        } else if constexpr (std::is_same_v<F, PerturbedQuadricFamily>) {
          return std::sqrt(fam.c * (n_ + 1));
        } else if constexpr (std::is_same_v<F, ReinhardtFamily>) {
          double fmax = 0.0;
          for (const auto& kn : fam.profile->knots()) fmax = std::max(fmax, kn.jet.f);
          return std::sqrt(fmax + fam.profile->smax());
        } else {
          return fam.length;
        }
      },
      family_);
}

SurfaceSpec SurfaceSpec::with_reparametrization(Reparametrization r) const {
  SurfaceSpec s = *this;
  s.reparam_ = r;
  return s;
}

SurfaceSpec SurfaceSpec::translated(std::span<const double> offset) const {
  if (int(offset.size()) != real_dim()) throw ArgumentError("translated: offset dimension mismatch");
  std::vector<double> c(center_.coords().begin(), center_.coords().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += offset[i];
  return SurfaceSpec(n_, family_, std::move(c), reparam_, name_);
}

double SurfaceSpec::value(const Point& p) const {
  if (p.dim() != real_dim()) throw ArgumentError("surface: point dimension mismatch");
  Coords<double> u{};
  for (int i = 0; i < real_dim(); ++i) u[std::size_t(i)] = p[i] - center_[i];
  return apply_reparam(eval_family<double>(family_, u, n_), reparam_);
}

std::pair<double, double> SurfaceSpec::along_ray(std::span<const double> direction, double t) const {
  Coords<Dual> u{};
  for (int i = 0; i < real_dim(); ++i) u[std::size_t(i)] = Dual(t * direction[std::size_t(i)], direction[std::size_t(i)]);
  const Dual f = apply_reparam(eval_family<Dual>(family_, u, n_), reparam_);
  return {f.value(), f.deriv()};
}

Jet2 SurfaceSpec::jet(const Point& p) const {
  const int d = real_dim();
  if (p.dim() != d) throw ArgumentError("surface: point dimension mismatch");
  for (double c : p.coords())
    if (!std::isfinite(c)) throw DomainError("surface: non-finite point coordinate");
  Coords<Taylor2> u{};
  for (int i = 0; i < d; ++i) u[std::size_t(i)] = Taylor2::variable(p[i] - center_[i], i, d);
  const Taylor2 f = apply_reparam(eval_family<Taylor2>(family_, u, n_), reparam_);
  Jet2 j;
  j.value = f.value();
  j.rgrad.resize(d);
  j.rhess.resize(d, d);
  for (int i = 0; i < d; ++i) {
    j.rgrad(i) = f.grad(i);
    for (int k = 0; k < d; ++k) j.rhess(i, k) = f.hess(i, k);
  }
  return j;
}

Jet2 jet(const SurfaceSpec& spec, const Point& p) { return spec.jet(p); }

RadialHit radial_root(const SurfaceSpec& spec, std::span<const double> direction) {
  if (!spec.star_shaped())
    throw NotStarShapedError("radial_root: " + spec.family_name() + " surface is not star-shaped");
  if (int(direction.size()) != spec.real_dim()) throw ArgumentError("radial_root: direction dimension mismatch");

  const double scale = spec.characteristic_scale();
  const double max_radius = 1e3 * scale;
  auto g = [&](double t) { return spec.along_ray(direction, t); };

  if (!(g(0.0).first < 0.0))
    throw NotStarShapedError("radial_root: f(center) >= 0, center is not inside the domain");

  double lo = 0.0;
  double hi = scale / 16.0;
  while (!(g(hi).first > 0.0)) {
    lo = hi;
    hi *= 2.0;
    if (hi > max_radius)
      throw NotStarShapedError("radial_root: no sign change within radius " + std::to_string(max_radius));
  }

  double t = 0.5 * (lo + hi);
  double f = 0.0, df = 0.0;
  std::tie(f, df) = g(t);
  for (int it = 0; it < 200; ++it) {
    if (f == 0.0) break;
    if (f < 0.0)
      lo = t;
    else
      hi = t;
    double next = (df > 0.0) ? t - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    std::tie(f, df) = g(t);
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * t || hi - lo <= 1e-16 * hi) break;
  }
  if (!(df > 0.0))
    throw TransversalityError("radial_root: <grad f, omega> = " + std::to_string(df) + " <= 0 at the root");
  return {t, df, f};
}

double dirichlet_scale(std::span<const double> axes) {
  double s = 0.0;
  for (double a : axes) s += 1.0 / (a * a);
  return 2.0 / s;
}

SurfaceSpec make_sphere(int n, double radius, std::vector<double> center) {
  return SurfaceSpec(n, SphereFamily{radius}, std::move(center));
}

SurfaceSpec make_ellipsoid(std::vector<double> axes, std::vector<double> center) {
  const int n = int(axes.size()) / 2 - 1;
  if (axes.size() % 2 != 0 || n < 1) throw ConstructionError("surface: ellipsoid needs 2n+2 semi-axes");
  return SurfaceSpec(n, EllipsoidFamily{std::move(axes), 1.0}, std::move(center));
}

SurfaceSpec make_dirichlet_ellipsoid(std::vector<double> axes, std::vector<double> center) {
  const int n = int(axes.size()) / 2 - 1;
  if (axes.size() % 2 != 0 || n < 1) throw ConstructionError("surface: ellipsoid needs 2n+2 semi-axes");
  const double s = dirichlet_scale(axes);
  return SurfaceSpec(n, EllipsoidFamily{std::move(axes), s}, std::move(center));
}

SurfaceSpec make_perturbed_quadric(int n, double c, std::vector<HoloTerm> h, std::vector<double> center) {
  return SurfaceSpec(n, PerturbedQuadricFamily{c, std::move(h)}, std::move(center));
}

SurfaceSpec make_cylinder(int n, std::vector<int> coords, double radius) {
  return SurfaceSpec(n, CylinderFamily{std::move(coords), radius});
}

SurfaceSpec make_reinhardt(std::shared_ptr<const ReinhardtProfile> profile, std::vector<double> center) {
  return SurfaceSpec(1, ReinhardtFamily{std::move(profile)}, std::move(center));
}

}  // namespace levilab
