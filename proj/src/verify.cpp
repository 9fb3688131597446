#include "levilab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "levilab/curvature.hpp"
#include "levilab/errors.hpp"
#include "levilab/hermitian.hpp"
#include "levilab/spec_io.hpp"

namespace levilab {

namespace {

void check_j(const SurfaceSpec& spec, int j) {
  if (j < 1 || j > spec.n())
    throw RangeError("j = " + std::to_string(j) + " outside [1, " + std::to_string(spec.n()) + "]");
}

std::string node_text(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << "at x = (";
  for (int i = 0; i < p.dim(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

Check equality(std::string name, double lhs, double rhs, double tol) {
  const double m = relative_error(lhs, rhs);
  return {std::move(name), Check::Kind::equality, lhs, rhs, tol, m, m <= tol};
}

// lhs >= rhs up to a relative slack of tol.
Check lower_bound(std::string name, double lhs, double rhs, double tol) {
  const double m = lhs / rhs - 1.0;
  return {std::move(name), Check::Kind::lower_bound, lhs, rhs, tol, m, m >= -tol};
}

VerificationReport base_report(Identity id, int j, const SurfaceSpec& spec, const QuadratureSpec& q) {
  VerificationReport r;
  r.identity = id;
  r.j = j;
  r.method = q.describe();
  r.surface = surface_to_json(spec);
  return r;
}

void set_sides(VerificationReport& r, double lhs, double rhs) {
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = relative_error(lhs, rhs);
}

void set_equality_verdict(VerificationReport& r, double tol) {
  r.tolerance = tol;
  r.margin = r.rel_err;
  r.verdict = r.rel_err <= tol ? Verdict::Equal : Verdict::Violated;
}

double max_abs_component(const HermitianMatrix& a) { return a.entries().cwiseAbs().maxCoeff(); }

}  // namespace

std::string to_string(Identity id) {
  switch (id) {
    case Identity::IntegralFormula: return "IntegralFormula";
    case Identity::Isoperimetric: return "Isoperimetric";
    case Identity::Minkowski: return "Minkowski";
    case Identity::Alexandrov: return "Alexandrov";
    case Identity::DirichletChain: return "DirichletChain";
    case Identity::NewtonSweep: return "NewtonSweep";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "Equal";
    case Verdict::InequalityHolds: return "InequalityHolds";
    case Verdict::Violated: return "Violated";
    case Verdict::HypothesesNotMet: return "HypothesesNotMet";
  }
  return "?";
}

std::string to_string(FunctionChoice c) {
  switch (c) {
    case FunctionChoice::family_default: return "default";
    case FunctionChoice::exponential: return "exp";
    case FunctionChoice::dirichlet: return "dirichlet";
  }
  return "?";
}

double relative_error(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json out;
  out["schema_version"] = "1";
  out["identity"] = {{"name", to_string(identity)}, {"j", j}};
  out["lhs"] = lhs;
  out["rhs"] = rhs;
  out["abs_err"] = abs_err;
  out["rel_err"] = rel_err;
  out["verdict"] = {{"kind", to_string(verdict)}, {"tolerance", tolerance}, {"margin", margin}};
  out["quadrature"] = {{"method", method},
                       {"nodes_used", nodes_used},
                       {"lhs_error_estimate", lhs_error_estimate},
                       {"rhs_error_estimate", rhs_error_estimate}};
  out["surface"] = surface;
  auto& cs = out["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    static constexpr const char* kinds[] = {"equality", "lower_bound", "report_only"};
    cs.push_back({{"name", c.name},
                  {"kind", kinds[int(c.kind)]},
                  {"lhs", c.lhs},
                  {"rhs", c.rhs},
                  {"tolerance", c.tolerance},
                  {"margin", c.margin},
                  {"passed", c.passed}});
  }
  auto& d = out["details"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : details) d[k] = v;
  return out;
}

// --- DirichletQuadratic -----------------------------------------------------

DirichletQuadratic::DirichletQuadratic(std::vector<double> axes) : axes_(std::move(axes)) {
  if (axes_.size() < 4 || axes_.size() % 2 != 0)
    throw ConstructionError("dirichlet quadratic: need 2n+2 semi-axes with n >= 1");
  for (double a : axes_)
    if (!(a > 0.0) || !std::isfinite(a)) throw ConstructionError("dirichlet quadratic: semi-axes must be positive");
  scale_ = dirichlet_scale(axes_);
}

double DirichletQuadratic::value(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < axes_.size(); ++i) s += x[i] * x[i] / (axes_[i] * axes_[i]);
  return (s - 1.0) * scale_;
}

HermitianMatrix DirichletQuadratic::complex_hessian() const {
  // f_{k kbar} = (f_xx + f_yy) / 4; off-diagonal entries vanish.
  std::vector<double> d(axes_.size() / 2);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double ax = axes_[2 * k], ay = axes_[2 * k + 1];
    d[k] = 0.25 * scale_ * 2.0 * (1.0 / (ax * ax) + 1.0 / (ay * ay));
  }
  return HermitianMatrix::diagonal(Eigen::Map<const Eigen::VectorXd>(d.data(), Eigen::Index(d.size())));
}

SurfaceSpec DirichletQuadratic::surface(std::vector<double> center) const {
  return make_dirichlet_ellipsoid(axes_, std::move(center));
}

// --- integral formula --------------------------------------------------------

VerificationReport verify_integral_formula(const SurfaceSpec& spec, FunctionChoice choice, int j,
                                           const QuadratureSpec& q, double tol) {
  check_j(spec, j);
  SurfaceSpec g = spec;
  if (choice == FunctionChoice::exponential) {
    g = spec.with_reparametrization(Reparametrization::exponential);
  } else if (choice == FunctionChoice::dirichlet) {
    const auto* e = std::get_if<EllipsoidFamily>(&spec.family());
    if (!e) throw ArgumentError("integral formula: the dirichlet choice needs an ellipsoid");
    g = SurfaceSpec(spec.n(), EllipsoidFamily{e->axes, dirichlet_scale(e->axes)},
                    std::vector<double>(spec.center().coords().begin(), spec.center().coords().end()),
                    Reparametrization::none, spec.name());
  }
  const int n = g.n();
  const IntegralResult lhs = bulk_integral(
      g, [j](const InteriorSample& s) { return sigma(s.jet.whess(), j + 1); }, q);
  const IntegralResult surf = surface_integral(
      g,
      [j](const BoundarySample& s) {
        const BoundaryFrame fr = make_frame(s.point, s.jet);
        return levi(fr, j) * std::pow(fr.pgrad_norm, j + 1);
      },
      q);
  const double c = binomial(n + 1, j + 1) / (2.0 * (n + 1));

  VerificationReport r = base_report(Identity::IntegralFormula, j, g, q);
  set_sides(r, lhs.value, c * surf.value);
  set_equality_verdict(r, tol);
  r.nodes_used = lhs.nodes_used + surf.nodes_used;
  r.lhs_error_estimate = lhs.error_estimate;
  r.rhs_error_estimate = c * surf.error_estimate;
  r.checks.push_back(equality("integral_formula", r.lhs, r.rhs, tol));
  r.details = {{"function_choice_" + to_string(choice), 1.0}, {"binomial_factor", c}};
  return r;
}

// --- isoperimetric -----------------------------------------------------------

namespace {

double inverse_root_curvature(const BoundarySample& s, int j) {
  const BoundaryFrame fr = make_frame(s.point, s.jet);
  const double k = levi(fr, j);
  if (!(k > 0.0))
    throw HypothesisError("K^(" + std::to_string(j) + ") = " + std::to_string(k) + " <= 0 " + node_text(s.point));
  return std::pow(1.0 / k, 1.0 / j);
}

}  // namespace

VerificationReport isoperimetric_ratio(const SurfaceSpec& spec, int j, const QuadratureSpec& q, double tol) {
  check_j(spec, j);
  const int n = spec.n();
  const auto fields = surface_integrals(
      spec, 2,
      [j](const BoundarySample& s, std::span<double> out) {
        out[0] = inverse_root_curvature(s, j);
        out[1] = 1.0;
      },
      q);
  const IntegralResult vol = volume(spec, q);
  const double lhs = fields[0].integral.value;
  const double rhs = 2.0 * (n + 1) * vol.value;

  VerificationReport r = base_report(Identity::Isoperimetric, j, spec, q);
  set_sides(r, lhs, rhs);
  r.tolerance = tol;
  r.margin = lhs / rhs - 1.0;
  if (std::abs(r.margin) <= tol)
    r.verdict = Verdict::Equal;
  else
    r.verdict = r.margin >= -tol ? Verdict::InequalityHolds : Verdict::Violated;
  r.nodes_used = fields[0].integral.nodes_used + vol.nodes_used;
  r.lhs_error_estimate = fields[0].integral.error_estimate;
  r.rhs_error_estimate = 2.0 * (n + 1) * vol.error_estimate;
  r.checks.push_back(lower_bound("isoperimetric", lhs, rhs, tol));
  r.details = {{"ratio", lhs / rhs},
               {"area", fields[1].integral.value},
               {"volume", vol.value},
               {"min_inverse_root_curvature", fields[0].min},
               {"max_inverse_root_curvature", fields[0].max}};
  return r;
}

// --- Minkowski ---------------------------------------------------------------

VerificationReport minkowski_residual(const SurfaceSpec& spec, const QuadratureSpec& q, double tol) {
  const auto fields = surface_integrals(
      spec, 2,
      [](const BoundarySample& s, std::span<double> out) {
        const BoundaryFrame fr = make_frame(s.point, s.jet);
        double support = 0.0;  // <N, x> with x from the origin
        for (int i = 0; i < s.point.dim(); ++i) support += fr.normal(i) * s.point[i];
        out[0] = 1.0;
        out[1] = mean_curvature(fr) * support;
      },
      q);
  VerificationReport r = base_report(Identity::Minkowski, 0, spec, q);
  set_sides(r, fields[0].integral.value, fields[1].integral.value);
  set_equality_verdict(r, tol);
  r.nodes_used = fields[0].integral.nodes_used;
  r.lhs_error_estimate = fields[0].integral.error_estimate;
  r.rhs_error_estimate = fields[1].integral.error_estimate;
  r.checks.push_back(equality("minkowski", r.lhs, r.rhs, tol));
  return r;
}

// --- Alexandrov --------------------------------------------------------------

VerificationReport alexandrov_check(const SurfaceSpec& spec, int j, const QuadratureSpec& q, double tol,
                                    double constancy_tol) {
  check_j(spec, j);
  const int n = spec.n();
  const auto fields = surface_integrals(
      spec, 3,
      [j](const BoundarySample& s, std::span<double> out) {
        const BoundaryFrame fr = make_frame(s.point, s.jet);
        out[0] = 1.0;
        out[1] = levi(fr, j);
        out[2] = mean_curvature(fr);
      },
      q);
  const IntegralResult vol = volume(spec, q);
  const double area = fields[0].integral.value;
  const double kmin = fields[1].min, kmax = fields[1].max;
  const double kmean = fields[1].integral.value / area;
  const double hmax = fields[2].max;
  const double defect = (kmax - kmin) / std::max({std::abs(kmax), std::abs(kmin), 1e-300});
  const double middle = area / (2.0 * (n + 1) * vol.value);

  VerificationReport r = base_report(Identity::Alexandrov, j, spec, q);
  r.nodes_used = fields[0].integral.nodes_used + vol.nodes_used;
  r.lhs_error_estimate = fields[1].integral.error_estimate / area;
  r.rhs_error_estimate = 0.0;
  r.tolerance = tol;
  r.details = {{"constancy_defect", defect},     {"constancy_tolerance", constancy_tol},
               {"K_min", kmin},                  {"K_max", kmax},
               {"K_mean", kmean},                {"area", area},
               {"volume", vol.value},            {"area_over_2(n+1)volume", middle},
               {"max_H_over_nodes", hmax},       {"nodes_for_max_H", double(fields[0].integral.nodes_used)}};

  const bool constant = kmin > 0.0 && defect <= constancy_tol;
  const double root = kmean > 0.0 ? std::pow(kmean, 1.0 / j) : std::numeric_limits<double>::quiet_NaN();
  set_sides(r, root, hmax);
  Check first = lower_bound("root_K_le_area_ratio", middle, root, tol);
  Check second = lower_bound("area_ratio_le_max_H", hmax, middle, tol);
  if (!constant) {
    first.kind = second.kind = Check::Kind::report_only;
    first.passed = second.passed = true;
    r.checks = {first, second};
    r.verdict = Verdict::HypothesesNotMet;
    r.margin = defect;
    return r;
  }
  r.checks = {first, second};
  r.margin = std::min(first.margin, second.margin);
  if (!first.passed || !second.passed)
    r.verdict = Verdict::Violated;
  else if (std::abs(first.margin) <= tol && std::abs(second.margin) <= tol)
    r.verdict = Verdict::Equal;
  else
    r.verdict = Verdict::InequalityHolds;
  return r;
}

// --- Dirichlet chain ---------------------------------------------------------

VerificationReport dirichlet_chain(const std::vector<double>& axes, int j, const QuadratureSpec& q, double tol) {
  const DirichletQuadratic dq(axes);
  const SurfaceSpec spec = dq.surface();
  check_j(spec, j);
  const int n = spec.n();
  const bool ball = std::all_of(axes.begin(), axes.end(), [&](double a) { return a == axes.front(); });

  const IntegralResult vol = volume(spec, q);
  const IntegralResult bulk = bulk_integral(
      spec, [j](const InteriorSample& s) { return sigma(s.jet.whess(), j + 1); }, q);
  const auto fields = surface_integrals(
      spec, 4,
      [j, n](const BoundarySample& s, std::span<double> out) {
        const BoundaryFrame fr = make_frame(s.point, s.jet);
        const double k = levi(fr, j);
        if (!(k > 0.0))
          throw HypothesisError("K^(" + std::to_string(j) + ") <= 0 " + node_text(s.point));
        out[0] = fr.pgrad_norm;
        out[1] = k * std::pow(fr.pgrad_norm, j + 1);
        out[2] = std::pow(1.0 / k, 1.0 / j);
        out[3] = std::pow(k, 1.0 / j) * (n + 1) * fr.pgrad_norm - 1.0;
      },
      q);
  const double c = binomial(n + 1, j + 1);
  const double bound_i = c * vol.value / std::pow(n + 1.0, j + 1);
  const double flux = fields[0].integral.value;
  const double rhs_int = c / (2.0 * (n + 1)) * fields[1].integral.value;
  const double bound_iii =
      c * std::pow(flux, j + 1) / (2.0 * (n + 1) * std::pow(fields[2].integral.value, j));
  const double gradc = std::max(std::abs(fields[3].min), std::abs(fields[3].max));

  VerificationReport r = base_report(Identity::DirichletChain, j, spec, q);
  set_sides(r, bulk.value, bound_i);
  r.nodes_used = bulk.nodes_used + vol.nodes_used + fields[0].integral.nodes_used;
  r.lhs_error_estimate = bulk.error_estimate;
  r.rhs_error_estimate = bound_i / vol.value * vol.error_estimate;
  r.tolerance = tol;

  Check left = lower_bound("left_newton_bound", bound_i, bulk.value, tol);
  Check flux_check = equality("gradient_flux", flux, 2.0 * vol.value, kGradientFluxTolerance);
  Check right = lower_bound("right_cauchy_schwarz", rhs_int, bound_iii, tol);
  Check grad{"gradc_max_abs_residual", ball ? Check::Kind::equality : Check::Kind::report_only,
             gradc, 0.0, kGradcTolerance, gradc, !ball || gradc <= kGradcTolerance};
  r.checks = {left, flux_check, right, grad};
  r.margin = left.margin;
  const bool all = left.passed && flux_check.passed && right.passed && grad.passed;
  if (!all)
    r.verdict = Verdict::Violated;
  else
    r.verdict = std::abs(left.margin) <= tol ? Verdict::Equal : Verdict::InequalityHolds;
  r.details = {{"volume", vol.value},
               {"sigma_constant", sigma(dq.complex_hessian(), j + 1)},
               {"trace_constant", dq.complex_hessian().trace()},
               {"gradient_flux", flux},
               {"curvature_side", rhs_int},
               {"cauchy_schwarz_bound", bound_iii},
               {"inverse_root_curvature_integral", fields[2].integral.value},
               {"ball", ball ? 1.0 : 0.0}};
  return r;
}

// --- Newton sweep ------------------------------------------------------------

VerificationReport newton_sweep(const SurfaceSpec& spec, int j, const QuadratureSpec& q, double tol) {
  check_j(spec, j);
  auto gap_and_scale = [j](const Jet2& jet, std::span<double> out) {
    const HermitianMatrix a = jet.whess();
    out[0] = newton_gap(a, j + 1);
    // Relative size of the Hessian, used to judge "identity-proportional".
    out[1] = max_abs_component(a);
  };
  double gmin = 0.0, gmax = 0.0, scale = 0.0;
  std::uint64_t nodes = 0;
  std::string where;
  if (spec.star_shaped()) {
    const auto b = surface_integrals(
        spec, 2, [&](const BoundarySample& s, std::span<double> out) { gap_and_scale(s.jet, out); }, q);
    const auto v = bulk_integrals(
        spec, 2, [&](const InteriorSample& s, std::span<double> out) { gap_and_scale(s.jet, out); }, q);
    gmin = std::min(b[0].min, v[0].min);
    gmax = std::max(b[0].max, v[0].max);
    scale = std::max(b[1].max, v[1].max);
    nodes = b[0].integral.nodes_used + v[0].integral.nodes_used;
    where = "boundary_and_bulk_nodes";
  } else {
    // Points c + r * omega on the product-rule directions for a few radii.
    const double s0 = spec.characteristic_scale();
    gmin = std::numeric_limits<double>::infinity();
    gmax = -gmin;
    const int d = spec.real_dim();
    const int order = std::holds_alternative<ProductGauss>(q.method) ? std::get<ProductGauss>(q.method).order : 8;
    const GaussRule g = gauss_legendre(order);
    std::vector<int> idx(std::size_t(d - 1), 0);
    const std::uint64_t total = product_node_count(d, order);
    for (std::uint64_t t = 0; t < total; ++t) {
      std::uint64_t rest = t;
      for (int a = d - 2; a >= 0; --a) {
        idx[std::size_t(a)] = int(rest % std::uint64_t(order));
        rest /= std::uint64_t(order);
      }
      std::vector<double> omega(static_cast<std::size_t>(d));
      double sp = 1.0;
      for (int a = 0; a < d - 2; ++a) {
        const double th = 0.5 * std::acos(-1.0) * (1.0 + g.nodes[std::size_t(idx[std::size_t(a)])]);
        omega[std::size_t(a)] = sp * std::cos(th);
        sp *= std::sin(th);
      }
      const double ph = std::acos(-1.0) * (1.0 + g.nodes[std::size_t(idx[std::size_t(d - 2)])]);
      omega[std::size_t(d - 2)] = sp * std::cos(ph);
      omega[std::size_t(d - 1)] = sp * std::sin(ph);
      for (double radius : {0.5 * s0, s0, 2.0 * s0}) {
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) x[std::size_t(i)] = spec.center()[i] + radius * omega[std::size_t(i)];
        double out[2];
        gap_and_scale(spec.jet(Point(std::move(x))), out);
        gmin = std::min(gmin, out[0]);
        gmax = std::max(gmax, out[0]);
        scale = std::max(scale, out[1]);
        ++nodes;
      }
    }
    where = "sphere_shells";
  }
  VerificationReport r = base_report(Identity::NewtonSweep, j, spec, q);
  set_sides(r, gmin, 0.0);
  r.abs_err = std::abs(gmin);
  r.rel_err = relative_error(gmin, 0.0);
  r.tolerance = tol;
  r.margin = gmin;
  r.nodes_used = nodes;
  r.checks.push_back({"min_gap_nonnegative", Check::Kind::lower_bound, gmin, 0.0, tol, gmin, gmin >= -tol});
  if (gmin < -tol)
    r.verdict = Verdict::Violated;
  else
    r.verdict = gmax <= tol ? Verdict::Equal : Verdict::InequalityHolds;
  r.details = {{"min_gap", gmin}, {"max_gap", gmax}, {"max_hessian_entry", scale}, {where, double(nodes)}};
  return r;
}

}  // namespace levilab
