#pragma once

// End-to-end checks that combine pointwise curvature with quadrature: the
// integral formula, the isoperimetric ratio, the Minkowski formula, the
// Alexandrov chain, the Dirichlet chain and the Newton sweep.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "levilab/quadrature.hpp"
#include "levilab/surfaces.hpp"

namespace levilab {

enum class Identity { IntegralFormula, Isoperimetric, Minkowski, Alexandrov, DirichletChain, NewtonSweep };
enum class Verdict { Equal, InequalityHolds, Violated, HypothesesNotMet };

std::string to_string(Identity id);
std::string to_string(Verdict v);

/// One asserted or reported comparison inside a report.
struct Check {
  enum class Kind { equality, lower_bound, report_only };
  std::string name;
  Kind kind = Kind::equality;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  /// equality: |lhs - rhs| / max(|lhs|, |rhs|); lower_bound: lhs / rhs - 1
  double margin = 0.0;
  bool passed = true;
};

struct VerificationReport {
  Identity identity = Identity::IntegralFormula;
  int j = 0;  // 0 when the identity has no j
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  Verdict verdict = Verdict::Violated;
  double tolerance = 0.0;
  double margin = 0.0;
  std::string method;
  std::uint64_t nodes_used = 0;
  double lhs_error_estimate = 0.0;
  double rhs_error_estimate = 0.0;
  nlohmann::ordered_json surface;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> details;

  nlohmann::ordered_json to_json() const;
};

/// abs_err / max(|lhs|, |rhs|, 1e-300)
double relative_error(double lhs, double rhs);

/// Closed-form solution of trace ddbar f = 1 on an ellipsoid:
/// f = (sum x_k^2 / a_k^2 - 1) * 2 / sum(1 / a_k^2).
class DirichletQuadratic {
 public:
  explicit DirichletQuadratic(std::vector<double> axes);

  int n() const { return static_cast<int>(axes_.size()) / 2 - 1; }
  const std::vector<double>& axes() const { return axes_; }
  double scale() const { return scale_; }
  double value(std::span<const double> x) const;
  /// Constant complex Hessian of f.
  HermitianMatrix complex_hessian() const;
  SurfaceSpec surface(std::vector<double> center = {}) const;

 private:
  std::vector<double> axes_;
  double scale_;
};

enum class FunctionChoice { family_default, exponential, dirichlet };
std::string to_string(FunctionChoice c);

inline constexpr double kIntegralTolerance = 1e-6;
inline constexpr double kIsoperimetricTolerance = 1e-6;
inline constexpr double kMinkowskiTolerance = 1e-6;
inline constexpr double kAlexandrovTolerance = 1e-6;
inline constexpr double kConstancyTolerance = 1e-5;
inline constexpr double kDirichletTolerance = 1e-8;
inline constexpr double kGradientFluxTolerance = 1e-7;
inline constexpr double kGradcTolerance = 1e-10;
inline constexpr double kNewtonTolerance = 1e-10;

VerificationReport verify_integral_formula(const SurfaceSpec& spec, FunctionChoice choice, int j,
                                           const QuadratureSpec& q, double tol = kIntegralTolerance);

/// Throws HypothesisError at the first node with K^(j) <= 0.
VerificationReport isoperimetric_ratio(const SurfaceSpec& spec, int j, const QuadratureSpec& q,
                                       double tol = kIsoperimetricTolerance);

VerificationReport minkowski_residual(const SurfaceSpec& spec, const QuadratureSpec& q,
                                      double tol = kMinkowskiTolerance);

/// Verdict HypothesesNotMet when the relative spread of K^(j) over the nodes
/// exceeds constancy_tol; the chain is then reported but not asserted.
VerificationReport alexandrov_check(const SurfaceSpec& spec, int j, const QuadratureSpec& q,
                                    double tol = kAlexandrovTolerance,
                                    double constancy_tol = kConstancyTolerance);

VerificationReport dirichlet_chain(const std::vector<double>& axes, int j, const QuadratureSpec& q,
                                   double tol = kDirichletTolerance);

/// Min of newton_gap(ddbar f, j + 1) over boundary and bulk quadrature
/// nodes. Families that are not star-shaped are sampled on spheres around
/// their center instead.
VerificationReport newton_sweep(const SurfaceSpec& spec, int j, const QuadratureSpec& q,
                                double tol = kNewtonTolerance);

}  // namespace levilab
