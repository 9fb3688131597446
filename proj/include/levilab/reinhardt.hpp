#pragma once

// Constant-Levi-curvature profiles of Reinhardt hypersurfaces in C^2:
// {|z1|^2 = f(|z2|^2)} with f solving
//
//   s f f'' = s f'^2 - k (f + s f'^2)^{3/2} - f f'.
//
// With the defining function |z1|^2 - f(|z2|^2) (negative inside), this is
// exactly the statement that the Levi curvature equals k.

#include <vector>

namespace levilab {

struct ProfileJet {
  double f = 0.0;
  double fp = 0.0;
  double fpp = 0.0;
};

/// s f f'' - s f'^2 + k (f + s f'^2)^{3/2} + f f'; zero along a solution.
double reinhardt_ode_residual(double k, double s, const ProfileJet& p);

struct ProfileOptions {
  double rtol = 1e-12;
  double atol = 1e-13;
  int min_knots = 100;  // caps the step at (span of each leg) / min_knots
  /// Continue f by its quadratic Taylor polynomial outside [smin, smax]
  /// instead of raising DomainError. Needed to close up a surface whose
  /// profile reaches the singular endpoints s = 0 or f = 0.
  bool extend = false;
};

class ReinhardtProfile {
 public:
  struct Knot {
    double s;
    ProfileJet jet;
  };

  ReinhardtProfile(double k, double s0, double f0, double fp0, double smin, double smax,
                   ProfileOptions options = {});

  double k() const { return k_; }
  double s0() const { return s0_; }
  double f0() const { return f0_; }
  double fp0() const { return fp0_; }
  double smin() const { return smin_; }
  double smax() const { return smax_; }
  const ProfileOptions& options() const { return options_; }
  const std::vector<Knot>& knots() const { return knots_; }

  /// f, f', f'' of the C^2 quintic Hermite interpolant through the knots.
  /// Throws DomainError outside [smin, smax] unless options().extend.
  ProfileJet eval(double s) const;

 private:
  double k_, s0_, f0_, fp0_, smin_, smax_;
  ProfileOptions options_;
  std::vector<Knot> knots_;  // increasing s
};

}  // namespace levilab
