#pragma once

// Command-line front end of `levilab`.
//
//   levilab curvature  --surface S --point x1,y1,... [--j J]
//   levilab identities --n N [--j J] [--seed S] [--degree D]
//   levilab verify <integral|isoperimetric|minkowski|alexandrov|dirichlet|newton>
//                      --surface S [--j J] [--quad Q] [--choice C] [--tol T] [--out F|-]
//   levilab batch <dir> --identity I [--j J] [--quad Q] [--tol T] [--out-dir D]
//
// Exit codes: 0 verdict as contracted, 2 Violated, 3 hypotheses not met,
// 4 numerical failure, 64 usage error.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "levilab/quadrature.hpp"
#include "levilab/surfaces.hpp"
#include "levilab/verify.hpp"

namespace levilab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 2;
inline constexpr int kExitHypotheses = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitUsage = 64;

struct RunConfig {
  std::string subcommand;  // curvature | identities | verify | batch
  std::string identity;    // verify / batch
  std::string surface_arg;
  std::optional<SurfaceSpec> surface;
  std::vector<double> point;
  int j = 1;
  bool j_given = false;
  int n = 1;  // identities
  std::uint64_t seed = 1;
  int degree = 3;
  QuadratureSpec quad;
  FunctionChoice choice = FunctionChoice::family_default;
  std::optional<double> tol;
  std::string out = "-";
  std::string batch_dir;
  std::string out_dir = "levilab_batch";
  unsigned threads = 1;
  std::string help;  // non-empty when --help was requested

  /// Every resolved setting, defaults included.
  nlohmann::ordered_json to_json() const;
};

/// Parses and validates the arguments (without the program name).
/// Throws UsageError naming the offending flag.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes a validated config; returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with usage errors mapped to exit code 64.
int main_entry(int argc, char** argv);

/// Runs one verification as configured (surface and identity set).
VerificationReport run_verification(const std::string& identity, const SurfaceSpec& surface, int j,
                                    FunctionChoice choice, const QuadratureSpec& q, std::optional<double> tol);

int exit_code(Verdict v);

}  // namespace levilab::cli
