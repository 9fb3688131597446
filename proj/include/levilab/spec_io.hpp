#pragma once

// Text forms of surfaces and quadrature rules.
//
// Surface-spec file: one `key = value` per line, `#` starts a comment.
// Inline form: `family:key=value:key=value`, e.g. `sphere:R=2`.
//
//   family   sphere | ellipsoid | quadric | cylinder | reinhardt | polynomial
//   n        complex dimension minus one (default 1, or inferred)
//   center   comma-separated real coordinates (2n+2)
//   reparam  none | exp
//   name     free-form label
//
//   sphere      R
//   ellipsoid   axes (2n+2 reals), normalization = unit | dirichlet
//   quadric     c, h = "re,im,p1,..,p{n+1}; ..."  (coef * prod z_k^{p_k})
//   cylinder    coords (0-based real indices), R
//   reinhardt   k, s0, f0, fp0, smin, smax, extend = true | false
//   polynomial  terms = "re,im|a1,..|b1,..; ..." (coef z^a zbar^b), length,
//               star = true | false
//
// Quadrature: `gauss:order=24[,radial=R][,frame=auto|identity]` or
// `mc:samples=N,seed=S[,radial=R][,frame=...]`.

#include <string>

#include "json.hpp"

#include "levilab/quadrature.hpp"
#include "levilab/surfaces.hpp"

namespace levilab {

/// Parses the file format above. Throws ParseError with line and column.
SurfaceSpec parse_surface_text(const std::string& text);

/// Parses the inline form. Positions are reported as line 1.
SurfaceSpec parse_surface_inline(const std::string& text);

/// A path to an existing file is read as a file, anything else as inline.
SurfaceSpec load_surface(const std::string& arg);

QuadratureSpec parse_quadrature(const std::string& text);

/// Every parameter needed to rebuild the surface.
nlohmann::ordered_json surface_to_json(const SurfaceSpec& spec);

/// Grammar summary used by `--help`.
const char* surface_format_help();

}  // namespace levilab
