#pragma once

#include <filesystem>
#include <string>

#include "eqorb/fourier_path.hpp"
#include "eqorb/problem.hpp"

namespace eqorb {

struct RenderOptions {
  int samples = 200;       // per fundamental domain
  double size_px = 600.0;  // width and height of the image
};

/// SVG of the full-period orbit. d = 2: one polyline per body, start markers,
/// equal-aspect viewBox. d = 3: orthographic projection along (1, 1, 1) with
/// screen axes u = (x - y)/sqrt 2, v = (2z - x - y)/sqrt 6 and an axis legend.
/// Throws UnsupportedDimension for d = 1 or d >= 4.
std::string render_svg(const SymmetryProblem& problem, const PathCoefficients& coefficients,
                       const RenderOptions& options = {});
std::string render_svg(const DiscretizedPath& path, const RenderOptions& options = {});

void render_orbit(const SymmetryProblem& problem, const PathCoefficients& coefficients,
                  const std::filesystem::path& out, const RenderOptions& options = {});

}  // namespace eqorb
