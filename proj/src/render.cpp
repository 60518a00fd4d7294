#include "eqorb/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "eqorb/errors.hpp"
#include "eqorb/problem_file.hpp"

namespace eqorb {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

// Screen coordinates (y pointing up) of body i at sample h.
std::array<double, 2> project(const Eigen::MatrixXd& y, int i) {
  if (y.cols() == 2) return {y(i, 0), y(i, 1)};
  const double x = y(i, 0), yy = y(i, 1), z = y(i, 2);
  return {(x - yy) / std::sqrt(2.0), (2.0 * z - x - yy) / std::sqrt(6.0)};
}

}  // namespace

std::string render_svg(const DiscretizedPath& path, const RenderOptions& options) {
  if (path.d != 2 && path.d != 3) {
    throw UnsupportedDimension("rendering supports dimension 2 or 3, got " + std::to_string(path.d));
  }
  double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
  double lo_v = lo_u, hi_v = -lo_u;
  for (const auto& y : path.positions) {
    for (int i = 0; i < path.n; ++i) {
      const auto [u, v] = project(y, i);
      lo_u = std::min(lo_u, u);
      hi_u = std::max(hi_u, u);
      lo_v = std::min(lo_v, v);
      hi_v = std::max(hi_v, v);
    }
  }
  const double span = std::max({hi_u - lo_u, hi_v - lo_v, 1e-6});
  const double pad = 0.08 * span;
  const double side = span + 2.0 * pad;
  const double cu = 0.5 * (lo_u + hi_u);
  const double cv = 0.5 * (lo_v + hi_v);
  const double x0 = cu - 0.5 * side;
  const double y0 = -cv - 0.5 * side;  // SVG y grows downwards
  const double stroke = side / 300.0;
  const double marker = side / 80.0;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(options.size_px) + "\" height=\"" +
         fmt(options.size_px) + "\" viewBox=\"" + fmt(x0) + " " + fmt(y0) + " " + fmt(side) + " " + fmt(side) +
         "\" preserveAspectRatio=\"xMidYMid meet\">\n";
  out += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" + fmt(side) + "\" height=\"" + fmt(side) +
         "\" fill=\"white\"/>\n";

  for (int i = 0; i < path.n; ++i) {
    const char* color = kPalette[static_cast<std::size_t>(i) % kPalette.size()];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"" + fmt(stroke) +
           "\" points=\"";
    const std::size_t count = path.size() + (path.periodic ? 1 : 0);
    for (std::size_t h = 0; h < count; ++h) {
      const auto [u, v] = project(path.positions[h % path.size()], i);
      if (h > 0) out += " ";
      out += fmt(u) + "," + fmt(-v);
    }
    out += "\"/>\n";
    const auto [u, v] = project(path.positions.front(), i);
    out += "<circle cx=\"" + fmt(u) + "\" cy=\"" + fmt(-v) + "\" r=\"" + fmt(marker) + "\" fill=\"" + color +
           "\"><title>body " + std::to_string(i + 1) + " at t = 0</title></circle>\n";
  }

  if (path.d == 3) {
    const double len = side / 10.0;
    const double ox = x0 + 1.5 * len;
    const double oy = y0 + side - 1.5 * len;
    const char* names[3] = {"x", "y", "z"};
    for (int a = 0; a < 3; ++a) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(1, 3);
      e(0, a) = 1.0;
      const auto [u, v] = project(e, 0);
      out += "<line x1=\"" + fmt(ox) + "\" y1=\"" + fmt(oy) + "\" x2=\"" + fmt(ox + len * u) + "\" y2=\"" +
             fmt(oy - len * v) + "\" stroke=\"black\" stroke-width=\"" + fmt(stroke) + "\"/>\n";
      out += "<text x=\"" + fmt(ox + 1.2 * len * u) + "\" y=\"" + fmt(oy - 1.2 * len * v) + "\" font-size=\"" +
             fmt(len / 2.5) + "\">" + names[a] + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string render_svg(const SymmetryProblem& problem, const PathCoefficients& coefficients,
                       const RenderOptions& options) {
  if (problem.d != 2 && problem.d != 3) {
    throw UnsupportedDimension("rendering supports dimension 2 or 3, got " + std::to_string(problem.d));
  }
  return render_svg(extend_to_period(coefficients, problem, options.samples), options);
}

void render_orbit(const SymmetryProblem& problem, const PathCoefficients& coefficients,
                  const std::filesystem::path& out, const RenderOptions& options) {
  write_text_file(out, render_svg(problem, coefficients, options));
}

}  // namespace eqorb
