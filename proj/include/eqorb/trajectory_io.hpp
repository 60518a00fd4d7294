#pragma once

#include <filesystem>
#include <string>

#include "eqorb/fourier_path.hpp"
#include "eqorb/problem.hpp"

namespace eqorb {

enum class TrajectoryFormat { csv, json };

TrajectoryFormat trajectory_format_from_path(const std::filesystem::path& path);

/// Full-period samples with the period T = m pi and the samples per
/// fundamental domain S.
struct Trajectory {
  DiscretizedPath path;
  double period = 0.0;
  int samples_per_domain = 0;
};

Trajectory make_trajectory(const SymmetryProblem& problem, const PathCoefficients& coefficients, int samples);

/// CSV: '#' header lines (period, S, n, d, samples), then one row per sample
/// and body: "h,t,body,x_1,...,x_d" with 1-based bodies. JSON: header fields
/// and positions[h][i][k]. Numbers are written with 17 significant digits.
std::string trajectory_to_string(const Trajectory& trajectory, TrajectoryFormat format);
Trajectory trajectory_from_string(const std::string& text, TrajectoryFormat format);

void export_trajectory(const SymmetryProblem& problem, const PathCoefficients& coefficients, int samples,
                       TrajectoryFormat format, const std::filesystem::path& out);
Trajectory import_trajectory(const std::filesystem::path& path);

}  // namespace eqorb
