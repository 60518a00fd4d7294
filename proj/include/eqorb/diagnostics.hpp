#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "eqorb/fourier_path.hpp"
#include "eqorb/optimizer.hpp"
#include "eqorb/problem.hpp"

namespace eqorb {

struct AdmissibilityCondition {
  std::string name;
  bool holds = true;
  std::optional<std::size_t> witness;  // index into problem.group
  std::string detail;
};

/// ker tau /\ ker sigma = 1; |ker rho /\ ker sigma| <= 2 with the nontrivial
/// element reversing time; ker tau /\ ker rho = 1.
struct AdmissibilityReport {
  AdmissibilityCondition tau_sigma;
  AdmissibilityCondition rho_sigma;
  AdmissibilityCondition tau_rho;

  bool admissible() const noexcept { return tau_sigma.holds && rho_sigma.holds && tau_rho.holds; }
};

AdmissibilityReport check_admissibility(const SymmetryProblem& problem);

struct CoercivityReport {
  bool coercive = false;
  int fixed_dimension = 0;
  Eigen::VectorXd witness;  // (n d) configuration fixed by the group, zero centre of mass; empty if coercive
};

/// Rank of the group-averaging projector on zero-centre-of-mass configurations.
CoercivityReport check_coercivity(const FiniteGroup& group, const std::vector<double>& masses);
CoercivityReport check_coercivity(const SymmetryProblem& problem);

enum class CircleVerdict { holds, fails, unknown };
std::string to_string(CircleVerdict verdict);

struct RotatingCircleEntry {
  std::string subgroup;
  CircleVerdict verdict = CircleVerdict::unknown;
  int indices = 0;               // indices with a rotating circle found
  Eigen::MatrixXd plane;         // d x 2 orthonormal basis of the circle's plane, when found
  std::optional<std::size_t> witness;  // offending element of the subgroup, when fails
  std::string detail;
};

RotatingCircleEntry rotating_circle(const FiniteGroup& subgroup, const std::string& name);
/// Entries for ker tau, H0 and H1.
std::vector<RotatingCircleEntry> check_rotating_circle(const SymmetryProblem& problem);

struct DiagnosticsReport {
  AdmissibilityReport admissibility;
  CoercivityReport coercivity;
  bool bound_to_collisions_risk = false;
  std::vector<RotatingCircleEntry> rotating_circle;
  int projected_rank = 0;
  std::vector<std::string> notes;
};

DiagnosticsReport diagnose(const SymmetryProblem& problem);

struct OrbitVerification {
  double max_equation_residual = 0.0;
  /// Same residual away from the fundamental-domain seams (5% margin).
  double interior_equation_residual = 0.0;
  double min_pairwise_distance = 0.0;
  /// max |v(seam-) - v(seam+)| / max |v| with one-sided second-order velocities.
  double junction_velocity_mismatch = 0.0;
  /// (max E - min E) / |mean E| of E = 1/2 m |v|^2 - 1/2 m |Omega y|^2 - U.
  double energy_drift_along_period = 0.0;
};

/// Checks m_i (y'' - 2 Omega y' + Omega^2 y) = dU/dy_i on a periodic path with
/// central differences. Seams are the multiples of `seam_stride`.
OrbitVerification verify_path(const DiscretizedPath& path, const SymmetryProblem& problem, int seam_stride);
OrbitVerification verify_orbit(const PathCoefficients& coefficients, const SymmetryProblem& problem, int dense_samples);
OrbitVerification verify_orbit(const MinimizationResult& result, const SymmetryProblem& problem, int dense_samples);

}  // namespace eqorb
