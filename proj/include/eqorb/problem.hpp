#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqorb/group.hpp"
#include "eqorb/potential.hpp"

namespace eqorb {

enum class ActionType { cyclic = 0, dihedral = 1, brake = 2 };

std::string to_string(ActionType type);

/// Affine time map t -> sign * t + shift * pi on the circle [0, m pi), with
/// m = |G / ker tau|. The fundamental domain is [0, pi].
struct TimeMap {
  int sign = 1;
  int shift = 0;

  bool is_identity() const noexcept { return sign == 1 && shift == 0; }
  bool is_reflection() const noexcept { return sign == -1; }
  friend bool operator==(const TimeMap&, const TimeMap&) = default;
};

/// Raw generator data for a problem, before closure and validation.
struct ProblemSpec {
  std::string symmetry_name = "unnamed";
  int n = 0;
  int d = 0;
  std::vector<double> masses;
  ActionType action_type = ActionType::cyclic;
  std::vector<GroupElement> kernel_generators;  // empty for a trivial kernel
  GroupElement rot_gen;
  std::optional<GroupElement> ref_gen;          // ignored for cyclic actions
  int fourier_length = 0;
  Eigen::MatrixXd omega;
  PotentialModel potential = PotentialModel::newtonian();
  int samples = 200;
};

/// Fully validated problem instance. Immutable after build_problem().
struct SymmetryProblem {
  std::string symmetry_name;
  int n = 0;
  int d = 0;
  std::vector<double> masses;
  ActionType action_type = ActionType::cyclic;

  FiniteGroup kernel;                  // ker tau
  GroupElement rot_gen;
  std::optional<GroupElement> ref_gen;
  int rotation_order = 1;              // smallest q with rot^q in ker tau
  int quotient_order = 1;              // |G / ker tau|

  FiniteGroup group;                   // whole G, BFS order
  std::vector<TimeMap> time_maps;      // tau of each element of `group`
  FiniteGroup h0;                      // isotropy of t = 0
  FiniteGroup h1;                      // isotropy of t = pi

  Eigen::MatrixXd omega;
  int fourier_length = 0;
  int samples = 200;
  PotentialModel potential = PotentialModel::newtonian();

  int free_bodies() const noexcept { return n - 1; }
  /// Entries of one coefficient block, (n - 1) d.
  int block_size() const noexcept { return (n - 1) * d; }
  Eigen::Index coefficient_count() const noexcept {
    return static_cast<Eigen::Index>(fourier_length + 2) * block_size();
  }
  double period() const noexcept { return quotient_order * std::numbers::pi; }

  /// Element whose action carries segment [0, pi] (cyclic) or [0, 2 pi]
  /// (dihedral) onto the next one.
  const GroupElement& rotation() const noexcept { return rot_gen; }
  /// Reflection about t = pi, used to unfold the fundamental domain.
  GroupElement pi_reflection() const;
};

/// H0, H1 for the given action type (cyclic: both ker tau; brake: both
/// <ker tau, ref>; dihedral: <ker tau, ref> and <ker tau, rot ref>).
std::pair<FiniteGroup, FiniteGroup> boundary_subgroups(ActionType type, const FiniteGroup& kernel,
                                                       const GroupElement& rot_gen,
                                                       const std::optional<GroupElement>& ref_gen);

/// Builds and validates a problem; throws ValidationError listing every
/// failed invariant.
SymmetryProblem build_problem(const ProblemSpec& spec);

}  // namespace eqorb
