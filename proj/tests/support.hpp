#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>

#include "eqorb/problem.hpp"

namespace eqorb::testing {

inline Eigen::MatrixXd rotation2(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

inline Eigen::MatrixXd omega2(double w) {
  Eigen::MatrixXd o(2, 2);
  o << 0.0, -w, w, 0.0;
  return o;
}

/// The d6_plane problem of tests/data/d6_plane.toml, built in code.
inline ProblemSpec d6_spec(int samples = 200, int fourier = 24) {
  ProblemSpec s;
  s.symmetry_name = "d6_plane";
  s.n = 3;
  s.d = 2;
  s.masses = {1, 1, 1};
  s.action_type = ActionType::dihedral;
  s.rot_gen = GroupElement::make(Eigen::MatrixXd::Identity(2, 2), Permutation::from_cycles("(1,2,3)", 3));
  s.ref_gen = GroupElement::make(-Eigen::MatrixXd::Identity(2, 2), Permutation::from_cycles("(1,2)", 3));
  s.fourier_length = fourier;
  s.omega = Eigen::MatrixXd::Zero(2, 2);
  s.samples = samples;
  return s;
}

inline SymmetryProblem d6_problem(int samples = 200, int fourier = 24) { return build_problem(d6_spec(samples, fourier)); }

/// Three bodies in the plane, trivial group acting through rot = identity.
inline ProblemSpec free_three_body_spec(int fourier, int samples, const Eigen::MatrixXd& omega,
                                        std::vector<double> masses = {1.0, 1.0, 1.0}) {
  ProblemSpec s;
  s.symmetry_name = "free3";
  s.n = 3;
  s.d = 2;
  s.masses = std::move(masses);
  s.action_type = ActionType::cyclic;
  s.rot_gen = GroupElement::identity(3, 2);
  s.fourier_length = fourier;
  s.omega = omega;
  s.samples = samples;
  return s;
}

inline Eigen::VectorXd random_vector(Eigen::Index size, std::mt19937_64& gen, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = u(gen);
  return v;
}

}  // namespace eqorb::testing
