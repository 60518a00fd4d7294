#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eqorb/problem.hpp"

namespace eqorb {

/// Scalar (F+2) x (F+2) integrals of the basis on [0, pi]:
/// lin = int b_j' b_k', centr = -int b_j b_k, cor = int (b_j' b_k - b_j b_k').
struct KineticBlocks {
  Eigen::MatrixXd lin;
  Eigen::MatrixXd centr;
  Eigen::MatrixXd cor;
};

KineticBlocks kinetic_scalar_blocks(int fourier_length);

/// M~_ij = m_i delta_ij + m_i m_j / m_n over the free bodies.
Eigen::MatrixXd reduced_mass_matrix(const std::vector<double>& masses);

struct KineticForm {
  KineticBlocks blocks;
  Eigen::MatrixXd reduced_mass;
  /// K = lin (x) (M~ (x) I) + centr (x) (M~ (x) Omega^2) - cor (x) (M~ (x) Omega),
  /// so that 1/2 A^T K A = int_0^pi 1/2 sum_i m_i |y_i' - Omega y_i|^2 dt.
  Eigen::MatrixXd matrix;

  double value(const Eigen::VectorXd& a) const { return 0.5 * a.dot(matrix * a); }
};

KineticForm assemble_kinetic(const SymmetryProblem& problem);

}  // namespace eqorb
