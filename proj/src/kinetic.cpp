#include "eqorb/kinetic.hpp"

#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

namespace eqorb {

namespace {

constexpr double kPi = std::numbers::pi;

double odd_indicator(int k) { return (k % 2 != 0) ? 2.0 : 0.0; }  // 1 - (-1)^k

}  // namespace

KineticBlocks kinetic_scalar_blocks(int fourier_length) {
  const int f = fourier_length;
  const int last = f + 1;
  const int size = f + 2;
  KineticBlocks out;
  out.lin = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(size, size);  // c(j, k) = int b_j' b_k

  out.lin(0, 0) = out.lin(last, last) = 1.0 / kPi;
  out.lin(0, last) = out.lin(last, 0) = -1.0 / kPi;
  gram(0, 0) = gram(last, last) = kPi / 3.0;
  gram(0, last) = gram(last, 0) = kPi / 6.0;
  c(0, 0) = -0.5;
  c(0, last) = -0.5;
  c(last, 0) = 0.5;
  c(last, last) = 0.5;

  for (int k = 1; k <= f; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k
    out.lin(k, k) = k * k * kPi / 2.0;
    gram(k, k) = kPi / 2.0;
    gram(0, k) = gram(k, 0) = 1.0 / k;
    gram(last, k) = gram(k, last) = -sign / k;
    const double edge = odd_indicator(k) / (kPi * k);
    c(0, k) = -edge;
    c(last, k) = edge;
    c(k, 0) = edge;
    c(k, last) = -edge;
    for (int j = 1; j <= f; ++j) {
      if (j == k || (j + k) % 2 == 0) continue;
      c(j, k) = 2.0 * j * k / static_cast<double>(k * k - j * j);
    }
  }
  out.centr = -gram;
  out.cor = c - c.transpose();
  return out;
}

Eigen::MatrixXd reduced_mass_matrix(const std::vector<double>& masses) {
  const int free = static_cast<int>(masses.size()) - 1;
  Eigen::MatrixXd m(free, free);
  for (int i = 0; i < free; ++i)
    for (int j = 0; j < free; ++j)
      m(i, j) = (i == j ? masses[static_cast<std::size_t>(i)] : 0.0) +
                masses[static_cast<std::size_t>(i)] * masses[static_cast<std::size_t>(j)] / masses.back();
  return m;
}

KineticForm assemble_kinetic(const SymmetryProblem& problem) {
  KineticForm form;
  form.blocks = kinetic_scalar_blocks(problem.fourier_length);
  form.reduced_mass = reduced_mass_matrix(problem.masses);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(problem.d, problem.d);
  const Eigen::MatrixXd& omega = problem.omega;
  const Eigen::MatrixXd& mt = form.reduced_mass;
  form.matrix = Eigen::kroneckerProduct(form.blocks.lin, Eigen::kroneckerProduct(mt, id).eval()).eval();
  if (omega.cwiseAbs().maxCoeff() != 0.0) {
    const Eigen::MatrixXd omega2 = omega * omega;
    form.matrix += Eigen::kroneckerProduct(form.blocks.centr, Eigen::kroneckerProduct(mt, omega2).eval()).eval();
    form.matrix -= Eigen::kroneckerProduct(form.blocks.cor, Eigen::kroneckerProduct(mt, omega).eval()).eval();
  }
  form.matrix = 0.5 * (form.matrix + form.matrix.transpose()).eval();
  return form;
}

}  // namespace eqorb
