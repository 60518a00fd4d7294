#pragma once

#include <Eigen/Dense>

#include "eqorb/fourier_path.hpp"
#include "eqorb/kinetic.hpp"
#include "eqorb/problem.hpp"
#include "eqorb/projectors.hpp"

namespace eqorb {

enum class ActionOrder { value = 0, gradient = 1, hessian = 2 };

/// Serial reference loop or the OpenMP kernel over the time grid.
enum class ExecutionPolicy { serial, parallel };

struct ActionValue {
  double value = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  Eigen::VectorXd gradient;  // empty below ActionOrder::gradient
  Eigen::MatrixXd hessian;   // empty below ActionOrder::hessian
};

/// Restricted action A_I = 1/2 A^T K A + int_0^pi U(y) dt with trapezoid
/// quadrature on t_h = h pi / S, and its derivatives in the flat coefficients.
/// Gradient and Hessian are unprojected.
class ActionEvaluator {
 public:
  explicit ActionEvaluator(const SymmetryProblem& problem, int samples = 0,
                           ExecutionPolicy policy = ExecutionPolicy::parallel);

  ActionValue evaluate(const Eigen::VectorXd& coefficients, ActionOrder order) const;
  ActionValue evaluate(const PathCoefficients& coefficients, ActionOrder order) const {
    return evaluate(coefficients.flat(), order);
  }

  const SymmetryProblem& problem() const noexcept { return *problem_; }
  const KineticForm& kinetic() const noexcept { return kinetic_; }
  const BasisTables& tables() const noexcept { return tables_; }
  int samples() const noexcept { return tables_.samples; }
  ExecutionPolicy policy() const noexcept { return policy_; }
  void set_policy(ExecutionPolicy policy) noexcept { policy_ = policy; }

 private:
  struct Accumulator;
  void accumulate(const Eigen::VectorXd& a, int first, int last, ActionOrder order, Accumulator& acc) const;

  const SymmetryProblem* problem_;
  KineticForm kinetic_;
  BasisTables tables_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd embedding_;  // (n d) x ((n-1) d)
  ExecutionPolicy policy_;
};

ActionValue action_eval(const Eigen::VectorXd& coefficients, const SymmetryProblem& problem, ActionOrder order);

/// Lagrangian 1/2 sum m_i |v_i - Omega y_i|^2 + U(y) at one sample.
double lagrangian(const Eigen::MatrixXd& y, const Eigen::MatrixXd& v, const SymmetryProblem& problem);

/// Periodic trapezoid quadrature of the Lagrangian over a full-period path.
double full_period_action(const DiscretizedPath& path, const SymmetryProblem& problem);
double full_period_action(const PathCoefficients& a, const SymmetryProblem& problem, int samples);

}  // namespace eqorb
