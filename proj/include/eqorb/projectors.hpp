#pragma once

#include <Eigen/Dense>
#include <utility>

#include "eqorb/group.hpp"
#include "eqorb/problem.hpp"

namespace eqorb {

/// Averaging projector (1/|H|) sum_h B(h) on stacked (n d) configurations.
struct ConfigurationProjector {
  Eigen::MatrixXd matrix;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix * x; }
};

ConfigurationProjector fixed_space_projector(const FiniteGroup& h);

/// Projector of an endpoint pair (v, w) onto the boundary-condition space:
/// (pi_H0 v, pi_H1 w) for split boundaries, or pi_g for cyclic actions.
class BoundaryProjector {
 public:
  enum class Kind { split, cyclic };

  static BoundaryProjector split(ConfigurationProjector h0, ConfigurationProjector h1);
  static BoundaryProjector cyclic(const GroupElement& g);
  static BoundaryProjector for_problem(const SymmetryProblem& problem);

  Kind kind() const noexcept { return kind_; }

  /// Joint (2 n d) x (2 n d) matrix acting on the stacked pair (v, w).
  const Eigen::MatrixXd& matrix() const noexcept { return joint_; }

 private:
  Kind kind_ = Kind::split;
  Eigen::MatrixXd joint_;
};

std::pair<Eigen::VectorXd, Eigen::VectorXd> project_boundary(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                                                             const BoundaryProjector& bc);

/// Centre-of-mass reduction maps: `embed` ((n d) x ((n-1) d)) rebuilds body n
/// from the free bodies, `restrict` drops it.
Eigen::MatrixXd com_embedding(const std::vector<double>& masses, int d);
Eigen::MatrixXd com_restriction(int n, int d);

/// Euclidean-orthogonal projector onto the range of an idempotent matrix,
/// together with an orthonormal basis of that range.
struct RangeProjector {
  Eigen::MatrixXd basis;   // k x r, orthonormal columns
  Eigen::MatrixXd matrix;  // basis * basis^T
};
RangeProjector orthogonal_range(const Eigen::MatrixXd& idempotent);

/// Composite projector on the flattened (F+2)(n-1)d coefficient vector. The
/// endpoint pair (A_0, A_{F+1}) goes through pi_bc then pi_{ker tau}; Fourier
/// blocks through pi_{ker tau}. Both are reduced to the n-1 free bodies and
/// made Euclidean-orthogonal, so the same matrix projects points, gradients
/// (P g) and Hessians (P H P^T).
class CoefficientProjector {
 public:
  explicit CoefficientProjector(const SymmetryProblem& problem);

  Eigen::Index dimension() const noexcept { return dimension_; }
  /// Rank of the projector: number of free optimization variables.
  Eigen::Index rank() const noexcept { return basis_.cols(); }

  const Eigen::MatrixXd& endpoint_block() const noexcept { return endpoint_.matrix; }
  const Eigen::MatrixXd& mode_block() const noexcept { return mode_.matrix; }

  /// Orthonormal basis Q of the projected subspace; P = Q Q^T.
  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  Eigen::MatrixXd dense() const { return basis_ * basis_.transpose(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& coefficients) const;
  Eigen::MatrixXd apply_rows_and_columns(const Eigen::MatrixXd& hessian) const;

 private:
  int fourier_length_;
  int block_;
  Eigen::Index dimension_;
  RangeProjector endpoint_;
  RangeProjector mode_;
  Eigen::MatrixXd basis_;
};

/// Points and gradients share the composite projector.
Eigen::VectorXd project_coefficients(const Eigen::VectorXd& coefficients, const CoefficientProjector& projector);
Eigen::VectorXd project_tangent(const Eigen::VectorXd& gradient, const CoefficientProjector& projector);
Eigen::MatrixXd project_tangent(const Eigen::MatrixXd& hessian, const CoefficientProjector& projector);

}  // namespace eqorb
