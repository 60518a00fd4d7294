#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace eqorb {

enum class PotentialShape { newtonian, power_law, none };

/// Pair potential m_i m_j / f(|y_i - y_j|). Newtonian is f(r) = r; the power
/// law f(r) = r^alpha covers the alpha-homogeneous problems; `none` drops the
/// potential entirely.
class PotentialModel {
 public:
  static PotentialModel newtonian() { return PotentialModel(PotentialShape::newtonian, 1.0); }
  static PotentialModel power_law(double alpha);
  static PotentialModel none() { return PotentialModel(PotentialShape::none, 1.0); }

  PotentialShape shape() const noexcept { return shape_; }
  double alpha() const noexcept { return alpha_; }
  bool is_zero() const noexcept { return shape_ == PotentialShape::none; }

  double f(double r) const;
  double df(double r) const;
  double d2f(double r) const;

  double collision_tolerance = 1e-9;

  std::string describe() const;

 private:
  PotentialModel(PotentialShape shape, double alpha) : shape_(shape), alpha_(alpha) {}
  PotentialShape shape_;
  double alpha_;
};

struct PotentialPoint {
  double value = 0.0;
  Eigen::MatrixXd gradient;  // n x d, row i = dU/dy_i
  Eigen::MatrixXd hessian;   // (n d) x (n d) body-major; empty unless requested
};

/// Value, per-body gradient and Hessian of U(y) = sum_{i<j} m_i m_j / f(|y_ij|).
/// Throws CollisionError (sample -1) when a pair is closer than the model's
/// collision tolerance.
PotentialPoint potential_point(const Eigen::MatrixXd& y, const PotentialModel& model,
                               const std::vector<double>& masses, bool with_hessian);

}  // namespace eqorb
