#include "eqorb/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "eqorb/errors.hpp"

namespace eqorb {

PotentialModel PotentialModel::power_law(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("power-law exponent must be positive");
  return PotentialModel(PotentialShape::power_law, alpha);
}

double PotentialModel::f(double r) const {
  switch (shape_) {
    case PotentialShape::newtonian: return r;
    case PotentialShape::power_law: return std::pow(r, alpha_);
    case PotentialShape::none: break;
  }
  return std::numeric_limits<double>::infinity();
}

double PotentialModel::df(double r) const {
  switch (shape_) {
    case PotentialShape::newtonian: return 1.0;
    case PotentialShape::power_law: return alpha_ * std::pow(r, alpha_ - 1.0);
    case PotentialShape::none: break;
  }
  return 0.0;
}

double PotentialModel::d2f(double r) const {
  switch (shape_) {
    case PotentialShape::newtonian: return 0.0;
    case PotentialShape::power_law: return alpha_ * (alpha_ - 1.0) * std::pow(r, alpha_ - 2.0);
    case PotentialShape::none: break;
  }
  return 0.0;
}

std::string PotentialModel::describe() const {
  switch (shape_) {
    case PotentialShape::newtonian: return "newtonian";
    case PotentialShape::none: return "none";
    case PotentialShape::power_law: {
      std::ostringstream os;
      os << "power(" << alpha_ << ")";
      return os.str();
    }
  }
  return "unknown";
}

PotentialPoint potential_point(const Eigen::MatrixXd& y, const PotentialModel& model,
                               const std::vector<double>& masses, bool with_hessian) {
  const auto n = y.rows();
  const auto d = y.cols();
  PotentialPoint out;
  out.gradient = Eigen::MatrixXd::Zero(n, d);
  if (with_hessian) out.hessian = Eigen::MatrixXd::Zero(n * d, n * d);
  if (model.is_zero()) return out;

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::VectorXd yij = (y.row(i) - y.row(j)).transpose();
      const double r = yij.norm();
      if (!(r >= model.collision_tolerance)) {
        throw CollisionError(-1, 0.0, static_cast<int>(i), static_cast<int>(j), r);
      }
      const double mm = masses[static_cast<std::size_t>(i)] * masses[static_cast<std::size_t>(j)];
      const double f = model.f(r);
      const double fp = model.df(r);
      out.value += mm / f;

      const Eigen::VectorXd gi = (-mm * fp / (f * f * r)) * yij;
      out.gradient.row(i) += gi.transpose();
      out.gradient.row(j) -= gi.transpose();

      if (with_hessian) {
        const double fpp = model.d2f(r);
        // d^2 U_ij / dy_i dy_j; the diagonal blocks carry its negative.
        const double scale = mm / (f * f * r * r);
        Eigen::MatrixXd mixed = (scale * (fpp - fp / r - 2.0 * fp * fp / f)) * (yij * yij.transpose());
        mixed.diagonal().array() += scale * fp * r;
        out.hessian.block(i * d, j * d, d, d) += mixed;
        out.hessian.block(j * d, i * d, d, d) += mixed;
        out.hessian.block(i * d, i * d, d, d) -= mixed;
        out.hessian.block(j * d, j * d, d, d) -= mixed;
      }
    }
  }
  return out;
}

}  // namespace eqorb
