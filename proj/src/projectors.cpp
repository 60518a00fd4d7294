#include "eqorb/projectors.hpp"

#include "eqorb/errors.hpp"

namespace eqorb {

ConfigurationProjector fixed_space_projector(const FiniteGroup& h) {
  const int nd = h.bodies() * h.dim();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(nd, nd);
  for (const auto& g : h.elements()) sum += g.configuration_matrix();
  return ConfigurationProjector{sum / static_cast<double>(h.order())};
}

BoundaryProjector BoundaryProjector::split(ConfigurationProjector h0, ConfigurationProjector h1) {
  if (h0.matrix.rows() != h1.matrix.rows()) throw DimensionMismatch("boundary projectors differ in size");
  const auto nd = h0.matrix.rows();
  BoundaryProjector bc;
  bc.kind_ = Kind::split;
  bc.joint_ = Eigen::MatrixXd::Zero(2 * nd, 2 * nd);
  bc.joint_.topLeftCorner(nd, nd) = h0.matrix;
  bc.joint_.bottomRightCorner(nd, nd) = h1.matrix;
  return bc;
}

BoundaryProjector BoundaryProjector::cyclic(const GroupElement& g) {
  const Eigen::MatrixXd b = g.configuration_matrix();
  const auto nd = b.rows();
  BoundaryProjector bc;
  bc.kind_ = Kind::cyclic;
  // (v, w) -> (1/2 (v + g^-1 w), 1/2 (g v + w)); g^-1 = B^T since B is orthogonal.
  bc.joint_.resize(2 * nd, 2 * nd);
  bc.joint_ << 0.5 * Eigen::MatrixXd::Identity(nd, nd), 0.5 * b.transpose(), 0.5 * b,
      0.5 * Eigen::MatrixXd::Identity(nd, nd);
  return bc;
}

BoundaryProjector BoundaryProjector::for_problem(const SymmetryProblem& problem) {
  if (problem.action_type == ActionType::cyclic) return cyclic(problem.rot_gen);
  return split(fixed_space_projector(problem.h0), fixed_space_projector(problem.h1));
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> project_boundary(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                                                             const BoundaryProjector& bc) {
  const auto nd = bc.matrix().rows() / 2;
  if (v.size() != nd || w.size() != nd) throw DimensionMismatch("boundary configurations have the wrong size");
  Eigen::VectorXd stacked(2 * nd);
  stacked << v, w;
  const Eigen::VectorXd out = bc.matrix() * stacked;
  return {out.head(nd), out.tail(nd)};
}

Eigen::MatrixXd com_embedding(const std::vector<double>& masses, int d) {
  const int n = static_cast<int>(masses.size());
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n * d, (n - 1) * d);
  e.topRows((n - 1) * d).setIdentity();
  for (int i = 0; i < n - 1; ++i) {
    e.block((n - 1) * d, i * d, d, d) =
        -(masses[static_cast<std::size_t>(i)] / masses.back()) * Eigen::MatrixXd::Identity(d, d);
  }
  return e;
}

Eigen::MatrixXd com_restriction(int n, int d) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero((n - 1) * d, n * d);
  r.leftCols((n - 1) * d).setIdentity();
  return r;
}

RangeProjector orthogonal_range(const Eigen::MatrixXd& idempotent) {
  // Nonzero singular values of an idempotent matrix are >= 1.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(idempotent, Eigen::ComputeThinU);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > 0.5 ? 1 : 0;
  RangeProjector out;
  out.basis = svd.matrixU().leftCols(rank);
  out.matrix = out.basis * out.basis.transpose();
  return out;
}

CoefficientProjector::CoefficientProjector(const SymmetryProblem& problem)
    : fourier_length_(problem.fourier_length),
      block_(problem.block_size()),
      dimension_(problem.coefficient_count()) {
  const int n = problem.n;
  const int d = problem.d;
  const Eigen::MatrixXd kernel = fixed_space_projector(problem.kernel).matrix;
  const Eigen::MatrixXd embed = com_embedding(problem.masses, d);
  const Eigen::MatrixXd restrict = com_restriction(n, d);

  mode_ = orthogonal_range(restrict * kernel * embed);

  const auto nd = static_cast<Eigen::Index>(n) * d;
  Eigen::MatrixXd kernel_pair = Eigen::MatrixXd::Zero(2 * nd, 2 * nd);
  kernel_pair.topLeftCorner(nd, nd) = kernel;
  kernel_pair.bottomRightCorner(nd, nd) = kernel;
  Eigen::MatrixXd embed_pair = Eigen::MatrixXd::Zero(2 * nd, 2 * block_);
  embed_pair.topLeftCorner(nd, block_) = embed;
  embed_pair.bottomRightCorner(nd, block_) = embed;
  Eigen::MatrixXd restrict_pair = Eigen::MatrixXd::Zero(2 * block_, 2 * nd);
  restrict_pair.topLeftCorner(block_, nd) = restrict;
  restrict_pair.bottomRightCorner(block_, nd) = restrict;
  const BoundaryProjector bc = BoundaryProjector::for_problem(problem);
  endpoint_ = orthogonal_range(restrict_pair * kernel_pair * bc.matrix() * embed_pair);

  const Eigen::Index r_end = endpoint_.basis.cols();
  const Eigen::Index r_mode = mode_.basis.cols();
  basis_ = Eigen::MatrixXd::Zero(dimension_, r_end + fourier_length_ * r_mode);
  basis_.block(0, 0, block_, r_end) = endpoint_.basis.topRows(block_);
  basis_.block(static_cast<Eigen::Index>(fourier_length_ + 1) * block_, 0, block_, r_end) =
      endpoint_.basis.bottomRows(block_);
  for (int k = 1; k <= fourier_length_; ++k) {
    basis_.block(static_cast<Eigen::Index>(k) * block_, r_end + (k - 1) * r_mode, block_, r_mode) = mode_.basis;
  }
}

Eigen::VectorXd CoefficientProjector::apply(const Eigen::VectorXd& a) const {
  if (a.size() != dimension_) throw DimensionMismatch("coefficient vector has the wrong length");
  Eigen::VectorXd out(dimension_);
  const Eigen::Index last = static_cast<Eigen::Index>(fourier_length_ + 1) * block_;
  Eigen::VectorXd pair(2 * block_);
  pair << a.segment(0, block_), a.segment(last, block_);
  const Eigen::VectorXd projected = endpoint_.matrix * pair;
  out.segment(0, block_) = projected.head(block_);
  out.segment(last, block_) = projected.tail(block_);
  for (int k = 1; k <= fourier_length_; ++k) {
    out.segment(static_cast<Eigen::Index>(k) * block_, block_) =
        mode_.matrix * a.segment(static_cast<Eigen::Index>(k) * block_, block_);
  }
  return out;
}

Eigen::MatrixXd CoefficientProjector::apply_rows_and_columns(const Eigen::MatrixXd& hessian) const {
  if (hessian.rows() != dimension_ || hessian.cols() != dimension_) {
    throw DimensionMismatch("Hessian has the wrong shape");
  }
  const Eigen::MatrixXd p = dense();
  return p * hessian * p.transpose();
}

Eigen::VectorXd project_coefficients(const Eigen::VectorXd& coefficients, const CoefficientProjector& projector) {
  return projector.apply(coefficients);
}

Eigen::VectorXd project_tangent(const Eigen::VectorXd& gradient, const CoefficientProjector& projector) {
  return projector.apply(gradient);
}

Eigen::MatrixXd project_tangent(const Eigen::MatrixXd& hessian, const CoefficientProjector& projector) {
  return projector.apply_rows_and_columns(hessian);
}

}  // namespace eqorb
