#include "eqorb/fourier_path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eqorb/errors.hpp"

namespace eqorb {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd apply_element(const GroupElement& g, const Eigen::MatrixXd& config) { return g.act(config); }

}  // namespace

BasisTables BasisTables::make(int fourier_length, int samples) {
  if (fourier_length < 0) throw std::invalid_argument("F must be non-negative");
  if (samples < std::max(2, 2 * fourier_length)) {
    throw AliasError("S = " + std::to_string(samples) + " is below max(2, 2F) = " +
                     std::to_string(std::max(2, 2 * fourier_length)));
  }
  BasisTables t;
  t.fourier_length = fourier_length;
  t.samples = samples;
  const int last = fourier_length + 1;
  t.values.resize(last + 1, samples + 1);
  t.derivatives.resize(last + 1, samples + 1);
  for (int h = 0; h <= samples; ++h) {
    const double s = static_cast<double>(h) / samples;
    const double th = kPi * s;
    t.values(0, h) = 1.0 - s;
    t.derivatives(0, h) = -1.0 / kPi;
    for (int k = 1; k <= fourier_length; ++k) {
      t.values(k, h) = std::sin(k * th);
      t.derivatives(k, h) = k * std::cos(k * th);
    }
    t.values(last, h) = s;
    t.derivatives(last, h) = 1.0 / kPi;
  }
  // Exact zeros at the endpoints.
  for (int k = 1; k <= fourier_length; ++k) {
    t.values(k, 0) = 0.0;
    t.values(k, samples) = 0.0;
  }
  return t;
}

double BasisTables::time(int h) const { return kPi * static_cast<double>(h) / samples; }

PathCoefficients::PathCoefficients(int fourier_length, int free_bodies, int d)
    : fourier_length_(fourier_length),
      free_bodies_(free_bodies),
      dim_(d),
      flat_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fourier_length + 2) * free_bodies * d)) {}

PathCoefficients::PathCoefficients(int fourier_length, int free_bodies, int d, Eigen::VectorXd flat)
    : fourier_length_(fourier_length), free_bodies_(free_bodies), dim_(d), flat_(std::move(flat)) {
  const Eigen::Index expected = static_cast<Eigen::Index>(fourier_length + 2) * free_bodies * d;
  if (flat_.size() != expected) {
    throw DimensionMismatch("coefficient vector has " + std::to_string(flat_.size()) + " entries, expected " +
                            std::to_string(expected));
  }
}

PathCoefficients PathCoefficients::zeros(const SymmetryProblem& problem) {
  return PathCoefficients(problem.fourier_length, problem.free_bodies(), problem.d);
}

Eigen::MatrixXd PathCoefficients::block(int k) const {
  Eigen::MatrixXd out(free_bodies_, dim_);
  for (int i = 0; i < free_bodies_; ++i)
    for (int p = 0; p < dim_; ++p) out(i, p) = flat_(index(k, i, p));
  return out;
}

void PathCoefficients::set_block(int k, const Eigen::MatrixXd& value) {
  if (value.rows() != free_bodies_ || value.cols() != dim_) throw DimensionMismatch("block has the wrong shape");
  for (int i = 0; i < free_bodies_; ++i)
    for (int p = 0; p < dim_; ++p) flat_(index(k, i, p)) = value(i, p);
}

bool PathCoefficients::matches(const SymmetryProblem& problem) const {
  return fourier_length_ == problem.fourier_length && free_bodies_ == problem.free_bodies() && dim_ == problem.d;
}

Eigen::MatrixXd reconstruct_nth(const Eigen::MatrixXd& free, const std::vector<double>& masses) {
  const auto n = static_cast<Eigen::Index>(masses.size());
  if (free.rows() != n - 1) throw DimensionMismatch("free configuration must have n - 1 rows");
  Eigen::MatrixXd full(n, free.cols());
  full.topRows(n - 1) = free;
  Eigen::RowVectorXd weighted = Eigen::RowVectorXd::Zero(free.cols());
  for (Eigen::Index i = 0; i < n - 1; ++i) weighted += masses[static_cast<std::size_t>(i)] * free.row(i);
  full.row(n - 1) = -weighted / masses.back();
  return full;
}

namespace {

Eigen::MatrixXd combine(const PathCoefficients& a, const Eigen::MatrixXd& table, int h) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.free_bodies(), a.dim());
  const int block = a.block_size();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(block);
  for (int k = 0; k < a.block_count(); ++k) {
    const double w = table(k, h);
    if (w != 0.0) acc.noalias() += w * a.flat().segment(static_cast<Eigen::Index>(k) * block, block);
  }
  for (int i = 0; i < a.free_bodies(); ++i)
    for (int p = 0; p < a.dim(); ++p) out(i, p) = acc(i * a.dim() + p);
  return out;
}

}  // namespace

Eigen::MatrixXd free_configuration(const PathCoefficients& a, const BasisTables& tables, int h) {
  return combine(a, tables.values, h);
}

Eigen::MatrixXd free_velocity(const PathCoefficients& a, const BasisTables& tables, int h) {
  return combine(a, tables.derivatives, h);
}

DiscretizedPath build_path(const PathCoefficients& a, int samples, const SymmetryProblem& problem) {
  if (!a.matches(problem)) throw DimensionMismatch("coefficients do not match the problem shape");
  const BasisTables tables = BasisTables::make(problem.fourier_length, samples);
  DiscretizedPath path;
  path.n = problem.n;
  path.d = problem.d;
  path.time_step = kPi / samples;
  path.periodic = false;
  path.positions.reserve(static_cast<std::size_t>(samples) + 1);
  path.velocities.reserve(static_cast<std::size_t>(samples) + 1);
  for (int h = 0; h <= samples; ++h) {
    path.positions.push_back(reconstruct_nth(free_configuration(a, tables, h), problem.masses));
    path.velocities.push_back(reconstruct_nth(free_velocity(a, tables, h), problem.masses));
  }
  // Endpoints are exactly A_0 and A_{F+1}.
  path.positions.front() = reconstruct_nth(a.block(0), problem.masses);
  path.positions.back() = reconstruct_nth(a.block(problem.fourier_length + 1), problem.masses);
  return path;
}

DiscretizedPath extend_to_period(const PathCoefficients& a, const SymmetryProblem& problem, int samples) {
  const DiscretizedPath base = build_path(a, samples, problem);
  DiscretizedPath out;
  out.n = base.n;
  out.d = base.d;
  out.time_step = base.time_step;
  out.periodic = true;

  // One orbit of the rotation generator covers `segment` samples.
  std::vector<Eigen::MatrixXd> pos;
  std::vector<Eigen::MatrixXd> vel;
  int segment = samples;
  if (problem.action_type == ActionType::cyclic) {
    pos.assign(base.positions.begin(), base.positions.end() - 1);
    vel.assign(base.velocities.begin(), base.velocities.end() - 1);
  } else {
    const GroupElement h1 = problem.pi_reflection();
    pos.assign(base.positions.begin(), base.positions.end());
    vel.assign(base.velocities.begin(), base.velocities.end());
    for (int k = 1; k < samples; ++k) {
      pos.push_back(apply_element(h1, base.positions[static_cast<std::size_t>(samples - k)]));
      vel.push_back(-apply_element(h1, base.velocities[static_cast<std::size_t>(samples - k)]));
    }
    segment = 2 * samples;
  }

  const int copies = problem.action_type == ActionType::dihedral ? problem.rotation_order
                     : problem.action_type == ActionType::cyclic ? problem.quotient_order
                                                                 : 1;
  out.positions.reserve(static_cast<std::size_t>(copies) * segment);
  out.velocities.reserve(static_cast<std::size_t>(copies) * segment);
  GroupElement g = GroupElement::identity(problem.n, problem.d);
  for (int j = 0; j < copies; ++j) {
    for (int k = 0; k < segment; ++k) {
      out.positions.push_back(j == 0 ? pos[static_cast<std::size_t>(k)] : apply_element(g, pos[static_cast<std::size_t>(k)]));
      out.velocities.push_back(j == 0 ? vel[static_cast<std::size_t>(k)] : apply_element(g, vel[static_cast<std::size_t>(k)]));
    }
    g = compose(problem.rot_gen, g);
  }
  return out;
}

PathCoefficients act_on_coefficients(const GroupElement& g, const PathCoefficients& a,
                                     const std::vector<double>& masses) {
  PathCoefficients out(a.fourier_length(), a.free_bodies(), a.dim());
  for (int k = 0; k < a.block_count(); ++k) {
    const Eigen::MatrixXd moved = g.act(reconstruct_nth(a.block(k), masses));
    out.set_block(k, moved.topRows(a.free_bodies()));
  }
  return out;
}

}  // namespace eqorb
