#include "eqorb/action.hpp"

#include <algorithm>
#include <numbers>
#include <optional>

#include "eqorb/errors.hpp"

namespace eqorb {

namespace {

constexpr int kChunks = 16;

}  // namespace

struct ActionEvaluator::Accumulator {
  double potential = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

ActionEvaluator::ActionEvaluator(const SymmetryProblem& problem, int samples, ExecutionPolicy policy)
    : problem_(&problem),
      kinetic_(assemble_kinetic(problem)),
      tables_(BasisTables::make(problem.fourier_length, samples > 0 ? samples : problem.samples)),
      embedding_(com_embedding(problem.masses, problem.d)),
      policy_(policy) {
  const int s = tables_.samples;
  weights_ = Eigen::VectorXd::Constant(s + 1, std::numbers::pi / s);
  weights_(0) *= 0.5;
  weights_(s) *= 0.5;
}

void ActionEvaluator::accumulate(const Eigen::VectorXd& a, int first, int last, ActionOrder order,
                                 Accumulator& acc) const {
  const SymmetryProblem& p = *problem_;
  const int blocks = p.fourier_length + 2;
  const int bs = p.block_size();
  const bool want_grad = order != ActionOrder::value;
  const bool want_hess = order == ActionOrder::hessian;
  Eigen::VectorXd stacked(bs);
  Eigen::MatrixXd free(p.n - 1, p.d);
  for (int h = first; h < last; ++h) {
    stacked.setZero();
    for (int k = 0; k < blocks; ++k) {
      const double b = tables_.values(k, h);
      if (b != 0.0) stacked.noalias() += b * a.segment(static_cast<Eigen::Index>(k) * bs, bs);
    }
    for (int i = 0; i < p.n - 1; ++i)
      for (int q = 0; q < p.d; ++q) free(i, q) = stacked(i * p.d + q);
    const Eigen::MatrixXd y = reconstruct_nth(free, p.masses);
    PotentialPoint u;
    try {
      u = potential_point(y, p.potential, p.masses, want_hess);
    } catch (const CollisionError& e) {
      throw CollisionError(h, tables_.time(h), e.body_i(), e.body_j(), e.distance());
    }
    const double w = weights_(h);
    acc.potential += w * u.value;
    if (!want_grad) continue;

    Eigen::VectorXd g_full(p.n * p.d);
    for (int i = 0; i < p.n; ++i)
      for (int q = 0; q < p.d; ++q) g_full(i * p.d + q) = u.gradient(i, q);
    const Eigen::VectorXd g = embedding_.transpose() * g_full;
    for (int k = 0; k < blocks; ++k) {
      const double b = tables_.values(k, h);
      if (b != 0.0) acc.gradient.segment(static_cast<Eigen::Index>(k) * bs, bs).noalias() += (w * b) * g;
    }
    if (!want_hess) continue;

    const Eigen::MatrixXd hr = embedding_.transpose() * u.hessian * embedding_;
    for (int j = 0; j < blocks; ++j) {
      const double bj = tables_.values(j, h);
      if (bj == 0.0) continue;
      for (int k = 0; k < blocks; ++k) {
        const double bk = tables_.values(k, h);
        if (bk == 0.0) continue;
        acc.hessian.block(static_cast<Eigen::Index>(j) * bs, static_cast<Eigen::Index>(k) * bs, bs, bs).noalias() +=
            (w * bj * bk) * hr;
      }
    }
  }
}

ActionValue ActionEvaluator::evaluate(const Eigen::VectorXd& a, ActionOrder order) const {
  const Eigen::Index dim = problem_->coefficient_count();
  if (a.size() != dim) throw DimensionMismatch("coefficient vector has the wrong length");

  auto fresh = [&] {
    Accumulator acc;
    if (order != ActionOrder::value) acc.gradient = Eigen::VectorXd::Zero(dim);
    if (order == ActionOrder::hessian) acc.hessian = Eigen::MatrixXd::Zero(dim, dim);
    return acc;
  };

  Accumulator total = fresh();
  const int points = tables_.samples + 1;
  if (!problem_->potential.is_zero()) {
    if (policy_ == ExecutionPolicy::serial) {
      accumulate(a, 0, points, order, total);
    } else {
      const int chunks = std::min(kChunks, points);
      std::vector<Accumulator> parts(static_cast<std::size_t>(chunks));
      std::vector<std::optional<CollisionError>> errors(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
      for (int c = 0; c < chunks; ++c) {
        const int first = static_cast<int>(static_cast<long>(points) * c / chunks);
        const int last = static_cast<int>(static_cast<long>(points) * (c + 1) / chunks);
        auto& part = parts[static_cast<std::size_t>(c)];
        part = fresh();
        try {
          accumulate(a, first, last, order, part);
        } catch (const CollisionError& e) {
          errors[static_cast<std::size_t>(c)] = e;
        }
      }
      for (const auto& e : errors)
        if (e) throw *e;
      for (const auto& part : parts) {
        total.potential += part.potential;
        if (order != ActionOrder::value) total.gradient += part.gradient;
        if (order == ActionOrder::hessian) total.hessian += part.hessian;
      }
    }
  }

  ActionValue out;
  const Eigen::VectorXd ka = kinetic_.matrix * a;
  out.kinetic = 0.5 * a.dot(ka);
  out.potential = total.potential;
  out.value = out.kinetic + out.potential;
  if (order != ActionOrder::value) out.gradient = ka + total.gradient;
  if (order == ActionOrder::hessian) {
    out.hessian = kinetic_.matrix + total.hessian;
    out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  }
  return out;
}

ActionValue action_eval(const Eigen::VectorXd& coefficients, const SymmetryProblem& problem, ActionOrder order) {
  return ActionEvaluator(problem).evaluate(coefficients, order);
}

double lagrangian(const Eigen::MatrixXd& y, const Eigen::MatrixXd& v, const SymmetryProblem& problem) {
  double kinetic = 0.0;
  for (int i = 0; i < problem.n; ++i) {
    const Eigen::VectorXd rel = v.row(i).transpose() - problem.omega * y.row(i).transpose();
    kinetic += 0.5 * problem.masses[static_cast<std::size_t>(i)] * rel.squaredNorm();
  }
  if (problem.potential.is_zero()) return kinetic;
  return kinetic + potential_point(y, problem.potential, problem.masses, false).value;
}

double full_period_action(const DiscretizedPath& path, const SymmetryProblem& problem) {
  if (!path.periodic || path.velocities.size() != path.positions.size()) {
    throw std::invalid_argument("full-period action needs a periodic path with velocities");
  }
  double sum = 0.0;
  for (std::size_t h = 0; h < path.size(); ++h) sum += lagrangian(path.positions[h], path.velocities[h], problem);
  return sum * path.time_step;
}

double full_period_action(const PathCoefficients& a, const SymmetryProblem& problem, int samples) {
  return full_period_action(extend_to_period(a, problem, samples), problem);
}

}  // namespace eqorb
