#include "eqorb/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "eqorb/errors.hpp"

namespace eqorb {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;
constexpr int kMaxBacktracks = 40;
constexpr double kCurvatureSkip = 1e-10;

struct Trial {
  bool accepted = false;
  bool collided = false;
  Eigen::VectorXd z;
  Evaluation at;
  double step = 0.0;
};

std::optional<Evaluation> try_evaluate(const Objective& f, const Eigen::VectorXd& z, ActionOrder order) {
  try {
    return f.evaluate(z, order);
  } catch (const CollisionError&) {
    return std::nullopt;
  }
}

// Backtracking Armijo search along a descent direction.
Trial armijo(const Objective& f, const Eigen::VectorXd& z, const Evaluation& cur, const Eigen::VectorXd& dir,
             double t0) {
  Trial out;
  const double slope = cur.gradient.dot(dir);
  if (!(slope < 0.0)) return out;
  double t = t0;
  for (int b = 0; b <= kMaxBacktracks; ++b, t *= kShrink) {
    Eigen::VectorXd trial = z + t * dir;
    auto e = try_evaluate(f, trial, ActionOrder::gradient);
    if (!e) {
      out.collided = true;
      continue;
    }
    if (std::isfinite(e->value) && e->value <= cur.value + kArmijo * t * slope) {
      out.accepted = true;
      out.z = std::move(trial);
      out.at = std::move(*e);
      out.step = t;
      return out;
    }
  }
  return out;
}

Termination failure_reason(const Trial& t) { return t.collided ? Termination::collision_abort : Termination::stagnation; }

// Pseudo-inverse Newton step -H^+ g restricted to the well-conditioned
// eigenspaces of the symmetric Hessian.
std::optional<Eigen::VectorXd> newton_step(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& gradient) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return std::nullopt;
  const Eigen::VectorXd proj = eig.eigenvectors().transpose() * gradient;
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(lambda.size());
  bool any = false;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda(i)) > 1e-10 * scale) {
      coeff(i) = -proj(i) / lambda(i);
      any = true;
    }
  }
  if (!any) return std::nullopt;
  return Eigen::VectorXd(eig.eigenvectors() * coeff);
}

StageOutcome start_outcome(const Eigen::VectorXd& z0, Evaluation at) {
  StageOutcome out;
  out.z = z0;
  out.at = std::move(at);
  out.gradient_history.push_back(out.at.gradient.norm());
  return out;
}

void accept(StageOutcome& out, Eigen::VectorXd z, Evaluation at) {
  out.z = std::move(z);
  out.at = std::move(at);
  ++out.iterations;
  out.gradient_history.push_back(out.at.gradient.norm());
}

StageOutcome run_gradient_descent(const Objective& f, StageOutcome out, int max_iterations, double tol,
                                  const OptimizerOptions& options) {
  double t0 = options.initial_step;
  while (out.iterations < max_iterations) {
    if (out.at.gradient.norm() < tol) {
      out.termination = Termination::converged;
      return out;
    }
    Trial trial = armijo(f, out.z, out.at, -out.at.gradient, t0);
    if (!trial.accepted) {
      out.termination = failure_reason(trial);
      return out;
    }
    t0 = 2.0 * trial.step;
    accept(out, std::move(trial.z), std::move(trial.at));
  }
  out.termination = out.at.gradient.norm() < tol ? Termination::converged : Termination::max_iters;
  return out;
}

StageOutcome run_conjugate_gradient(const Objective& f, StageOutcome out, int max_iterations, double tol,
                                    const OptimizerOptions& options) {
  Eigen::VectorXd dir = -out.at.gradient;
  double t0 = options.initial_step;
  int since_restart = 0;
  while (out.iterations < max_iterations) {
    if (out.at.gradient.norm() < tol) {
      out.termination = Termination::converged;
      return out;
    }
    if (out.at.gradient.dot(dir) >= 0.0) dir = -out.at.gradient;
    Trial trial = armijo(f, out.z, out.at, dir, t0);
    if (!trial.accepted && dir != -out.at.gradient) {
      dir = -out.at.gradient;
      trial = armijo(f, out.z, out.at, dir, options.initial_step);
    }
    if (!trial.accepted) {
      out.termination = failure_reason(trial);
      return out;
    }
    const Eigen::VectorXd g_old = out.at.gradient;
    const double old_slope = g_old.dot(dir);
    accept(out, std::move(trial.z), std::move(trial.at));
    const Eigen::VectorXd& g = out.at.gradient;
    double beta = g.dot(g - g_old) / g_old.squaredNorm();
    beta = std::max(0.0, beta);
    if (++since_restart >= f.dimension()) {
      beta = 0.0;
      since_restart = 0;
    }
    dir = -g + beta * dir;
    const double new_slope = g.dot(dir);
    t0 = new_slope < 0.0 ? std::min(1e6, trial.step * old_slope / new_slope * 2.0) : options.initial_step;
  }
  out.termination = out.at.gradient.norm() < tol ? Termination::converged : Termination::max_iters;
  return out;
}

StageOutcome run_bfgs(const Objective& f, StageOutcome out, int max_iterations, double tol,
                      const Eigen::MatrixXd* initial) {
  const Eigen::Index r = f.dimension();
  const bool fixed_start = initial != nullptr;
  Eigen::MatrixXd h = fixed_start ? *initial : Eigen::MatrixXd::Identity(r, r);
  bool scaled = fixed_start;
  while (out.iterations < max_iterations) {
    if (out.at.gradient.norm() < tol) {
      out.termination = Termination::converged;
      return out;
    }
    Eigen::VectorXd dir = -(h * out.at.gradient);
    Trial trial = armijo(f, out.z, out.at, dir, 1.0);
    if (!trial.accepted) {
      // Reset the curvature model once before giving up.
      h = fixed_start ? *initial : Eigen::MatrixXd::Identity(r, r);
      scaled = fixed_start;
      dir = -(h * out.at.gradient);
      trial = armijo(f, out.z, out.at, dir, 1.0);
      if (!trial.accepted) {
        out.termination = failure_reason(trial);
        return out;
      }
    }
    const Eigen::VectorXd s = trial.z - out.z;
    const Eigen::VectorXd y = trial.at.gradient - out.at.gradient;
    accept(out, std::move(trial.z), std::move(trial.at));
    const double sy = s.dot(y);
    if (sy <= kCurvatureSkip * s.norm() * y.norm()) continue;
    if (!scaled) {
      h *= sy / y.squaredNorm();
      scaled = true;
    }
    const double rho = 1.0 / sy;
    const Eigen::VectorXd hy = h * y;
    // (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
    h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
  }
  out.termination = out.at.gradient.norm() < tol ? Termination::converged : Termination::max_iters;
  return out;
}

StageOutcome run_newton_linesearch(const Objective& f, StageOutcome out, int max_iterations, double tol) {
  while (out.iterations < max_iterations) {
    const double gnorm = out.at.gradient.norm();
    if (gnorm < tol) {
      out.termination = Termination::converged;
      return out;
    }
    if (out.at.hessian.size() == 0) {
      auto e = try_evaluate(f, out.z, ActionOrder::hessian);
      if (!e) {
        out.termination = Termination::collision_abort;
        return out;
      }
      out.at.hessian = std::move(e->hessian);
    }
    auto step = newton_step(out.at.hessian, out.at.gradient);
    if (!step) {
      out.termination = Termination::stagnation;
      return out;
    }
    const double merit = 0.5 * gnorm * gnorm;
    bool accepted = false;
    bool collided = false;
    double t = 1.0;
    for (int b = 0; b <= kMaxBacktracks; ++b, t *= kShrink) {
      Eigen::VectorXd trial = out.z + t * *step;
      auto e = try_evaluate(f, trial, ActionOrder::hessian);
      if (!e) {
        collided = true;
        continue;
      }
      if (0.5 * e->gradient.squaredNorm() <= (1.0 - 2.0 * kArmijo * t) * merit) {
        accept(out, std::move(trial), std::move(*e));
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.termination = collided ? Termination::collision_abort : Termination::stagnation;
      return out;
    }
  }
  out.termination = out.at.gradient.norm() < tol ? Termination::converged : Termination::max_iters;
  return out;
}

// Dogleg on the Gauss-Newton model 1/2 |g + H p|^2 of the merit 1/2 |g|^2.
Eigen::VectorXd dogleg(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& g, const Eigen::VectorXd& newton,
                       double radius) {
  if (newton.norm() <= radius) return newton;
  const Eigen::VectorXd grad_merit = hessian * g;
  const Eigen::VectorXd hgm = hessian * grad_merit;
  const double denom = hgm.squaredNorm();
  if (!(denom > 0.0)) return newton * (radius / newton.norm());
  const Eigen::VectorXd cauchy = -(grad_merit.squaredNorm() / denom) * grad_merit;
  if (cauchy.norm() >= radius) return cauchy * (radius / cauchy.norm());
  const Eigen::VectorXd diff = newton - cauchy;
  const double a = diff.squaredNorm();
  const double b = 2.0 * cauchy.dot(diff);
  const double c = cauchy.squaredNorm() - radius * radius;
  const double tau = (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a);
  return cauchy + tau * diff;
}

StageOutcome run_newton_trustregion(const Objective& f, StageOutcome out, int max_iterations, double tol,
                                    const OptimizerOptions& options) {
  double radius = options.trust_radius;
  int rejections = 0;
  while (out.iterations < max_iterations) {
    const double gnorm = out.at.gradient.norm();
    if (gnorm < tol) {
      out.termination = Termination::converged;
      return out;
    }
    if (out.at.hessian.size() == 0) {
      auto e = try_evaluate(f, out.z, ActionOrder::hessian);
      if (!e) {
        out.termination = Termination::collision_abort;
        return out;
      }
      out.at.hessian = std::move(e->hessian);
    }
    auto newton = newton_step(out.at.hessian, out.at.gradient);
    if (!newton) {
      out.termination = Termination::stagnation;
      return out;
    }
    const Eigen::VectorXd p = dogleg(out.at.hessian, out.at.gradient, *newton, radius);
    const double merit = 0.5 * gnorm * gnorm;
    const double model = 0.5 * (out.at.gradient + out.at.hessian * p).squaredNorm();
    Eigen::VectorXd trial = out.z + p;
    auto e = try_evaluate(f, trial, ActionOrder::hessian);
    const double new_merit = e ? 0.5 * e->gradient.squaredNorm() : std::numeric_limits<double>::infinity();
    const double predicted = merit - model;
    const double ratio = predicted > 0.0 ? (merit - new_merit) / predicted : -1.0;
    if (ratio < 0.25) {
      radius *= 0.25;
    } else if (ratio > 0.75 && std::abs(p.norm() - radius) < 1e-12 * (1.0 + radius)) {
      radius = std::min(2.0 * radius, options.max_trust_radius);
    }
    if (e && new_merit < merit) {
      accept(out, std::move(trial), std::move(*e));
      rejections = 0;
    } else if (++rejections > kMaxBacktracks || radius < 1e-14 * (1.0 + out.z.norm())) {
      out.termination = e ? Termination::stagnation : Termination::collision_abort;
      return out;
    }
  }
  out.termination = out.at.gradient.norm() < tol ? Termination::converged : Termination::max_iters;
  return out;
}

// Portable uniform draw in [-1, 1) from the 53 high bits.
double uniform_pm1(std::mt19937_64& gen) { return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0; }

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::gradient_descent: return "gradient_descent";
    case Method::conjugate_gradient: return "conjugate_gradient";
    case Method::bfgs: return "bfgs";
    case Method::newton_linesearch: return "newton_linesearch";
    case Method::newton_trustregion: return "newton_trustregion";
  }
  return "unknown";
}

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::collision_abort: return "collision_abort";
    case Termination::stagnation: return "stagnation";
  }
  return "unknown";
}

std::string to_string(GuessKind kind) {
  switch (kind) {
    case GuessKind::random: return "random";
    case GuessKind::circular: return "circular";
    case GuessKind::user: return "user";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "gradient_descent" || name == "gd") return Method::gradient_descent;
  if (name == "conjugate_gradient" || name == "cg") return Method::conjugate_gradient;
  if (name == "bfgs") return Method::bfgs;
  if (name == "newton_linesearch" || name == "newton") return Method::newton_linesearch;
  if (name == "newton_trustregion" || name == "trust") return Method::newton_trustregion;
  throw std::invalid_argument("unknown optimization method '" + name + "'");
}

std::vector<Method> parse_method_chain(const std::string& text) {
  std::vector<Method> out;
  std::string token;
  auto flush = [&] {
    const auto b = token.find_first_not_of(" \t");
    const auto e = token.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(parse_method(token.substr(b, e - b + 1)));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == '+') flush();
    else token += c;
  }
  flush();
  if (out.empty()) throw std::invalid_argument("empty method chain");
  return out;
}

GuessKind parse_guess_kind(const std::string& name) {
  if (name == "random") return GuessKind::random;
  if (name == "circular") return GuessKind::circular;
  if (name == "user") return GuessKind::user;
  throw std::invalid_argument("unknown initial guess '" + name + "'");
}

void OptimizerOptions::validate() const {
  if (methods.empty()) throw std::invalid_argument("at least one optimization method is required");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (!(gradient_tolerance > 0.0)) throw std::invalid_argument("gradient tolerance must be positive");
  for (double t : stage_tolerances)
    if (!(t > 0.0)) throw std::invalid_argument("stage tolerances must be positive");
  if (!(initial_step > 0.0) || !(trust_radius > 0.0) || !(max_trust_radius >= trust_radius)) {
    throw std::invalid_argument("step and trust-region parameters must be positive");
  }
  if (restarts < 1) throw std::invalid_argument("restart count must be at least 1");
  if (guess == GuessKind::user && !user_guess) throw std::invalid_argument("user guess selected but not supplied");
}

double OptimizerOptions::tolerance_for_stage(std::size_t stage) const {
  if (stage + 1 >= methods.size()) return gradient_tolerance;
  return stage < stage_tolerances.size() ? stage_tolerances[stage] : gradient_tolerance;
}

std::string MinimizationResult::method_trace() const {
  std::string out;
  for (const auto& s : stages) {
    if (!out.empty()) out += "+";
    out += to_string(s.method);
  }
  return out;
}

ProjectedAction::ProjectedAction(const SymmetryProblem& problem, int samples, ExecutionPolicy policy)
    : evaluator_(problem, samples, policy), projector_(problem) {
  const Eigen::MatrixXd& q = projector_.basis();
  reduced_kinetic_ = q.transpose() * evaluator_.kinetic().matrix * q;
}

Evaluation ProjectedAction::evaluate(const Eigen::VectorXd& z, ActionOrder order) const {
  const Eigen::MatrixXd& q = projector_.basis();
  const ActionValue v = evaluator_.evaluate(Eigen::VectorXd(q * z), order);
  Evaluation out;
  out.value = v.value;
  if (order != ActionOrder::value) out.gradient = q.transpose() * v.gradient;
  if (order == ActionOrder::hessian) {
    out.hessian = q.transpose() * v.hessian * q;
    out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  }
  return out;
}

Eigen::VectorXd ProjectedAction::to_reduced(const PathCoefficients& a) const {
  if (!a.matches(problem())) throw DimensionMismatch("coefficients do not match the problem shape");
  return projector_.basis().transpose() * a.flat();
}

PathCoefficients ProjectedAction::to_coefficients(const Eigen::VectorXd& z) const {
  const SymmetryProblem& p = problem();
  return PathCoefficients(p.fourier_length, p.free_bodies(), p.d, projector_.basis() * z);
}

StageOutcome run_method(const Objective& objective, Method method, const Eigen::VectorXd& z0, int max_iterations,
                        double tolerance, const OptimizerOptions& options,
                        const Eigen::MatrixXd* initial_inverse_hessian) {
  const bool second_order = method == Method::newton_linesearch || method == Method::newton_trustregion;
  auto first = try_evaluate(objective, z0, second_order ? ActionOrder::hessian : ActionOrder::gradient);
  if (!first) {
    StageOutcome out;
    out.z = z0;
    out.at.value = std::numeric_limits<double>::quiet_NaN();
    out.at.gradient = Eigen::VectorXd::Constant(z0.size(), std::numeric_limits<double>::quiet_NaN());
    out.termination = Termination::collision_abort;
    return out;
  }
  StageOutcome out = start_outcome(z0, std::move(*first));
  switch (method) {
    case Method::gradient_descent: return run_gradient_descent(objective, std::move(out), max_iterations, tolerance, options);
    case Method::conjugate_gradient:
      return run_conjugate_gradient(objective, std::move(out), max_iterations, tolerance, options);
    case Method::bfgs: return run_bfgs(objective, std::move(out), max_iterations, tolerance, initial_inverse_hessian);
    case Method::newton_linesearch: return run_newton_linesearch(objective, std::move(out), max_iterations, tolerance);
    case Method::newton_trustregion:
      return run_newton_trustregion(objective, std::move(out), max_iterations, tolerance, options);
  }
  return out;
}

PathCoefficients initial_guess(const SymmetryProblem& problem, GuessKind kind, std::uint64_t seed,
                               const std::optional<PathCoefficients>& user) {
  const CoefficientProjector projector(problem);
  PathCoefficients a = PathCoefficients::zeros(problem);
  switch (kind) {
    case GuessKind::random: {
      std::mt19937_64 gen(seed);
      const int bs = a.block_size();
      for (int k = 0; k < a.block_count(); ++k) {
        const double scale = (k == 0 || k == problem.fourier_length + 1) ? 1.0 : 1.0 / (static_cast<double>(k) * k);
        for (int e = 0; e < bs; ++e) a.flat()(static_cast<Eigen::Index>(k) * bs + e) = scale * uniform_pm1(gen);
      }
      break;
    }
    case GuessKind::circular: {
      // Bodies equally spaced on the unit circle, turning once per period.
      const double omega = 2.0 * std::numbers::pi / problem.period();
      auto config = [&](double t) {
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(problem.n - 1, problem.d);
        for (int i = 0; i < problem.n - 1; ++i) {
          const double angle = 2.0 * std::numbers::pi * i / problem.n + omega * t;
          x(i, 0) = std::cos(angle);
          if (problem.d > 1) x(i, 1) = std::sin(angle);
        }
        return x;
      };
      const Eigen::MatrixXd x0 = config(0.0);
      const Eigen::MatrixXd x1 = config(std::numbers::pi);
      a.set_block(0, x0);
      a.set_block(problem.fourier_length + 1, x1);
      const int grid = 4096;
      const double dt = std::numbers::pi / grid;
      for (int k = 1; k <= problem.fourier_length; ++k) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(problem.n - 1, problem.d);
        for (int h = 1; h < grid; ++h) {
          const double t = h * dt;
          const double s = t / std::numbers::pi;
          acc += (config(t) - (1.0 - s) * x0 - s * x1) * std::sin(k * t);
        }
        a.set_block(k, acc * (2.0 / std::numbers::pi) * dt);
      }
      break;
    }
    case GuessKind::user: {
      if (!user) throw std::invalid_argument("user guess requested without coefficients");
      if (!user->matches(problem)) {
        throw DimensionMismatch("user guess has shape " + std::to_string(user->block_count()) + "x" +
                                std::to_string(user->free_bodies()) + "x" + std::to_string(user->dim()) +
                                ", expected " + std::to_string(problem.fourier_length + 2) + "x" +
                                std::to_string(problem.free_bodies()) + "x" + std::to_string(problem.d));
      }
      a = *user;
      break;
    }
  }
  a.flat() = projector.apply(a.flat());
  return a;
}

MinimizationResult minimize(const ProjectedAction& objective, const PathCoefficients& start,
                            const OptimizerOptions& options) {
  options.validate();
  Eigen::MatrixXd kinetic_inverse;
  const Eigen::MatrixXd* bfgs_start = nullptr;
  if (options.bfgs_start == BfgsStart::kinetic) {
    Eigen::LLT<Eigen::MatrixXd> llt(objective.reduced_kinetic());
    if (llt.info() == Eigen::Success) {
      kinetic_inverse = llt.solve(Eigen::MatrixXd::Identity(objective.dimension(), objective.dimension()));
      bfgs_start = &kinetic_inverse;
    }
  }

  MinimizationResult result;
  Eigen::VectorXd z = objective.to_reduced(start);
  StageOutcome last;
  for (std::size_t s = 0; s < options.methods.size(); ++s) {
    const Method m = options.methods[s];
    last = run_method(objective, m, z, options.max_iterations, options.tolerance_for_stage(s), options, bfgs_start);
    z = last.z;
    result.iterations += last.iterations;
    result.gradient_history.insert(result.gradient_history.end(), last.gradient_history.begin(),
                                   last.gradient_history.end());
    result.stages.push_back(StageRecord{m, last.iterations, last.termination, last.at.value, last.at.gradient.norm()});
    if (last.termination == Termination::collision_abort) break;
  }
  result.fourier_coeff = objective.to_coefficients(z);
  result.action_value = last.at.value;
  result.gradient_norm = last.at.gradient.norm();
  result.termination = last.termination;
  if (result.termination != Termination::collision_abort) {
    result.termination =
        result.gradient_norm < options.gradient_tolerance ? Termination::converged
        : last.termination == Termination::converged ? Termination::stagnation
                                                     : last.termination;
  }
  return result;
}

MinimizationResult minimize(const SymmetryProblem& problem, const PathCoefficients& start,
                            const OptimizerOptions& options) {
  const ProjectedAction objective(problem, options.samples, options.policy);
  return minimize(objective, start, options);
}

MinimizationResult newton_refine(const SymmetryProblem& problem, const PathCoefficients& start,
                                 const OptimizerOptions& options) {
  OptimizerOptions newton = options;
  const bool trust = !options.methods.empty() && options.methods.front() == Method::newton_trustregion;
  newton.methods = {trust ? Method::newton_trustregion : Method::newton_linesearch};
  newton.stage_tolerances.clear();
  return minimize(problem, start, newton);
}

std::vector<MinimizationResult> find_orbits(const SymmetryProblem& problem, const OptimizerOptions& options) {
  options.validate();
  const ProjectedAction objective(problem, options.samples, options.policy);
  std::vector<MinimizationResult> results(static_cast<std::size_t>(options.restarts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < options.restarts; ++i) {
    const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(i);
    const PathCoefficients guess = initial_guess(problem, options.guess, seed, options.user_guess);
    MinimizationResult r = minimize(objective, guess, options);
    r.seed = seed;
    results[static_cast<std::size_t>(i)] = std::move(r);
  }
  return results;
}

}  // namespace eqorb
