#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqorb/action.hpp"
#include "eqorb/fourier_path.hpp"
#include "eqorb/problem.hpp"
#include "eqorb/projectors.hpp"

namespace eqorb {

enum class Method { gradient_descent, conjugate_gradient, bfgs, newton_linesearch, newton_trustregion };
enum class Termination { converged, max_iters, collision_abort, stagnation };
enum class GuessKind { random, circular, user };

/// Initial inverse Hessian of BFGS: identity rescaled after the first step,
/// or the inverse of the projected kinetic form.
enum class BfgsStart { scaled_identity, kinetic };

std::string to_string(Method method);
std::string to_string(Termination termination);
std::string to_string(GuessKind kind);
Method parse_method(const std::string& name);
/// Comma- or '+'-separated chain such as "bfgs,newton_trustregion".
std::vector<Method> parse_method_chain(const std::string& text);
GuessKind parse_guess_kind(const std::string& name);

struct OptimizerOptions {
  std::vector<Method> methods{Method::bfgs};
  int max_iterations = 200;            // per stage
  double gradient_tolerance = 1e-8;    // governs the converged verdict
  std::vector<double> stage_tolerances;  // optional, one per stage; the last stage always uses gradient_tolerance
  double initial_step = 1.0;
  double trust_radius = 1.0;
  double max_trust_radius = 1e3;
  BfgsStart bfgs_start = BfgsStart::kinetic;
  int restarts = 1;
  std::uint64_t seed = 0;
  GuessKind guess = GuessKind::random;
  std::optional<PathCoefficients> user_guess;
  int samples = 0;  // 0: the problem's S
  ExecutionPolicy policy = ExecutionPolicy::parallel;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  double tolerance_for_stage(std::size_t stage) const;
};

struct StageRecord {
  Method method = Method::bfgs;
  int iterations = 0;
  Termination termination = Termination::max_iters;
  double action_value = 0.0;
  double gradient_norm = 0.0;
};

struct MinimizationResult {
  PathCoefficients fourier_coeff;
  double action_value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  Termination termination = Termination::max_iters;
  std::vector<StageRecord> stages;
  std::vector<double> gradient_history;
  std::uint64_t seed = 0;

  bool converged() const noexcept { return termination == Termination::converged; }
  /// Method names of the stages run, joined with '+'.
  std::string method_trace() const;
};

struct Evaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Smooth function of z in R^r evaluated to the requested order.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual Eigen::Index dimension() const = 0;
  virtual Evaluation evaluate(const Eigen::VectorXd& z, ActionOrder order) const = 0;
};

/// The action restricted to the projected subspace, A = Q z with Q the
/// orthonormal basis of the composite projector. Gradient Q^T g and Hessian
/// Q^T H Q, so every iterate is projector-fixed by construction.
class ProjectedAction : public Objective {
 public:
  ProjectedAction(const SymmetryProblem& problem, int samples = 0, ExecutionPolicy policy = ExecutionPolicy::parallel);

  Eigen::Index dimension() const override { return projector_.rank(); }
  Evaluation evaluate(const Eigen::VectorXd& z, ActionOrder order) const override;

  Eigen::VectorXd to_reduced(const PathCoefficients& a) const;
  PathCoefficients to_coefficients(const Eigen::VectorXd& z) const;

  const SymmetryProblem& problem() const noexcept { return evaluator_.problem(); }
  const CoefficientProjector& projector() const noexcept { return projector_; }
  const ActionEvaluator& evaluator() const noexcept { return evaluator_; }
  /// Q^T K Q.
  const Eigen::MatrixXd& reduced_kinetic() const noexcept { return reduced_kinetic_; }

 private:
  ActionEvaluator evaluator_;
  CoefficientProjector projector_;
  Eigen::MatrixXd reduced_kinetic_;
};

struct StageOutcome {
  Eigen::VectorXd z;
  Evaluation at;  // value and gradient at z
  int iterations = 0;
  Termination termination = Termination::max_iters;
  std::vector<double> gradient_history;
};

/// One optimization stage on an abstract objective.
StageOutcome run_method(const Objective& objective, Method method, const Eigen::VectorXd& z0, int max_iterations,
                        double tolerance, const OptimizerOptions& options,
                        const Eigen::MatrixXd* initial_inverse_hessian = nullptr);

PathCoefficients initial_guess(const SymmetryProblem& problem, GuessKind kind, std::uint64_t seed,
                               const std::optional<PathCoefficients>& user = std::nullopt);

MinimizationResult minimize(const ProjectedAction& objective, const PathCoefficients& start,
                            const OptimizerOptions& options);
MinimizationResult minimize(const SymmetryProblem& problem, const PathCoefficients& start,
                            const OptimizerOptions& options);

/// Newton solve of the projected gradient-zero system. Uses the trust-region
/// variant when the option's first method is newton_trustregion.
MinimizationResult newton_refine(const SymmetryProblem& problem, const PathCoefficients& start,
                                 const OptimizerOptions& options);

/// `options.restarts` independent runs with seeds seed, seed+1, ..., executed
/// in parallel; results in seed order.
std::vector<MinimizationResult> find_orbits(const SymmetryProblem& problem, const OptimizerOptions& options);

}  // namespace eqorb
