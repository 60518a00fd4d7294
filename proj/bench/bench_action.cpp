#include <benchmark/benchmark.h>

#include <numbers>

#include "eqorb/action.hpp"
#include "eqorb/optimizer.hpp"

namespace {

using namespace eqorb;

SymmetryProblem d6_problem(int samples) {
  ProblemSpec s;
  s.symmetry_name = "d6_plane";
  s.n = 3;
  s.d = 2;
  s.masses = {1, 1, 1};
  s.action_type = ActionType::dihedral;
  s.rot_gen = GroupElement::make(Eigen::MatrixXd::Identity(2, 2), Permutation::from_cycles("(1,2,3)", 3));
  s.ref_gen = GroupElement::make(-Eigen::MatrixXd::Identity(2, 2), Permutation::from_cycles("(1,2)", 3));
  s.fourier_length = 24;
  s.omega = Eigen::MatrixXd::Zero(2, 2);
  s.samples = samples;
  return build_problem(s);
}

void run(benchmark::State& state, ExecutionPolicy policy, ActionOrder order) {
  const SymmetryProblem p = d6_problem(static_cast<int>(state.range(0)));
  const ActionEvaluator eval(p, 0, policy);
  const PathCoefficients a = initial_guess(p, GuessKind::circular, 0);
  for (auto _ : state) {
    ActionValue v = eval.evaluate(a.flat(), order);
    benchmark::DoNotOptimize(v.value);
  }
}

void BM_GradientSerial(benchmark::State& s) { run(s, ExecutionPolicy::serial, ActionOrder::gradient); }
void BM_GradientParallel(benchmark::State& s) { run(s, ExecutionPolicy::parallel, ActionOrder::gradient); }
void BM_HessianSerial(benchmark::State& s) { run(s, ExecutionPolicy::serial, ActionOrder::hessian); }
void BM_HessianParallel(benchmark::State& s) { run(s, ExecutionPolicy::parallel, ActionOrder::hessian); }

BENCHMARK(BM_GradientSerial)->Arg(200)->Arg(2000);
BENCHMARK(BM_GradientParallel)->Arg(200)->Arg(2000);
BENCHMARK(BM_HessianSerial)->Arg(200)->Arg(2000);
BENCHMARK(BM_HessianParallel)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
