// eqorb: command-line front end for symmetric periodic orbit searches.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>

#include "eqorb/diagnostics.hpp"
#include "eqorb/errors.hpp"
#include "eqorb/optimizer.hpp"
#include "eqorb/problem_file.hpp"
#include "eqorb/render.hpp"
#include "eqorb/result_file.hpp"
#include "eqorb/trajectory_io.hpp"

namespace {

using namespace eqorb;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitIo = 4;

void print_diagnostics(const DiagnosticsReport& d) {
  auto cond = [](const AdmissibilityCondition& c) {
    std::printf("  %-40s %s", c.name.c_str(), c.holds ? "ok" : "FAILS");
    if (!c.detail.empty()) std::printf("  (%s)", c.detail.c_str());
    std::printf("\n");
  };
  std::printf("admissibility: %s\n", d.admissibility.admissible() ? "admissible" : "not admissible");
  cond(d.admissibility.tau_sigma);
  cond(d.admissibility.rho_sigma);
  cond(d.admissibility.tau_rho);
  std::printf("coercive: %s (fixed-space dimension %d)\n", d.coercivity.coercive ? "yes" : "no",
              d.coercivity.fixed_dimension);
  std::printf("bound to collisions risk: %s\n", d.bound_to_collisions_risk ? "yes" : "no");
  for (const auto& e : d.rotating_circle) {
    std::printf("rotating circle under %-6s %s (%s)\n", e.subgroup.c_str(), to_string(e.verdict).c_str(),
                e.detail.c_str());
  }
  std::printf("projected path space dimension: %d\n", d.projected_rank);
  for (const auto& n : d.notes) std::printf("note: %s\n", n.c_str());
}

void print_verification(const OrbitVerification& v) {
  std::printf("max equation residual:      %.3e\n", v.max_equation_residual);
  std::printf("interior equation residual: %.3e\n", v.interior_equation_residual);
  std::printf("min pairwise distance:      %.6f\n", v.min_pairwise_distance);
  std::printf("junction velocity mismatch: %.3e\n", v.junction_velocity_mismatch);
  std::printf("energy drift along period:  %.3e\n", v.energy_drift_along_period);
}

std::string matrix_text(const Eigen::MatrixXd& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%g", j ? ", " : "", std::abs(m(i, j)) < 1e-14 ? 0.0 : m(i, j));
      out += buf;
    }
    out += "]";
  }
  return out + "]";
}

int cmd_init(const std::string& path) {
  const ProblemFile f = load_problem_file(path);
  std::printf("problem '%s': n = %d, d = %d, %s action, |G| = %zu, F = %d\n", f.problem.symmetry_name.c_str(),
              f.problem.n, f.problem.d, to_string(f.problem.action_type).c_str(), f.problem.group.order(),
              f.problem.fourier_length);
  print_diagnostics(f.diagnostics);
  return kExitOk;
}

int cmd_info(const std::string& path) {
  const SymmetryProblem p = parse_problem(path);
  std::printf("symmetry: %s\n", p.symmetry_name.c_str());
  std::printf("action type: %s\n", to_string(p.action_type).c_str());
  std::printf("|G| = %zu, |ker tau| = %zu, |G/ker tau| = %d\n", p.group.order(), p.kernel.order(), p.quotient_order);
  std::printf("|H0| = %zu, |H1| = %zu\n", p.h0.order(), p.h1.order());
  std::printf("fundamental domain [0, pi], period T = %d pi = %.10g\n", p.quotient_order, p.period());
  std::printf("coefficients: %d x %d x %d = %ld\n", p.fourier_length + 2, p.free_bodies(), p.d,
              static_cast<long>(p.coefficient_count()));
  std::printf("%-4s %-28s %-14s %s\n", "#", "rho", "sigma", "tau");
  for (std::size_t e = 0; e < p.group.order(); ++e) {
    const TimeMap& t = p.time_maps[e];
    std::printf("%-4zu %-28s %-14s t -> %st + %d pi\n", e, matrix_text(p.group[e].rho).c_str(),
                p.group[e].sigma.to_cycles().c_str(), t.sign < 0 ? "-" : "", t.shift);
  }
  return kExitOk;
}

struct SolveArgs {
  std::string problem;
  int starts = 0;
  std::string method;
  int max_iter = 0;
  double tol = 0.0;
  long long seed = -1;
  std::string guess;
  std::string out_dir = ".";
  bool all = false;
};

int cmd_solve(const SolveArgs& a) {
  ProblemFile f = load_problem_file(a.problem);
  OptimizerOptions o = f.optimizer;
  if (a.starts > 0) o.restarts = a.starts;
  if (!a.method.empty()) o.methods = parse_method_chain(a.method);
  if (a.max_iter > 0) o.max_iterations = a.max_iter;
  if (a.tol > 0.0) o.gradient_tolerance = a.tol;
  if (a.seed >= 0) o.seed = static_cast<std::uint64_t>(a.seed);
  if (!a.guess.empty()) o.guess = parse_guess_kind(a.guess);
  o.validate();

  const auto results = find_orbits(f.problem, o);
  int converged = 0;
  const MinimizationResult* best = nullptr;
  for (const auto& r : results) {
    std::printf("seed %-6llu %-16s iterations %-4d action %.10f  |grad| %.2e\n",
                static_cast<unsigned long long>(r.seed), to_string(r.termination).c_str(), r.iterations,
                r.action_value, r.gradient_norm);
    if (!r.converged()) continue;
    ++converged;
    if (!best || r.action_value < best->action_value) best = &r;
  }
  std::printf("%d of %zu runs converged\n", converged, results.size());
  if (!best) return kExitNoConvergence;

  std::vector<double> stored;
  for (const auto& r : results) {
    if (!r.converged()) continue;
    if (!a.all && &r != best) continue;
    bool duplicate = false;
    for (double s : stored) duplicate = duplicate || std::abs(s - r.action_value) <= 1e-8 * (1.0 + std::abs(s));
    if (duplicate) continue;
    stored.push_back(r.action_value);
    const auto path = store_result(r, f.problem, a.out_dir, verify_orbit(r, f.problem, f.problem.samples));
    std::printf("stored %s\n", path.string().c_str());
  }
  return kExitOk;
}

int cmd_verify(const std::string& path, int dense) {
  const StoredResult r = read_result_file(path);
  const double action = ActionEvaluator(r.problem).evaluate(r.coefficients, ActionOrder::value).value;
  std::printf("stored action %.12f, re-evaluated %.12f\n", r.action_value, action);
  print_verification(verify_orbit(r.coefficients, r.problem, dense));
  return kExitOk;
}

int cmd_export(const std::string& path, const std::string& out, int samples, const std::string& format) {
  const auto [problem, coeff] = read_path_from_file(path);
  const TrajectoryFormat f = format.empty()  ? trajectory_format_from_path(out)
                             : format == "csv" ? TrajectoryFormat::csv
                             : format == "json" ? TrajectoryFormat::json
                                                : throw std::invalid_argument("format must be csv or json");
  export_trajectory(problem, coeff, samples > 0 ? samples : problem.samples, f, out);
  std::printf("wrote %s\n", out.c_str());
  return kExitOk;
}

int cmd_render(const std::string& path, const std::string& out, int samples) {
  const auto [problem, coeff] = read_path_from_file(path);
  RenderOptions opts;
  if (samples > 0) opts.samples = samples;
  render_orbit(problem, coeff, out, opts);
  std::printf("wrote %s\n", out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric periodic orbits of the n-body problem by equivariant action minimization"};
  app.require_subcommand(1);

  std::string problem_path;
  auto* init = app.add_subcommand("init", "Validate a problem file and print the structural diagnostics");
  init->add_option("problem", problem_path, "Problem TOML")->required();

  auto* info = app.add_subcommand("info", "Print the group table and fundamental-domain data");
  info->add_option("problem", problem_path, "Problem TOML")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Multi-start minimization; stores the best converged orbit");
  solve->add_option("problem", solve_args.problem, "Problem TOML")->required();
  solve->add_option("--starts", solve_args.starts, "Number of restarts");
  solve->add_option("--method", solve_args.method, "Method or chain, e.g. bfgs,newton_trustregion");
  solve->add_option("--max-iter", solve_args.max_iter, "Iterations per stage");
  solve->add_option("--tol", solve_args.tol, "Gradient-norm tolerance");
  solve->add_option("--seed", solve_args.seed, "Seed of the first restart");
  solve->add_option("--guess", solve_args.guess, "random, circular");
  solve->add_option("-o,--out", solve_args.out_dir, "Output directory");
  solve->add_flag("--all", solve_args.all, "Store every distinct converged orbit");

  std::string result_path;
  int dense = 2000;
  auto* verify = app.add_subcommand("verify", "Check Newton's equations along a stored orbit");
  verify->add_option("result", result_path, "Result TOML")->required();
  verify->add_option("--dense", dense, "Samples per fundamental domain");

  std::string out_path;
  std::string format;
  int samples = 0;
  auto* exp = app.add_subcommand("export", "Export the full-period trajectory");
  exp->add_option("result", result_path, "Result TOML")->required();
  exp->add_option("-o,--out", out_path, "Output file (.csv or .json)")->required();
  exp->add_option("--samples", samples, "Samples per fundamental domain");
  exp->add_option("--format", format, "csv or json (default: from the extension)");

  auto* render = app.add_subcommand("render", "Render the orbit as SVG");
  render->add_option("result", result_path, "Result TOML")->required();
  render->add_option("-o,--out", out_path, "Output SVG")->required();
  render->add_option("--samples", samples, "Samples per fundamental domain");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*init) return cmd_init(problem_path);
    if (*info) return cmd_info(problem_path);
    if (*solve) return cmd_solve(solve_args);
    if (*verify) return cmd_verify(result_path, dense);
    if (*exp) return cmd_export(result_path, out_path, samples, format);
    if (*render) return cmd_render(result_path, out_path, samples);
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
