#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eqorb/action.hpp"
#include "eqorb/errors.hpp"
#include "eqorb/problem_file.hpp"
#include "eqorb/render.hpp"
#include "eqorb/result_file.hpp"
#include "eqorb/trajectory_io.hpp"
#include "support.hpp"

using namespace eqorb;
namespace fs = std::filesystem;

namespace {

const fs::path kData = EQORB_TEST_DATA;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("eqorb_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

MinimizationResult fake_result(const SymmetryProblem& p, double action, std::uint64_t seed) {
  MinimizationResult r;
  r.fourier_coeff = initial_guess(p, GuessKind::random, seed);
  r.action_value = action;
  r.gradient_norm = 3e-9;
  r.iterations = 17;
  r.termination = Termination::converged;
  r.stages.push_back(StageRecord{Method::bfgs, 17, Termination::converged, action, 3e-9});
  r.seed = seed;
  return r;
}

const char* kSmallProblem = R"toml(symmetry_name = "spin"
NOB = 3
dim = 3
m = [2, 2, 2]
action_type = 0
kern = "TrivialKerTau(3)"
rotV = [[-0.5, -0.8660254037844386, 0], [0.8660254037844386, -0.5, 0], [0, 0, 1]]
rotS = "(1,2,3)"
F = 6
Omega = [[0, -0.25, 0], [0.25, 0, 0], [0, 0, 0]]
S = 48
potential = { shape = "power_law", alpha = 2.0 }

[optimizer]
method = "bfgs,newton_trustregion"
max_iterations = 50
gradient_tolerance = 1e-9
restarts = 3
seed = 7
guess = "circular"
)toml";

}  // namespace

TEST_CASE("d6_plane.toml parses unmodified") {
  const ProblemFile f = load_problem_file(kData / "d6_plane.toml");
  const SymmetryProblem& p = f.problem;
  CHECK(p.symmetry_name == "d6_plane");
  CHECK(p.n == 3);
  CHECK(p.d == 2);
  CHECK(p.action_type == ActionType::dihedral);
  CHECK(p.kernel.order() == 1);
  CHECK(p.group.order() == 6);
  CHECK(p.fourier_length == 24);
  CHECK(p.samples == 200);
  CHECK(p.coefficient_count() == 104);
  CHECK(f.diagnostics.admissibility.admissible());
}

TEST_CASE("problem parse errors") {
  std::string text = read_text_file(kData / "d6_plane.toml");
  const std::string good_omega = "Omega = [\n\t\t[0, 0],\n\t\t[0, 0]\n\t]";
  REQUIRE(text.find(good_omega) != std::string::npos);
  std::string bad = text;
  bad.replace(bad.find(good_omega), good_omega.size(), "Omega = [[0, 1], [1, 0]]");
  CHECK_THROWS_AS(parse_problem_text(bad), ValidationError);

  std::string missing = text;
  missing.replace(missing.find("F = 24"), 6, "");
  CHECK_THROWS_AS(parse_problem_text(missing), ParseError);

  std::string cycles = text;
  cycles.replace(cycles.find("\"(1,2,3)\""), 9, "\"(1,2,4)\"");
  CHECK_THROWS_AS(parse_problem_text(cycles), ParseError);

  CHECK_THROWS_AS(parse_problem_text("NOB = [1"), ParseError);
  CHECK_THROWS_AS(load_problem_file(kData / "does_not_exist.toml"), IoError);
}

TEST_CASE("problem serialization round trip") {
  const ProblemFile f = parse_problem_text(kSmallProblem);
  CHECK(f.problem.potential.shape() == PotentialShape::power_law);
  CHECK(f.problem.samples == 48);
  CHECK(f.optimizer.methods.size() == 2);
  CHECK(f.optimizer.restarts == 3);
  CHECK(f.optimizer.guess == GuessKind::circular);
  CHECK(f.optimizer.gradient_tolerance == 1e-9);

  for (const SymmetryProblem& p : {f.problem, parse_problem(kData / "d6_plane.toml")}) {
    const std::string text = serialize_problem(p);
    const SymmetryProblem back = parse_problem_text(text).problem;
    CHECK(serialize_problem(back) == text);
    CHECK(problem_fingerprint(back) == problem_fingerprint(p));
    CHECK(back.group.order() == p.group.order());
    CHECK((back.omega - p.omega).norm() == 0.0);
    CHECK((back.rot_gen.rho - p.rot_gen.rho).norm() == 0.0);
  }
  CHECK(problem_fingerprint(f.problem) != problem_fingerprint(parse_problem(kData / "d6_plane.toml")));
}

TEST_CASE("explicit kernel generators parse") {
  const std::string text = R"toml(symmetry_name = "k"
NOB = 4
dim = 2
m = [1, 1, 1, 1]
action_type = 0
kern = [ { V = "[[-1, 0], [0, -1]]", S = "(1,2)(3,4)" } ]
rotV = "[[0, -1], [1, 0]]"
rotS = "(1,3)(2,4)"
F = 4
Omega = [[0, 0], [0, 0]]
)toml";
  const SymmetryProblem p = parse_problem_text(text).problem;
  CHECK(p.kernel.order() == 2);
  CHECK(parse_problem_text(serialize_problem(p)).problem.kernel.order() == 2);
}

TEST_CASE("result store, naming and reload") {
  const SymmetryProblem d6 = parse_problem(kData / "d6_plane.toml");
  const fs::path dir = scratch_dir("results");
  MinimizationResult r = fake_result(d6, 0.0, 5);
  r.action_value = action_eval(r.fourier_coeff.flat(), d6, ActionOrder::value).value;

  const MinimizationResult named = fake_result(d6, 5.85843, 1);
  const fs::path first = store_result(named, d6, dir);
  CHECK(first == dir / "d6_plane" / "5.8584.toml");
  const fs::path second = store_result(fake_result(d6, 5.85839, 2), d6, dir);
  CHECK(second == dir / "d6_plane" / "5.8584-1.toml");

  const OrbitVerification ver{0.5, 0.25, 0.125, 1e-3, 2e-4};
  const fs::path file = store_result(r, d6, dir, ver);
  const StoredResult back = read_result_file(file);
  CHECK(back.coefficients.flat() == r.fourier_coeff.flat());
  CHECK(back.coefficients.flat().size() == 104);
  CHECK(back.action_value == r.action_value);
  CHECK(back.iterations == 17);
  CHECK(back.seed == 5);
  CHECK(back.method == "bfgs");
  CHECK(back.termination == "converged");
  CHECK(back.tool_version == kToolVersion);
  CHECK(back.fingerprint == problem_fingerprint(d6));
  CHECK(problem_fingerprint(back.problem) == problem_fingerprint(d6));
  REQUIRE(back.verification.has_value());
  CHECK(back.verification->junction_velocity_mismatch == 1e-3);
  const double again = action_eval(back.coefficients.flat(), back.problem, ActionOrder::value).value;
  CHECK(std::abs(again - back.action_value) < 1e-9);

  const std::string text = read_text_file(file);
  CHECK(serialize_result(r, back.problem, diagnose(back.problem), ver) == text);
  fs::remove_all(dir);
}

TEST_CASE("damaged result files raise schema errors") {
  const SymmetryProblem d6 = parse_problem(kData / "d6_plane.toml");
  const std::string text = serialize_result(fake_result(d6, 6.0, 1), d6, diagnose(d6));

  const std::string without_result = text.substr(0, text.find("[result]"));
  try {
    parse_result(without_result);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("result") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_result(text.substr(0, text.size() * 2 / 3)), SchemaError);
  CHECK_THROWS_AS(parse_result(text.substr(0, text.find("fourier_coeff"))), SchemaError);

  std::string short_coeffs = text;
  const auto at = short_coeffs.find("fourier_coeff");
  const auto open = short_coeffs.find('[', at);
  const auto comma = short_coeffs.find(',', open);
  short_coeffs.erase(open + 1, comma - open);
  try {
    parse_result(short_coeffs);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("expected 104") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_result("format = \"something-else\"\n"), SchemaError);
}

TEST_CASE("trajectory export and import") {
  const SymmetryProblem d6 = parse_problem(kData / "d6_plane.toml");
  const PathCoefficients a = initial_guess(d6, GuessKind::circular, 0);
  const Trajectory t = make_trajectory(d6, a, 50);
  CHECK(t.path.size() == 300);
  CHECK(t.period == doctest::Approx(d6.period()));
  const fs::path dir = scratch_dir("traj");
  const OrbitVerification base = verify_path(t.path, d6, 50);
  for (const char* name : {"orbit.csv", "orbit.json"}) {
    const fs::path file = dir / name;
    export_trajectory(d6, a, 50, trajectory_format_from_path(file), file);
    const Trajectory back = import_trajectory(file);
    REQUIRE(back.path.size() == t.path.size());
    CHECK(back.samples_per_domain == 50);
    CHECK(back.period == t.period);
    for (std::size_t h = 0; h < t.path.size(); ++h) CHECK(back.path.positions[h] == t.path.positions[h]);
    const OrbitVerification v = verify_path(back.path, d6, back.samples_per_domain);
    CHECK(std::abs(v.max_equation_residual - base.max_equation_residual) < 1e-9);
    CHECK(std::abs(v.energy_drift_along_period - base.energy_drift_along_period) < 1e-9);
  }
  const std::string csv = read_text_file(dir / "orbit.csv");
  std::size_t rows = 0;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#' && line[0] != 'h') ++rows;
  CHECK(rows == 3 * 300);
  CHECK_THROWS(trajectory_format_from_path("orbit.txt"));
  fs::remove_all(dir);
}

TEST_CASE("constant path trajectory rows repeat") {
  const SymmetryProblem d6 = parse_problem(kData / "d6_plane.toml");
  const PathCoefficients zero = PathCoefficients::zeros(d6);
  const Trajectory t = make_trajectory(d6, zero, 48);
  for (const auto& y : t.path.positions) CHECK(y == t.path.positions.front());
}

TEST_CASE("SVG rendering") {
  const SymmetryProblem d6 = parse_problem(kData / "d6_plane.toml");
  const PathCoefficients a = initial_guess(d6, GuessKind::circular, 0);
  const std::string svg = render_svg(d6, a);
  CHECK(svg == render_svg(d6, a));
  CHECK(svg.rfind("<?xml", 0) == 0);
  std::size_t polylines = 0;
  for (std::size_t at = svg.find("<polyline"); at != std::string::npos; at = svg.find("<polyline", at + 1)) {
    ++polylines;
    const auto start = svg.find("points=\"", at) + 8;
    const auto end = svg.find('"', start);
    const std::string points = svg.substr(start, end - start);
    CHECK(points.substr(0, points.find(' ')) == points.substr(points.rfind(' ') + 1));
  }
  CHECK(polylines == 3);

  DiscretizedPath still;
  still.n = 3;
  still.d = 2;
  still.periodic = true;
  still.time_step = 0.1;
  still.positions.assign(5, (Eigen::MatrixXd(3, 2) << 1, 0, 0, 1, -1, -1).finished());
  const std::string dots = render_svg(still);
  std::size_t circles = 0;
  for (std::size_t at = dots.find("<circle"); at != std::string::npos; at = dots.find("<circle", at + 1)) ++circles;
  CHECK(circles == 3);

  const ProblemFile spin = parse_problem_text(kSmallProblem);
  const std::string three = render_svg(spin.problem, initial_guess(spin.problem, GuessKind::circular, 0));
  CHECK(three.find("<text") != std::string::npos);

  DiscretizedPath four = still;
  four.d = 4;
  four.positions.assign(5, Eigen::MatrixXd::Zero(3, 4));
  CHECK_THROWS_AS(render_svg(four), UnsupportedDimension);
}
