#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "eqorb/diagnostics.hpp"
#include "eqorb/optimizer.hpp"
#include "eqorb/problem.hpp"

namespace eqorb {

/// A parsed problem file: the validated problem, the structural checks run on
/// it, and the optional [optimizer] overrides.
struct ProblemFile {
  SymmetryProblem problem;
  DiagnosticsReport diagnostics;
  OptimizerOptions optimizer;
};

/// Parses the problem dialect (keys symmetry_name, NOB, dim, m, action_type,
/// kern, rotV, rotS, refV, refS, F, Omega; optional S, potential, [optimizer]).
/// Throws ParseError for malformed input and ValidationError for invalid data.
ProblemSpec parse_problem_spec(const std::string& text, const std::string& source = "<string>");
ProblemFile parse_problem_text(const std::string& text, const std::string& source = "<string>");
ProblemFile load_problem_file(const std::filesystem::path& path);
SymmetryProblem parse_problem(const std::filesystem::path& path);

/// Canonical TOML text of a problem (native arrays, full precision).
std::string serialize_problem(const SymmetryProblem& problem);

/// 16 hex digits identifying the canonical serialization.
std::string problem_fingerprint(const SymmetryProblem& problem);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace eqorb
