#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "eqorb/diagnostics.hpp"
#include "eqorb/fourier_path.hpp"
#include "eqorb/optimizer.hpp"
#include "eqorb/problem.hpp"

namespace eqorb {

inline constexpr const char* kResultFormat = "eqorb-result";
inline constexpr int kResultFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a result file carries besides the problem itself.
struct StoredResult {
  SymmetryProblem problem;
  PathCoefficients coefficients;
  double action_value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  std::string termination;
  std::string method;
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::string tool_version;
  std::optional<OrbitVerification> verification;
};

/// Result TOML: format header, [problem] echo, [result] with the flat
/// fourier_coeff of shape (F+2) x (n-1) x d, [diagnostics], optional [verification].
std::string serialize_result(const MinimizationResult& result, const SymmetryProblem& problem,
                             const DiagnosticsReport& diagnostics,
                             const std::optional<OrbitVerification>& verification = std::nullopt);

StoredResult parse_result(const std::string& text, const std::string& source = "<string>");

/// "<directory>/<symmetry_name>/<action %.4f>.toml", with "-1", "-2", ...
/// appended when the name is taken. Returns the written path.
std::filesystem::path store_result(const MinimizationResult& result, const SymmetryProblem& problem,
                                   const std::filesystem::path& directory,
                                   const std::optional<OrbitVerification>& verification = std::nullopt);

StoredResult read_result_file(const std::filesystem::path& path);
std::pair<SymmetryProblem, PathCoefficients> read_path_from_file(const std::filesystem::path& path);

}  // namespace eqorb
