#include "eqorb/result_file.hpp"

#include <cmath>
#include <cstdio>

#include "eqorb/errors.hpp"
#include "eqorb/problem_file.hpp"
#include "toml_support.hpp"

namespace eqorb {

namespace {

toml::table diagnostics_table(const DiagnosticsReport& d) {
  toml::table t;
  auto condition = [](const AdmissibilityCondition& c) {
    toml::table e{{"holds", c.holds}};
    if (c.witness) e.insert_or_assign("witness", static_cast<int64_t>(*c.witness));
    if (!c.detail.empty()) e.insert_or_assign("detail", c.detail);
    return e;
  };
  t.insert_or_assign("admissible", d.admissibility.admissible());
  t.insert_or_assign(d.admissibility.tau_sigma.name, condition(d.admissibility.tau_sigma));
  t.insert_or_assign(d.admissibility.rho_sigma.name, condition(d.admissibility.rho_sigma));
  t.insert_or_assign(d.admissibility.tau_rho.name, condition(d.admissibility.tau_rho));
  t.insert_or_assign("coercive", d.coercivity.coercive);
  t.insert_or_assign("fixed_space_dimension", d.coercivity.fixed_dimension);
  t.insert_or_assign("bound_to_collisions_risk", d.bound_to_collisions_risk);
  toml::table circle;
  for (const auto& e : d.rotating_circle) circle.insert_or_assign(e.subgroup, to_string(e.verdict));
  t.insert_or_assign("rotating_circle", std::move(circle));
  t.insert_or_assign("projected_rank", d.projected_rank);
  toml::array notes;
  for (const auto& n : d.notes) notes.push_back(n);
  t.insert_or_assign("notes", std::move(notes));
  return t;
}

const toml::table& require_table(const toml::table& doc, const std::string& key, const std::string& source) {
  const toml::table* t = doc[key].as_table();
  if (!t) throw SchemaError(source + ": missing table [" + key + "]");
  return *t;
}

template <class T>
T require_value(const toml::table& t, const std::string& table, const std::string& key, const std::string& source) {
  auto v = t[key].value<T>();
  if (!v) throw SchemaError(source + ": missing or mistyped '" + table + "." + key + "'");
  return *v;
}

}  // namespace

std::string serialize_result(const MinimizationResult& result, const SymmetryProblem& problem,
                             const DiagnosticsReport& diagnostics,
                             const std::optional<OrbitVerification>& verification) {
  toml::table doc;
  doc.insert_or_assign("format", kResultFormat);
  doc.insert_or_assign("format_version", kResultFormatVersion);
  doc.insert_or_assign("tool_version", kToolVersion);
  doc.insert_or_assign("fingerprint", problem_fingerprint(problem));
  doc.insert_or_assign("problem", detail::problem_table(problem));

  toml::table r;
  r.insert_or_assign("action", result.action_value);
  r.insert_or_assign("gradient_norm", result.gradient_norm);
  r.insert_or_assign("iterations", result.iterations);
  r.insert_or_assign("termination", to_string(result.termination));
  r.insert_or_assign("method", result.method_trace());
  r.insert_or_assign("seed", static_cast<int64_t>(result.seed));
  r.insert_or_assign("shape", toml::array{problem.fourier_length + 2, problem.free_bodies(), problem.d});
  toml::array coeff;
  const Eigen::VectorXd& flat = result.fourier_coeff.flat();
  for (Eigen::Index i = 0; i < flat.size(); ++i) coeff.push_back(flat(i));
  r.insert_or_assign("fourier_coeff", std::move(coeff));
  doc.insert_or_assign("result", std::move(r));
  doc.insert_or_assign("diagnostics", diagnostics_table(diagnostics));

  if (verification) {
    doc.insert_or_assign("verification",
                         toml::table{{"max_equation_residual", verification->max_equation_residual},
                                     {"interior_equation_residual", verification->interior_equation_residual},
                                     {"min_pairwise_distance", verification->min_pairwise_distance},
                                     {"junction_velocity_mismatch", verification->junction_velocity_mismatch},
                                     {"energy_drift_along_period", verification->energy_drift_along_period}});
  }
  return detail::to_text(doc);
}

StoredResult parse_result(const std::string& text, const std::string& source) {
  toml::table doc;
  try {
    doc = detail::parse_toml(text, source);
  } catch (const ParseError& e) {
    throw SchemaError(std::string(e.what()) + " (truncated or malformed result file)");
  }
  if (doc["format"].value_or(std::string{}) != kResultFormat) {
    throw SchemaError(source + ": not an " + std::string(kResultFormat) + " file");
  }
  const int64_t version = doc["format_version"].value_or(int64_t{0});
  if (version != kResultFormatVersion) {
    throw SchemaError(source + ": unsupported format_version " + std::to_string(version));
  }

  StoredResult out;
  const toml::table& ptab = require_table(doc, "problem", source);
  out.problem = build_problem(detail::spec_from_table(ptab, detail::TomlContext{source + "[problem]", &ptab}));
  out.tool_version = doc["tool_version"].value_or(std::string{});
  out.fingerprint = doc["fingerprint"].value_or(std::string{});

  const toml::table& r = require_table(doc, "result", source);
  out.action_value = require_value<double>(r, "result", "action", source);
  out.gradient_norm = require_value<double>(r, "result", "gradient_norm", source);
  out.iterations = static_cast<int>(r["iterations"].value_or(int64_t{0}));
  out.termination = r["termination"].value_or(std::string{});
  out.method = r["method"].value_or(std::string{});
  out.seed = static_cast<std::uint64_t>(r["seed"].value_or(int64_t{0}));

  const SymmetryProblem& p = out.problem;
  const int blocks = p.fourier_length + 2;
  const Eigen::Index expected = p.coefficient_count();
  const std::string shape_text =
      std::to_string(blocks) + "x" + std::to_string(p.free_bodies()) + "x" + std::to_string(p.d);
  if (const toml::array* shape = r["shape"].as_array()) {
    const bool ok = shape->size() == 3 && (*shape)[0].value_or(int64_t{-1}) == blocks &&
                    (*shape)[1].value_or(int64_t{-1}) == p.free_bodies() && (*shape)[2].value_or(int64_t{-1}) == p.d;
    if (!ok) throw SchemaError(source + ": result.shape does not match the problem, expected [" + shape_text + "]");
  }
  const toml::array* coeff = r["fourier_coeff"].as_array();
  if (!coeff) throw SchemaError(source + ": missing 'result.fourier_coeff' block");
  if (static_cast<Eigen::Index>(coeff->size()) != expected) {
    throw SchemaError(source + ": result.fourier_coeff has " + std::to_string(coeff->size()) + " entries, expected " +
                      std::to_string(expected) + " (" + shape_text + ")");
  }
  Eigen::VectorXd flat(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    auto v = (*coeff)[static_cast<std::size_t>(i)].value<double>();
    if (!v) throw SchemaError(source + ": result.fourier_coeff entry " + std::to_string(i) + " is not a number");
    flat(i) = *v;
  }
  out.coefficients = PathCoefficients(p.fourier_length, p.free_bodies(), p.d, std::move(flat));

  if (const toml::table* v = doc["verification"].as_table()) {
    OrbitVerification ver;
    ver.max_equation_residual = (*v)["max_equation_residual"].value_or(0.0);
    ver.interior_equation_residual = (*v)["interior_equation_residual"].value_or(0.0);
    ver.min_pairwise_distance = (*v)["min_pairwise_distance"].value_or(0.0);
    ver.junction_velocity_mismatch = (*v)["junction_velocity_mismatch"].value_or(0.0);
    ver.energy_drift_along_period = (*v)["energy_drift_along_period"].value_or(0.0);
    out.verification = ver;
  }
  return out;
}

std::filesystem::path store_result(const MinimizationResult& result, const SymmetryProblem& problem,
                                   const std::filesystem::path& directory,
                                   const std::optional<OrbitVerification>& verification) {
  if (!std::isfinite(result.action_value)) throw std::invalid_argument("cannot store a non-finite action");
  const std::filesystem::path dir = directory / problem.symmetry_name;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  char stem[64];
  std::snprintf(stem, sizeof stem, "%.4f", result.action_value);
  std::filesystem::path path = dir / (std::string(stem) + ".toml");
  for (int suffix = 1; std::filesystem::exists(path); ++suffix) {
    path = dir / (std::string(stem) + "-" + std::to_string(suffix) + ".toml");
  }
  write_text_file(path, serialize_result(result, problem, diagnose(problem), verification));
  return path;
}

StoredResult read_result_file(const std::filesystem::path& path) {
  return parse_result(read_text_file(path), path.string());
}

std::pair<SymmetryProblem, PathCoefficients> read_path_from_file(const std::filesystem::path& path) {
  StoredResult r = read_result_file(path);
  return {std::move(r.problem), std::move(r.coefficients)};
}

}  // namespace eqorb
