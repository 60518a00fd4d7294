#pragma once

#include <string>

#include <toml.hpp>

#include "eqorb/problem.hpp"

namespace eqorb::detail {

struct TomlContext {
  std::string source;
  const toml::table* doc = nullptr;

  /// "file:line: key 'k'" for diagnostics.
  std::string where(const std::string& key) const;
};

toml::table parse_toml(const std::string& text, const std::string& source);
ProblemSpec spec_from_table(const toml::table& doc, const TomlContext& ctx);
toml::table problem_table(const SymmetryProblem& problem);
std::string to_text(const toml::table& t);

}  // namespace eqorb::detail
