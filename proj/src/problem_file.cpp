#include "eqorb/problem_file.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "eqorb/errors.hpp"
#include "toml_support.hpp"

namespace eqorb {

namespace {

using detail::TomlContext;

Eigen::MatrixXd parse_matrix(const toml::node& node, int d, const TomlContext& ctx, const std::string& key) {
  const toml::array* rows = node.as_array();
  toml::table inline_holder;
  if (const auto* text = node.as_string()) {
    try {
      inline_holder = toml::parse("v = " + text->get());
    } catch (const toml::parse_error& e) {
      throw ParseError(ctx.where(key) + ": matrix literal \"" + text->get() + "\" is not a nested list (" +
                       std::string(e.description()) + ")");
    }
    rows = inline_holder["v"].as_array();
  }
  if (!rows) throw ParseError(ctx.where(key) + ": expected a matrix (nested list)");
  if (static_cast<int>(rows->size()) != d) {
    throw ParseError(ctx.where(key) + ": expected " + std::to_string(d) + " rows, got " + std::to_string(rows->size()));
  }
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    const toml::array* row = (*rows)[static_cast<std::size_t>(i)].as_array();
    if (!row || static_cast<int>(row->size()) != d) {
      throw ParseError(ctx.where(key) + ": row " + std::to_string(i + 1) + " must have " + std::to_string(d) +
                       " entries");
    }
    for (int j = 0; j < d; ++j) {
      auto v = (*row)[static_cast<std::size_t>(j)].value<double>();
      if (!v) throw ParseError(ctx.where(key) + ": entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not a number");
      m(i, j) = *v;
    }
  }
  return m;
}

GroupElement parse_element(const toml::node* v, const toml::node* s, int n, int d, const TomlContext& ctx,
                           const std::string& vkey, const std::string& skey) {
  if (!v) throw ParseError(ctx.where(vkey) + ": missing");
  if (!s || !s->is_string()) throw ParseError(ctx.where(skey) + ": missing cycle-notation string");
  Eigen::MatrixXd rho = parse_matrix(*v, d, ctx, vkey);
  Permutation sigma;
  try {
    sigma = Permutation::from_cycles(s->as_string()->get(), n);
  } catch (const ParseError& e) {
    throw ParseError(ctx.where(skey) + ": " + e.what());
  }
  try {
    return GroupElement::make(std::move(rho), std::move(sigma));
  } catch (const DimensionMismatch& e) {
    throw ValidationError({vkey + ": " + e.what()});
  }
}

template <class T>
T required(const toml::table& t, const std::string& key, const TomlContext& ctx) {
  const toml::node* node = t.get(key);
  if (!node) throw ParseError(ctx.source + ": missing key '" + key + "'");
  auto v = node->value<T>();
  if (!v) throw ParseError(ctx.where(key) + ": wrong type");
  return *v;
}

PotentialModel parse_potential(const toml::node& node, const TomlContext& ctx) {
  std::string shape;
  double alpha = 1.0;
  if (const auto* s = node.as_string()) {
    shape = s->get();
  } else if (const auto* t = node.as_table()) {
    shape = (*t)["shape"].value_or(std::string{});
    alpha = (*t)["alpha"].value_or(1.0);
  } else {
    throw ParseError(ctx.where("potential") + ": expected a name or a table");
  }
  if (shape == "newtonian") return PotentialModel::newtonian();
  if (shape == "none") return PotentialModel::none();
  if (shape == "power_law") {
    try {
      return PotentialModel::power_law(alpha);
    } catch (const std::invalid_argument& e) {
      throw ValidationError({std::string("potential: ") + e.what()});
    }
  }
  throw ParseError(ctx.where("potential") + ": unknown shape '" + shape + "'");
}

OptimizerOptions parse_optimizer(const toml::table* t, const TomlContext& ctx) {
  OptimizerOptions o;
  if (!t) return o;
  try {
    if (auto m = (*t)["method"].value<std::string>()) o.methods = parse_method_chain(*m);
    if (auto v = (*t)["max_iterations"].value<int64_t>()) o.max_iterations = static_cast<int>(*v);
    if (auto v = (*t)["gradient_tolerance"].value<double>()) o.gradient_tolerance = *v;
    if (auto v = (*t)["restarts"].value<int64_t>()) o.restarts = static_cast<int>(*v);
    if (auto v = (*t)["seed"].value<int64_t>()) o.seed = static_cast<std::uint64_t>(*v);
    if (auto v = (*t)["guess"].value<std::string>()) o.guess = parse_guess_kind(*v);
    if (auto v = (*t)["initial_step"].value<double>()) o.initial_step = *v;
    if (auto v = (*t)["trust_radius"].value<double>()) o.trust_radius = *v;
    if (auto v = (*t)["max_trust_radius"].value<double>()) o.max_trust_radius = *v;
    if (auto v = (*t)["bfgs_start"].value<std::string>()) {
      if (*v == "kinetic") o.bfgs_start = BfgsStart::kinetic;
      else if (*v == "identity") o.bfgs_start = BfgsStart::scaled_identity;
      else throw std::invalid_argument("bfgs_start must be 'kinetic' or 'identity'");
    }
    if (const auto* arr = (*t)["stage_tolerances"].as_array()) {
      for (const auto& e : *arr) o.stage_tolerances.push_back(e.value_or(0.0));
    }
    if (o.guess == GuessKind::user) throw std::invalid_argument("a user guess cannot be set from the problem file");
    o.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError({std::string("optimizer: ") + e.what()});
  }
  (void)ctx;
  return o;
}

void write_matrix(toml::table& t, const std::string& key, const Eigen::MatrixXd& m) {
  toml::array rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    toml::array row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  t.insert_or_assign(key, std::move(rows));
}

}  // namespace

ProblemSpec parse_problem_spec(const std::string& text, const std::string& source) {
  toml::table doc = detail::parse_toml(text, source);
  return detail::spec_from_table(doc, TomlContext{source, &doc});
}

namespace detail {

ProblemSpec spec_from_table(const toml::table& doc, const TomlContext& ctx) {
  ProblemSpec spec;
  spec.symmetry_name = required<std::string>(doc, "symmetry_name", ctx);
  spec.n = static_cast<int>(required<int64_t>(doc, "NOB", ctx));
  spec.d = static_cast<int>(required<int64_t>(doc, "dim", ctx));
  if (spec.n < 2 || spec.d < 1) {
    throw ValidationError({"NOB must be at least 2 and dim at least 1 (got NOB = " + std::to_string(spec.n) +
                           ", dim = " + std::to_string(spec.d) + ")"});
  }

  const toml::array* masses = doc["m"].as_array();
  if (!masses) throw ParseError(ctx.source + ": missing key 'm'");
  for (const auto& e : *masses) {
    auto v = e.value<double>();
    if (!v) throw ParseError(ctx.where("m") + ": masses must be numbers");
    spec.masses.push_back(*v);
  }

  const int64_t type = required<int64_t>(doc, "action_type", ctx);
  if (type < 0 || type > 2) {
    throw ValidationError({"action_type must be 0 (cyclic), 1 (dihedral) or 2 (brake), got " + std::to_string(type)});
  }
  spec.action_type = static_cast<ActionType>(type);

  const toml::node* kern = doc.get("kern");
  if (!kern) throw ParseError(ctx.source + ": missing key 'kern'");
  if (const auto* s = kern->as_string()) {
    const std::string expected = "TrivialKerTau(" + std::to_string(spec.d) + ")";
    std::string compact;
    for (char c : s->get())
      if (c != ' ' && c != '\t') compact += c;
    if (compact != expected) {
      throw ParseError(ctx.where("kern") + ": expected \"" + expected + "\" or a list of {V, S} generators, got \"" +
                       s->get() + "\"");
    }
  } else if (const auto* arr = kern->as_array()) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const toml::table* g = (*arr)[i].as_table();
      const std::string tag = "kern[" + std::to_string(i) + "]";
      if (!g) throw ParseError(ctx.where("kern") + ": entry " + std::to_string(i) + " must be a table {V, S}");
      spec.kernel_generators.push_back(parse_element(g->get("V"), g->get("S"), spec.n, spec.d, ctx, tag + ".V", tag + ".S"));
    }
  } else {
    throw ParseError(ctx.where("kern") + ": expected a string or an array of tables");
  }

  spec.rot_gen = parse_element(doc.get("rotV"), doc.get("rotS"), spec.n, spec.d, ctx, "rotV", "rotS");
  if (spec.action_type != ActionType::cyclic) {
    spec.ref_gen = parse_element(doc.get("refV"), doc.get("refS"), spec.n, spec.d, ctx, "refV", "refS");
  }

  spec.fourier_length = static_cast<int>(required<int64_t>(doc, "F", ctx));
  const toml::node* omega = doc.get("Omega");
  if (!omega) throw ParseError(ctx.source + ": missing key 'Omega'");
  spec.omega = parse_matrix(*omega, spec.d, ctx, "Omega");

  if (auto s = doc["S"].value<int64_t>()) spec.samples = static_cast<int>(*s);
  if (const toml::node* pot = doc.get("potential")) spec.potential = parse_potential(*pot, ctx);
  return spec;
}

}  // namespace detail

ProblemFile parse_problem_text(const std::string& text, const std::string& source) {
  toml::table doc = detail::parse_toml(text, source);
  const TomlContext ctx{source, &doc};
  ProblemFile out;
  out.problem = build_problem(detail::spec_from_table(doc, ctx));
  out.optimizer = parse_optimizer(doc["optimizer"].as_table(), ctx);
  out.diagnostics = diagnose(out.problem);
  return out;
}

ProblemFile load_problem_file(const std::filesystem::path& path) {
  return parse_problem_text(read_text_file(path), path.string());
}

SymmetryProblem parse_problem(const std::filesystem::path& path) { return load_problem_file(path).problem; }

namespace detail {

toml::table problem_table(const SymmetryProblem& p) {
  toml::table t;
  t.insert_or_assign("symmetry_name", p.symmetry_name);
  t.insert_or_assign("NOB", p.n);
  t.insert_or_assign("dim", p.d);
  toml::array masses;
  for (double m : p.masses) masses.push_back(m);
  t.insert_or_assign("m", std::move(masses));
  t.insert_or_assign("action_type", static_cast<int64_t>(p.action_type));
  if (p.kernel.order() == 1) {
    t.insert_or_assign("kern", "TrivialKerTau(" + std::to_string(p.d) + ")");
  } else {
    toml::array gens;
    for (const auto& g : p.kernel.generators()) {
      toml::table e;
      write_matrix(e, "V", g.rho);
      e.insert_or_assign("S", g.sigma.to_cycles());
      gens.push_back(std::move(e));
    }
    t.insert_or_assign("kern", std::move(gens));
  }
  write_matrix(t, "rotV", p.rot_gen.rho);
  t.insert_or_assign("rotS", p.rot_gen.sigma.to_cycles());
  if (p.ref_gen) {
    write_matrix(t, "refV", p.ref_gen->rho);
    t.insert_or_assign("refS", p.ref_gen->sigma.to_cycles());
  }
  t.insert_or_assign("F", p.fourier_length);
  write_matrix(t, "Omega", p.omega);
  t.insert_or_assign("S", p.samples);
  switch (p.potential.shape()) {
    case PotentialShape::newtonian: t.insert_or_assign("potential", "newtonian"); break;
    case PotentialShape::none: t.insert_or_assign("potential", "none"); break;
    case PotentialShape::power_law:
      t.insert_or_assign("potential", toml::table{{"shape", "power_law"}, {"alpha", p.potential.alpha()}});
      break;
  }
  return t;
}

toml::table parse_toml(const std::string& text, const std::string& source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw ParseError(os.str());
  }
}

std::string TomlContext::where(const std::string& key) const {
  std::string out = source;
  if (doc) {
    if (const toml::node* n = doc->get(key)) out += ":" + std::to_string(n->source().begin.line);
  }
  return out + ": key '" + key + "'";
}

std::string to_text(const toml::table& t) {
  std::ostringstream os;
  os << toml::toml_formatter(t, toml::format_flags::none);
  return os.str() + "\n";
}

}  // namespace detail

std::string serialize_problem(const SymmetryProblem& problem) { return detail::to_text(detail::problem_table(problem)); }

std::string problem_fingerprint(const SymmetryProblem& problem) {
  // FNV-1a 64 over the canonical text.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize_problem(problem)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace eqorb
