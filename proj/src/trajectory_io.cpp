#include "eqorb/trajectory_io.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "eqorb/errors.hpp"
#include "eqorb/problem_file.hpp"

namespace eqorb {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("trajectory: '" + s + "' is not a number");
  }
}

}  // namespace

TrajectoryFormat trajectory_format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return TrajectoryFormat::csv;
  if (ext == ".json") return TrajectoryFormat::json;
  throw std::invalid_argument("cannot infer trajectory format from '" + path.string() + "' (use .csv or .json)");
}

Trajectory make_trajectory(const SymmetryProblem& problem, const PathCoefficients& coefficients, int samples) {
  Trajectory t;
  t.path = extend_to_period(coefficients, problem, samples);
  t.period = problem.period();
  t.samples_per_domain = samples;
  return t;
}

std::string trajectory_to_string(const Trajectory& tr, TrajectoryFormat format) {
  const DiscretizedPath& p = tr.path;
  if (format == TrajectoryFormat::csv) {
    std::string out;
    out += "# period = " + num(tr.period) + "\n";
    out += "# samples_per_domain = " + std::to_string(tr.samples_per_domain) + "\n";
    out += "# bodies = " + std::to_string(p.n) + "\n";
    out += "# dim = " + std::to_string(p.d) + "\n";
    out += "# samples = " + std::to_string(p.size()) + "\n";
    out += "# time_step = " + num(p.time_step) + "\n";
    out += "h,t,body";
    for (int k = 0; k < p.d; ++k) out += ",x" + std::to_string(k + 1);
    out += "\n";
    for (std::size_t h = 0; h < p.size(); ++h) {
      for (int i = 0; i < p.n; ++i) {
        out += std::to_string(h) + "," + num(p.time(h)) + "," + std::to_string(i + 1);
        for (int k = 0; k < p.d; ++k) out += "," + num(p.positions[h](i, k));
        out += "\n";
      }
    }
    return out;
  }
  nlohmann::json j;
  j["period"] = tr.period;
  j["samples_per_domain"] = tr.samples_per_domain;
  j["bodies"] = p.n;
  j["dim"] = p.d;
  j["time_step"] = p.time_step;
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& y : p.positions) {
    nlohmann::json sample = nlohmann::json::array();
    for (int i = 0; i < p.n; ++i) {
      nlohmann::json body = nlohmann::json::array();
      for (int k = 0; k < p.d; ++k) body.push_back(y(i, k));
      sample.push_back(std::move(body));
    }
    positions.push_back(std::move(sample));
  }
  j["positions"] = std::move(positions);
  return j.dump(1) + "\n";
}

Trajectory trajectory_from_string(const std::string& text, TrajectoryFormat format) {
  Trajectory tr;
  DiscretizedPath& p = tr.path;
  p.periodic = true;
  if (format == TrajectoryFormat::csv) {
    std::istringstream is(text);
    std::string line;
    long samples = -1;
    bool header_seen = false;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        const std::string value = line.substr(eq + 1);
        if (key == "period") tr.period = to_double(value.substr(value.find_first_not_of(' ')));
        else if (key == "samples_per_domain") tr.samples_per_domain = std::stoi(value);
        else if (key == "bodies") p.n = std::stoi(value);
        else if (key == "dim") p.d = std::stoi(value);
        else if (key == "samples") samples = std::stol(value);
        else if (key == "time_step") p.time_step = to_double(value.substr(value.find_first_not_of(' ')));
        continue;
      }
      if (!header_seen) {
        header_seen = true;
        if (p.n < 1 || p.d < 1 || samples < 1) throw ParseError("trajectory CSV: incomplete header");
        p.positions.assign(static_cast<std::size_t>(samples), Eigen::MatrixXd::Zero(p.n, p.d));
        continue;
      }
      const auto cells = split(line, ',');
      if (static_cast<int>(cells.size()) != 3 + p.d) throw ParseError("trajectory CSV: bad row '" + line + "'");
      const long h = std::stol(cells[0]);
      const int body = std::stoi(cells[2]) - 1;
      if (h < 0 || h >= samples || body < 0 || body >= p.n) throw ParseError("trajectory CSV: index out of range");
      for (int k = 0; k < p.d; ++k) p.positions[static_cast<std::size_t>(h)](body, k) = to_double(cells[3 + static_cast<std::size_t>(k)]);
    }
    if (!header_seen) throw ParseError("trajectory CSV: missing column header");
  } else {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
      tr.period = j.at("period").get<double>();
      tr.samples_per_domain = j.at("samples_per_domain").get<int>();
      p.n = j.at("bodies").get<int>();
      p.d = j.at("dim").get<int>();
      p.time_step = j.value("time_step", 0.0);
      for (const auto& sample : j.at("positions")) {
        Eigen::MatrixXd y(p.n, p.d);
        for (int i = 0; i < p.n; ++i)
          for (int k = 0; k < p.d; ++k) y(i, k) = sample.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>();
        p.positions.push_back(std::move(y));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("trajectory JSON: ") + e.what());
    }
  }
  if (p.positions.empty()) throw ParseError("trajectory has no samples");
  if (!(p.time_step > 0.0)) p.time_step = tr.period / static_cast<double>(p.positions.size());
  return tr;
}

void export_trajectory(const SymmetryProblem& problem, const PathCoefficients& coefficients, int samples,
                       TrajectoryFormat format, const std::filesystem::path& out) {
  write_text_file(out, trajectory_to_string(make_trajectory(problem, coefficients, samples), format));
}

Trajectory import_trajectory(const std::filesystem::path& path) {
  return trajectory_from_string(read_text_file(path), trajectory_format_from_path(path));
}

}  // namespace eqorb
