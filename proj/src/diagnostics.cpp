#include "eqorb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqorb/projectors.hpp"

namespace eqorb {

namespace {

bool rho_is_identity(const GroupElement& g) {
  return (g.rho - Eigen::MatrixXd::Identity(g.dim(), g.dim())).cwiseAbs().maxCoeff() <= kMatrixTolerance;
}

AdmissibilityCondition trivial_intersection(const SymmetryProblem& p, const std::string& name, auto&& in_first,
                                            auto&& in_second) {
  AdmissibilityCondition c{name, true, std::nullopt, ""};
  for (std::size_t e = 1; e < p.group.order(); ++e) {
    if (in_first(e) && in_second(e)) {
      c.holds = false;
      c.witness = e;
      c.detail = "element (sigma " + p.group[e].sigma.to_cycles() + ") lies in both kernels";
      return c;
    }
  }
  return c;
}

// Plane spanned by u (d x 2, orthonormal) is carried to itself by rho as a
// rotation.
bool rotates_plane(const Eigen::MatrixXd& rho, const Eigen::MatrixXd& u) {
  const Eigen::MatrixXd image = rho * u;
  const Eigen::MatrixXd r = u.transpose() * image;
  if ((image - u * r).cwiseAbs().maxCoeff() > 1e-9) return false;
  return r.determinant() > 0.0;
}

bool fixes_plane(const Eigen::MatrixXd& rho, const Eigen::MatrixXd& u) {
  return (rho * u - u).cwiseAbs().maxCoeff() <= 1e-9;
}

std::vector<Eigen::MatrixXd> candidate_planes(const FiniteGroup& h) {
  const int d = h.dim();
  std::vector<Eigen::MatrixXd> planes;
  auto add = [&](Eigen::MatrixXd u) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, 2);
    if (std::abs((q.transpose() * u).determinant()) < 1e-9) return;
    planes.push_back(std::move(q));
  };
  if (d == 2) {
    add(Eigen::MatrixXd::Identity(2, 2));
    return planes;
  }
  // Common fixed space of H.
  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(h.order()) * d, d);
  for (std::size_t e = 0; e < h.order(); ++e)
    stacked.middleRows(static_cast<Eigen::Index>(e) * d, d) = h[e].rho - Eigen::MatrixXd::Identity(d, d);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  int null = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) null += svd.singularValues()(i) < 1e-9 ? 1 : 0;
  if (null >= 2) add(svd.matrixV().rightCols(null).leftCols(2));
  // Invariant planes of each element from complex eigenvector pairs.
  for (const auto& g : h.elements()) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(g.rho);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::abs(es.eigenvalues()(i).imag()) < 1e-12) continue;
      Eigen::MatrixXd u(d, 2);
      u.col(0) = es.eigenvectors().col(i).real();
      u.col(1) = es.eigenvectors().col(i).imag();
      add(u);
    }
  }
  return planes;
}

}  // namespace

AdmissibilityReport check_admissibility(const SymmetryProblem& p) {
  auto in_tau = [&](std::size_t e) { return p.time_maps[e].is_identity(); };
  auto in_sigma = [&](std::size_t e) { return p.group[e].sigma.is_identity(); };
  auto in_rho = [&](std::size_t e) { return rho_is_identity(p.group[e]); };

  AdmissibilityReport r;
  r.tau_sigma = trivial_intersection(p, "ker_tau_cap_ker_sigma_trivial", in_tau, in_sigma);
  r.tau_rho = trivial_intersection(p, "ker_tau_cap_ker_rho_trivial", in_tau, in_rho);

  r.rho_sigma = AdmissibilityCondition{"ker_rho_cap_ker_sigma_time_reflection", true, std::nullopt, ""};
  std::vector<std::size_t> both;
  for (std::size_t e = 1; e < p.group.order(); ++e)
    if (in_rho(e) && in_sigma(e)) both.push_back(e);
  if (both.size() > 1) {
    r.rho_sigma.holds = false;
    r.rho_sigma.witness = both[1];
    r.rho_sigma.detail = "ker rho /\\ ker sigma has " + std::to_string(both.size() + 1) + " elements";
  } else if (both.size() == 1 && !p.time_maps[both[0]].is_reflection()) {
    r.rho_sigma.holds = false;
    r.rho_sigma.witness = both[0];
    r.rho_sigma.detail = "the nontrivial element of ker rho /\\ ker sigma does not reverse time";
  }
  return r;
}

CoercivityReport check_coercivity(const FiniteGroup& group, const std::vector<double>& masses) {
  const int n = group.bodies();
  const int d = group.dim();
  const Eigen::MatrixXd embed = com_embedding(masses, d);
  const Eigen::MatrixXd reduced = com_restriction(n, d) * fixed_space_projector(group).matrix * embed;
  const RangeProjector range = orthogonal_range(reduced);
  CoercivityReport r;
  r.fixed_dimension = static_cast<int>(range.basis.cols());
  r.coercive = r.fixed_dimension == 0;
  if (!r.coercive) r.witness = embed * range.basis.col(0);
  return r;
}

CoercivityReport check_coercivity(const SymmetryProblem& problem) {
  return check_coercivity(problem.group, problem.masses);
}

std::string to_string(CircleVerdict verdict) {
  switch (verdict) {
    case CircleVerdict::holds: return "holds";
    case CircleVerdict::fails: return "fails";
    case CircleVerdict::unknown: return "unknown";
  }
  return "unknown";
}

RotatingCircleEntry rotating_circle(const FiniteGroup& h, const std::string& name) {
  RotatingCircleEntry out;
  out.subgroup = name;
  const int n = h.bodies();
  const int d = h.dim();
  if (h.order() == 1) {
    out.verdict = CircleVerdict::holds;
    out.indices = n;
    out.detail = "trivial subgroup";
    return out;
  }
  if (d < 2) {
    out.verdict = CircleVerdict::fails;
    out.detail = "no circle in dimension 1";
    return out;
  }
  if (d == 2) {
    for (std::size_t e = 0; e < h.order(); ++e) {
      if (h[e].rho.determinant() < 0.0) {
        out.verdict = CircleVerdict::fails;
        out.witness = e;
        out.detail = "element acts on the plane as a reflection";
        return out;
      }
    }
  }

  int best = -1;
  for (const auto& u : candidate_planes(h)) {
    bool rotating = true;
    for (const auto& g : h.elements()) rotating = rotating && rotates_plane(g.rho, u);
    if (!rotating) continue;
    int count = 0;
    for (int i = 0; i < n; ++i) {
      bool fixed = true;
      for (const auto& g : h.elements())
        if (g.sigma(i) == i) fixed = fixed && fixes_plane(g.rho, u);
      count += fixed ? 1 : 0;
    }
    if (count > best) {
      best = count;
      out.plane = u;
    }
  }
  out.indices = std::max(best, 0);
  if (best >= n - 1) {
    out.verdict = CircleVerdict::holds;
    out.detail = "rotating circle found for " + std::to_string(best) + " of " + std::to_string(n) + " indices";
  } else if (d == 2) {
    out.verdict = CircleVerdict::fails;
    out.detail = "isotropy of " + std::to_string(n - std::max(best, 0)) + " indices acts nontrivially on the plane";
  } else {
    out.verdict = CircleVerdict::unknown;
    out.detail = "eigenplane search inconclusive";
  }
  return out;
}

std::vector<RotatingCircleEntry> check_rotating_circle(const SymmetryProblem& problem) {
  return {rotating_circle(problem.kernel, "ker_tau"), rotating_circle(problem.h0, "H0"),
          rotating_circle(problem.h1, "H1")};
}

DiagnosticsReport diagnose(const SymmetryProblem& problem) {
  DiagnosticsReport r;
  r.admissibility = check_admissibility(problem);
  r.coercivity = check_coercivity(problem);
  r.bound_to_collisions_risk = !r.admissibility.tau_rho.holds;
  r.rotating_circle = check_rotating_circle(problem);
  r.projected_rank = static_cast<int>(CoefficientProjector(problem).rank());

  bool commutes = true;
  for (const auto& g : problem.group.elements())
    commutes = commutes && (g.rho * problem.omega - problem.omega * g.rho).cwiseAbs().maxCoeff() <= 1e-12;
  if (!commutes) r.notes.push_back("Omega does not commute with every rho(g): the rotating-frame action is not G-invariant");
  if (!r.coercivity.coercive) r.notes.push_back("X^G is nonzero: the action need not be coercive");
  r.notes.push_back("non-reducibility (ii) proxy: projected path space has dimension " +
                    std::to_string(r.projected_rank) + "; minimal-period condition (iii) is not checked");
  return r;
}

OrbitVerification verify_path(const DiscretizedPath& path, const SymmetryProblem& problem, int seam_stride) {
  const auto count = static_cast<long>(path.size());
  const double dt = path.time_step;
  const int n = path.n;
  auto at = [&](long h) -> const Eigen::MatrixXd& {
    return path.positions[static_cast<std::size_t>(((h % count) + count) % count)];
  };

  OrbitVerification v;
  v.min_pairwise_distance = std::numeric_limits<double>::infinity();
  const long margin = std::max<long>(1, seam_stride / 20);
  std::vector<double> energy(static_cast<std::size_t>(count));
  std::vector<double> speed(static_cast<std::size_t>(count));
  for (long h = 0; h < count; ++h) {
    const Eigen::MatrixXd& y = at(h);
    const Eigen::MatrixXd vel = (at(h + 1) - at(h - 1)) / (2.0 * dt);
    const Eigen::MatrixXd acc = (at(h + 1) - 2.0 * y + at(h - 1)) / (dt * dt);
    const PotentialPoint u = problem.potential.is_zero()
                                 ? PotentialPoint{0.0, Eigen::MatrixXd::Zero(n, path.d), {}}
                                 : potential_point(y, problem.potential, problem.masses, false);
    const long offset = seam_stride > 0 ? h % seam_stride : margin;
    const bool interior = offset >= margin && offset <= seam_stride - margin;
    double kinetic = 0.0;
    double speed_max = 0.0;
    for (int i = 0; i < n; ++i) {
      const double m = problem.masses[static_cast<std::size_t>(i)];
      const Eigen::VectorXd yi = y.row(i).transpose();
      const Eigen::VectorXd vi = vel.row(i).transpose();
      const Eigen::VectorXd lhs =
          m * (acc.row(i).transpose() - 2.0 * problem.omega * vi + problem.omega * problem.omega * yi);
      const Eigen::VectorXd force = u.gradient.row(i).transpose();
      const double res = (lhs - force).norm() / (1.0 + force.norm());
      v.max_equation_residual = std::max(v.max_equation_residual, res);
      if (interior) v.interior_equation_residual = std::max(v.interior_equation_residual, res);
      kinetic += 0.5 * m * (vi.squaredNorm() - (problem.omega * yi).squaredNorm());
      speed_max = std::max(speed_max, vi.norm());
      for (int j = i + 1; j < n; ++j) v.min_pairwise_distance = std::min(v.min_pairwise_distance, (y.row(i) - y.row(j)).norm());
    }
    energy[static_cast<std::size_t>(h)] = kinetic - u.value;
    speed[static_cast<std::size_t>(h)] = speed_max;
  }

  const double vmax = *std::max_element(speed.begin(), speed.end());
  if (seam_stride > 0 && vmax > 0.0) {
    for (long s = 0; s < count; s += seam_stride) {
      const Eigen::MatrixXd left = (3.0 * at(s) - 4.0 * at(s - 1) + at(s - 2)) / (2.0 * dt);
      const Eigen::MatrixXd right = (-3.0 * at(s) + 4.0 * at(s + 1) - at(s + 2)) / (2.0 * dt);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, (left.row(i) - right.row(i)).norm());
      v.junction_velocity_mismatch = std::max(v.junction_velocity_mismatch, worst / vmax);
    }
  }

  const auto [lo, hi] = std::minmax_element(energy.begin(), energy.end());
  double mean = 0.0;
  for (double e : energy) mean += e;
  mean /= static_cast<double>(count);
  v.energy_drift_along_period = std::abs(mean) > 0.0 ? (*hi - *lo) / std::abs(mean) : (*hi - *lo);
  return v;
}

OrbitVerification verify_orbit(const PathCoefficients& coefficients, const SymmetryProblem& problem,
                               int dense_samples) {
  return verify_path(extend_to_period(coefficients, problem, dense_samples), problem, dense_samples);
}

OrbitVerification verify_orbit(const MinimizationResult& result, const SymmetryProblem& problem, int dense_samples) {
  return verify_orbit(result.fourier_coeff, problem, dense_samples);
}

}  // namespace eqorb
