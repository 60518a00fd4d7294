#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eqorb/problem.hpp"

namespace eqorb {

/// Basis functions on I = [0, pi] sampled at t_h = h pi / S:
/// b_0 = 1 - t/pi, b_k = sin(k t) for 1 <= k <= F, b_{F+1} = t/pi.
struct BasisTables {
  int fourier_length = 0;
  int samples = 0;
  Eigen::MatrixXd values;       // (F+2) x (S+1)
  Eigen::MatrixXd derivatives;  // (F+2) x (S+1)

  static BasisTables make(int fourier_length, int samples);
  double time(int h) const;
};

/// Endpoint configurations A_0, A_{F+1} and sine amplitudes A_1..A_F of the
/// n-1 free bodies. Flat layout: index ((k (n-1) + i) d + p), i.e. k-major,
/// then body, then coordinate.
class PathCoefficients {
 public:
  PathCoefficients() = default;
  PathCoefficients(int fourier_length, int free_bodies, int d);
  PathCoefficients(int fourier_length, int free_bodies, int d, Eigen::VectorXd flat);

  static PathCoefficients zeros(const SymmetryProblem& problem);

  int fourier_length() const noexcept { return fourier_length_; }
  int free_bodies() const noexcept { return free_bodies_; }
  int dim() const noexcept { return dim_; }
  int block_count() const noexcept { return fourier_length_ + 2; }
  int block_size() const noexcept { return free_bodies_ * dim_; }

  const Eigen::VectorXd& flat() const noexcept { return flat_; }
  Eigen::VectorXd& flat() noexcept { return flat_; }

  /// Block k as an (n-1) x d matrix.
  Eigen::MatrixXd block(int k) const;
  void set_block(int k, const Eigen::MatrixXd& value);

  double& at(int k, int body, int p) { return flat_(index(k, body, p)); }
  double at(int k, int body, int p) const { return flat_(index(k, body, p)); }

  bool matches(const SymmetryProblem& problem) const;

 private:
  Eigen::Index index(int k, int body, int p) const {
    return (static_cast<Eigen::Index>(k) * free_bodies_ + body) * dim_ + p;
  }

  int fourier_length_ = 0;
  int free_bodies_ = 0;
  int dim_ = 0;
  Eigen::VectorXd flat_;
};

/// Sampled n-body path with uniform spacing. `periodic` paths cover a whole
/// period with the last sample followed by sample 0; open paths include both
/// endpoints.
struct DiscretizedPath {
  int n = 0;
  int d = 0;
  double time_step = 0.0;
  bool periodic = false;
  std::vector<Eigen::MatrixXd> positions;   // n x d each
  std::vector<Eigen::MatrixXd> velocities;  // empty or same length as positions

  std::size_t size() const noexcept { return positions.size(); }
  double time(std::size_t h) const { return static_cast<double>(h) * time_step; }
  double duration() const { return periodic ? time(size()) : time(size() - 1); }
};

/// Appends x_n = -(1/m_n) sum_{i<n} m_i x_i to the free bodies.
Eigen::MatrixXd reconstruct_nth(const Eigen::MatrixXd& free, const std::vector<double>& masses);

/// Free-body configuration (and velocity) at sample h of the table.
Eigen::MatrixXd free_configuration(const PathCoefficients& a, const BasisTables& tables, int h);
Eigen::MatrixXd free_velocity(const PathCoefficients& a, const BasisTables& tables, int h);

/// Samples y(t_h), h = 0..S, on the fundamental domain, with velocities.
/// Throws AliasError when S < max(2, 2F).
DiscretizedPath build_path(const PathCoefficients& a, int samples, const SymmetryProblem& problem);

/// Full-period path of m S samples (sample m S wraps to 0), obtained by
/// applying the (rho, sigma) action of the rotation and reflection generators.
DiscretizedPath extend_to_period(const PathCoefficients& a, const SymmetryProblem& problem, int samples);

/// Image of a path under a configuration-space element g, block by block:
/// the path t -> g y(t) expressed in coefficients.
PathCoefficients act_on_coefficients(const GroupElement& g, const PathCoefficients& a,
                                     const std::vector<double>& masses);

}  // namespace eqorb
