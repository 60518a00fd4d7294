#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqorb/permutation.hpp"

namespace eqorb {

inline constexpr double kMatrixTolerance = 1e-12;
inline constexpr std::size_t kDefaultClosureCap = 10000;

/// Spatial part rho(g) in O(d) paired with the body relabelling sigma(g).
struct GroupElement {
  Eigen::MatrixXd rho;
  Permutation sigma;

  int dim() const noexcept { return static_cast<int>(rho.rows()); }
  int bodies() const noexcept { return sigma.size(); }

  static GroupElement identity(int n, int d);

  /// Checks orthogonality (1e-10) before building the element.
  static GroupElement make(Eigen::MatrixXd rho, Permutation sigma);

  bool is_identity(double tol = kMatrixTolerance) const;
  bool approx_equal(const GroupElement& other, double tol = kMatrixTolerance) const;

  /// (g x)_i = rho(g) x_{sigma(g)^-1 i} on an n x d configuration.
  Eigen::MatrixXd act(const Eigen::MatrixXd& config) const;

  /// The (n d) x (n d) matrix of act() on body-major stacked configurations.
  Eigen::MatrixXd configuration_matrix() const;
};

GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);
GroupElement power(const GroupElement& g, int exponent);

/// Finite set of elements closed under composition, in breadth-first order
/// from the identity. Element 0 is always the identity.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  FiniteGroup(std::vector<GroupElement> elements, std::vector<GroupElement> generators);

  /// The group {1} acting on n bodies in R^d.
  static FiniteGroup trivial(int n, int d);

  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<GroupElement>& elements() const noexcept { return elements_; }
  const std::vector<GroupElement>& generators() const noexcept { return generators_; }
  const GroupElement& operator[](std::size_t i) const { return elements_[i]; }

  int bodies() const { return elements_.front().bodies(); }
  int dim() const { return elements_.front().dim(); }

  std::optional<std::size_t> index_of(const GroupElement& g, double tol = kMatrixTolerance) const;
  bool contains(const GroupElement& g, double tol = kMatrixTolerance) const { return index_of(g, tol).has_value(); }

  /// True when every element of this group belongs to `other`.
  bool is_subgroup_of(const FiniteGroup& other) const;

 private:
  std::vector<GroupElement> elements_;
  std::vector<GroupElement> generators_;
  std::unordered_multimap<std::string, std::size_t> by_sigma_;
};

/// Smallest group containing the generators, built breadth-first from the
/// identity with right multiplication by generators in the given order.
/// Throws ClosureOverflow when the group would exceed `cap` elements.
FiniteGroup group_closure(const std::vector<GroupElement>& generators, std::size_t cap = kDefaultClosureCap);

/// Smallest m >= 1 with rot^m in `kernel`.
int quotient_order(const GroupElement& rot, const FiniteGroup& kernel, int cap = static_cast<int>(kDefaultClosureCap));

struct MassViolation {
  std::size_t element;  // index into the group
  int body_i;           // 0-based
  int body_j;
  double mass_i;
  double mass_j;
};

/// Bodies exchanged by sigma must carry equal masses (exact comparison).
std::optional<MassViolation> check_mass_compatibility(const std::vector<double>& masses, const FiniteGroup& group);

}  // namespace eqorb
