#include "eqorb/group.hpp"

#include <deque>

#include "eqorb/errors.hpp"

namespace eqorb {

namespace {

std::string sigma_key(const Permutation& p) {
  std::string key;
  key.reserve(p.images().size() * 3);
  for (int image : p.images()) {
    key += std::to_string(image);
    key += ',';
  }
  return key;
}

void require_same_shape(const GroupElement& a, const GroupElement& b) {
  if (a.dim() != b.dim() || a.bodies() != b.bodies()) {
    throw DimensionMismatch("group elements act on different (n, d)");
  }
}

}  // namespace

GroupElement GroupElement::identity(int n, int d) {
  return GroupElement{Eigen::MatrixXd::Identity(d, d), Permutation::identity(n)};
}

GroupElement GroupElement::make(Eigen::MatrixXd rho, Permutation sigma) {
  if (rho.rows() != rho.cols()) throw DimensionMismatch("rho must be square");
  const Eigen::MatrixXd gram = rho.transpose() * rho;
  const double defect = (gram - Eigen::MatrixXd::Identity(rho.rows(), rho.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    throw DimensionMismatch("rho is not orthogonal (|rho^T rho - I| = " + std::to_string(defect) + ")");
  }
  return GroupElement{std::move(rho), std::move(sigma)};
}

bool GroupElement::is_identity(double tol) const {
  if (!sigma.is_identity()) return false;
  return (rho - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
}

bool GroupElement::approx_equal(const GroupElement& other, double tol) const {
  if (sigma != other.sigma || dim() != other.dim()) return false;
  return (rho - other.rho).cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXd GroupElement::act(const Eigen::MatrixXd& config) const {
  if (config.rows() != bodies() || config.cols() != dim()) {
    throw DimensionMismatch("configuration shape does not match the group element");
  }
  Eigen::MatrixXd out(config.rows(), config.cols());
  for (int j = 0; j < bodies(); ++j) {
    out.row(sigma(j)) = config.row(j) * rho.transpose();
  }
  return out;
}

Eigen::MatrixXd GroupElement::configuration_matrix() const {
  const int n = bodies();
  const int d = dim();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n * d, n * d);
  for (int j = 0; j < n; ++j) b.block(sigma(j) * d, j * d, d, d) = rho;
  return b;
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  require_same_shape(a, b);
  return GroupElement{a.rho * b.rho, compose(a.sigma, b.sigma)};
}

GroupElement inverse(const GroupElement& g) { return GroupElement{g.rho.transpose(), g.sigma.inverse()}; }

GroupElement power(const GroupElement& g, int exponent) {
  GroupElement base = exponent < 0 ? inverse(g) : g;
  GroupElement out = GroupElement::identity(g.bodies(), g.dim());
  for (int k = 0; k < std::abs(exponent); ++k) out = compose(out, base);
  return out;
}

FiniteGroup::FiniteGroup(std::vector<GroupElement> elements, std::vector<GroupElement> generators)
    : elements_(std::move(elements)), generators_(std::move(generators)) {
  if (elements_.empty()) throw DimensionMismatch("a group has at least the identity");
  for (std::size_t i = 0; i < elements_.size(); ++i) by_sigma_.emplace(sigma_key(elements_[i].sigma), i);
}

FiniteGroup FiniteGroup::trivial(int n, int d) {
  return FiniteGroup({GroupElement::identity(n, d)}, {});
}

std::optional<std::size_t> FiniteGroup::index_of(const GroupElement& g, double tol) const {
  auto [lo, hi] = by_sigma_.equal_range(sigma_key(g.sigma));
  std::optional<std::size_t> best;
  for (auto it = lo; it != hi; ++it) {
    if (elements_[it->second].approx_equal(g, tol) && (!best || it->second < *best)) best = it->second;
  }
  return best;
}

bool FiniteGroup::is_subgroup_of(const FiniteGroup& other) const {
  for (const auto& g : elements_) {
    if (!other.contains(g)) return false;
  }
  return true;
}

FiniteGroup group_closure(const std::vector<GroupElement>& generators, std::size_t cap) {
  if (generators.empty()) throw DimensionMismatch("group_closure needs at least one generator");
  for (const auto& g : generators) require_same_shape(generators.front(), g);

  std::vector<GroupElement> elements{GroupElement::identity(generators.front().bodies(), generators.front().dim())};
  std::unordered_multimap<std::string, std::size_t> seen;
  seen.emplace(sigma_key(elements.front().sigma), 0);

  auto lookup = [&](const GroupElement& g) {
    auto [lo, hi] = seen.equal_range(sigma_key(g.sigma));
    for (auto it = lo; it != hi; ++it) {
      if (elements[it->second].approx_equal(g)) return true;
    }
    return false;
  };

  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t current = queue.front();
    queue.pop_front();
    for (const auto& gen : generators) {
      GroupElement product = compose(elements[current], gen);
      if (lookup(product)) continue;
      if (elements.size() >= cap) {
        throw ClosureOverflow("group closure exceeds " + std::to_string(cap) +
                              " elements; generators may have infinite order");
      }
      seen.emplace(sigma_key(product.sigma), elements.size());
      elements.push_back(std::move(product));
      queue.push_back(elements.size() - 1);
    }
  }
  return FiniteGroup(std::move(elements), generators);
}

int quotient_order(const GroupElement& rot, const FiniteGroup& kernel, int cap) {
  GroupElement p = rot;
  for (int m = 1; m <= cap; ++m) {
    if (kernel.contains(p)) return m;
    p = compose(p, rot);
  }
  throw ClosureOverflow("no power of the rotation generator up to " + std::to_string(cap) + " lies in the kernel");
}

std::optional<MassViolation> check_mass_compatibility(const std::vector<double>& masses, const FiniteGroup& group) {
  for (std::size_t e = 0; e < group.order(); ++e) {
    const Permutation inv = group[e].sigma.inverse();
    for (int i = 0; i < inv.size(); ++i) {
      const int j = inv(i);
      if (j != i && masses[static_cast<std::size_t>(i)] != masses[static_cast<std::size_t>(j)]) {
        return MassViolation{e, i, j, masses[static_cast<std::size_t>(i)], masses[static_cast<std::size_t>(j)]};
      }
    }
  }
  return std::nullopt;
}

}  // namespace eqorb
