#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eqorb/errors.hpp"
#include "eqorb/fourier_path.hpp"
#include "eqorb/projectors.hpp"
#include "support.hpp"

using namespace eqorb;
using eqorb::testing::random_vector;

namespace {

SymmetryProblem trivial_problem(int f, int s) {
  return build_problem(eqorb::testing::free_three_body_spec(f, s, Eigen::MatrixXd::Zero(2, 2)));
}

Eigen::VectorXd center_of_mass(const Eigen::MatrixXd& y, const std::vector<double>& m) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i) c += m[static_cast<std::size_t>(i)] * y.row(i).transpose();
  return c;
}

}  // namespace

TEST_CASE("basis tables") {
  CHECK_THROWS_AS(BasisTables::make(4, 7), AliasError);
  CHECK_THROWS_AS(BasisTables::make(0, 1), AliasError);
  const BasisTables t = BasisTables::make(3, 8);
  CHECK(t.values.rows() == 5);
  CHECK(t.values.cols() == 9);
  CHECK(t.values(0, 0) == 1.0);
  CHECK(t.values(4, 8) == 1.0);
  CHECK(t.time(8) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("reconstruct_nth examples") {
  CHECK(reconstruct_nth(Eigen::MatrixXd::Zero(2, 2), {1, 1, 1}).isZero(0.0));
  Eigen::MatrixXd free(2, 2);
  free << 1, 0, 0, 1;
  const Eigen::MatrixXd full = reconstruct_nth(free, {1, 1, 1});
  CHECK(full(2, 0) == -1.0);
  CHECK(full(2, 1) == -1.0);
  Eigen::MatrixXd one(1, 2);
  one << 2, 0;
  const Eigen::MatrixXd two = reconstruct_nth(one, {1, 2});
  CHECK(two(1, 0) == -1.0);
  CHECK(two(1, 1) == 0.0);
}

TEST_CASE("build_path examples") {
  const SymmetryProblem p = trivial_problem(2, 8);
  PathCoefficients a(2, 2, 2);
  Eigen::MatrixXd c(2, 2);
  c << 0.3, -1, 2, 0.5;
  a.set_block(0, c);
  a.set_block(3, c);
  const DiscretizedPath path = build_path(a, 8, p);
  const Eigen::MatrixXd full = reconstruct_nth(c, p.masses);
  for (const auto& y : path.positions) CHECK((y - full).norm() < 1e-15);

  auto two = eqorb::testing::free_three_body_spec(1, 2, Eigen::MatrixXd::Zero(2, 2));
  two.n = 2;
  two.masses = {1, 1};
  two.rot_gen = GroupElement::identity(2, 2);
  const SymmetryProblem q = build_problem(two);
  PathCoefficients e(1, 1, 2);
  e.at(1, 0, 0) = 0.7;
  e.at(1, 0, 1) = -0.2;
  const DiscretizedPath sine = build_path(e, 2, q);
  REQUIRE(sine.size() == 3);
  CHECK(sine.positions[0].row(0).norm() == 0.0);
  CHECK(sine.positions[1](0, 0) == doctest::Approx(0.7));
  CHECK(sine.positions[1](0, 1) == doctest::Approx(-0.2));
  CHECK(sine.positions[2].row(0).norm() < 1e-15);
  CHECK_THROWS_AS(build_path(e, 1, q), AliasError);
}

TEST_CASE("build_path agrees with naive summation, is linear and interpolates endpoints") {
  const int f = 6, s = 40;
  const SymmetryProblem p = trivial_problem(f, s);
  std::mt19937_64 gen(21);
  const PathCoefficients a(f, 2, 2, random_vector(p.coefficient_count(), gen));
  const PathCoefficients b(f, 2, 2, random_vector(p.coefficient_count(), gen));
  const DiscretizedPath pa = build_path(a, s, p);
  double worst = 0.0;
  for (int h = 0; h <= s; ++h) {
    const double t = h * std::numbers::pi / s;
    Eigen::MatrixXd y = (1.0 - t / std::numbers::pi) * a.block(0) + (t / std::numbers::pi) * a.block(f + 1);
    for (int k = 1; k <= f; ++k) y += std::sin(k * t) * a.block(k);
    worst = std::max(worst, (reconstruct_nth(y, p.masses) - pa.positions[h]).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-13);

  CHECK(pa.positions.front() == reconstruct_nth(a.block(0), p.masses));
  CHECK(pa.positions.back() == reconstruct_nth(a.block(f + 1), p.masses));

  const double alpha = 0.7, beta = -1.3;
  const PathCoefficients c(f, 2, 2, alpha * a.flat() + beta * b.flat());
  const DiscretizedPath pb = build_path(b, s, p);
  const DiscretizedPath pc = build_path(c, s, p);
  double lin = 0.0;
  for (int h = 0; h <= s; ++h)
    lin = std::max(lin, (pc.positions[h] - alpha * pa.positions[h] - beta * pb.positions[h]).cwiseAbs().maxCoeff());
  CHECK(lin < 1e-12);
  for (const auto& y : pa.positions) CHECK(center_of_mass(y, p.masses).norm() < 1e-13);
}

TEST_CASE("velocities match finite differences") {
  const int f = 5, s = 4000;
  const SymmetryProblem p = trivial_problem(f, s);
  std::mt19937_64 gen(2);
  const PathCoefficients a(f, 2, 2, random_vector(p.coefficient_count(), gen));
  const DiscretizedPath path = build_path(a, s, p);
  const double dt = std::numbers::pi / s;
  for (int h = 1; h < s; h += 397) {
    const Eigen::MatrixXd fd = (path.positions[h + 1] - path.positions[h - 1]) / (2 * dt);
    CHECK((fd - path.velocities[h]).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("extension of a trivial group returns the fundamental samples") {
  const SymmetryProblem p = trivial_problem(3, 16);
  std::mt19937_64 gen(8);
  const CoefficientProjector proj(p);
  const PathCoefficients a(3, 2, 2, proj.apply(random_vector(p.coefficient_count(), gen)));
  const DiscretizedPath ext = extend_to_period(a, p, 16);
  const DiscretizedPath base = build_path(a, 16, p);
  REQUIRE(ext.size() == 16);
  CHECK(ext.periodic);
  for (int h = 0; h < 16; ++h) CHECK(ext.positions[h] == base.positions[h]);
}

TEST_CASE("brake extension negates the reversed first half") {
  auto spec = eqorb::testing::free_three_body_spec(3, 20, Eigen::MatrixXd::Zero(2, 2));
  spec.action_type = ActionType::brake;
  spec.ref_gen = GroupElement::make(-Eigen::MatrixXd::Identity(2, 2), Permutation::identity(3));
  const SymmetryProblem p = build_problem(spec);
  REQUIRE(p.quotient_order == 2);
  std::mt19937_64 gen(9);
  const CoefficientProjector proj(p);
  const PathCoefficients a(3, 2, 2, proj.apply(random_vector(p.coefficient_count(), gen)));
  const int s = 20;
  const DiscretizedPath ext = extend_to_period(a, p, s);
  REQUIRE(ext.size() == 2 * static_cast<std::size_t>(s));
  for (int k = 1; k < s; ++k) CHECK((ext.positions[s + k] + ext.positions[s - k]).norm() < 1e-13);
  // The brake endpoints are fixed by -1, so the path starts and turns at the origin.
  CHECK(ext.positions[0].norm() < 1e-13);
  CHECK(ext.positions[s].norm() < 1e-13);
}

TEST_CASE("D6 extension: choreography, restriction and centre of mass") {
  const int s = 60;
  const SymmetryProblem d6 = eqorb::testing::d6_problem(s, 24);
  const CoefficientProjector proj(d6);
  std::mt19937_64 gen(10);
  const PathCoefficients a(24, 2, 2, proj.apply(random_vector(d6.coefficient_count(), gen)));
  const DiscretizedPath ext = extend_to_period(a, d6, s);
  const DiscretizedPath base = build_path(a, s, d6);
  const int total = static_cast<int>(ext.size());
  REQUIRE(total == 6 * s);
  for (int h = 0; h <= s; ++h) CHECK(ext.positions[h] == base.positions[h]);
  // Each body follows the previous one a third of a period later.
  const int third = total / 3;
  double worst = 0.0;
  for (int h = 0; h < total; ++h) {
    const int later = (h + third) % total;
    worst = std::max(worst, (ext.positions[later].row(1) - ext.positions[h].row(0)).norm());
    worst = std::max(worst, (ext.positions[later].row(2) - ext.positions[h].row(1)).norm());
    worst = std::max(worst, (ext.positions[later].row(0) - ext.positions[h].row(2)).norm());
    worst = std::max(worst, center_of_mass(ext.positions[h], d6.masses).norm());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("act_on_coefficients matches the pointwise action") {
  const SymmetryProblem d6 = eqorb::testing::d6_problem(30, 5);
  std::mt19937_64 gen(12);
  const PathCoefficients a(5, 2, 2, random_vector(d6.coefficient_count(), gen));
  const DiscretizedPath base = build_path(a, 30, d6);
  for (const auto& g : d6.group.elements()) {
    const DiscretizedPath moved = build_path(act_on_coefficients(g, a, d6.masses), 30, d6);
    for (int h = 0; h <= 30; ++h) CHECK((moved.positions[h] - g.act(base.positions[h])).norm() < 1e-12);
  }
}

TEST_CASE("path coefficient layout") {
  PathCoefficients a(2, 2, 3);
  CHECK(a.flat().size() == 4 * 2 * 3);
  a.at(1, 1, 2) = 5.0;
  CHECK(a.flat()((1 * 2 + 1) * 3 + 2) == 5.0);
  CHECK(a.block(1)(1, 2) == 5.0);
  CHECK_THROWS_AS(PathCoefficients(2, 2, 3, Eigen::VectorXd::Zero(5)), DimensionMismatch);
  const SymmetryProblem d6 = eqorb::testing::d6_problem();
  CHECK(PathCoefficients::zeros(d6).flat().size() == 104);
  CHECK(PathCoefficients::zeros(d6).matches(d6));
}
