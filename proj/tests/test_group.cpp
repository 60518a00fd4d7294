#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <set>

#include "eqorb/errors.hpp"
#include "eqorb/group.hpp"
#include "eqorb/problem.hpp"
#include "support.hpp"

using namespace eqorb;
using eqorb::testing::rotation2;

namespace {

std::set<std::vector<int>> sigma_set(const FiniteGroup& g) {
  std::set<std::vector<int>> out;
  for (const auto& e : g.elements()) out.insert(e.sigma.images());
  return out;
}

// Order of rot * K in G / K by enumerating cosets as index sets.
int coset_order(const GroupElement& rot, const FiniteGroup& kernel) {
  std::vector<GroupElement> gens = kernel.generators();
  gens.push_back(rot);
  const FiniteGroup g = group_closure(gens);
  auto coset_of = [&](const GroupElement& x) {
    std::set<std::size_t> c;
    for (const auto& k : kernel.elements()) c.insert(*g.index_of(compose(x, k)));
    return c;
  };
  const auto identity_coset = coset_of(GroupElement::identity(rot.bodies(), rot.dim()));
  GroupElement x = rot;
  for (int m = 1; m <= static_cast<int>(g.order()); ++m) {
    if (coset_of(x) == identity_coset) return m;
    x = compose(x, rot);
  }
  return -1;
}

}  // namespace

TEST_CASE("cycle notation parsing and printing") {
  const Permutation p = Permutation::from_cycles(" ( 1 , 2 , 3 ) ", 3);
  CHECK(p(0) == 1);
  CHECK(p(1) == 2);
  CHECK(p(2) == 0);
  CHECK(p.to_cycles() == "(1,2,3)");
  CHECK(Permutation::from_cycles("()", 4).is_identity());
  CHECK(Permutation::from_cycles("(1,2)(3,4)", 4).to_cycles() == "(1,2)(3,4)");
  CHECK(compose(p, p.inverse()).is_identity());
  CHECK_THROWS_AS(Permutation::from_cycles("(1,5)", 3), ParseError);
  CHECK_THROWS_AS(Permutation::from_cycles("(1,2)(2,3)", 3), ParseError);
  CHECK_THROWS_AS(Permutation::from_cycles("1,2", 3), ParseError);
}

TEST_CASE("compose examples") {
  const GroupElement s = GroupElement::make(-Eigen::MatrixXd::Identity(2, 2), Permutation::from_cycles("(1,2)", 2));
  CHECK(compose(s, s).is_identity());
  const GroupElement id = GroupElement::identity(2, 2);
  CHECK(compose(id, s).approx_equal(s));
  const GroupElement r = GroupElement::make(Eigen::MatrixXd::Identity(2, 2), Permutation::from_cycles("(1,2,3)", 3));
  CHECK(compose(compose(r, r), r).is_identity());
  const GroupElement other = GroupElement::identity(3, 2);
  CHECK_THROWS_AS(compose(s, other), DimensionMismatch);
  CHECK_THROWS_AS(GroupElement::make(2.0 * Eigen::MatrixXd::Identity(2, 2), Permutation::identity(2)),
                  DimensionMismatch);
}

TEST_CASE("action on configurations moves body j to sigma(j)") {
  const GroupElement r = GroupElement::make(rotation2(std::numbers::pi / 2), Permutation::from_cycles("(1,2,3)", 3));
  Eigen::MatrixXd c(3, 2);
  c << 1, 0, 0, 2, 3, 3;
  const Eigen::MatrixXd out = r.act(c);
  // (g c)_i = rho c_{sigma^-1 i}: body 1 receives rho c_3.
  CHECK((out.row(0).transpose() - r.rho * c.row(2).transpose()).norm() < 1e-15);
  CHECK((out.row(1).transpose() - r.rho * c.row(0).transpose()).norm() < 1e-15);
  Eigen::VectorXd flat(6);
  for (int i = 0; i < 3; ++i) flat.segment(2 * i, 2) = c.row(i).transpose();
  const Eigen::VectorXd via_matrix = r.configuration_matrix() * flat;
  for (int i = 0; i < 3; ++i) CHECK((via_matrix.segment(2 * i, 2) - out.row(i).transpose()).norm() < 1e-15);
}

TEST_CASE("closure examples") {
  const auto p = eqorb::testing::d6_spec();
  const FiniteGroup g = group_closure({p.rot_gen, *p.ref_gen});
  CHECK(g.order() == 6);
  CHECK(g[0].is_identity());
  CHECK(group_closure({GroupElement::identity(3, 2)}).order() == 1);
  const GroupElement half = GroupElement::make(rotation2(std::numbers::pi), Permutation::identity(2));
  CHECK(group_closure({half}).order() == 2);
  const GroupElement irrational = GroupElement::make(rotation2(1.0), Permutation::identity(2));
  CHECK_THROWS_AS(group_closure({irrational}, 500), ClosureOverflow);
}

TEST_CASE("closure is deterministic, idempotent and Lagrange-divisible") {
  const GroupElement a = GroupElement::make(rotation2(std::numbers::pi / 3), Permutation::from_cycles("(1,2,3)", 4));
  const GroupElement b = GroupElement::make((Eigen::MatrixXd(2, 2) << 1, 0, 0, -1).finished(),
                                            Permutation::from_cycles("(1,2)", 4));
  const GroupElement k = GroupElement::make(-Eigen::MatrixXd::Identity(2, 2), Permutation::from_cycles("(3,4)", 4));
  const FiniteGroup g = group_closure({a, b, k});
  const FiniteGroup again = group_closure(g.elements());
  CHECK(again.order() == g.order());
  CHECK(sigma_set(again) == sigma_set(g));
  const FiniteGroup repeat = group_closure({a, b, k});
  for (std::size_t i = 0; i < g.order(); ++i) CHECK(repeat[i].approx_equal(g[i], 0.0));
  const FiniteGroup kernel = group_closure({k});
  CHECK(g.order() % kernel.order() == 0);
  for (const auto& e : g.elements()) CHECK(compose(e, inverse(e)).is_identity(1e-12));
  CHECK(kernel.is_subgroup_of(g));
}

TEST_CASE("quotient order examples") {
  const auto p = eqorb::testing::d6_spec();
  CHECK(quotient_order(p.rot_gen, FiniteGroup::trivial(3, 2)) == 3);
  CHECK(quotient_order(GroupElement::identity(3, 2), FiniteGroup::trivial(3, 2)) == 1);
  Eigen::MatrixXd r4 = Eigen::MatrixXd::Zero(4, 4);
  r4.topLeftCorner(2, 2) = rotation2(std::numbers::pi / 2);
  r4.bottomRightCorner(2, 2) = rotation2(std::numbers::pi / 2);
  CHECK(quotient_order(GroupElement::make(r4, Permutation::identity(2)), FiniteGroup::trivial(2, 4)) == 4);
}

TEST_CASE("quotient order agrees with coset enumeration") {
  std::mt19937_64 gen(11);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4;
    std::vector<int> images{0, 1, 2, 3};
    std::shuffle(images.begin(), images.end(), gen);
    const int k = 1 + static_cast<int>(gen() % 6);
    const GroupElement rot = GroupElement::make(rotation2(2.0 * std::numbers::pi / k), Permutation(images));
    std::vector<int> kimages{0, 1, 2, 3};
    std::shuffle(kimages.begin(), kimages.end(), gen);
    const GroupElement kgen = GroupElement::make(gen() % 2 ? Eigen::MatrixXd::Identity(2, 2).eval()
                                                           : (-Eigen::MatrixXd::Identity(2, 2)).eval(),
                                                 Permutation(kimages));
    const FiniteGroup kernel = group_closure({kgen});
    const FiniteGroup whole = group_closure({kgen, rot});
    if (whole.order() > 48) continue;
    // The kernel must be normal for the quotient to make sense.
    bool normal = true;
    for (const auto& g : whole.elements())
      for (const auto& h : kernel.elements()) normal = normal && kernel.contains(compose(compose(g, h), inverse(g)));
    if (!normal) continue;
    CHECK(quotient_order(rot, kernel) == coset_order(rot, kernel));
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("boundary subgroups") {
  const SymmetryProblem d6 = eqorb::testing::d6_problem();
  CHECK(d6.h0.order() == 2);
  CHECK(d6.h1.order() == 2);
  CHECK(d6.h0.contains(*d6.ref_gen));
  CHECK(d6.h1.contains(compose(d6.rot_gen, *d6.ref_gen)));
  CHECK(d6.kernel.is_subgroup_of(d6.h0));
  CHECK(d6.kernel.is_subgroup_of(d6.h1));

  const FiniteGroup trivial = FiniteGroup::trivial(2, 2);
  auto [c0, c1] = boundary_subgroups(ActionType::cyclic, trivial, GroupElement::identity(2, 2), std::nullopt);
  CHECK(c0.order() == 1);
  CHECK(c1.order() == 1);

  const GroupElement s = GroupElement::make(-Eigen::MatrixXd::Identity(2, 2), Permutation::identity(2));
  auto [b0, b1] = boundary_subgroups(ActionType::brake, trivial, GroupElement::identity(2, 2), s);
  CHECK(b0.order() == 2);
  CHECK(b1.order() == 2);
  CHECK_THROWS(boundary_subgroups(ActionType::dihedral, trivial, GroupElement::identity(2, 2), std::nullopt));
}

TEST_CASE("time maps of the D6 problem") {
  const SymmetryProblem d6 = eqorb::testing::d6_problem();
  CHECK(d6.quotient_order == 6);
  CHECK(d6.rotation_order == 3);
  CHECK(d6.period() == doctest::Approx(6 * std::numbers::pi));
  int reflections = 0;
  for (const auto& t : d6.time_maps) reflections += t.is_reflection() ? 1 : 0;
  CHECK(reflections == 3);
}

TEST_CASE("mass compatibility") {
  const SymmetryProblem d6 = eqorb::testing::d6_problem();
  CHECK_FALSE(check_mass_compatibility({1, 1, 1}, d6.group).has_value());
  CHECK_FALSE(check_mass_compatibility({1, 5, 9}, FiniteGroup::trivial(3, 2)).has_value());
  const GroupElement swap = GroupElement::make(Eigen::MatrixXd::Identity(2, 2), Permutation::from_cycles("(1,2)", 3));
  const auto v = check_mass_compatibility({1, 2, 1}, group_closure({swap}));
  REQUIRE(v.has_value());
  CHECK(((v->body_i == 0 && v->body_j == 1) || (v->body_i == 1 && v->body_j == 0)));

  auto spec = eqorb::testing::d6_spec();
  spec.masses = {1, 2, 1};
  CHECK_THROWS_AS(build_problem(spec), ValidationError);
}

TEST_CASE("build_problem rejects inconsistent data") {
  auto spec = eqorb::testing::d6_spec();
  spec.omega = (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished();
  spec.masses = {1, 1};
  try {
    build_problem(spec);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.failures().size() == 2);
  }
  auto brake = eqorb::testing::d6_spec();
  brake.action_type = ActionType::brake;
  CHECK_THROWS_AS(build_problem(brake), ValidationError);
}
