#include "eqorb/problem.hpp"

#include <deque>

#include "eqorb/errors.hpp"

namespace eqorb {

namespace {

int positive_mod(int value, int modulus) { return ((value % modulus) + modulus) % modulus; }

TimeMap compose_time(const TimeMap& a, const TimeMap& b, int modulus) {
  return TimeMap{a.sign * b.sign, positive_mod(a.sign * b.shift + a.shift, modulus)};
}

struct TimedClosure {
  FiniteGroup group;
  std::vector<TimeMap> time_maps;
};

// Breadth-first closure that carries tau along each word. Reaching the same
// (rho, sigma) pair with two different time maps means the declared roles of
// the generators do not define a homomorphism tau.
TimedClosure timed_closure(const std::vector<GroupElement>& gens, const std::vector<TimeMap>& gen_times,
                           int modulus, std::vector<std::string>& failures) {
  std::vector<GroupElement> elements{GroupElement::identity(gens.front().bodies(), gens.front().dim())};
  std::vector<TimeMap> times{TimeMap{}};
  std::deque<std::size_t> queue{0};
  bool reported = false;
  while (!queue.empty()) {
    const std::size_t current = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      GroupElement product = compose(elements[current], gens[g]);
      const TimeMap time = compose_time(times[current], gen_times[g], modulus);
      bool found = false;
      for (std::size_t e = 0; e < elements.size(); ++e) {
        if (elements[e].approx_equal(product)) {
          found = true;
          if (!(times[e] == time) && !reported) {
            failures.push_back("generator roles are inconsistent with the declared action type: element rho/sigma " +
                               product.sigma.to_cycles() + " acts on time in two different ways");
            reported = true;
          }
          break;
        }
      }
      if (found) continue;
      if (elements.size() >= kDefaultClosureCap) {
        throw ClosureOverflow("symmetry group exceeds " + std::to_string(kDefaultClosureCap) + " elements");
      }
      elements.push_back(std::move(product));
      times.push_back(time);
      queue.push_back(elements.size() - 1);
    }
  }
  return TimedClosure{FiniteGroup(std::move(elements), gens), std::move(times)};
}

}  // namespace

std::string to_string(ActionType type) {
  switch (type) {
    case ActionType::cyclic: return "cyclic";
    case ActionType::dihedral: return "dihedral";
    case ActionType::brake: return "brake";
  }
  return "unknown";
}

GroupElement SymmetryProblem::pi_reflection() const {
  switch (action_type) {
    case ActionType::dihedral: return compose(rot_gen, *ref_gen);
    case ActionType::brake: return *ref_gen;
    case ActionType::cyclic: break;
  }
  throw std::logic_error("cyclic actions have no time reflection");
}

std::pair<FiniteGroup, FiniteGroup> boundary_subgroups(ActionType type, const FiniteGroup& kernel,
                                                       const GroupElement& rot_gen,
                                                       const std::optional<GroupElement>& ref_gen) {
  if (type == ActionType::cyclic) return {kernel, kernel};
  if (!ref_gen) throw std::invalid_argument(to_string(type) + " action needs a reflection generator");

  auto with = [&](const GroupElement& extra) {
    std::vector<GroupElement> gens = kernel.generators();
    gens.push_back(extra);
    return group_closure(gens);
  };
  FiniteGroup h0 = with(*ref_gen);
  if (type == ActionType::brake) return {h0, h0};
  return {h0, with(compose(rot_gen, *ref_gen))};
}

SymmetryProblem build_problem(const ProblemSpec& spec) {
  std::vector<std::string> failures;
  auto fail_now = [&] { throw ValidationError(failures); };

  if (spec.n < 2) failures.push_back("need at least 2 bodies (NOB = " + std::to_string(spec.n) + ")");
  if (spec.d < 1) failures.push_back("dimension must be positive (dim = " + std::to_string(spec.d) + ")");
  if (!failures.empty()) fail_now();

  if (static_cast<int>(spec.masses.size()) != spec.n) {
    failures.push_back("expected " + std::to_string(spec.n) + " masses, got " + std::to_string(spec.masses.size()));
  }
  for (std::size_t i = 0; i < spec.masses.size(); ++i) {
    if (!(spec.masses[i] > 0.0)) failures.push_back("mass of body " + std::to_string(i + 1) + " is not positive");
  }
  if (spec.fourier_length < 0) failures.push_back("F must be non-negative");
  if (spec.samples < 2 || spec.samples < 2 * spec.fourier_length) {
    failures.push_back("S = " + std::to_string(spec.samples) + " must be at least max(2, 2F)");
  }
  if (spec.omega.rows() != spec.d || spec.omega.cols() != spec.d) {
    failures.push_back("Omega must be " + std::to_string(spec.d) + "x" + std::to_string(spec.d));
  } else if ((spec.omega + spec.omega.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    failures.push_back("Omega is not antisymmetric");
  }

  auto check_shape = [&](const GroupElement& g, const std::string& what) {
    if (g.bodies() != spec.n || g.dim() != spec.d) {
      failures.push_back(what + " acts on " + std::to_string(g.bodies()) + " bodies in dimension " +
                         std::to_string(g.dim()) + ", expected " + std::to_string(spec.n) + "/" +
                         std::to_string(spec.d));
      return false;
    }
    return true;
  };
  bool shapes_ok = check_shape(spec.rot_gen, "rotation generator");
  for (const auto& k : spec.kernel_generators) shapes_ok = check_shape(k, "kernel generator") && shapes_ok;
  const bool needs_ref = spec.action_type != ActionType::cyclic;
  if (needs_ref && !spec.ref_gen) failures.push_back(to_string(spec.action_type) + " action needs a reflection generator");
  if (needs_ref && spec.ref_gen) shapes_ok = check_shape(*spec.ref_gen, "reflection generator") && shapes_ok;
  if (!shapes_ok || !failures.empty()) fail_now();

  SymmetryProblem p;
  p.symmetry_name = spec.symmetry_name;
  p.n = spec.n;
  p.d = spec.d;
  p.masses = spec.masses;
  p.action_type = spec.action_type;
  p.rot_gen = spec.rot_gen;
  if (needs_ref) p.ref_gen = spec.ref_gen;
  p.omega = spec.omega;
  p.fourier_length = spec.fourier_length;
  p.samples = spec.samples;
  p.potential = spec.potential;

  p.kernel = spec.kernel_generators.empty() ? FiniteGroup::trivial(spec.n, spec.d)
                                            : group_closure(spec.kernel_generators);
  p.rotation_order = quotient_order(p.rot_gen, p.kernel);

  std::vector<GroupElement> gens = spec.kernel_generators;
  std::vector<TimeMap> gen_times(gens.size(), TimeMap{});
  switch (p.action_type) {
    case ActionType::cyclic:
      p.quotient_order = p.rotation_order;
      gens.push_back(p.rot_gen);
      gen_times.push_back(TimeMap{1, 1});
      break;
    case ActionType::dihedral:
      p.quotient_order = 2 * p.rotation_order;
      gens.push_back(p.rot_gen);
      gen_times.push_back(TimeMap{1, 2 % p.quotient_order});
      gens.push_back(*p.ref_gen);
      gen_times.push_back(TimeMap{-1, 0});
      break;
    case ActionType::brake:
      if (p.rotation_order != 1) {
        failures.push_back("brake action: the rotation generator must lie in ker tau (its order in the quotient is " +
                           std::to_string(p.rotation_order) + ")");
        fail_now();
      }
      p.quotient_order = 2;
      gens.push_back(*p.ref_gen);
      gen_times.push_back(TimeMap{-1, 0});
      break;
  }
  if (p.kernel.contains(p.ref_gen.value_or(p.rot_gen)) && needs_ref) {
    failures.push_back("reflection generator lies in ker tau");
  }

  TimedClosure closure = timed_closure(gens, gen_times, p.quotient_order, failures);
  p.group = std::move(closure.group);
  p.time_maps = std::move(closure.time_maps);

  std::size_t time_trivial = 0;
  for (const auto& t : p.time_maps) time_trivial += t.is_identity() ? 1 : 0;
  if (failures.empty() && time_trivial != p.kernel.order()) {
    failures.push_back("elements acting trivially on time (" + std::to_string(time_trivial) +
                       ") do not match the declared kernel (" + std::to_string(p.kernel.order()) + ")");
  }

  if (auto violation = check_mass_compatibility(p.masses, p.group)) {
    failures.push_back("sigma exchanges bodies " + std::to_string(violation->body_i + 1) + " and " +
                       std::to_string(violation->body_j + 1) + " with different masses " +
                       std::to_string(violation->mass_i) + " != " + std::to_string(violation->mass_j));
  }
  if (!failures.empty()) fail_now();

  std::tie(p.h0, p.h1) = boundary_subgroups(p.action_type, p.kernel, p.rot_gen, p.ref_gen);
  return p;
}

}  // namespace eqorb
