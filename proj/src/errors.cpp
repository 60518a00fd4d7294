#include "eqorb/errors.hpp"

#include <sstream>

namespace eqorb {

namespace {

std::string join_failures(const std::vector<std::string>& failures) {
  std::string out = "problem validation failed:";
  for (const auto& f : failures) out += "\n  - " + f;
  return out;
}

std::string collision_message(int sample, double time, int i, int j, double distance) {
  std::ostringstream os;
  os << "collision between bodies " << i + 1 << " and " << j + 1 << " (distance " << distance << ")";
  if (sample >= 0) os << " at sample " << sample << ", t = " << time;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> failures)
    : std::runtime_error(join_failures(failures)), failures_(std::move(failures)) {}

CollisionError::CollisionError(int sample, double time, int body_i, int body_j, double distance)
    : std::runtime_error(collision_message(sample, time, body_i, body_j, distance)),
      sample_(sample),
      time_(time),
      body_i_(body_i),
      body_j_(body_j),
      distance_(distance) {}

}  // namespace eqorb
