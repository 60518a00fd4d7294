#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eqorb {

/// Generator set whose closure exceeds the element cap.
class ClosureOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible (n, d) or malformed shapes.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sample count too small to resolve the sine basis on the grid.
class AliasError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Persisted file does not match the expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects every failed invariant of a problem instance.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> failures);

  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  std::vector<std::string> failures_;
};

/// Potential evaluated at (or closer than the tolerance to) a collision.
class CollisionError : public std::runtime_error {
 public:
  CollisionError(int sample, double time, int body_i, int body_j, double distance);

  int sample() const noexcept { return sample_; }
  double time() const noexcept { return time_; }
  int body_i() const noexcept { return body_i_; }
  int body_j() const noexcept { return body_j_; }
  double distance() const noexcept { return distance_; }

 private:
  int sample_;
  double time_;
  int body_i_;
  int body_j_;
  double distance_;
};

}  // namespace eqorb
