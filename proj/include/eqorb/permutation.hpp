#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace eqorb {

/// Bijection of {0, ..., n-1}. Printed and parsed 1-based in cycle notation.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n);

  /// Parses products of disjoint cycles such as "(1,2,3)(4,5)". Fixed points
  /// may be omitted; "()" is the identity.
  static Permutation from_cycles(std::string_view text, int n);

  int size() const noexcept { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const noexcept { return images_; }

  bool is_identity() const noexcept;
  Permutation inverse() const;

  /// Canonical cycle notation, 1-based, fixed points omitted.
  std::string to_cycles() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// (a * b)(i) = a(b(i)).
Permutation compose(const Permutation& a, const Permutation& b);

}  // namespace eqorb
