#include "eqorb/permutation.hpp"

#include <cctype>
#include <numeric>

#include "eqorb/errors.hpp"

namespace eqorb {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int image : images_) {
    if (image < 0 || image >= size() || seen[static_cast<std::size_t>(image)]) {
      throw DimensionMismatch("permutation images are not a bijection");
    }
    seen[static_cast<std::size_t>(image)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

Permutation Permutation::from_cycles(std::string_view text, int n) {
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  std::vector<bool> touched(static_cast<std::size_t>(n), false);

  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) {
    throw ParseError("cycle notation \"" + std::string(text) + "\": " + what);
  };

  skip_space();
  while (pos < text.size()) {
    if (text[pos] != '(') fail("expected '('");
    ++pos;
    std::vector<int> cycle;
    skip_space();
    while (pos < text.size() && text[pos] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) fail("expected a body index");
      int value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        ++pos;
      }
      if (value < 1 || value > n) fail("index " + std::to_string(value) + " outside 1.." + std::to_string(n));
      cycle.push_back(value - 1);
      skip_space();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        skip_space();
      }
    }
    if (pos >= text.size()) fail("unterminated cycle");
    ++pos;  // ')'
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const auto from = static_cast<std::size_t>(cycle[k]);
      if (touched[from]) fail("cycles are not disjoint");
      touched[from] = true;
      images[from] = cycle[(k + 1) % cycle.size()];
    }
    skip_space();
  }
  return Permutation(std::move(images));
}

bool Permutation::is_identity() const noexcept {
  for (int i = 0; i < size(); ++i) {
    if (images_[static_cast<std::size_t>(i)] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = i;
  return Permutation(std::move(inv));
}

std::string Permutation::to_cycles() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (int start = 0; start < size(); ++start) {
    if (seen[static_cast<std::size_t>(start)] || images_[static_cast<std::size_t>(start)] == start) continue;
    out += '(';
    int i = start;
    bool first = true;
    while (!seen[static_cast<std::size_t>(i)]) {
      seen[static_cast<std::size_t>(i)] = true;
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
      i = images_[static_cast<std::size_t>(i)];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw DimensionMismatch("composing permutations of different degree");
  std::vector<int> images(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) images[static_cast<std::size_t>(i)] = a(b(i));
  return Permutation(std::move(images));
}

}  // namespace eqorb
