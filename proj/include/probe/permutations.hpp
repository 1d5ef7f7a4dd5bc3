#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace probe {

/// Cycle type of a permutation of four elements.
enum class CycleClass { four, one_three, two_two, one_one_two, identity };

std::string_view to_string(CycleClass c);

/// Permutation of {1, 2, 3, 4} in one-line notation: images()[a - 1] = pi(a).
class Perm4 {
 public:
  Perm4() : images_{1, 2, 3, 4} {}
  /// Throws InvalidParameter unless the images form a bijection of {1..4}.
  explicit Perm4(std::array<int, 4> images);
  /// Parses "(2 1 4 3)", "2 1 4 3" or "2143".
  static Perm4 parse(std::string_view text);
  static const std::vector<Perm4>& all();  // 24 permutations, lexicographic

  int operator()(int a) const { return images_[static_cast<std::size_t>(a - 1)]; }
  const std::array<int, 4>& images() const noexcept { return images_; }

  Perm4 inverse() const;
  CycleClass cycle_class() const;
  std::string to_string() const;

  friend bool operator==(const Perm4& a, const Perm4& b) { return a.images_ == b.images_; }
  friend bool operator<(const Perm4& a, const Perm4& b) { return a.images_ < b.images_; }

 private:
  std::array<int, 4> images_;
};

/// (tau sigma)(a) = tau(sigma(a)): sigma acts first.
Perm4 compose(const Perm4& tau, const Perm4& sigma);

}  // namespace probe
