#include "probe/permutations.hpp"

#include <algorithm>
#include <cctype>

#include "probe/errors.hpp"

namespace probe {

std::string_view to_string(CycleClass c) {
  switch (c) {
    case CycleClass::four: return "[4]";
    case CycleClass::one_three: return "[1,3]";
    case CycleClass::two_two: return "[2^2]";
    case CycleClass::one_one_two: return "[1^2,2]";
    case CycleClass::identity: return "[1^4]";
  }
  return "?";
}

Perm4::Perm4(std::array<int, 4> images) : images_(images) {
  std::array<bool, 4> seen{};
  for (int v : images_) {
    if (v < 1 || v > 4 || seen[static_cast<std::size_t>(v - 1)])
      throw InvalidParameter("permutation", "images must be a bijection of {1, 2, 3, 4}");
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
}

Perm4 Perm4::parse(std::string_view text) {
  std::array<int, 4> im{};
  std::size_t k = 0;
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      if (k == 4) throw InvalidParameter("permutation", "more than four images");
      im[k++] = ch - '0';
    } else if (ch != ' ' && ch != '(' && ch != ')' && ch != ',') {
      throw InvalidParameter("permutation", "unexpected character in '" + std::string(text) + "'");
    }
  }
  if (k != 4) throw InvalidParameter("permutation", "expected four images");
  return Perm4(im);
}

const std::vector<Perm4>& Perm4::all() {
  static const std::vector<Perm4> perms = [] {
    std::vector<Perm4> out;
    std::array<int, 4> im{1, 2, 3, 4};
    do {
      out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
  }();
  return perms;
}

Perm4 Perm4::inverse() const {
  std::array<int, 4> inv{};
  for (int a = 1; a <= 4; ++a) inv[static_cast<std::size_t>((*this)(a) - 1)] = a;
  return Perm4(inv);
}

CycleClass Perm4::cycle_class() const {
  std::array<bool, 4> seen{};
  std::vector<int> lengths;
  for (int s = 1; s <= 4; ++s) {
    if (seen[static_cast<std::size_t>(s - 1)]) continue;
    int len = 0;
    for (int x = s; !seen[static_cast<std::size_t>(x - 1)]; x = (*this)(x)) {
      seen[static_cast<std::size_t>(x - 1)] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  if (lengths.size() == 1) return CycleClass::four;
  if (lengths.size() == 4) return CycleClass::identity;
  if (lengths.size() == 3) return CycleClass::one_one_two;
  return lengths[0] == 1 ? CycleClass::one_three : CycleClass::two_two;
}

std::string Perm4::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < 4; ++i) {
    if (i) s += ' ';
    s += static_cast<char>('0' + images_[i]);
  }
  return s + ")";
}

Perm4 compose(const Perm4& tau, const Perm4& sigma) {
  std::array<int, 4> im{};
  for (int a = 1; a <= 4; ++a) im[static_cast<std::size_t>(a - 1)] = tau(sigma(a));
  return Perm4(im);
}

}  // namespace probe
