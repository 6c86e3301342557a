#pragma once

#include <cstdint>
#include <vector>

namespace motivic::zeta {

/// s_k = p^k + 1 - N_k for k = 1..g: power sums of the inverse roots.
struct FrobeniusTraces {
  std::uint64_t p = 0;
  int genus = 0;
  std::vector<std::int64_t> s; // s[0] = s_1
};

/// P(z) = c_0 + c_1 z + ... + c_{2g} z^{2g}, c_0 = 1, c_{2g} = p^g.
struct LPolynomial {
  std::uint64_t p = 0;
  int genus = 0;
  std::vector<std::int64_t> c;

  friend bool operator==(const LPolynomial&, const LPolynomial&) = default;
};

} // namespace motivic::zeta
