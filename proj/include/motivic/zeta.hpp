#pragma once

// L-polynomials from point counts: traces, Newton's identities, the functional
// equation, and the Weil-circle check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "motivic/errors.hpp"
#include "motivic/finite_field.hpp"
#include "motivic/lpolynomial.hpp"
#include "motivic/roots.hpp"
#include "motivic/tolerances.hpp"

namespace motivic::zeta {

namespace detail {

inline std::int64_t narrow(__int128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw OverflowError(std::string(what) + " exceeds 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

} // namespace detail

/// |s| <= 2g p^{k/2}, decided exactly as s^2 <= 4 g^2 p^k.
inline bool within_weil_bound(std::int64_t s, std::uint64_t p, int genus, int k) {
  const __int128 lhs = static_cast<__int128>(s) * s;
  const __int128 rhs = static_cast<__int128>(4) * genus * genus * ff::checked_power(p, k);
  return lhs <= rhs;
}

inline FrobeniusTraces traces_from_counts(std::uint64_t p, int genus, std::span<const std::int64_t> counts) {
  if (genus < 1) throw InvalidArgument("genus must be positive");
  if (static_cast<int>(counts.size()) < genus) {
    throw InvalidArgument("need point counts N_1..N_g, got " + std::to_string(counts.size()));
  }
  FrobeniusTraces t{p, genus, {}};
  for (int k = 1; k <= genus; ++k) {
    const auto q = static_cast<std::int64_t>(ff::checked_power(p, k));
    const std::int64_t s = q + 1 - counts[k - 1];
    if (!within_weil_bound(s, p, genus, k)) {
      throw WeilBoundViolation("trace s_" + std::to_string(k) + " = " + std::to_string(s) +
                               " violates |s| <= 2g p^{k/2} at p = " + std::to_string(p));
    }
    t.s.push_back(s);
  }
  return t;
}

/// Newton's identities s_k + c_1 s_{k-1} + ... + c_{k-1} s_1 + k c_k = 0 for
/// k = 1..g, then c_{2g-i} = p^{g-i} c_i for the upper half.
inline LPolynomial lpoly_from_traces(const FrobeniusTraces& t) {
  const int g = t.genus;
  if (static_cast<int>(t.s.size()) < g) throw InvalidArgument("trace vector shorter than genus");
  for (int k = 1; k <= g; ++k) {
    if (!within_weil_bound(t.s[k - 1], t.p, g, k)) throw WeilBoundViolation("trace outside the Weil interval");
  }
  LPolynomial l{t.p, g, std::vector<std::int64_t>(2 * static_cast<std::size_t>(g) + 1, 0)};
  l.c[0] = 1;
  for (int k = 1; k <= g; ++k) {
    __int128 acc = t.s[k - 1];
    for (int i = 1; i < k; ++i) acc += static_cast<__int128>(l.c[i]) * t.s[k - 1 - i];
    if (acc % k != 0) {
      throw NonIntegralCoefficient("Newton step k = " + std::to_string(k) + " is not divisible by k at p = " +
                                   std::to_string(t.p));
    }
    l.c[k] = detail::narrow(-acc / k, "L-polynomial coefficient");
  }
  for (int i = 0; i < g; ++i) {
    const __int128 scale = ff::checked_power(t.p, g - i);
    l.c[2 * g - i] = detail::narrow(scale * l.c[i], "L-polynomial coefficient");
  }
  return l;
}

/// Power sums s_1..s_n of the inverse roots, by running Newton's identities
/// backwards (c_k = 0 for k > 2g).
inline std::vector<std::int64_t> power_sums(const LPolynomial& l, int n) {
  std::vector<std::int64_t> s;
  const auto coeff = [&](int k) -> __int128 { return k < static_cast<int>(l.c.size()) ? l.c[k] : 0; };
  for (int k = 1; k <= n; ++k) {
    __int128 acc = static_cast<__int128>(k) * coeff(k);
    for (int i = 1; i < k; ++i) acc += coeff(i) * s[k - 1 - i];
    s.push_back(detail::narrow(-acc, "power sum"));
  }
  return s;
}

/// c_{2g-i} = p^{g-i} c_i for 0 <= i <= g, checked on integers.
inline bool satisfies_functional_equation(const LPolynomial& l) {
  const int g = l.genus;
  if (static_cast<int>(l.c.size()) != 2 * g + 1) return false;
  for (int i = 0; i <= g; ++i) {
    const __int128 expected = static_cast<__int128>(ff::checked_power(l.p, g - i)) * l.c[i];
    if (expected != l.c[2 * g - i]) return false;
  }
  return true;
}

struct WeilCheck {
  bool ok = false;
  double max_deviation = 0.0; ///< max_j | |z_j| - p^{-1/2} |
  std::vector<rhythm::Complex> roots;
};

inline WeilCheck verify_weil(const LPolynomial& l, double tol, const Tolerances& root_tol = {}) {
  WeilCheck check;
  check.roots = rhythm::find_roots(l, root_tol);
  const double radius = 1.0 / std::sqrt(static_cast<double>(l.p));
  for (const rhythm::Complex& z : check.roots) {
    check.max_deviation = std::max(check.max_deviation, std::abs(std::abs(z) - radius));
  }
  check.ok = check.max_deviation <= tol;
  return check;
}

} // namespace motivic::zeta
