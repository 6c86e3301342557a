#pragma once

// The staged Eratosthenes sieve on two 60x60 grids ("dance of primes").

#include <bitset>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "motivic/errors.hpp"
#include "motivic/finite_field.hpp"

namespace motivic::sieve {

inline constexpr int kSide = 60;
inline constexpr int kCells = kSide * kSide;
inline constexpr std::uint32_t kLastPrime = 67;

using Membership = std::bitset<kCells>; // bit n-1 <-> number n

/// Which numbers stand in the upper grid; everything else is in the lower one.
struct SieveState {
  Membership upper;
  std::vector<std::uint32_t> processed; // primes whose multiples have descended

  bool in_upper(std::uint32_t n) const { return upper.test(n - 1); }
  Membership lower() const { return ~upper; }

  std::vector<std::uint32_t> upper_numbers() const { return members(upper); }
  std::vector<std::uint32_t> lower_numbers() const { return members(lower()); }

  /// '1' at position n-1 iff n is in the upper grid.
  std::string membership_string() const {
    std::string s(kCells, '0');
    for (int i = 0; i < kCells; ++i) {
      if (upper.test(i)) s[i] = '1';
    }
    return s;
  }

  static std::vector<std::uint32_t> members(const Membership& m) {
    std::vector<std::uint32_t> out;
    for (int i = 0; i < kCells; ++i) {
      if (m.test(i)) out.push_back(static_cast<std::uint32_t>(i + 1));
    }
    return out;
  }
};

struct SieveEvent {
  std::uint32_t p = 0;
  std::vector<std::uint32_t> descending; // ascending
};

struct GridCoord {
  int row = 0; ///< 1-based, row 1 at the top
  int col = 0; ///< 1-based
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

inline GridCoord grid_coords(int n) {
  if (n < 1 || n > kCells) throw InvalidArgument("grid position must be in [1, 3600]");
  const int row = (n + kSide - 1) / kSide;
  return {row, n - kSide * (row - 1)};
}

/// Multiples of 2, 3 and 5 (other than the primes themselves) already below.
inline SieveState initial_state() {
  SieveState s;
  for (std::uint32_t n = 1; n <= kCells; ++n) {
    const bool composite_of_small = (n % 2 == 0 && n != 2) || (n % 3 == 0 && n != 3) || (n % 5 == 0 && n != 5);
    if (!composite_of_small) s.upper.set(n - 1);
  }
  s.processed = {2, 3, 5};
  return s;
}

inline std::uint32_t next_prime_after(std::uint32_t p) {
  std::uint32_t n = p + 1;
  while (!ff::is_prime(n)) ++n;
  return n;
}

/// Multiples of p still in the upper grid, except p itself, descend.
inline std::pair<SieveState, SieveEvent> step(const SieveState& state, std::uint32_t p) {
  const std::uint32_t expected = state.processed.empty() ? 2 : next_prime_after(state.processed.back());
  if (p != expected) {
    throw OutOfOrderPrime("sieve step for " + std::to_string(p) + " but the next prime is " +
                          std::to_string(expected));
  }
  SieveState next = state;
  SieveEvent event{p, {}};
  for (std::uint32_t m = 2 * p; m <= kCells; m += p) {
    if (next.upper.test(m - 1)) {
      next.upper.reset(m - 1);
      event.descending.push_back(m);
    }
  }
  next.processed.push_back(p);
  return {std::move(next), std::move(event)};
}

struct SieveRun {
  std::vector<SieveState> states; ///< states[0] initial, states[i+1] after events[i]
  std::vector<SieveEvent> events; ///< one per prime 7..last_prime
  const SieveState& final_state() const { return states.back(); }
};

inline SieveRun run_all(std::uint32_t last_prime = kLastPrime) {
  SieveRun run;
  run.states.push_back(initial_state());
  for (std::uint32_t p = 7; p <= last_prime; p = next_prime_after(p)) {
    auto [state, event] = step(run.states.back(), p);
    run.states.push_back(std::move(state));
    run.events.push_back(std::move(event));
  }
  return run;
}

/// n in lower and k n <= 3600 implies k n in lower.
inline bool is_multiplicatively_stable(const Membership& lower) {
  for (int n = 1; n <= kCells; ++n) {
    if (!lower.test(n - 1)) continue;
    for (int m = 2 * n; m <= kCells; m += n) {
      if (!lower.test(m - 1)) return false;
    }
  }
  return true;
}

} // namespace motivic::sieve
