#pragma once

// Prime-indexed palindromic scores: continued fraction of 6 log2 p, alternating
// partial sums, mirror completion, and the 12-tone pitch map.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "motivic/errors.hpp"
#include "motivic/finite_field.hpp"

namespace motivic::score {

/// Register and tuning used by pitch_of.
struct PitchMap {
  int offset = 36;            ///< pitch number = note + offset
  double reference_hz = 440.0;
  int reference_pitch = 69;   ///< pitch number that sounds at reference_hz
};

struct Pitch {
  int number = 0;
  double frequency = 0.0;
  bool clamped = false; ///< number was outside [0, 127] and got clamped
};

struct PrimeScore {
  std::uint64_t p = 0;
  std::array<std::int64_t, 5> n{};      ///< continued-fraction terms n_1..n_5
  std::array<std::int64_t, 5> notes5{};
  std::array<std::int64_t, 10> notes10{};
  std::array<int, 10> pitches{};
};

/// Working precisions (decimal digits) for the two independent expansions.
inline constexpr unsigned kPrimaryDigits = 30;
inline constexpr unsigned kCheckDigits = 60;

template <unsigned Digits>
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>,
                                           boost::multiprecision::et_off>;

/// Regular continued fraction of x > 0; stops early when x becomes an integer.
template <class R>
std::vector<std::int64_t> cf_expansion(R x, int terms) {
  if (!(x > 0)) throw InvalidArgument("continued fraction needs a positive argument");
  std::vector<std::int64_t> out;
  for (int i = 0; i < terms; ++i) {
    const R a = floor(x);
    out.push_back(static_cast<std::int64_t>(a));
    const R frac = x - a;
    if (frac == 0) break;
    x = 1 / frac;
  }
  return out;
}

template <unsigned Digits>
Real<Digits> six_log2(std::uint64_t p) {
  using R = Real<Digits>;
  return 6 * log(R(p)) / log(R(2));
}

/// Terms of 6 log2 p at 30 digits, cross-checked against 60 digits.
inline std::vector<std::int64_t> log2_cf_terms(std::uint64_t p, int terms = 5) {
  if (p < 3 || !ff::is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not an odd prime");
  auto primary = cf_expansion(six_log2<kPrimaryDigits>(p), terms);
  const auto check = cf_expansion(six_log2<kCheckDigits>(p), terms);
  if (primary != check) {
    throw PrecisionInstability("continued fraction of 6 log2 " + std::to_string(p) +
                               " differs between 30 and 60 digits");
  }
  return primary;
}

inline Pitch pitch_of(std::int64_t note, const PitchMap& map = {}) {
  Pitch pitch;
  std::int64_t number = note + map.offset;
  if (number < 0 || number > 127) {
    pitch.clamped = true;
    number = std::clamp<std::int64_t>(number, 0, 127);
  }
  pitch.number = static_cast<int>(number);
  pitch.frequency = map.reference_hz * std::exp2(static_cast<double>(number - map.reference_pitch) / 12.0);
  return pitch;
}

/// (n1, n1-n2, n1-n2+n3, n1-n2+n3-n4, n1-n2+n3-n4+n5).
inline std::array<std::int64_t, 5> alternating_sums(const std::array<std::int64_t, 5>& n) {
  std::array<std::int64_t, 5> out{};
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    acc += (i % 2 == 0) ? n[i] : -n[i];
    out[i] = acc;
  }
  return out;
}

/// a1..a5 a5..a1.
inline std::array<std::int64_t, 10> mirror(const std::array<std::int64_t, 5>& notes5) {
  std::array<std::int64_t, 10> out{};
  for (std::size_t i = 0; i < 5; ++i) {
    out[i] = notes5[i];
    out[9 - i] = notes5[i];
  }
  return out;
}

inline PrimeScore note_list(std::uint64_t p, const PitchMap& map = {}) {
  const std::vector<std::int64_t> terms = log2_cf_terms(p, 5);
  if (terms.size() != 5) throw PrecisionInstability("fewer than five continued-fraction terms");
  PrimeScore s;
  s.p = p;
  std::copy(terms.begin(), terms.end(), s.n.begin());
  s.notes5 = alternating_sums(s.n);
  s.notes10 = mirror(s.notes5);
  for (std::size_t i = 0; i < 10; ++i) s.pitches[i] = pitch_of(s.notes10[i], map).number;
  return s;
}

} // namespace motivic::score
