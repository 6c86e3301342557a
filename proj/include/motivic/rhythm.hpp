#pragma once

// Motivic rhythms: root arguments, palindrome structure, period and onsets.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "motivic/errors.hpp"
#include "motivic/lpolynomial.hpp"
#include "motivic/roots.hpp"
#include "motivic/tolerances.hpp"

namespace motivic::rhythm {

inline constexpr double kPi = std::numbers::pi;

/// The 2g onset angles of one prime. `alphas` are sorted ascending in (-pi, pi].
struct RhythmPattern {
  std::uint64_t p = 0;
  int genus = 0;
  std::vector<double> alphas;
  double period = 0.0; ///< 2 pi / log p, before tempo scaling
  double radius = 0.0; ///< p^{-1/2}
};

struct Onset {
  double time = 0.0;
  int index = 0;  ///< position j (0-based) in the sorted alphas
  int period = 0; ///< k
};

using OnsetSchedule = std::vector<Onset>;

inline double period_of(std::uint64_t p) { return 2.0 * kPi / std::log(static_cast<double>(p)); }

/// Fold an angle into (-pi, pi].
inline double fold(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

/// Largest circular distance between the sorted alphas and their negatives.
/// Equals max_j |alpha_{2g+1-j} + alpha_j| whenever no alpha sits at pi.
inline double palindrome_defect(std::span<const double> alphas) {
  std::vector<double> mirrored;
  mirrored.reserve(alphas.size());
  for (double a : alphas) mirrored.push_back(fold(-a));
  std::sort(mirrored.begin(), mirrored.end());
  double worst = 0.0;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    worst = std::max(worst, std::abs(fold(alphas[j] - mirrored[j])));
  }
  return worst;
}

/// alpha_j = -arg(z_j) folded into (-pi, pi], sorted ascending with ties kept
/// in discovery order. Throws PalindromeViolation beyond tol.assertion.
inline RhythmPattern arguments(std::uint64_t p, int genus, std::span<const Complex> roots,
                               const Tolerances& tol = {}) {
  RhythmPattern rp;
  rp.p = p;
  rp.genus = genus;
  rp.period = period_of(p);
  rp.radius = 1.0 / std::sqrt(static_cast<double>(p));
  rp.alphas.reserve(roots.size());
  for (const Complex& z : roots) {
    // arg(-|r|) = pi gives -pi; fold sends it to +pi.
    rp.alphas.push_back(fold(-std::arg(z)));
  }
  std::stable_sort(rp.alphas.begin(), rp.alphas.end());
  const double defect = palindrome_defect(rp.alphas);
  if (defect > tol.assertion) {
    throw PalindromeViolation("alphas at p = " + std::to_string(p) + " are not palindromic (defect " +
                              std::to_string(defect) + ")");
  }
  return rp;
}

inline RhythmPattern rhythm_of(const zeta::LPolynomial& l, const Tolerances& tol = {}) {
  const std::vector<Complex> roots = find_roots(l, tol);
  return arguments(l.p, l.genus, roots, tol);
}

/// Onset (j, k) sounds at tempo_scale * (alpha_j + pi + 2 pi k) / log p, i.e.
/// (alpha_j + pi) / 2pi of the way through period k. Computed as
/// offset_j + k * scaled_period so every period is an exact translate.
inline OnsetSchedule onsets(const RhythmPattern& rp, int n_periods, double tempo_scale) {
  if (n_periods < 1) throw InvalidArgument("n_periods must be at least 1");
  if (!(tempo_scale > 0.0)) throw InvalidArgument("tempo_scale must be positive");
  const double scaled_period = tempo_scale * rp.period;
  OnsetSchedule schedule;
  schedule.reserve(rp.alphas.size() * static_cast<std::size_t>(n_periods));
  for (int k = 0; k < n_periods; ++k) {
    for (std::size_t j = 0; j < rp.alphas.size(); ++j) {
      const double offset = scaled_period * (rp.alphas[j] + kPi) / (2.0 * kPi);
      schedule.push_back({offset + k * scaled_period, static_cast<int>(j), k});
    }
  }
  std::stable_sort(schedule.begin(), schedule.end(),
                   [](const Onset& a, const Onset& b) { return a.time < b.time; });
  return schedule;
}

/// Equally spaced onsets, one per half-open slot of the period; used for the
/// sieve part where the score is played without motivic timing.
inline RhythmPattern uniform_pattern(std::uint64_t p, int genus, double period) {
  RhythmPattern rp;
  rp.p = p;
  rp.genus = genus;
  rp.period = period;
  rp.radius = 1.0 / std::sqrt(static_cast<double>(p));
  const int n = 2 * genus;
  for (int j = 0; j < n; ++j) rp.alphas.push_back(-kPi + 2.0 * kPi * (j + 0.5) / n);
  return rp;
}

} // namespace motivic::rhythm
