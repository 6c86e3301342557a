#pragma once

// Hyperelliptic curves y^2 = P(x) over Q, reduction mod p, and point counting
// over F_{p^k}.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "motivic/errors.hpp"
#include "motivic/finite_field.hpp"

namespace motivic::curves {

/// y^2 = P(x) with P monic of odd degree d = 2g + 1. Coefficients are
/// little-endian: coeffs[i] multiplies x^i.
struct CurveSpec {
  std::string name;
  std::vector<std::int64_t> coeffs;

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  int genus() const noexcept { return (degree() - 1) / 2; }
};

inline CurveSpec make_curve(std::string name, std::vector<std::int64_t> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  const int d = static_cast<int>(coeffs.size()) - 1;
  if (d < 3 || d % 2 == 0) throw InvalidArgument("curve degree must be odd and at least 3");
  if (coeffs.back() != 1) throw InvalidArgument("curve polynomial must be monic");
  return CurveSpec{std::move(name), std::move(coeffs)};
}

/// The six genus-5 curves C1..C6.
inline const std::vector<CurveSpec>& catalog() {
  static const std::vector<CurveSpec> curves = {
      make_curve("C1", {-25, 0, 0, 25, 0, 20, -40, 0, 15, 0, -4, 1}),
      make_curve("C2", {-640, -512, 0, -380, -320, 0, -64, -60, 0, 0, 0, 1}),
      make_curve("C3", {-1, 1, -7, 5, -14, 8, -8, 8, -5, 1, -1, 1}),
      make_curve("C4", {50, 86, 86, 58, 24, -8, 0, -8, 1, 3, -1, 1}),
      make_curve("C5", {198, 162, -162, 90, -144, 108, -48, 36, -15, 7, -1, 1}),
      make_curve("C6", {-96, -336, -206, 126, 72, -96, -54, 18, 12, -6, -3, 1}),
  };
  return curves;
}

inline std::optional<CurveSpec> find_catalog(const std::string& name) {
  for (const CurveSpec& c : catalog()) {
    if (c.name == name) return c;
  }
  return std::nullopt;
}

/// Human-readable polynomial, highest degree first.
inline std::string format_poly(std::span<const ff::Residue> c) {
  std::ostringstream os;
  bool first = true;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (c[i] != 1 || i == 0) os << c[i];
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

struct ReductionCheck {
  bool good = false;
  std::string witness; // empty when good
};

/// Good reduction iff p is an odd prime, deg(P mod p) = deg P and
/// gcd(P, P') = 1 over F_p.
inline ReductionCheck check_reduction(const CurveSpec& curve, std::uint64_t p) {
  if (p == 2) return {false, "characteristic 2 is excluded"};
  if (!ff::is_prime(p) || p > ff::kMaxPrime) return {false, std::to_string(p) + " is not an odd prime"};
  const ff::PrimeField field(p);
  const ff::Poly reduced = ff::poly::from_integers(curve.coeffs, field);
  if (ff::poly::degree(reduced) != curve.degree()) {
    return {false, "p divides the leading coefficient"};
  }
  const ff::Poly g = ff::poly::gcd(reduced, ff::poly::derivative(reduced, field), field);
  if (ff::poly::degree(g) > 0) {
    return {false, "gcd(P mod p, P' mod p) = " + format_poly(g) + " (repeated factor)"};
  }
  return {true, {}};
}

inline bool has_good_reduction(const CurveSpec& curve, std::uint64_t p) {
  return check_reduction(curve, p).good;
}

/// A curve with good reduction at p; coefficients in [0, p), length d + 1.
struct ReducedCurve {
  std::string name;
  std::uint64_t p = 0;
  std::vector<ff::Residue> coeffs;
  int genus = 0;
};

inline ReducedCurve reduce_mod(const CurveSpec& curve, std::uint64_t p) {
  const ReductionCheck check = check_reduction(curve, p);
  if (!check.good) throw BadReduction(p, check.witness);
  const ff::PrimeField field(p);
  ReducedCurve rc{curve.name, p, {}, curve.genus()};
  rc.coeffs.reserve(curve.coeffs.size());
  for (std::int64_t c : curve.coeffs) rc.coeffs.push_back(field.reduce(c));
  return rc;
}

enum class Enumeration {
  full,             ///< evaluate chi(P(x)) at every x
  frobenius_orbits, ///< one evaluation per Galois orbit, weighted by orbit size
};

struct CountOptions {
  unsigned workers = 1;
  Enumeration enumeration = Enumeration::frobenius_orbits;
  ff::CharacterBackend backend = ff::CharacterBackend::automatic;
  std::uint64_t bitmap_threshold = ff::kDefaultBitmapThreshold;
};

namespace detail {

/// Contiguous index ranges [begin, end) covering [0, total).
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> partition(std::uint64_t total, unsigned parts) {
  parts = std::max(1U, parts);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  const std::uint64_t step = total / parts;
  const std::uint64_t extra = total % parts;
  std::uint64_t begin = 0;
  for (unsigned i = 0; i < parts; ++i) {
    const std::uint64_t len = step + (i < extra ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  return ranges;
}

/// Sum of chi(P(x)) for x with index in [begin, end). P is monic.
template <int K>
std::int64_t character_sum(const ff::detail::FastExt<K>& fx, std::span<const std::uint32_t> coeffs,
                           const ff::SquareBitmap* bitmap, Enumeration mode, std::uint64_t begin,
                           std::uint64_t end) {
  using Elem = typename ff::detail::FastExt<K>::Elem;
  const int d = static_cast<int>(coeffs.size()) - 1;
  Elem x = fx.from_index(begin);
  std::int64_t sum = 0;
  for (std::uint64_t idx = begin; idx < end; ++idx, fx.increment(x)) {
    int weight = 1;
    if constexpr (K > 1) {
      if (mode == Enumeration::frobenius_orbits) {
        bool canonical = true;
        weight = K;
        Elem c = x;
        for (int i = 1; i < K; ++i) {
          c = fx.frobenius(c);
          const std::uint64_t ci = fx.index(c);
          if (ci < idx) {
            canonical = false;
            break;
          }
          if (ci == idx) {
            weight = i;
            break;
          }
        }
        if (!canonical) continue;
      }
    }
    Elem acc = fx.add_constant(x, coeffs[d - 1]);
    for (int i = d - 2; i >= 0; --i) acc = fx.add_constant(fx.mul(acc, x), coeffs[i]);
    const int chi = bitmap != nullptr ? bitmap->character_of_index(fx.index(acc)) : fx.norm_character(acc);
    sum += weight * chi;
  }
  return sum;
}

inline std::int64_t generic_character_sum(const ff::ExtField& f, const ff::QuadraticCharacter& chi,
                                          std::span<const ff::Residue> coeffs, std::uint64_t begin,
                                          std::uint64_t end) {
  std::int64_t sum = 0;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    const ff::FieldElement x = f.from_index(idx);
    ff::FieldElement acc = f.zero();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = f.add(f.mul(acc, x), f.constant(*it));
    sum += chi(acc);
  }
  return sum;
}

} // namespace detail

/// Counts points on reduced curves, caching per-field tables (square bitmaps,
/// Frobenius matrices) across calls. Not thread-safe itself; worker threads
/// are spawned internally per count.
class PointCounter {
public:
  explicit PointCounter(CountOptions options = {}) : options_(options) {}

  const CountOptions& options() const noexcept { return options_; }

  /// N_k = q + 1 + sum_x chi(P(x)) over F_{p^k}, with the canonical modulus.
  std::int64_t count(const ReducedCurve& rc, int k) {
    if (k < 1 || k > rc.genus) throw InvalidArgument("extension degree must satisfy 1 <= k <= genus");
    return count(rc, context(rc.p, ff::find_irreducible(rc.p, k)));
  }

  /// Same count over an explicitly chosen model of F_{p^k}.
  std::int64_t count(const ReducedCurve& rc, const ff::ExtField& field) {
    if (field.characteristic() != rc.p) throw InvalidArgument("field characteristic differs from curve prime");
    return count(rc, context(rc.p, field.modulus()));
  }

private:
  struct Context {
    ff::ExtField field;
    ff::CharacterBackend backend;
    std::shared_ptr<const ff::SquareBitmap> bitmap;
  };

  Context& context(std::uint64_t p, const ff::Poly& modulus) {
    auto key = std::make_pair(p, modulus);
    auto it = contexts_.find(key);
    if (it != contexts_.end()) return it->second;
    ff::ExtField field(p, modulus);
    ff::CharacterBackend backend = options_.backend;
    if (backend == ff::CharacterBackend::automatic) {
      backend = field.order() < options_.bitmap_threshold ? ff::CharacterBackend::bitmap
                                                          : ff::CharacterBackend::euler;
    }
    std::shared_ptr<const ff::SquareBitmap> bitmap;
    if (backend == ff::CharacterBackend::bitmap) bitmap = std::make_shared<const ff::SquareBitmap>(field);
    return contexts_.emplace(std::move(key), Context{std::move(field), backend, std::move(bitmap)})
        .first->second;
  }

  std::int64_t count(const ReducedCurve& rc, const Context& ctx) {
    const ff::ExtField& f = ctx.field;
    const auto ranges = detail::partition(f.order(), options_.workers);
    std::vector<std::int64_t> partial(ranges.size(), 0);

    if (ff::detail::has_fast_kernel(f)) {
      std::vector<std::uint32_t> coeffs(rc.coeffs.begin(), rc.coeffs.end());
      ff::detail::with_degree(f.degree(), [&](auto kc) {
        constexpr int K = decltype(kc)::value;
        const ff::detail::FastExt<K> fx(f);
        run(ranges, partial, [&](std::uint64_t b, std::uint64_t e) {
          return detail::character_sum<K>(fx, coeffs, ctx.bitmap.get(), options_.enumeration, b, e);
        });
      });
    } else {
      const ff::QuadraticCharacter chi(f, ctx.backend, options_.bitmap_threshold);
      run(ranges, partial, [&](std::uint64_t b, std::uint64_t e) {
        return detail::generic_character_sum(f, chi, rc.coeffs, b, e);
      });
    }

    std::int64_t sum = 0;
    for (std::int64_t s : partial) sum += s;
    return static_cast<std::int64_t>(f.order()) + 1 + sum;
  }

  template <class Fn>
  static void run(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& ranges,
                  std::vector<std::int64_t>& partial, Fn&& fn) {
    if (ranges.size() == 1) {
      partial[0] = fn(ranges[0].first, ranges[0].second);
      return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      threads.emplace_back([&, i] { partial[i] = fn(ranges[i].first, ranges[i].second); });
    }
  }

  CountOptions options_;
  std::map<std::pair<std::uint64_t, ff::Poly>, Context> contexts_;
};

/// One-shot count; see PointCounter for repeated use.
inline std::int64_t count_points(const ReducedCurve& rc, int k, const CountOptions& options = {}) {
  PointCounter counter(options);
  return counter.count(rc, k);
}

} // namespace motivic::curves
