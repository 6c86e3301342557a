#pragma once

// Exact arithmetic in F_p and F_{p^k} = F_p[x]/(m(x)), k <= 8.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "motivic/errors.hpp"

namespace motivic::ff {

using Residue = std::uint64_t;

/// Largest supported extension degree.
inline constexpr int kMaxDegree = 8;

/// Largest supported prime for PrimeField.
inline constexpr std::uint64_t kMaxPrime = std::uint64_t{1} << 61;

/// p^k must stay below this so that point counts (at most 2q + 1) fit in int64.
inline constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 62;

/// Default size below which the quadratic character uses a square bitmap.
inline constexpr std::uint64_t kDefaultBitmapThreshold = std::uint64_t{1} << 25;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1U;
  }
  return r;
}

} // namespace detail

/// Deterministic Miller-Rabin, exact for every 64-bit input.
inline bool is_prime(std::uint64_t n) {
  constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (std::uint64_t b : bases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : bases) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

/// base^exp, throwing OverflowError when the result reaches kMaxOrder.
inline std::uint64_t checked_power(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > (kMaxOrder - 1) / base) {
      throw OverflowError(std::to_string(base) + "^" + std::to_string(exp) +
                          " does not fit the native integer width");
    }
    r *= base;
  }
  return r;
}

/// The prime field F_p for an odd prime p. Residues are kept in [0, p).
class PrimeField {
public:
  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p == 2) throw InvalidArgument("characteristic 2 is not supported");
    if (p > kMaxPrime) throw InvalidArgument(std::to_string(p) + " exceeds 2^61");
    if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
  }

  std::uint64_t characteristic() const noexcept { return p_; }

  Residue reduce(std::int64_t v) const noexcept {
    const auto m = static_cast<std::int64_t>(p_);
    std::int64_t r = v % m;
    return static_cast<Residue>(r < 0 ? r + m : r);
  }

  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept { return detail::mulmod(a, b, p_); }
  Residue pow(Residue a, std::uint64_t e) const noexcept { return detail::powmod(a, e, p_); }

  Residue inv(Residue a) const {
    if (a == 0) throw DivisionByZero();
    return pow(a, p_ - 2);
  }

  /// Legendre symbol: 0, +1 or -1.
  int legendre(Residue a) const noexcept {
    if (a == 0) return 0;
    return pow(a, (p_ - 1) / 2) == 1 ? 1 : -1;
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
  std::uint64_t p_;
};

/// Dense polynomial over F_p, little-endian, no trailing zeros (zero = empty).
using Poly = std::vector<Residue>;

namespace poly {

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly from_integers(std::span<const std::int64_t> coeffs, const PrimeField& f) {
  Poly r;
  r.reserve(coeffs.size());
  for (std::int64_t c : coeffs) r.push_back(f.reduce(c));
  trim(r);
  return r;
}

inline Poly add(const Poly& a, const Poly& b, const PrimeField& f) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly sub(const Poly& a, const Poly& b, const PrimeField& f) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b, const PrimeField& f) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

/// Remainder of a modulo a nonzero m.
inline Poly mod(Poly a, const Poly& m, const PrimeField& f) {
  if (m.empty()) throw DivisionByZero();
  const int dm = degree(m);
  const Residue lead_inv = f.inv(m.back());
  trim(a);
  while (degree(a) >= dm) {
    const int shift = degree(a) - dm;
    const Residue t = f.mul(a.back(), lead_inv);
    for (int j = 0; j <= dm; ++j) a[shift + j] = f.sub(a[shift + j], f.mul(t, m[j]));
    trim(a);
  }
  return a;
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, const PrimeField& f) {
  return mod(mul(a, b, f), m, f);
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& m, const PrimeField& f) {
  Poly r = mod(Poly{1}, m, f);
  base = mod(std::move(base), m, f);
  while (e != 0) {
    if (e & 1U) r = mulmod(r, base, m, f);
    base = mulmod(base, base, m, f);
    e >>= 1U;
  }
  return r;
}

inline Poly make_monic(Poly a, const PrimeField& f) {
  trim(a);
  if (a.empty()) return a;
  const Residue inv = f.inv(a.back());
  for (Residue& c : a) c = f.mul(c, inv);
  return a;
}

/// Monic greatest common divisor (zero if both inputs are zero).
inline Poly gcd(Poly a, Poly b, const PrimeField& f) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, f);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), f);
}

inline Poly derivative(const Poly& a, const PrimeField& f) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = f.mul(a[i], f.reduce(static_cast<std::int64_t>(i)));
  trim(r);
  return r;
}

} // namespace poly

/// Ben-Or test: f monic of degree k is irreducible iff gcd(x^{p^j} - x, f) = 1 for
/// 1 <= j <= k/2; additionally requires x^{p^k} = x mod f.
inline bool is_irreducible(const Poly& f, const PrimeField& field) {
  const int k = poly::degree(f);
  if (k < 1 || f.back() != 1) return false;
  if (k == 1) return true;
  const Poly x{0, 1};
  Poly h = x;
  for (int j = 1; j <= k; ++j) {
    h = poly::powmod(std::move(h), field.characteristic(), f, field);
    if (j <= k / 2 && poly::degree(poly::gcd(poly::sub(h, x, field), f, field)) > 0) return false;
  }
  return h == x;
}

/// Lexicographically smallest monic irreducible of degree k over F_p, ordering the
/// tuples (c_0, ..., c_{k-1}) ascending with c_0 most significant. `skip` returns
/// the (skip+1)-th one instead.
inline Poly find_irreducible(std::uint64_t p, int k, int skip = 0) {
  if (k < 1 || k > kMaxDegree) throw InvalidArgument("extension degree must be in [1, 8]");
  const PrimeField field(p);
  checked_power(p, k);
  Poly f(static_cast<std::size_t>(k) + 1, 0);
  f[k] = 1;
  while (true) {
    if (is_irreducible(f, field) && skip-- == 0) return f;
    int pos = k - 1;
    while (pos >= 0 && ++f[pos] == p) f[pos--] = 0;
    if (pos < 0) throw InvalidArgument("no further irreducible polynomial of this degree");
  }
}

/// Element of F_{p^k}: k residues, little-endian in the class of x.
class FieldElement {
public:
  FieldElement() = default;
  explicit FieldElement(int size) : k_(static_cast<std::uint8_t>(size)) {}

  int size() const noexcept { return k_; }
  Residue operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  Residue& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }
  std::span<const Residue> coeffs() const noexcept { return {c_.data(), k_}; }

  bool is_zero() const noexcept {
    return std::all_of(c_.begin(), c_.begin() + k_, [](Residue r) { return r == 0; });
  }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
  std::array<Residue, kMaxDegree> c_{};
  std::uint8_t k_ = 0;
};

/// F_{p^k} realised as F_p[x]/(modulus).
class ExtField {
public:
  ExtField(std::uint64_t p, int k) : ExtField(p, find_irreducible(p, k)) {}

  ExtField(std::uint64_t p, Poly modulus) : base_(p), modulus_(std::move(modulus)) {
    poly::trim(modulus_);
    k_ = poly::degree(modulus_);
    if (k_ < 1 || k_ > kMaxDegree) throw InvalidArgument("extension degree must be in [1, 8]");
    for (Residue c : modulus_) {
      if (c >= p) throw InvalidArgument("modulus coefficient out of range");
    }
    if (!is_irreducible(modulus_, base_)) throw InvalidArgument("modulus is not monic irreducible");
    q_ = checked_power(p, k_);
  }

  const PrimeField& base() const noexcept { return base_; }
  std::uint64_t characteristic() const noexcept { return base_.characteristic(); }
  int degree() const noexcept { return k_; }
  std::uint64_t order() const noexcept { return q_; }
  const Poly& modulus() const noexcept { return modulus_; }

  FieldElement zero() const { return FieldElement(k_); }
  FieldElement one() const { return constant(1); }

  FieldElement constant(Residue r) const {
    FieldElement e(k_);
    e[0] = r % characteristic();
    return e;
  }

  /// The class of x.
  FieldElement generator() const {
    if (k_ == 1) return constant(base_.neg(modulus_[0]));
    FieldElement e(k_);
    e[1] = 1;
    return e;
  }

  FieldElement element(std::span<const Residue> coeffs) const {
    if (static_cast<int>(coeffs.size()) != k_) throw InvalidArgument("element needs exactly k coefficients");
    FieldElement e(k_);
    for (int i = 0; i < k_; ++i) {
      if (coeffs[i] >= characteristic()) throw InvalidArgument("coefficient out of range");
      e[i] = coeffs[i];
    }
    return e;
  }

  /// Base-p digits of idx, least significant first.
  FieldElement from_index(std::uint64_t idx) const {
    FieldElement e(k_);
    for (int i = 0; i < k_; ++i) {
      e[i] = idx % characteristic();
      idx /= characteristic();
    }
    return e;
  }

  std::uint64_t index(const FieldElement& a) const {
    check(a);
    std::uint64_t idx = 0;
    for (int i = k_ - 1; i >= 0; --i) idx = idx * characteristic() + a[i];
    return idx;
  }

  FieldElement add(const FieldElement& a, const FieldElement& b) const {
    check(a);
    check(b);
    FieldElement r(k_);
    for (int i = 0; i < k_; ++i) r[i] = base_.add(a[i], b[i]);
    return r;
  }

  FieldElement sub(const FieldElement& a, const FieldElement& b) const {
    check(a);
    check(b);
    FieldElement r(k_);
    for (int i = 0; i < k_; ++i) r[i] = base_.sub(a[i], b[i]);
    return r;
  }

  FieldElement neg(const FieldElement& a) const { return sub(zero(), a); }

  FieldElement mul(const FieldElement& a, const FieldElement& b) const {
    check(a);
    check(b);
    std::array<Residue, 2 * kMaxDegree - 1> t{};
    for (int i = 0; i < k_; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < k_; ++j) t[i + j] = base_.add(t[i + j], base_.mul(a[i], b[j]));
    }
    for (int d = 2 * k_ - 2; d >= k_; --d) {
      const Residue top = t[d];
      if (top == 0) continue;
      for (int j = 0; j < k_; ++j) t[d - k_ + j] = base_.sub(t[d - k_ + j], base_.mul(top, modulus_[j]));
    }
    FieldElement r(k_);
    for (int i = 0; i < k_; ++i) r[i] = t[i];
    return r;
  }

  FieldElement square(const FieldElement& a) const { return mul(a, a); }

  FieldElement pow(FieldElement a, std::uint64_t e) const {
    FieldElement r = one();
    while (e != 0) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }

  /// a^{q-2}; throws DivisionByZero for a = 0.
  FieldElement inv(const FieldElement& a) const {
    check(a);
    if (a.is_zero()) throw DivisionByZero();
    return pow(a, q_ - 2);
  }

  FieldElement frobenius(const FieldElement& a) const { return pow(a, characteristic()); }

  /// Product of the k Galois conjugates; an element of F_p.
  Residue norm(const FieldElement& a) const {
    FieldElement n = a;
    FieldElement c = a;
    for (int i = 1; i < k_; ++i) {
      c = frobenius(c);
      n = mul(n, c);
    }
    return n[0];
  }

  /// Euler criterion a^{(q-1)/2}.
  int quadratic_character(const FieldElement& a) const {
    if (a.is_zero()) return 0;
    return pow(a, (q_ - 1) / 2) == one() ? 1 : -1;
  }

private:
  void check(const FieldElement& a) const {
    if (a.size() != k_) throw InvalidArgument("element belongs to a different extension");
  }

  PrimeField base_;
  Poly modulus_;
  int k_ = 0;
  std::uint64_t q_ = 0;
};

namespace detail {

/// Primes below this use the 32-bit lane kernel.
inline constexpr std::uint64_t kFastPrimeLimit = 4096;

/// Exact a mod d for 32-bit a via a single 64x64 multiply.
struct FastMod {
  std::uint32_t d;
  std::uint64_t m;

  explicit FastMod(std::uint32_t divisor)
      : d(divisor), m(std::numeric_limits<std::uint64_t>::max() / divisor + 1) {}

  std::uint32_t operator()(std::uint32_t a) const noexcept {
    const std::uint64_t low = m * a;
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * d) >> 64U);
  }
};

/// F_{p^K} with compile-time K and p < kFastPrimeLimit. Lanes accumulate
/// unreduced products (< 2K p^2 < 2^28) before a single reduction.
template <int K>
class FastExt {
public:
  using Elem = std::array<std::uint32_t, K>;

  explicit FastExt(const ExtField& f)
      : p_(static_cast<std::uint32_t>(f.characteristic())), mod_(p_), legendre_(p_) {
    if (f.degree() != K) throw InvalidArgument("degree mismatch in fast kernel");
    if (f.characteristic() >= kFastPrimeLimit) throw InvalidArgument("prime too large for fast kernel");
    for (int j = 0; j < K; ++j) neg_modulus_[j] = static_cast<std::uint32_t>(f.base().neg(f.modulus()[j]));
    for (int j = 0; j < K; ++j) {
      FieldElement basis = f.zero();
      basis[j] = 1;
      const FieldElement image = f.frobenius(basis);
      for (int i = 0; i < K; ++i) frob_[j][i] = static_cast<std::uint32_t>(image[i]);
    }
    std::uint64_t place = 1;
    for (int i = 0; i < K; ++i) {
      place_[i] = place;
      place *= p_;
    }
    for (std::uint32_t r = 0; r < p_; ++r) legendre_[r] = static_cast<std::int8_t>(f.base().legendre(r));
  }

  std::uint32_t characteristic() const noexcept { return p_; }

  Elem mul(const Elem& a, const Elem& b) const noexcept {
    std::array<std::uint32_t, 2 * K - 1> t{};
    for (int i = 0; i < K; ++i) {
      for (int j = 0; j < K; ++j) t[i + j] += a[i] * b[j];
    }
    for (int d = 2 * K - 2; d >= K; --d) {
      const std::uint32_t top = mod_(t[d]);
      for (int j = 0; j < K; ++j) t[d - K + j] += top * neg_modulus_[j];
    }
    Elem r;
    for (int i = 0; i < K; ++i) r[i] = mod_(t[i]);
    return r;
  }

  Elem frobenius(const Elem& a) const noexcept {
    std::array<std::uint32_t, K> t{};
    for (int j = 0; j < K; ++j) {
      for (int i = 0; i < K; ++i) t[i] += a[j] * frob_[j][i];
    }
    Elem r;
    for (int i = 0; i < K; ++i) r[i] = mod_(t[i]);
    return r;
  }

  Elem add_constant(Elem a, std::uint32_t c) const noexcept {
    a[0] += c;
    if (a[0] >= p_) a[0] -= p_;
    return a;
  }

  std::uint64_t index(const Elem& a) const noexcept {
    std::uint64_t idx = 0;
    for (int i = 0; i < K; ++i) idx += a[i] * place_[i];
    return idx;
  }

  static bool is_zero(const Elem& a) noexcept {
    for (std::uint32_t c : a) {
      if (c != 0) return false;
    }
    return true;
  }

  /// chi(a) = legendre(N(a)), the Euler criterion factored through the norm.
  int norm_character(const Elem& a) const noexcept {
    if (is_zero(a)) return 0;
    Elem n = a;
    Elem c = a;
    for (int i = 1; i < K; ++i) {
      c = frobenius(c);
      n = mul(n, c);
    }
    return legendre_[n[0]];
  }

  /// Advance base-p digits; returns false after wrapping past the last element.
  bool increment(Elem& a) const noexcept {
    for (int i = 0; i < K; ++i) {
      if (++a[i] < p_) return true;
      a[i] = 0;
    }
    return false;
  }

  Elem from_index(std::uint64_t idx) const noexcept {
    Elem e;
    for (int i = 0; i < K; ++i) {
      e[i] = static_cast<std::uint32_t>(idx % p_);
      idx /= p_;
    }
    return e;
  }

  Elem from(const FieldElement& e) const noexcept {
    Elem r;
    for (int i = 0; i < K; ++i) r[i] = static_cast<std::uint32_t>(e[i]);
    return r;
  }

  FieldElement to(const Elem& e) const {
    FieldElement r(K);
    for (int i = 0; i < K; ++i) r[i] = e[i];
    return r;
  }

private:
  std::uint32_t p_;
  FastMod mod_;
  std::array<std::uint32_t, K> neg_modulus_{};
  std::array<std::array<std::uint32_t, K>, K> frob_{};
  std::array<std::uint64_t, K> place_{};
  std::vector<std::int8_t> legendre_;
};

/// Calls fn(std::integral_constant<int, K>{}) for the runtime degree k.
template <class Fn>
decltype(auto) with_degree(int k, Fn&& fn) {
  switch (k) {
  case 1: return fn(std::integral_constant<int, 1>{});
  case 2: return fn(std::integral_constant<int, 2>{});
  case 3: return fn(std::integral_constant<int, 3>{});
  case 4: return fn(std::integral_constant<int, 4>{});
  case 5: return fn(std::integral_constant<int, 5>{});
  case 6: return fn(std::integral_constant<int, 6>{});
  case 7: return fn(std::integral_constant<int, 7>{});
  case 8: return fn(std::integral_constant<int, 8>{});
  default: throw InvalidArgument("extension degree must be in [1, 8]");
  }
}

inline bool has_fast_kernel(const ExtField& f) { return f.characteristic() < kFastPrimeLimit; }

} // namespace detail

/// One bit per element of F_q (by index), set iff the element is a square.
class SquareBitmap {
public:
  explicit SquareBitmap(const ExtField& f) : words_((f.order() + 63) / 64, 0) {
    if (detail::has_fast_kernel(f)) {
      detail::with_degree(f.degree(), [&](auto kc) {
        constexpr int K = decltype(kc)::value;
        const detail::FastExt<K> fast(f);
        typename detail::FastExt<K>::Elem b{};
        do {
          set(fast.index(fast.mul(b, b)));
        } while (fast.increment(b));
      });
    } else {
      for (std::uint64_t i = 0; i < f.order(); ++i) {
        const FieldElement b = f.from_index(i);
        set(f.index(f.square(b)));
      }
    }
  }

  bool is_square_index(std::uint64_t idx) const noexcept {
    return ((words_[idx >> 6U] >> (idx & 63U)) & 1U) != 0;
  }

  /// chi of the element with the given index (index 0 is zero).
  int character_of_index(std::uint64_t idx) const noexcept {
    if (idx == 0) return 0;
    return is_square_index(idx) ? 1 : -1;
  }

  std::uint64_t size_bits() const noexcept { return words_.size() * 64; }

private:
  void set(std::uint64_t idx) noexcept { words_[idx >> 6U] |= std::uint64_t{1} << (idx & 63U); }

  std::vector<std::uint64_t> words_;
};

enum class CharacterBackend { euler, bitmap, automatic };

/// Quadratic character of F_q with a selectable backend. `automatic` uses the
/// bitmap when q < threshold and the Euler criterion otherwise.
class QuadraticCharacter {
public:
  explicit QuadraticCharacter(ExtField field, CharacterBackend backend = CharacterBackend::automatic,
                              std::uint64_t threshold = kDefaultBitmapThreshold)
      : field_(std::move(field)) {
    if (backend == CharacterBackend::automatic) {
      backend = field_.order() < threshold ? CharacterBackend::bitmap : CharacterBackend::euler;
    }
    backend_ = backend;
    if (backend_ == CharacterBackend::bitmap) bitmap_.emplace(field_);
  }

  int operator()(const FieldElement& a) const {
    if (bitmap_) return bitmap_->character_of_index(field_.index(a));
    return field_.quadratic_character(a);
  }

  CharacterBackend backend() const noexcept { return backend_; }
  const ExtField& field() const noexcept { return field_; }

private:
  ExtField field_;
  CharacterBackend backend_ = CharacterBackend::euler;
  std::optional<SquareBitmap> bitmap_;
};

} // namespace motivic::ff
