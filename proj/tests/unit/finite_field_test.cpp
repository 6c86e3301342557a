#include <gtest/gtest.h>

#include <set>

#include "motivic/finite_field.hpp"
#include "oracles.hpp"

using namespace motivic;
using namespace motivic::ff;

TEST(PrimeFieldTest, RejectsCharacteristicTwoAndComposites) {
  EXPECT_THROW(PrimeField(2), InvalidArgument);
  EXPECT_THROW(PrimeField(9), InvalidArgument);
  EXPECT_THROW(PrimeField(1), InvalidArgument);
  EXPECT_NO_THROW(PrimeField(7));
}

TEST(PrimeFieldTest, InverseAndLegendre) {
  const PrimeField f(11);
  for (Residue a = 1; a < 11; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1U);
  EXPECT_THROW((void)f.inv(0), DivisionByZero);
  std::set<Residue> squares;
  for (Residue a = 1; a < 11; ++a) squares.insert(f.mul(a, a));
  for (Residue a = 1; a < 11; ++a) EXPECT_EQ(f.legendre(a), squares.count(a) ? 1 : -1);
  EXPECT_EQ(f.legendre(0), 0);
  EXPECT_EQ(f.reduce(-22), 0U);
  EXPECT_EQ(f.reduce(-25), 8U);
  EXPECT_EQ(f.reduce(-1), 10U);
}

TEST(PrimeFieldTest, IsPrimeAgreesWithSieve) {
  const auto sieve = oracle::classic_sieve(20000);
  for (std::uint64_t n = 0; n <= 20000; ++n) EXPECT_EQ(is_prime(n), static_cast<bool>(sieve[n])) << n;
  EXPECT_TRUE(is_prime(2305843009213693951ULL)); // 2^61 - 1
  EXPECT_FALSE(is_prime(3215031751ULL));          // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(IrreducibleTest, SmallestIrreducibles) {
  EXPECT_EQ(find_irreducible(3, 2), (Poly{1, 0, 1}));
  EXPECT_EQ(find_irreducible(7, 1), (Poly{0, 1}));
  for (std::uint64_t p : {3, 5, 7}) {
    for (int k = 2; k <= 5; ++k) {
      const Poly m = find_irreducible(p, k);
      ASSERT_EQ(poly::degree(m), k);
      EXPECT_TRUE(oracle::brute_force_irreducible(p, std::vector<std::uint64_t>(m.begin(), m.end())));
      const Poly next = find_irreducible(p, k, 1);
      EXPECT_NE(next, m);
      EXPECT_TRUE(oracle::brute_force_irreducible(p, std::vector<std::uint64_t>(next.begin(), next.end())));
    }
  }
}

TEST(IrreducibleTest, BenOrMatchesTrialDivisionExhaustively) {
  for (std::uint64_t p : {3, 5}) {
    const PrimeField f(p);
    for (int k = 1; k <= 4; ++k) {
      std::uint64_t total = 1;
      for (int i = 0; i < k; ++i) total *= p;
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        Poly m(static_cast<std::size_t>(k) + 1);
        std::uint64_t t = idx;
        for (int i = 0; i < k; ++i) {
          m[static_cast<std::size_t>(i)] = t % p;
          t /= p;
        }
        m[static_cast<std::size_t>(k)] = 1;
        EXPECT_EQ(is_irreducible(m, f), oracle::brute_force_irreducible(p, std::vector<std::uint64_t>(m.begin(), m.end())))
            << "p=" << p << " idx=" << idx << " k=" << k;
      }
    }
  }
}

TEST(ExtFieldTest, MultiplicationIsAFieldExhaustively) {
  for (std::uint64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
    for (int k = 1; k <= 2; ++k) {
      const ExtField f(p, k);
      std::uint64_t units = 0;
      for (std::uint64_t i = 0; i < f.order(); ++i) {
        const FieldElement a = f.from_index(i);
        EXPECT_EQ(f.index(a), i);
        if (a.is_zero()) continue;
        const FieldElement inv = f.inv(a);
        EXPECT_EQ(f.mul(a, inv), f.one());
        ++units;
        for (std::uint64_t j = 1; j < f.order(); ++j) {
          const FieldElement b = f.from_index(j);
          ASSERT_FALSE(f.mul(a, b).is_zero()) << "zero divisor in F_" << p << "^" << k;
        }
      }
      EXPECT_EQ(units, f.order() - 1);
    }
  }
}

TEST(ExtFieldTest, MultiplicationMatchesNaiveField) {
  for (std::uint64_t p : {3, 7}) {
    for (int k = 2; k <= 4; ++k) {
      const ExtField f(p, k);
      const oracle::NaiveField naive{p, std::vector<std::uint64_t>(f.modulus().begin(), f.modulus().end())};
      for (std::uint64_t i = 0; i < f.order(); i += 7) {
        for (std::uint64_t j = 0; j < f.order(); j += 13) {
          const std::uint64_t got = f.index(f.mul(f.from_index(i), f.from_index(j)));
          EXPECT_EQ(got, naive.index(naive.mul(naive.element(i), naive.element(j))));
        }
      }
    }
  }
}

TEST(ExtFieldTest, HalfTheUnitsAreSquares) {
  for (std::uint64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 97}) {
    for (int k = 1; k <= 4; ++k) {
      const ExtField f(p, k);
      if (f.order() > 10000) break;
      std::set<std::uint64_t> squares;
      for (std::uint64_t i = 1; i < f.order(); ++i) {
        const FieldElement a = f.from_index(i);
        squares.insert(f.index(f.square(a)));
      }
      EXPECT_EQ(squares.size(), (f.order() - 1) / 2) << p << "^" << k;
    }
  }
}

TEST(ExtFieldTest, CharacterBackendsAgree) {
  for (std::uint64_t p : {3, 7, 13}) {
    for (int k = 1; k <= 4; ++k) {
      const ExtField f(p, k);
      if (f.order() > 30000) break;
      const QuadraticCharacter euler(f, CharacterBackend::euler);
      const QuadraticCharacter bitmap(f, CharacterBackend::bitmap);
      const SquareBitmap squares(f);
      detail::with_degree(k, [&](auto kc) {
        constexpr int K = decltype(kc)::value;
        const detail::FastExt<K> fast(f);
        for (std::uint64_t i = 0; i < f.order(); ++i) {
          const FieldElement a = f.from_index(i);
          const int e = euler(a);
          ASSERT_EQ(e, bitmap(a));
          ASSERT_EQ(e, squares.character_of_index(i));
          ASSERT_EQ(e, fast.norm_character(fast.from_index(i)));
          ASSERT_EQ(fast.index(fast.from(a)), i);
        }
      });
    }
  }
}

TEST(ExtFieldTest, FrobeniusFixesExactlyThePrimeField) {
  for (std::uint64_t p : {3, 5, 7}) {
    for (int k = 1; k <= 5; ++k) {
      const ExtField f(p, k);
      if (f.order() > 243 && p != 3) break;
      std::uint64_t fixed = 0;
      for (std::uint64_t i = 0; i < f.order(); ++i) {
        const FieldElement a = f.from_index(i);
        const FieldElement fa = f.frobenius(a);
        EXPECT_EQ(fa, f.pow(a, p));
        FieldElement it = a;
        for (int r = 0; r < k; ++r) it = f.frobenius(it);
        EXPECT_EQ(it, a);
        fixed += fa == a ? 1 : 0;
      }
      EXPECT_EQ(fixed, p);
    }
  }
}

TEST(ExtFieldTest, FastKernelAgreesWithGenericArithmetic) {
  const ExtField f(19, 5);
  detail::FastExt<5> fast(f);
  for (std::uint64_t i = 1; i < f.order(); i += 9973) {
    for (std::uint64_t j = 3; j < f.order(); j += 104729) {
      const FieldElement a = f.from_index(i);
      const FieldElement b = f.from_index(j);
      EXPECT_EQ(fast.to(fast.mul(fast.from(a), fast.from(b))), f.mul(a, b));
      EXPECT_EQ(fast.to(fast.frobenius(fast.from(a))), f.frobenius(a));
    }
  }
}

TEST(ExtFieldTest, NormMapsOntoThePrimeField) {
  const ExtField f(5, 3);
  for (std::uint64_t i = 1; i < f.order(); ++i) {
    const FieldElement a = f.from_index(i);
    FieldElement prod = f.one();
    FieldElement conj = a;
    for (int r = 0; r < 3; ++r) {
      prod = f.mul(prod, conj);
      conj = f.frobenius(conj);
    }
    EXPECT_EQ(prod, f.constant(f.norm(a)));
  }
}

TEST(ExtFieldTest, RejectsReducibleModulus) {
  EXPECT_THROW(ExtField(5, Poly{1, 0, 1}), InvalidArgument); // x^2 + 1 = (x - 2)(x - 3) over F_5
  EXPECT_THROW(ExtField(3, 9), InvalidArgument);
}
