#include <gtest/gtest.h>

#include <random>

#include "aimg/abelian.hpp"
#include "aimg/modmatrix.hpp"
#include "aimg/numtheory.hpp"

using namespace aimg;

TEST(ModMatrix, InverseOfIdentity) {
  auto id = ResidueMatrix::identity(6);
  EXPECT_EQ(id.inverse(), id);
}

TEST(ModMatrix, DetAndTranspose) {
  EXPECT_EQ(ResidueMatrix(0, -1, 1, 0, 5).det(), 1);
  EXPECT_EQ(ResidueMatrix(1, 1, 0, 1, 8).transpose(), ResidueMatrix(1, 0, 1, 1, 8));
}

TEST(ModMatrix, Errors) {
  EXPECT_THROW(ResidueMatrix::identity(4) * ResidueMatrix::identity(6), Error);
  try {
    ResidueMatrix(2, 0, 0, 1, 6).inverse();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInvertible);
  }
  try {
    reduce_mod(ResidueMatrix::identity(6), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotADivisor);
  }
}

TEST(ModMatrix, Reduce) {
  EXPECT_EQ(reduce_mod(ResidueMatrix(5, 0, 0, 5, 6), 2), ResidueMatrix::identity(2));
  EXPECT_EQ(reduce_mod(ResidueMatrix(3, 1, 2, 5, 6), 3), ResidueMatrix(0, 1, 2, 2, 3));
  ResidueMatrix x(3, 1, 2, 5, 6);
  EXPECT_EQ(reduce_mod(x, 6), x);
}

TEST(ModMatrix, Crt) {
  EXPECT_EQ(crt_combine(ResidueMatrix::identity(2), ResidueMatrix::identity(3)), ResidueMatrix::identity(6));
  // entry b: 1 mod 2 and 0 mod 3 gives 3 mod 6
  auto z = crt_combine(ResidueMatrix(1, 1, 0, 1, 2), ResidueMatrix::identity(3));
  EXPECT_EQ(z, ResidueMatrix(1, 3, 0, 1, 6));
  EXPECT_EQ(reduce_mod(z, 2), ResidueMatrix(1, 1, 0, 1, 2));
  EXPECT_EQ(reduce_mod(z, 3), ResidueMatrix::identity(3));
  try {
    crt_combine(ResidueMatrix::identity(4), ResidueMatrix(2, 0, 0, 1, 6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompatibleResidues);
  }
}

TEST(ModMatrix, ParseLiteral) {
  auto m = parse_matrix("[[1, -1],[0,1]] mod 7");
  EXPECT_EQ(m, ResidueMatrix(1, 6, 0, 1, 7));
  EXPECT_EQ(parse_matrix(m.to_string()), m);
  EXPECT_THROW(parse_matrix("[[1,2],[3]] mod 7"), Error);
}

TEST(ModMatrix, KeyOrderMatchesLex) {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    ResidueMatrix x(rng() % 12, rng() % 12, rng() % 12, rng() % 12, 12);
    ResidueMatrix y(rng() % 12, rng() % 12, rng() % 12, rng() % 12, 12);
    EXPECT_EQ(x.key() < y.key(), x < y);
    EXPECT_EQ(ResidueMatrix::from_key(x.key(), 12), x);
  }
}

TEST(ModMatrixProperty, HomomorphismAndTranspose) {
  std::mt19937 rng(11);
  for (i64 n : {4, 6, 12, 30, 36}) {
    for (int i = 0; i < 200; ++i) {
      ResidueMatrix x(rng() % n, rng() % n, rng() % n, rng() % n, n);
      ResidueMatrix y(rng() % n, rng() % n, rng() % n, rng() % n, n);
      for (i64 m : nt::divisors(n)) EXPECT_EQ(reduce_mod(x * y, m), reduce_mod(x, m) * reduce_mod(y, m));
      EXPECT_EQ((x * y).transpose(), y.transpose() * x.transpose());
      EXPECT_EQ((x * y).det(), nt::mod(x.det() * y.det(), n));
      if (x.is_invertible()) EXPECT_TRUE((x * x.inverse()).is_identity());
    }
  }
}

TEST(ModMatrixProperty, CrtRoundTrip) {
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    i64 m1 = 1 + rng() % 20, m2 = 1 + rng() % 20;
    ResidueMatrix x(rng() % m1, rng() % m1, rng() % m1, rng() % m1, m1);
    i64 g = std::gcd(m1, m2);
    // y agrees with x modulo gcd
    ResidueMatrix y(x.a() + g * (rng() % m2), x.b() + g * (rng() % m2), x.c() + g * (rng() % m2),
                    x.d() + g * (rng() % m2), m2);
    auto z = crt_combine(x, y);
    EXPECT_EQ(z.modulus(), std::lcm(m1, m2));
    EXPECT_EQ(reduce_mod(z, m1), x);
    EXPECT_EQ(reduce_mod(z, m2), y);
  }
}

TEST(NumberTheory, GroupOrdersMatchEnumeration) {
  for (i64 n = 1; n <= 12; ++n) {
    i64 gl = 0, sl = 0;
    for (i64 a = 0; a < n; ++a)
      for (i64 b = 0; b < n; ++b)
        for (i64 c = 0; c < n; ++c)
          for (i64 d = 0; d < n; ++d) {
            ResidueMatrix m(a, b, c, d, n);
            if (m.is_invertible()) ++gl;
            if (m.det() == nt::mod(1, n)) ++sl;
          }
    EXPECT_EQ(nt::gl2_order(n), gl) << n;
    EXPECT_EQ(nt::sl2_order(n), sl) << n;
  }
}

TEST(NumberTheory, KroneckerMatchesEuler) {
  for (i64 p : {3, 5, 7, 11, 13}) {
    for (i64 a = -20; a <= 20; ++a) {
      i64 e = nt::powmod(nt::mod(a, p), (p - 1) / 2, p);
      int expect = e == 0 ? 0 : (e == 1 ? 1 : -1);
      EXPECT_EQ(nt::kronecker(a, p), expect);
    }
  }
  EXPECT_EQ(nt::kronecker(5, 8), -1);
  EXPECT_EQ(nt::kronecker(17, 8), 1);
}

TEST(Abelian, UnitGroups) {
  EXPECT_EQ(unit_group(8).group().invariants(), (std::vector<i64>{2, 2}));
  EXPECT_EQ(unit_group(5).group().invariants(), (std::vector<i64>{4}));
  EXPECT_EQ(unit_group(15).group().invariants(), (std::vector<i64>{2, 4}));
  EXPECT_TRUE(unit_group(2).group().invariants().empty());
  EXPECT_TRUE(unit_group(1).group().invariants().empty());
}

TEST(Abelian, UnitLogIsHomomorphism) {
  for (i64 m = 1; m <= 40; ++m) {
    auto u = unit_group(m);
    const auto& g = u.group();
    for (auto x : u.residues)
      for (auto y : u.residues)
        EXPECT_EQ(u.log(nt::mulmod(x, y, m)), g.add(u.log(x), u.log(y)));
  }
}

TEST(Abelian, HomCounts) {
  EXPECT_EQ(enumerate_homs(unit_group(8).group(), FiniteAbelianGroup({2})).size(), 4u);
  EXPECT_EQ(enumerate_homs(FiniteAbelianGroup(), FiniteAbelianGroup({6})).size(), 1u);
  EXPECT_EQ(enumerate_homs(unit_group(5).group(), FiniteAbelianGroup({2})).size(), 2u);
}
