#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "aimg/lattice.hpp"
#include "aimg/modgenus.hpp"
#include "oracles.hpp"

using namespace aimg;

TEST(ModGenus, LevelOne) {
  auto a = coset_action(OpenSubgroup::full());
  EXPECT_EQ(a.degree, 1);
  auto g = genus(OpenSubgroup::full());
  EXPECT_EQ(g.genus, 0);
  EXPECT_EQ(g.degree, 1);
}

TEST(ModGenus, PrincipalCongruence) {
  auto g5 = genus(OpenSubgroup(5, {}));
  EXPECT_EQ(g5.degree, 60);
  EXPECT_EQ(g5.e2, 0);
  EXPECT_EQ(g5.e3, 0);
  EXPECT_EQ(g5.e_inf, 12);
  EXPECT_EQ(g5.genus, 0);
  auto g7 = genus(OpenSubgroup(7, {}));
  EXPECT_EQ(g7.degree, 168);
  EXPECT_EQ(g7.e_inf, 24);
  EXPECT_EQ(g7.genus, 3);
}

TEST(ModGenus, Borel) {
  OpenSubgroup b2(2, {{1, 1, 0, 1, 2}});
  EXPECT_EQ(coset_action(b2).degree, 3);
  EXPECT_EQ(genus(b2).genus, 0);
  // X0(11) has genus 1
  OpenSubgroup b11(11, {{1, 1, 0, 1, 11}, ResidueMatrix::diagonal(2, 1, 11), ResidueMatrix::diagonal(1, 2, 11)});
  EXPECT_EQ(genus(b11).genus, 1);
  EXPECT_EQ(genus(b11).degree, 12);
}

TEST(ModGenus, CompositionConvention) {
  OpenSubgroup g(4, {{1, 1, 0, 1, 4}});
  auto a = coset_action(g);
  for (int i = 0; i < a.degree; ++i) EXPECT_EQ(a.perm_st[i], a.perm_t[a.perm_s[i]]);
  for (int i = 0; i < a.degree; ++i) EXPECT_EQ(a.perm_s[a.perm_s[i]], i);
}

TEST(ModGenusProperty, ConjugationAndTransposeInvariance) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    i64 n = 2 + rng() % 7;
    std::vector<ResidueMatrix> gens;
    for (int k = 0; k < 2; ++k) {
      for (;;) {
        ResidueMatrix x(rng() % n, rng() % n, rng() % n, rng() % n, n);
        if (x.is_invertible()) {
          gens.push_back(x);
          break;
        }
      }
    }
    OpenSubgroup g(n, gens);
    auto base = genus(g);
    ResidueMatrix c(1, 0, 0, 1, n);
    for (;;) {
      c = ResidueMatrix(rng() % n, rng() % n, rng() % n, rng() % n, n);
      if (c.is_invertible()) break;
    }
    auto conj = OpenSubgroup::from_group(conjugate(g.image(), c));
    EXPECT_EQ(genus(conj).genus, base.genus);
    auto t = genus(transpose_group(g));
    EXPECT_EQ(t.genus, base.genus);
    EXPECT_EQ(t.degree, base.degree);
  }
}

TEST(ModGenusProperty, SubgroupSweepAgainstOracle) {
  for (i64 n = 2; n <= 6; ++n) {
    GroupTable t(sl2_group(n));
    auto reps = conjugacy_class_representatives(t, all_subgroups(t));
    for (const auto& r : reps) {
      auto h = t.to_group(r.generators);
      EXPECT_EQ(genus_sl2(h).genus, oracle::genus(h)) << "N=" << n;
    }
  }
}
