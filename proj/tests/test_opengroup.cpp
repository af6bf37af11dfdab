#include <gtest/gtest.h>

#include <random>

#include "aimg/opengroup.hpp"

using namespace aimg;

namespace {

ResidueMatrix random_unit_matrix(std::mt19937& rng, i64 n) {
  for (;;) {
    ResidueMatrix m(rng() % n, rng() % n, rng() % n, rng() % n, n);
    if (m.is_invertible()) return m;
  }
}

// Brute-force image at n: every invertible matrix mod n whose reduction mod
// the level lies in the group.
i64 brute_image_order(const OpenSubgroup& g, i64 n) {
  i64 count = 0;
  for_each_gl2(n, [&](const ResidueMatrix& x) {
    count += g.image().contains(reduce_mod(x, g.level()));
    return false;
  });
  return count;
}

}  // namespace

TEST(OpenGroup, IntersectSl2) {
  OpenSubgroup full2(2, gl2_generators(2));
  EXPECT_EQ(intersect_sl2(full2).order(), 6);
  OpenSubgroup scalars5(5, {ResidueMatrix::diagonal(2, 2, 5)});
  auto s = intersect_sl2(scalars5);
  EXPECT_EQ(s.order(), 2);
  EXPECT_TRUE(s.contains(ResidueMatrix::diagonal(4, 4, 5)));
  EXPECT_EQ(intersect_sl2(OpenSubgroup::full()).order(), 1);  // mod 1 the image is everything
}

TEST(OpenGroup, DetImage) {
  auto d5 = det_image(OpenSubgroup(5, gl2_generators(5)));
  EXPECT_TRUE(d5.full);
  EXPECT_EQ(d5.residues.size(), 4u);
  auto d4 = det_image(OpenSubgroup(4, sl2_generators(4)));
  EXPECT_FALSE(d4.full);
  EXPECT_EQ(d4.residues, (std::vector<i64>{1}));
  OpenSubgroup diag8(8, {ResidueMatrix::diagonal(3, 1, 8), ResidueMatrix::diagonal(5, 1, 8), ResidueMatrix::diagonal(7, 1, 8)});
  EXPECT_TRUE(det_image(diag8).full);
}

TEST(OpenGroup, Transpose) {
  OpenSubgroup borel(3, {{1, 1, 0, 1, 3}, {2, 0, 0, 1, 3}, {1, 0, 0, 2, 3}});
  auto t = transpose_group(borel);
  OpenSubgroup lower(3, {{1, 0, 1, 1, 3}, {2, 0, 0, 1, 3}, {1, 0, 0, 2, 3}});
  EXPECT_TRUE(same_open_group(t, lower));
  EXPECT_TRUE(same_open_group(transpose_group(t), borel));
  OpenSubgroup sym(4, {ResidueMatrix::diagonal(3, 1, 4), {0, 1, 1, 0, 4}});
  EXPECT_TRUE(same_open_group(transpose_group(sym), sym));
}

TEST(OpenGroup, MinimalLevel) {
  EXPECT_EQ(minimal_level(OpenSubgroup(6, gl2_generators(6))).level(), 1);
  // kernel of reduction mod 2, presented at level 4
  OpenSubgroup k(4, reduction_kernel_generators(4, 2));
  auto mk = minimal_level(k);
  EXPECT_EQ(mk.level(), 2);
  EXPECT_EQ(mk.image().order(), 1);
  // upper unipotent times scalars mod 4 is a genuine level-4 group
  OpenSubgroup g4(4, {{1, 1, 0, 1, 4}, ResidueMatrix::diagonal(3, 3, 4), ResidueMatrix::diagonal(1, 3, 4)});
  EXPECT_EQ(minimal_level(g4).level(), 4);
}

TEST(OpenGroup, ImageAtMatchesBruteForce) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    i64 m = std::vector<i64>{2, 3, 4, 6}[rng() % 4];
    std::vector<ResidueMatrix> gens;
    for (int i = 0; i < 2; ++i) gens.push_back(random_unit_matrix(rng, m));
    OpenSubgroup g(m, gens);
    for (i64 n : {2 * m, 3 * m}) {
      if (n > 12) continue;
      EXPECT_EQ(image_at(g, n).order(), brute_image_order(g, n)) << m << " " << n;
      EXPECT_TRUE(same_group(reduce_group(image_at(g, n), m), g.image()));
    }
  }
}

TEST(OpenGroup, KernelGeneratorsGiveKernel) {
  for (auto [n, m] : std::vector<std::pair<i64, i64>>{{4, 2}, {8, 2}, {8, 4}, {12, 6}, {9, 3}, {6, 1}, {16, 2}, {18, 6}}) {
    FiniteMatrixGroup k(n, reduction_kernel_generators(n, m));
    EXPECT_EQ(k.order(), nt::gl2_order(n) / nt::gl2_order(m)) << n << " " << m;
    for (const auto& x : k.generators()) EXPECT_TRUE(reduce_mod(x, m).is_identity());
  }
}

TEST(OpenGroup, CommutatorOfFullGroup) {
  auto r = commutator_open(OpenSubgroup::full());
  EXPECT_EQ(r.index_in_sl, 2);
  EXPECT_FALSE(r.greater_than_two);
  EXPECT_TRUE(r.full_determinant);
  EXPECT_EQ(commutator_index_class(OpenSubgroup::full()).kind, IndexClass::IndexTwo);
}

TEST(OpenGroup, CommutatorTrivialSl2Part) {
  // diagonal group diag(u, 1): abelian, det injective, so SL2-part and
  // commutator are both trivial at the level
  OpenSubgroup d(5, {ResidueMatrix::diagonal(2, 1, 5)});
  EXPECT_EQ(intersect_sl2(d).order(), 1);
  EXPECT_EQ(derived_subgroup(d.image()).order(), 1);
}

TEST(OpenGroup, CommutatorMatchesFiniteLevels) {
  // kernel of the sign character of GL2(Z/2) ~ S3, pulled back to level 4
  OpenSubgroup g(4, {{1, 1, 1, 0, 4}, {0, 1, 1, 1, 4}, {1, 2, 0, 1, 4}, {1, 0, 2, 1, 4}, ResidueMatrix::diagonal(3, 1, 4)});
  auto r = commutator_open(g);
  // the 2-part of the index must agree with brute-force derived subgroups at 8 and 16
  i64 idx8 = sl2_part(image_at(g, 8)).order() / derived_subgroup(image_at(g, 8)).order();
  i64 idx16 = sl2_part(image_at(g, 16)).order() / derived_subgroup(image_at(g, 16)).order();
  EXPECT_EQ(idx8, idx16);
  EXPECT_EQ(r.index_in_sl, idx16 * 1);  // the 3-adic factor GL2(Z_3) contributes index 1
}

TEST(OpenGroupProperty, CommutatorOracle) {
  std::mt19937 rng(9);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 15; ++trial) {
    i64 m = std::vector<i64>{2, 3, 4, 6, 8}[rng() % 5];
    std::vector<ResidueMatrix> gens;
    int k = 1 + rng() % 3;
    for (int i = 0; i < k; ++i) gens.push_back(random_unit_matrix(rng, m));
    OpenSubgroup g(m, gens);
    if (g.image().order() > 100000) continue;
    auto r = commutator_open(g);
    const i64 n = r.saturation_level;
    if (g.image().order() * (nt::gl2_order(n) / nt::gl2_order(m)) > 200000) continue;
    ++checked;
    auto img = image_at(g, n);
    auto brute = derived_subgroup(img);
    FiniteMatrixGroup claimed(n, r.commutator.generators());
    EXPECT_TRUE(same_group(brute, claimed));
    EXPECT_EQ(sl2_part(img).order() / brute.order(), r.index_in_sl);
    EXPECT_TRUE(is_subgroup(claimed, sl2_part(img)));
    // one further step at every prime leaves the index unchanged
    for (i64 p : nt::prime_divisors(n)) {
      const i64 up = n * p;
      if (g.image().order() * (nt::gl2_order(up) / nt::gl2_order(m)) > 400000) continue;
      auto img_up = image_at(g, up);
      EXPECT_EQ(sl2_part(img_up).order() / derived_subgroup(img_up).order(), r.index_in_sl) << "level " << up;
    }
    // transpose commutes with the commutator
    auto rt = commutator_open(transpose_group(g));
    EXPECT_EQ(rt.index_in_sl, r.index_in_sl);
  }
  EXPECT_GE(checked, 10);
}
