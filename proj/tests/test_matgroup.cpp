#include <gtest/gtest.h>

#include <random>
#include <set>

#include "aimg/matgroup.hpp"

using namespace aimg;

namespace {

// Brute-force closure: repeated products until nothing new appears.
std::set<ResidueMatrix> naive_closure(i64 n, const std::vector<ResidueMatrix>& gens) {
  std::set<ResidueMatrix> s{ResidueMatrix::identity(n)};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<ResidueMatrix> cur(s.begin(), s.end());
    for (const auto& x : cur)
      for (const auto& g : gens)
        if (s.insert(x * g).second) grew = true;
  }
  return s;
}

std::set<ResidueMatrix> naive_derived(const FiniteMatrixGroup& g) {
  std::vector<ResidueMatrix> comms;
  auto el = g.elements();
  std::set<ResidueMatrix> seen;
  for (const auto& x : el)
    for (const auto& y : el) {
      auto c = x * y * x.inverse() * y.inverse();
      if (seen.insert(c).second) comms.push_back(c);
    }
  return naive_closure(g.modulus(), comms);
}

std::set<ResidueMatrix> as_set(const FiniteMatrixGroup& g) {
  auto e = g.elements();
  return {e.begin(), e.end()};
}

ResidueMatrix random_unit_matrix(std::mt19937& rng, i64 n) {
  for (;;) {
    ResidueMatrix m(rng() % n, rng() % n, rng() % n, rng() % n, n);
    if (m.is_invertible()) return m;
  }
}

}  // namespace

TEST(MatGroup, ClosureExamples) {
  EXPECT_EQ(closure(2, {{1, 1, 0, 1, 2}, {0, 1, 1, 0, 2}}).order(), 6);
  EXPECT_EQ(closure(4, {ResidueMatrix::identity(4)}).order(), 1);
  EXPECT_EQ(closure(4, {ResidueMatrix::minus_identity(4)}).order(), 2);
  try {
    closure(4, {{2, 0, 0, 1, 4}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInvertible);
  }
}

TEST(MatGroup, FullGroupsHaveFormulaOrder) {
  for (i64 n = 1; n <= 16; ++n) {
    EXPECT_EQ(gl2_group(n).order(), nt::gl2_order(n)) << n;
    EXPECT_EQ(sl2_group(n).order(), nt::sl2_order(n)) << n;
  }
}

TEST(MatGroup, IndexAndCosets) {
  auto g = gl2_group(2);
  auto d = derived_subgroup(g);
  auto cd = index_and_cosets(g, d);
  EXPECT_EQ(cd.index, 2);
  EXPECT_EQ(cd.representatives.size(), 2u);
  EXPECT_EQ(cd.representatives.front(), ResidueMatrix(0, 1, 1, 0, 2));
  EXPECT_EQ(index_and_cosets(g, g).index, 1);
  auto borel3 = closure(3, {{1, 1, 0, 1, 3}, {2, 0, 0, 1, 3}});
  auto lower3 = closure(3, {{1, 0, 1, 1, 3}});
  try {
    index_and_cosets(borel3, lower3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotASubgroup);
  }
}

TEST(MatGroup, CosetRepresentativesPartition) {
  auto g = gl2_group(4);
  auto h = closure(4, {{1, 1, 0, 1, 4}, {3, 0, 0, 1, 4}});
  auto cd = index_and_cosets(g, h);
  std::set<ResidueMatrix> covered;
  for (const auto& r : cd.representatives)
    for (const auto& y : h.elements()) EXPECT_TRUE(covered.insert(r * y).second);
  EXPECT_EQ(static_cast<i64>(covered.size()), g.order());
  EXPECT_TRUE(std::is_sorted(cd.representatives.begin(), cd.representatives.end()));
}

TEST(MatGroup, DerivedExamples) {
  EXPECT_EQ(derived_subgroup(gl2_group(2)).order(), 3);
  auto diag5 = closure(5, {ResidueMatrix::diagonal(2, 1, 5), ResidueMatrix::diagonal(1, 2, 5)});
  EXPECT_EQ(derived_subgroup(diag5).order(), 1);
  auto d3 = derived_subgroup(gl2_group(3));
  EXPECT_TRUE(same_group(d3, sl2_group(3)));
  EXPECT_EQ(index_and_cosets(gl2_group(3), d3).index, 2);
}

TEST(MatGroup, ConjugacyExamples) {
  auto b = closure(3, {{1, 1, 0, 1, 3}, {2, 0, 0, 1, 3}, {1, 0, 0, 2, 3}});
  auto same = is_conjugate_subgroup(b, b);
  ASSERT_TRUE(same);
  EXPECT_TRUE(same->is_identity());
  auto lower = transpose_group(b);
  auto w = is_conjugate_subgroup(b, lower);
  ASSERT_TRUE(w);
  EXPECT_TRUE(same_group(conjugate(b, *w), lower));
  EXPECT_TRUE(same_group(conjugate(b, ResidueMatrix(0, 1, 1, 0, 3)), lower));
  EXPECT_FALSE(is_conjugate_subgroup(b, sl2_group(3)));
}

TEST(MatGroup, AbelianInvariants) {
  auto scalars8 = closure(8, {ResidueMatrix::diagonal(3, 3, 8), ResidueMatrix::diagonal(5, 5, 8)});
  EXPECT_EQ(abelian_invariants(scalars8).invariants(), (std::vector<i64>{2, 2}));
  EXPECT_TRUE(abelian_invariants(trivial_group(5)).invariants().empty());
  auto scalars5 = closure(5, {ResidueMatrix::diagonal(2, 2, 5)});
  EXPECT_EQ(abelian_invariants(scalars5).invariants(), (std::vector<i64>{4}));
  try {
    abelian_invariants(gl2_group(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAbelian);
  }
  auto borel2 = closure(2, {{1, 1, 0, 1, 2}});
  try {
    abelian_invariants(gl2_group(2), borel2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormal);
  }
  EXPECT_EQ(abelian_invariants(gl2_group(4), derived_subgroup(gl2_group(4))).order(),
            gl2_group(4).order() / derived_subgroup(gl2_group(4)).order());
}

TEST(MatGroup, QuotientIdentityCosetFirst) {
  auto g = gl2_group(3);
  QuotientGroup q(g, sl2_group(3));
  EXPECT_EQ(q.size(), 2);
  EXPECT_EQ(q.coset_of(ResidueMatrix::identity(3)), 0);
  EXPECT_EQ(q.coset_of(ResidueMatrix::diagonal(2, 1, 3)), 1);
}

TEST(MatGroupProperty, RandomGroupsAgreeWithNaive) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    i64 n = 2 + rng() % 7;
    int k = 1 + rng() % 3;
    std::vector<ResidueMatrix> gens;
    for (int i = 0; i < k; ++i) gens.push_back(random_unit_matrix(rng, n));
    auto g = closure(n, gens);
    auto naive = naive_closure(n, gens);
    EXPECT_EQ(as_set(g), naive);
    EXPECT_EQ(nt::gl2_order(n) % g.order(), 0);
    // idempotence
    EXPECT_EQ(closure(n, g.elements()).order(), g.order());
    auto d = derived_subgroup(g);
    EXPECT_EQ(as_set(d), naive_derived(g));
    EXPECT_TRUE(is_normal(d, g));
    EXPECT_EQ(g.order() % d.order(), 0);
    EXPECT_NO_THROW(abelian_invariants(g, d));
    EXPECT_EQ(abelian_invariants(g, d).order(), g.order() / d.order());
    auto s = sl2_part(g);
    i64 expect = 0;
    for (const auto& x : g.elements()) expect += x.det() == 1 % n;
    EXPECT_EQ(s.order(), expect);
    auto t = transpose_group(g);
    EXPECT_TRUE(same_group(transpose_group(t), g));
  }
}

TEST(MatGroupProperty, HomCountMatchesBruteForce) {
  std::vector<FiniteAbelianGroup> groups{FiniteAbelianGroup(), FiniteAbelianGroup({2}), FiniteAbelianGroup({4}),
                                         FiniteAbelianGroup({2, 2}), FiniteAbelianGroup({2, 4}), FiniteAbelianGroup({6}),
                                         FiniteAbelianGroup({3, 3})};
  for (const auto& a : groups)
    for (const auto& q : groups) {
      // brute force: all assignments of generator images, kept if orders divide
      i64 count = 0;
      const auto qe = q.elements();
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == a.rank()) {
          ++count;
          return;
        }
        for (const auto& x : qe)
          if (a.invariants()[i] % q.element_order(x) == 0) rec(i + 1);
      };
      rec(0);
      auto homs = enumerate_homs(a, q);
      EXPECT_EQ(static_cast<i64>(homs.size()), count);
      EXPECT_EQ(hom_count(a, q), count);
      for (std::size_t i = 0; i < homs.size(); ++i)
        for (std::size_t j = i + 1; j < homs.size(); ++j) EXPECT_FALSE(homs[i] == homs[j]);
    }
}

TEST(MatGroup, CapIsEnforced) {
  try {
    FiniteMatrixGroup g(7, gl2_generators(7), 100);
    g.order();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResourceExceeded);
  }
}
