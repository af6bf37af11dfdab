#pragma once

#include <string>
#include <vector>

#include "aimg/opengroup.hpp"

namespace aimg {

using Permutation = std::vector<int>;

/// Right action of SL2(Z/N) on the right cosets of a subgroup containing -I.
/// Cosets are numbered by first appearance when SL2(Z/N) is scanned in
/// lexicographic order.
struct CosetAction {
  i64 level = 1;
  int degree = 1;
  Permutation perm_s, perm_t, perm_st;
  std::vector<ResidueMatrix> representatives;
};

struct GenusData {
  i64 degree = 1;
  i64 e2 = 0;
  i64 e3 = 0;
  i64 e_inf = 0;
  i64 genus = 0;
};

inline int count_fixed_points(const Permutation& p) {
  int c = 0;
  for (std::size_t i = 0; i < p.size(); ++i) c += p[i] == static_cast<int>(i);
  return c;
}

inline int count_cycles(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  int c = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    ++c;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) seen[j] = 1;
  }
  return c;
}

/// Coset action of SL2(Z/N) on the cosets of <H, -I>, for H inside SL2(Z/N).
inline CosetAction coset_action_sl2(const FiniteMatrixGroup& h) {
  const i64 n = h.modulus();
  CosetAction out;
  out.level = n;
  if (n == 1) {
    out.perm_s = out.perm_t = out.perm_st = {0};
    out.representatives = {ResidueMatrix::identity(1)};
    return out;
  }
  for (const auto& x : h.generators())
    if (x.det() != 1) throw Error(ErrorKind::NotASubgroup, x.to_string() + " is not in SL2");
  auto pm = h.extended({ResidueMatrix::minus_identity(n)});
  auto sl = sl2_group(n);
  const auto hs = pm.elements();
  std::vector<int> coset(static_cast<std::size_t>(sl.order()), -1);
  for (const auto& x : sl.sorted_elements()) {
    auto ix = static_cast<std::size_t>(sl.index_of(x));
    if (coset[ix] >= 0) continue;
    const int id = static_cast<int>(out.representatives.size());
    out.representatives.push_back(x);
    for (const auto& y : hs) coset[static_cast<std::size_t>(sl.index_of(y * x))] = id;
  }
  out.degree = static_cast<int>(out.representatives.size());
  auto act = [&](const ResidueMatrix& g) {
    Permutation p(static_cast<std::size_t>(out.degree));
    for (int i = 0; i < out.degree; ++i) p[i] = coset[static_cast<std::size_t>(sl.index_of(out.representatives[i] * g))];
    return p;
  };
  const ResidueMatrix s(0, -1, 1, 0, n), t(1, 1, 0, 1, n);
  out.perm_s = act(s);
  out.perm_t = act(t);
  out.perm_st = act(s * t);
  return out;
}

/// Coset action for the modular curve of G: SL2(Z/N) acting on the cosets of
/// (+-G) intersected with SL2, N the presented level.
inline CosetAction coset_action(const OpenSubgroup& g) {
  if (g.level() == 1) return coset_action_sl2(trivial_group(1));
  return coset_action_sl2(intersect_sl2(with_minus_identity(g)));
}

inline GenusData genus_from_action(const CosetAction& a) {
  GenusData out;
  out.degree = a.degree;
  out.e2 = count_fixed_points(a.perm_s);
  out.e3 = count_fixed_points(a.perm_st);
  out.e_inf = count_cycles(a.perm_t);
  const i64 twelve_g = 12 + out.degree - 3 * out.e2 - 4 * out.e3 - 6 * out.e_inf;
  if (twelve_g < 0 || twelve_g % 12 != 0)
    throw Error(ErrorKind::NonIntegralGenus, "12g = " + std::to_string(twelve_g) + " for degree " + std::to_string(out.degree));
  out.genus = twelve_g / 12;
  return out;
}

inline GenusData genus(const OpenSubgroup& g) { return genus_from_action(coset_action(g)); }

inline GenusData genus_sl2(const FiniteMatrixGroup& h) { return genus_from_action(coset_action_sl2(h)); }

}  // namespace aimg
