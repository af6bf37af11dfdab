#pragma once

#include <random>
#include <vector>

#include "aimg/families.hpp"

namespace aimg::testing {

inline ResidueMatrix random_unit_matrix(std::mt19937& rng, i64 n) {
  for (;;) {
    ResidueMatrix m(static_cast<i64>(rng() % n), static_cast<i64>(rng() % n), static_cast<i64>(rng() % n),
                    static_cast<i64>(rng() % n), n);
    if (m.is_invertible()) return m;
  }
}

inline ResidueMatrix random_element(std::mt19937& rng, const FiniteMatrixGroup& g) {
  return g.element(static_cast<i64>(rng() % static_cast<std::uint32_t>(g.order())));
}

/// A random family: G0 generated by random matrices at a small level (plus
/// diag(u, 1) so that det is onto), H between [G0, G0] and G0, and a modulus
/// M drawn from `moduli`.
inline FamilySpec random_family_spec(std::mt19937& rng, const std::vector<i64>& levels, const std::vector<i64>& moduli) {
  const i64 l = levels[rng() % levels.size()];
  std::vector<ResidueMatrix> gens;
  const int k = 1 + static_cast<int>(rng() % 2);
  for (int i = 0; i < k; ++i) gens.push_back(random_unit_matrix(rng, l));
  auto units = unit_group(l);
  for (int b : units.dec.basis) gens.push_back(ResidueMatrix::diagonal(units.residues[static_cast<std::size_t>(b)], 1, l));
  FiniteMatrixGroup g0(l, gens);
  auto d = derived_subgroup(g0);
  std::vector<ResidueMatrix> extra;
  const int e = static_cast<int>(rng() % 2);
  for (int i = 0; i < e; ++i) extra.push_back(random_element(rng, g0));
  auto h = d.extended(extra);
  return {OpenSubgroup::from_group(g0), OpenSubgroup::from_group(h), moduli[rng() % moduli.size()]};
}

}  // namespace aimg::testing
