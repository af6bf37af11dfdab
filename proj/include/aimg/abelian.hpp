#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "aimg/error.hpp"
#include "aimg/numtheory.hpp"

namespace aimg {

/// Finite abelian group Z/d1 x ... x Z/dk with d1 | d2 | ... | dk, every
/// di > 1. Elements are exponent vectors reduced modulo the invariants.
class FiniteAbelianGroup {
 public:
  using Element = std::vector<i64>;

  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<i64> invariants) : inv_(std::move(invariants)) {
    for (std::size_t i = 0; i < inv_.size(); ++i) {
      if (inv_[i] < 2) throw Error(ErrorKind::SchemaError, "cyclic invariants must exceed 1");
      if (i > 0 && inv_[i] % inv_[i - 1] != 0) throw Error(ErrorKind::SchemaError, "invariants must form a divisor chain");
    }
  }

  const std::vector<i64>& invariants() const { return inv_; }
  std::size_t rank() const { return inv_.size(); }

  i64 order() const {
    i64 r = 1;
    for (auto d : inv_) r *= d;
    return r;
  }

  i64 exponent() const { return inv_.empty() ? 1 : inv_.back(); }

  Element zero() const { return Element(inv_.size(), 0); }

  Element reduce(Element e) const {
    for (std::size_t i = 0; i < inv_.size(); ++i) e[i] = nt::mod(e[i], inv_[i]);
    return e;
  }

  Element add(const Element& x, const Element& y) const {
    Element r(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) r[i] = (x[i] + y[i]) % inv_[i];
    return r;
  }

  Element scale(const Element& x, i64 k) const {
    Element r(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) r[i] = nt::mod(nt::mulmod(x[i], nt::mod(k, inv_[i]), inv_[i]), inv_[i]);
    return r;
  }

  Element negate(const Element& x) const { return scale(x, -1); }

  i64 element_order(const Element& x) const {
    i64 r = 1;
    for (std::size_t i = 0; i < inv_.size(); ++i) r = std::lcm(r, inv_[i] / std::gcd(inv_[i], x[i]));
    return r;
  }

  /// All elements in lexicographic order of exponent vectors.
  std::vector<Element> elements() const {
    std::vector<Element> out;
    Element e = zero();
    for (i64 k = 0; k < order(); ++k) {
      out.push_back(e);
      for (std::size_t i = inv_.size(); i-- > 0;) {
        if (++e[i] < inv_[i]) break;
        e[i] = 0;
      }
    }
    return out;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < inv_.size(); ++i) s += (i ? "," : "") + std::to_string(inv_[i]);
    return s + "]";
  }

  friend bool operator==(const FiniteAbelianGroup&, const FiniteAbelianGroup&) = default;

 private:
  std::vector<i64> inv_;
};

/// An explicit isomorphism between a concrete abelian group, given as n
/// indexed elements (index 0 is the identity) with a multiplication
/// callback, and its cyclic decomposition.
struct AbelianDecomposition {
  FiniteAbelianGroup group;
  std::vector<int> basis;                          // basis[i] has order invariants[i]
  std::vector<FiniteAbelianGroup::Element> log;    // exponent vector of each index
  std::map<FiniteAbelianGroup::Element, int> exp;  // inverse of log

  int index_of(const FiniteAbelianGroup::Element& e) const { return exp.at(group.reduce(e)); }
};

namespace detail {

inline int power_index(int x, i64 k, const std::function<int(int, int)>& mul) {
  int r = 0;
  for (i64 i = 0; i < k; ++i) r = mul(r, x);
  return r;
}

inline bool search_basis(std::size_t pos, const std::vector<i64>& desc_invariants, const std::vector<i64>& orders,
                         std::vector<char>& in_sub, std::vector<int>& sub, std::vector<int>& chosen,
                         const std::function<int(int, int)>& mul, int& budget) {
  if (pos == desc_invariants.size()) return true;
  const i64 d = desc_invariants[pos];
  const int n = static_cast<int>(orders.size());
  for (int x = 0; x < n; ++x) {
    if (orders[x] != d) continue;
    if (--budget < 0) return false;
    bool independent = true;
    int y = x;
    for (i64 k = 1; k < d; ++k) {
      if (in_sub[y]) {
        independent = false;
        break;
      }
      y = mul(y, x);
    }
    if (!independent) continue;
    std::vector<int> added;
    int g = x;
    for (i64 k = 1; k < d; ++k) {
      for (int s : sub) {
        int z = mul(s, g);
        added.push_back(z);
      }
      g = mul(g, x);
    }
    for (int z : added) in_sub[z] = 1;
    std::size_t old = sub.size();
    sub.insert(sub.end(), added.begin(), added.end());
    chosen.push_back(x);
    if (search_basis(pos + 1, desc_invariants, orders, in_sub, sub, chosen, mul, budget)) return true;
    chosen.pop_back();
    for (int z : added) in_sub[z] = 0;
    sub.resize(old);
  }
  return false;
}

}  // namespace detail

/// Decomposes a finite abelian group into invariant factors and finds a
/// basis realizing them. Throws NotAbelian if the data is not an abelian group.
inline AbelianDecomposition decompose_abelian(int n, const std::function<int(int, int)>& mul) {
  std::vector<i64> orders(n, 0);
  for (int x = 0; x < n; ++x) {
    int y = x;
    i64 k = 1;
    while (y != 0) {
      y = mul(y, x);
      if (++k > n) throw Error(ErrorKind::NotAbelian, "element order exceeds group order");
    }
    orders[x] = k;
  }
  // p-primary exponent partitions from counts of elements killed by p^k.
  std::map<i64, std::vector<int>> primary;  // p -> exponents, descending
  for (auto [p, e] : nt::factorize(n)) {
    std::vector<int> s{0};
    for (int k = 1; k <= e; ++k) {
      i64 pk = nt::ipow(p, k);
      i64 cnt = 0;
      for (int x = 0; x < n; ++x)
        if (pk % orders[x] == 0) ++cnt;
      int lg = 0;
      i64 c = cnt;
      while (c % p == 0) {
        c /= p;
        ++lg;
      }
      if (c != 1) throw Error(ErrorKind::NotAbelian, "element counts inconsistent with an abelian group");
      s.push_back(lg);
    }
    // number of cyclic factors with exponent >= k is s_k - s_{k-1}
    std::vector<int> exps;
    for (int k = e; k >= 1; --k) {
      int ge_k = s[k] - s[k - 1];
      int ge_k1 = k < e ? s[k + 1] - s[k] : 0;
      for (int j = 0; j < ge_k - ge_k1; ++j) exps.push_back(k);
    }
    primary[p] = exps;
  }
  std::size_t rank = 0;
  for (auto& [p, ex] : primary) rank = std::max(rank, ex.size());
  std::vector<i64> desc(rank, 1);
  for (auto& [p, ex] : primary)
    for (std::size_t j = 0; j < ex.size(); ++j) desc[j] *= nt::ipow(p, ex[j]);
  i64 prod = 1;
  for (auto d : desc) prod *= d;
  if (prod != n) throw Error(ErrorKind::NotAbelian, "invariant factors do not multiply to the group order");

  std::vector<char> in_sub(n, 0);
  in_sub[0] = 1;
  std::vector<int> sub{0}, chosen;
  int budget = 1'000'000;
  if (!detail::search_basis(0, desc, orders, in_sub, sub, chosen, mul, budget) || static_cast<int>(sub.size()) != n)
    throw Error(ErrorKind::NotAbelian, "no basis realizes the invariant factors");
  for (std::size_t i = 0; i < chosen.size(); ++i)
    for (std::size_t j = i + 1; j < chosen.size(); ++j)
      if (mul(chosen[i], chosen[j]) != mul(chosen[j], chosen[i]))
        throw Error(ErrorKind::NotAbelian, "basis elements do not commute");

  AbelianDecomposition dec;
  std::vector<i64> asc(desc.rbegin(), desc.rend());
  dec.group = FiniteAbelianGroup(asc);
  dec.basis.assign(chosen.rbegin(), chosen.rend());
  dec.log.assign(n, {});
  std::vector<char> seen(n, 0);
  for (const auto& e : dec.group.elements()) {
    int idx = 0;
    for (std::size_t i = 0; i < e.size(); ++i) idx = mul(idx, detail::power_index(dec.basis[i], e[i], mul));
    if (seen[idx]) throw Error(ErrorKind::NotAbelian, "basis products collide");
    seen[idx] = 1;
    dec.log[idx] = e;
    dec.exp[e] = idx;
  }
  if (static_cast<int>(dec.exp.size()) != n) throw Error(ErrorKind::NotAbelian, "basis does not span");
  return dec;
}

/// (Z/MZ)^x with an explicit cyclic decomposition.
struct UnitGroup {
  i64 modulus = 1;
  std::vector<i64> residues;  // residues[idx]; residues[0] == 1 mod M
  AbelianDecomposition dec;

  int index_of_residue(i64 r) const {
    r = nt::mod(r, modulus);
    auto it = std::lower_bound(residues.begin(), residues.end(), r);
    if (it == residues.end() || *it != r) throw Error(ErrorKind::NotInvertible, "not a unit modulo " + std::to_string(modulus));
    return static_cast<int>(it - residues.begin());
  }

  FiniteAbelianGroup::Element log(i64 r) const { return dec.log[index_of_residue(r)]; }
  const FiniteAbelianGroup& group() const { return dec.group; }
};

inline UnitGroup unit_group(i64 modulus) {
  UnitGroup u;
  u.modulus = modulus;
  u.residues = nt::units(modulus);
  auto mul = [&u](int x, int y) {
    return u.index_of_residue(nt::mulmod(u.residues[x], u.residues[y], u.modulus));
  };
  u.dec = decompose_abelian(static_cast<int>(u.residues.size()), mul);
  return u;
}

/// A homomorphism between finite abelian groups, stored as the images of
/// the source's cyclic generators.
struct AbelianHom {
  std::vector<FiniteAbelianGroup::Element> images;

  FiniteAbelianGroup::Element apply(const FiniteAbelianGroup& target, const FiniteAbelianGroup::Element& x) const {
    auto r = target.zero();
    for (std::size_t i = 0; i < images.size(); ++i) r = target.add(r, target.scale(images[i], x[i]));
    return r;
  }

  bool is_trivial(const FiniteAbelianGroup& target) const {
    return std::all_of(images.begin(), images.end(), [&](const auto& e) { return e == target.zero(); });
  }

  friend bool operator==(const AbelianHom&, const AbelianHom&) = default;
};

/// Whether the given generator images define a homomorphism source -> target.
inline bool is_homomorphism(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target, const AbelianHom& h) {
  if (h.images.size() != source.rank()) return false;
  for (std::size_t i = 0; i < source.rank(); ++i) {
    if (h.images[i].size() != target.rank()) return false;
    if (source.invariants()[i] % target.element_order(target.reduce(h.images[i])) != 0) return false;
  }
  return true;
}

/// Every homomorphism source -> target, in lexicographic order of images.
inline std::vector<AbelianHom> enumerate_homs(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target) {
  const auto targets = target.elements();
  std::vector<std::vector<FiniteAbelianGroup::Element>> choices;
  for (auto d : source.invariants()) {
    std::vector<FiniteAbelianGroup::Element> ok;
    for (const auto& q : targets)
      if (d % target.element_order(q) == 0) ok.push_back(q);
    choices.push_back(std::move(ok));
  }
  std::vector<AbelianHom> out;
  AbelianHom cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == choices.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& q : choices[i]) {
      cur.images.push_back(q);
      rec(i + 1);
      cur.images.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Closed-form count prod_{i,j} gcd(d_i, e_j).
inline i64 hom_count(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target) {
  i64 r = 1;
  for (auto d : source.invariants())
    for (auto e : target.invariants()) r *= std::gcd(d, e);
  return r;
}

}  // namespace aimg
