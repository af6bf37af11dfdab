#pragma once

#include <absl/container/flat_hash_set.h>
#include <absl/hash/hash.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "aimg/matgroup.hpp"

namespace aimg {

/// Fixed-size bit set over the element indices of one group.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t universe() const { return n_; }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool subset_of(const ElementSet& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      std::uint64_t w = w_[k];
      while (w) {
        int b = std::countr_zero(w);
        f(k * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  std::vector<int> members() const {
    std::vector<int> out;
    for_each([&](std::size_t i) { out.push_back(static_cast<int>(i)); });
    return out;
  }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;
  friend auto operator<=>(const ElementSet& a, const ElementSet& b) { return a.w_ <=> b.w_; }

  template <class H>
  friend H AbslHashValue(H h, const ElementSet& s) {
    return H::combine(std::move(h), s.w_);
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

/// Indexed view of a materialized group with products by index. Small groups
/// get a full Cayley table; larger ones multiply on demand.
class GroupTable {
 public:
  static constexpr i64 kTableLimit = 2048;

  explicit GroupTable(FiniteMatrixGroup g) : g_(std::move(g)), n_(static_cast<int>(g_.order())) {
    elems_ = g_.elements();
    inv_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) inv_[static_cast<std::size_t>(i)] = index(elems_[static_cast<std::size_t>(i)].inverse());
    if (n_ <= kTableLimit) {
      table_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) table_[static_cast<std::size_t>(i) * n_ + j] = index(elems_[i] * elems_[j]);
    }
  }

  const FiniteMatrixGroup& group() const { return g_; }
  int size() const { return n_; }
  const ResidueMatrix& element(int i) const { return elems_[static_cast<std::size_t>(i)]; }
  int index(const ResidueMatrix& m) const { return static_cast<int>(g_.index_of(m)); }
  int inverse(int i) const { return inv_[static_cast<std::size_t>(i)]; }

  int mul(int i, int j) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(i) * n_ + j];
    return index(elems_[static_cast<std::size_t>(i)] * elems_[static_cast<std::size_t>(j)]);
  }

  int conj(int x, int y) const { return mul(mul(x, y), inverse(x)); }  // x y x^-1

  ElementSet empty_set() const { return ElementSet(static_cast<std::size_t>(n_)); }

  /// Subgroup generated by the given indices.
  ElementSet closure(const std::vector<int>& gens) const {
    ElementSet s = empty_set();
    std::vector<int> queue{0};
    s.set(0);
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int g : gens) {
        int y = mul(queue[h], g);
        if (!s.test(static_cast<std::size_t>(y))) {
          s.set(static_cast<std::size_t>(y));
          queue.push_back(y);
        }
      }
    return s;
  }

  /// Subgroup generated by `base` (a subgroup) together with `gens`, where
  /// `gens` must include generators of `base`.
  ElementSet join(const ElementSet& base, const std::vector<int>& gens) const {
    ElementSet s = base;
    std::vector<int> queue = base.members();
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int g : gens) {
        int y = mul(queue[h], g);
        if (!s.test(static_cast<std::size_t>(y))) {
          s.set(static_cast<std::size_t>(y));
          queue.push_back(y);
        }
      }
    return s;
  }

  /// Subgroup generated by `elems`, together with the sublist of elements
  /// that were needed as generators.
  std::pair<ElementSet, std::vector<int>> closure_of(const std::vector<int>& elems) const {
    ElementSet s = closure({});
    std::vector<int> used;
    for (int x : elems) {
      if (s.test(static_cast<std::size_t>(x))) continue;
      used.push_back(x);
      s = join(s, used);
    }
    return {std::move(s), std::move(used)};
  }

  FiniteMatrixGroup to_group(const std::vector<int>& gens) const {
    std::vector<ResidueMatrix> ms;
    for (int g : gens) ms.push_back(element(g));
    return FiniteMatrixGroup(g_.modulus(), ms, g_.cap());
  }

  ElementSet to_set(const FiniteMatrixGroup& h) const {
    ElementSet s = empty_set();
    for (auto k : h.keys()) {
      int i = index(ResidueMatrix::from_key(k, g_.modulus()));
      if (i < 0) throw Error(ErrorKind::NotASubgroup, "element outside the ambient group");
      s.set(static_cast<std::size_t>(i));
    }
    return s;
  }

  /// Conjugacy classes of elements, each sorted, ordered by least member.
  std::vector<std::vector<int>> conjugacy_classes() const {
    std::vector<int> cls(static_cast<std::size_t>(n_), -1);
    std::vector<std::vector<int>> out;
    std::vector<int> gens;
    for (const auto& s : g_.generators()) gens.push_back(index(s));
    for (int x = 0; x < n_; ++x) {
      if (cls[static_cast<std::size_t>(x)] >= 0) continue;
      int id = static_cast<int>(out.size());
      std::vector<int> orbit{x};
      cls[static_cast<std::size_t>(x)] = id;
      for (std::size_t h = 0; h < orbit.size(); ++h)
        for (int g : gens) {
          int y = conj(g, orbit[h]);
          if (cls[static_cast<std::size_t>(y)] < 0) {
            cls[static_cast<std::size_t>(y)] = id;
            orbit.push_back(y);
          }
        }
      std::sort(orbit.begin(), orbit.end());
      out.push_back(std::move(orbit));
    }
    return out;
  }

  /// Image of a subgroup under conjugation by element x.
  ElementSet conjugate(const ElementSet& s, int x) const {
    ElementSet r = empty_set();
    s.for_each([&](std::size_t y) { r.set(static_cast<std::size_t>(conj(x, static_cast<int>(y)))); });
    return r;
  }

 private:
  FiniteMatrixGroup g_;
  int n_;
  std::vector<ResidueMatrix> elems_;
  std::vector<int> inv_;
  std::vector<int> table_;
};

struct SubgroupRecord {
  ElementSet elements;
  std::vector<int> generators;  // indices into the table
};

namespace detail {

inline std::vector<SubgroupRecord> cyclic_subgroups(const GroupTable& t) {
  std::vector<SubgroupRecord> out;
  absl::flat_hash_set<ElementSet> seen;
  for (int x = 1; x < t.size(); ++x) {
    auto s = t.closure({x});
    if (seen.insert(s).second) out.push_back({std::move(s), {x}});
  }
  return out;
}

inline std::vector<SubgroupRecord> join_saturate(const GroupTable& t, std::vector<SubgroupRecord> start,
                                                 const std::vector<SubgroupRecord>& atoms, std::size_t limit) {
  absl::flat_hash_set<ElementSet> seen;
  for (const auto& s : start) seen.insert(s.elements);
  for (std::size_t i = 0; i < start.size(); ++i) {
    for (const auto& a : atoms) {
      if (a.elements.subset_of(start[i].elements)) continue;
      auto gens = start[i].generators;
      gens.insert(gens.end(), a.generators.begin(), a.generators.end());
      auto j = t.join(start[i].elements, gens);
      if (seen.insert(j).second) {
        start.push_back({std::move(j), std::move(gens)});
        if (start.size() > limit)
          throw Error(ErrorKind::ResourceExceeded, "subgroup lattice exceeds " + std::to_string(limit) + " members");
      }
    }
  }
  return start;
}

}  // namespace detail

/// Every subgroup of the table's group (trivial group first).
inline std::vector<SubgroupRecord> all_subgroups(const GroupTable& t, std::size_t limit = 200000) {
  std::vector<SubgroupRecord> start{{t.closure({}), {}}};
  auto atoms = detail::cyclic_subgroups(t);
  return detail::join_saturate(t, std::move(start), atoms, limit);
}

/// Every subgroup containing the given one.
inline std::vector<SubgroupRecord> overgroups(const GroupTable& t, const SubgroupRecord& base, std::size_t limit = 200000) {
  auto atoms = detail::cyclic_subgroups(t);
  return detail::join_saturate(t, {base}, atoms, limit);
}

/// One representative per conjugacy class under the table's own group.
inline std::vector<SubgroupRecord> conjugacy_class_representatives(const GroupTable& t,
                                                                   const std::vector<SubgroupRecord>& subs) {
  absl::flat_hash_set<ElementSet> covered;
  std::vector<SubgroupRecord> reps;
  for (const auto& s : subs) {
    if (covered.contains(s.elements)) continue;
    reps.push_back(s);
    for (int x = 0; x < t.size(); ++x) covered.insert(t.conjugate(s.elements, x));
  }
  return reps;
}

/// Every normal subgroup, as joins of normal closures of conjugacy classes.
inline std::vector<SubgroupRecord> normal_subgroups(const GroupTable& t, std::size_t limit = 100000) {
  std::vector<SubgroupRecord> atoms;
  absl::flat_hash_set<ElementSet> seen;
  for (const auto& cls : t.conjugacy_classes()) {
    if (cls.front() == 0) continue;
    auto [s, gens] = t.closure_of(cls);
    if (seen.insert(s).second) atoms.push_back({std::move(s), std::move(gens)});
  }
  std::vector<SubgroupRecord> start{{t.closure({}), {}}};
  return detail::join_saturate(t, std::move(start), atoms, limit);
}

}  // namespace aimg
