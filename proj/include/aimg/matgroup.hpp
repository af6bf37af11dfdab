#pragma once

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aimg/abelian.hpp"
#include "aimg/config.hpp"
#include "aimg/error.hpp"
#include "aimg/modmatrix.hpp"

namespace aimg {

namespace detail {

struct GroupData {
  std::once_flag once;
  std::vector<std::uint64_t> keys;  // discovery order, keys[0] is the identity
  absl::flat_hash_map<std::uint64_t, std::uint32_t> index;
};

}  // namespace detail

/// A finite subgroup of GL2(Z/NZ) given by generators. The element set is
/// materialized on first use (breadth-first from the identity, generators
/// applied in order) and shared between copies.
class FiniteMatrixGroup {
 public:
  FiniteMatrixGroup() : FiniteMatrixGroup(1, {}) {}

  FiniteMatrixGroup(i64 modulus, std::vector<ResidueMatrix> generators, i64 cap = default_cap_order())
      : modulus_(modulus), cap_(cap), data_(std::make_shared<detail::GroupData>()) {
    if (modulus > kMaxKeyModulus)
      throw Error(ErrorKind::ResourceExceeded, "modulus " + std::to_string(modulus) + " beyond element-key range");
    for (const auto& g : generators) {
      if (g.modulus() != modulus) throw Error(ErrorKind::ModulusMismatch, g.to_string() + " in a group mod " + std::to_string(modulus));
      if (!g.is_invertible()) throw Error(ErrorKind::NotInvertible, g.to_string());
      if (g.is_identity()) continue;
      if (std::find(gens_.begin(), gens_.end(), g) == gens_.end()) gens_.push_back(g);
    }
  }

  i64 modulus() const { return modulus_; }
  const std::vector<ResidueMatrix>& generators() const { return gens_; }

  i64 order() const { return static_cast<i64>(data().keys.size()); }

  bool contains(const ResidueMatrix& m) const {
    if (m.modulus() != modulus_) throw Error(ErrorKind::ModulusMismatch, m.to_string());
    return data().index.contains(m.key());
  }

  /// Position of m in discovery order, or -1.
  i64 index_of(const ResidueMatrix& m) const {
    const auto& idx = data().index;
    auto it = idx.find(m.key());
    return it == idx.end() ? -1 : static_cast<i64>(it->second);
  }

  ResidueMatrix element(i64 i) const { return ResidueMatrix::from_key(data().keys[static_cast<std::size_t>(i)], modulus_); }

  const std::vector<std::uint64_t>& keys() const { return data().keys; }

  std::vector<ResidueMatrix> elements() const {
    std::vector<ResidueMatrix> out;
    out.reserve(data().keys.size());
    for (auto k : data().keys) out.push_back(ResidueMatrix::from_key(k, modulus_));
    return out;
  }

  /// Elements in lexicographic order of (a, b, c, d).
  std::vector<ResidueMatrix> sorted_elements() const {
    std::vector<std::uint64_t> ks = data().keys;
    std::sort(ks.begin(), ks.end());
    std::vector<ResidueMatrix> out;
    out.reserve(ks.size());
    for (auto k : ks) out.push_back(ResidueMatrix::from_key(k, modulus_));
    return out;
  }

  bool is_materialized() const { return !data_->keys.empty(); }

  i64 cap() const { return cap_; }

  /// The group generated by this one and `extra`, reusing the materialized
  /// elements of this group.
  FiniteMatrixGroup extended(const std::vector<ResidueMatrix>& extra) const {
    FiniteMatrixGroup out(modulus_, gens_, cap_);
    std::vector<ResidueMatrix> fresh;
    for (const auto& x : extra) {
      if (x.modulus() != modulus_) throw Error(ErrorKind::ModulusMismatch, x.to_string());
      if (!x.is_invertible()) throw Error(ErrorKind::NotInvertible, x.to_string());
      if (!contains(x) && std::find(fresh.begin(), fresh.end(), x) == fresh.end()) fresh.push_back(x);
    }
    if (fresh.empty()) return *this;
    out.gens_.insert(out.gens_.end(), fresh.begin(), fresh.end());
    const auto& src = data();
    std::call_once(out.data_->once, [&] {
      auto& d = *out.data_;
      d.keys = src.keys;
      d.index = src.index;
      const std::size_t old = d.keys.size();
      for (std::size_t head = 0; head < d.keys.size(); ++head) {
        auto x = ResidueMatrix::from_key(d.keys[head], modulus_);
        const auto& gs = head < old ? fresh : out.gens_;
        for (const auto& s : gs) {
          auto k = (x * s).key();
          if (d.index.try_emplace(k, static_cast<std::uint32_t>(d.keys.size())).second) {
            d.keys.push_back(k);
            if (static_cast<i64>(d.keys.size()) > cap_) {
              d.keys.clear();
              d.index.clear();
              throw Error(ErrorKind::ResourceExceeded,
                          "group mod " + std::to_string(modulus_) + " exceeds cap of " + std::to_string(cap_) + " elements");
            }
          }
        }
      }
    });
    return out;
  }

 private:
  const detail::GroupData& data() const {
    std::call_once(data_->once, [this] { materialize(); });
    return *data_;
  }

  void materialize() const {
    auto& d = *data_;
    d.keys.clear();
    d.index.clear();
    auto id = ResidueMatrix::identity(modulus_);
    d.keys.push_back(id.key());
    d.index.emplace(id.key(), 0);
    for (std::size_t head = 0; head < d.keys.size(); ++head) {
      auto x = ResidueMatrix::from_key(d.keys[head], modulus_);
      for (const auto& s : gens_) {
        auto k = (x * s).key();
        if (d.index.try_emplace(k, static_cast<std::uint32_t>(d.keys.size())).second) {
          d.keys.push_back(k);
          if (static_cast<i64>(d.keys.size()) > cap_) {
            d.keys.clear();
            d.index.clear();
            throw Error(ErrorKind::ResourceExceeded,
                        "group mod " + std::to_string(modulus_) + " exceeds cap of " + std::to_string(cap_) + " elements");
          }
        }
      }
    }
  }

  i64 modulus_;
  i64 cap_;
  std::vector<ResidueMatrix> gens_;
  std::shared_ptr<detail::GroupData> data_;
};

inline FiniteMatrixGroup closure(i64 modulus, const std::vector<ResidueMatrix>& generators, i64 cap = default_cap_order()) {
  return FiniteMatrixGroup(modulus, generators, cap);
}

inline FiniteMatrixGroup closure(const std::vector<ResidueMatrix>& generators) {
  if (generators.empty()) throw Error(ErrorKind::ModulusMismatch, "closure of an empty list needs an explicit modulus");
  return FiniteMatrixGroup(generators.front().modulus(), generators);
}

inline FiniteMatrixGroup trivial_group(i64 modulus) { return FiniteMatrixGroup(modulus, {}); }

/// Generators of GL2(Z/nZ): both elementary unipotents and diag(u, 1) for a
/// generating set of units.
inline std::vector<ResidueMatrix> gl2_generators(i64 n) {
  if (n == 1) return {};
  std::vector<ResidueMatrix> gens{{1, 1, 0, 1, n}, {1, 0, 1, 1, n}};
  auto ug = unit_group(n);
  for (int b : ug.dec.basis) gens.push_back(ResidueMatrix::diagonal(ug.residues[b], 1, n));
  return gens;
}

inline std::vector<ResidueMatrix> sl2_generators(i64 n) {
  if (n == 1) return {};
  return {{1, 1, 0, 1, n}, {1, 0, 1, 1, n}};
}

inline FiniteMatrixGroup gl2_group(i64 n) { return FiniteMatrixGroup(n, gl2_generators(n)); }
inline FiniteMatrixGroup sl2_group(i64 n) { return FiniteMatrixGroup(n, sl2_generators(n)); }

/// Calls f on every element of GL2(Z/nZ) in lexicographic order; stops early
/// when f returns true.
template <class F>
bool for_each_gl2(i64 n, F&& f) {
  for (i64 a = 0; a < n; ++a)
    for (i64 b = 0; b < n; ++b)
      for (i64 c = 0; c < n; ++c)
        for (i64 d = 0; d < n; ++d) {
          ResidueMatrix m(a, b, c, d, n);
          if (!m.is_invertible()) continue;
          if (f(m)) return true;
        }
  return false;
}

inline bool is_subgroup(const FiniteMatrixGroup& h, const FiniteMatrixGroup& g) {
  if (h.modulus() != g.modulus()) throw Error(ErrorKind::ModulusMismatch, "subgroup test across moduli");
  return std::all_of(h.generators().begin(), h.generators().end(), [&](const auto& x) { return g.contains(x); });
}

inline bool same_group(const FiniteMatrixGroup& a, const FiniteMatrixGroup& b) {
  return a.modulus() == b.modulus() && a.order() == b.order() && is_subgroup(a, b);
}

/// H normal in G (H assumed to be a subgroup).
inline bool is_normal(const FiniteMatrixGroup& h, const FiniteMatrixGroup& g) {
  for (const auto& x : g.generators()) {
    auto xi = x.inverse();
    for (const auto& y : h.generators())
      if (!h.contains(x * y * xi)) return false;
  }
  return true;
}

inline FiniteMatrixGroup conjugate(const FiniteMatrixGroup& g, const ResidueMatrix& x) {
  auto xi = x.inverse();
  std::vector<ResidueMatrix> gens;
  for (const auto& s : g.generators()) gens.push_back(x * s * xi);
  return FiniteMatrixGroup(g.modulus(), gens, g.cap());
}

inline FiniteMatrixGroup transpose_group(const FiniteMatrixGroup& g) {
  std::vector<ResidueMatrix> gens;
  for (const auto& s : g.generators()) gens.push_back(s.transpose());
  return FiniteMatrixGroup(g.modulus(), gens, g.cap());
}

inline FiniteMatrixGroup reduce_group(const FiniteMatrixGroup& g, i64 m) {
  std::vector<ResidueMatrix> gens;
  for (const auto& s : g.generators()) gens.push_back(reduce_mod(s, m));
  return FiniteMatrixGroup(m, gens, g.cap());
}

/// Elements of G with determinant 1.
inline FiniteMatrixGroup sl2_part(const FiniteMatrixGroup& g) {
  std::vector<ResidueMatrix> gens;
  // Schreier generators for the kernel of det restricted to G.
  const i64 n = g.modulus();
  absl::flat_hash_map<i64, ResidueMatrix> transversal;  // det value -> representative
  std::vector<i64> queue{nt::mod(1, n)};
  transversal.emplace(nt::mod(1, n), ResidueMatrix::identity(n));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto t = transversal.at(queue[head]);
    for (const auto& s : g.generators()) {
      auto ts = t * s;
      i64 dv = ts.det();
      auto it = transversal.find(dv);
      if (it == transversal.end()) {
        transversal.emplace(dv, ts);
        queue.push_back(dv);
      } else {
        auto sch = ts * it->second.inverse();
        if (!sch.is_identity() && std::find(gens.begin(), gens.end(), sch) == gens.end()) gens.push_back(sch);
      }
    }
  }
  return FiniteMatrixGroup(n, gens, g.cap());
}

/// Smallest normal subgroup of G containing the given elements.
inline FiniteMatrixGroup normal_closure(const FiniteMatrixGroup& g, std::vector<ResidueMatrix> seeds) {
  FiniteMatrixGroup n(g.modulus(), seeds, g.cap());
  std::vector<ResidueMatrix> pending = n.generators();
  while (!pending.empty()) {
    std::vector<ResidueMatrix> fresh;
    for (const auto& y : pending)
      for (const auto& x : g.generators()) {
        auto c = x * y * x.inverse();
        if (n.contains(c)) continue;
        n = n.extended({c});
        fresh.push_back(c);
      }
    pending = std::move(fresh);
  }
  return n;
}

/// The commutator subgroup [G, G]: normal closure of the commutators of the
/// generators.
inline FiniteMatrixGroup derived_subgroup(const FiniteMatrixGroup& g) {
  const auto& s = g.generators();
  std::vector<ResidueMatrix> comms;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      auto c = s[i] * s[j] * s[i].inverse() * s[j].inverse();
      if (!c.is_identity() && std::find(comms.begin(), comms.end(), c) == comms.end()) comms.push_back(c);
    }
  return normal_closure(g, comms);
}

struct CosetDecomposition {
  i64 index = 1;
  std::vector<ResidueMatrix> representatives;  // lexicographically least per left coset gH, in increasing order
};

inline CosetDecomposition index_and_cosets(const FiniteMatrixGroup& g, const FiniteMatrixGroup& h) {
  if (g.modulus() != h.modulus()) throw Error(ErrorKind::ModulusMismatch, "coset decomposition across moduli");
  if (!is_subgroup(h, g)) throw Error(ErrorKind::NotASubgroup, "H is not contained in G");
  CosetDecomposition out;
  out.index = g.order() / h.order();
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  const auto hs = h.elements();
  for (const auto& x : g.sorted_elements()) {
    if (seen[static_cast<std::size_t>(g.index_of(x))]) continue;
    out.representatives.push_back(x);
    for (const auto& y : hs) seen[static_cast<std::size_t>(g.index_of(x * y))] = 1;
  }
  return out;
}

/// Result of conjugacy search: the conjugator x with x A x^-1 = B.
inline std::optional<ResidueMatrix> is_conjugate_subgroup(const FiniteMatrixGroup& a, const FiniteMatrixGroup& b) {
  if (a.modulus() != b.modulus()) throw Error(ErrorKind::ModulusMismatch, "conjugacy across moduli");
  if (a.order() != b.order()) return std::nullopt;
  if (is_subgroup(a, b)) return ResidueMatrix::identity(a.modulus());
  std::optional<ResidueMatrix> witness;
  for_each_gl2(a.modulus(), [&](const ResidueMatrix& x) {
    auto xi = x.inverse();
    for (const auto& s : a.generators())
      if (!b.contains(x * s * xi)) return false;
    witness = x;
    return true;
  });
  return witness;
}

/// Some x with x H x^-1 contained in G, searched in lexicographic order.
inline std::optional<ResidueMatrix> conjugate_into(const FiniteMatrixGroup& h, const FiniteMatrixGroup& g) {
  if (is_subgroup(h, g)) return ResidueMatrix::identity(h.modulus());
  if (g.order() % h.order() != 0) return std::nullopt;
  std::optional<ResidueMatrix> witness;
  for_each_gl2(h.modulus(), [&](const ResidueMatrix& x) {
    auto xi = x.inverse();
    for (const auto& s : h.generators())
      if (!g.contains(x * s * xi)) return false;
    witness = x;
    return true;
  });
  return witness;
}

/// G/H as a table of cosets. Coset 0 is H itself.
class QuotientGroup {
 public:
  QuotientGroup(FiniteMatrixGroup g, FiniteMatrixGroup h) : g_(std::move(g)), h_(std::move(h)) {
    if (!is_subgroup(h_, g_)) throw Error(ErrorKind::NotASubgroup, "quotient by a non-subgroup");
    if (!is_normal(h_, g_)) throw Error(ErrorKind::NotNormal, "quotient by a non-normal subgroup");
    coset_.assign(static_cast<std::size_t>(g_.order()), -1);
    const auto hs = h_.elements();
    auto assign = [&](const ResidueMatrix& x) {
      int id = static_cast<int>(reps_.size());
      reps_.push_back(x);
      for (const auto& y : hs) coset_[static_cast<std::size_t>(g_.index_of(x * y))] = id;
    };
    assign(ResidueMatrix::identity(g_.modulus()));
    for (const auto& x : g_.sorted_elements())
      if (coset_[static_cast<std::size_t>(g_.index_of(x))] < 0) assign(x);
  }

  const FiniteMatrixGroup& group() const { return g_; }
  const FiniteMatrixGroup& subgroup() const { return h_; }
  int size() const { return static_cast<int>(reps_.size()); }
  const std::vector<ResidueMatrix>& representatives() const { return reps_; }

  int coset_of(const ResidueMatrix& x) const {
    auto i = g_.index_of(x);
    if (i < 0) throw Error(ErrorKind::NotASubgroup, x.to_string() + " is not in the ambient group");
    return coset_[static_cast<std::size_t>(i)];
  }

  int mul(int i, int j) const { return coset_of(reps_[i] * reps_[j]); }

 private:
  FiniteMatrixGroup g_, h_;
  std::vector<ResidueMatrix> reps_;
  std::vector<int> coset_;
};

/// G/H together with its cyclic decomposition (throws NotAbelian/NotNormal).
struct AbelianQuotient {
  QuotientGroup quotient;
  AbelianDecomposition decomposition;

  FiniteAbelianGroup::Element log(const ResidueMatrix& x) const { return decomposition.log[quotient.coset_of(x)]; }
  const FiniteAbelianGroup& group() const { return decomposition.group; }
};

inline AbelianQuotient abelian_quotient(const FiniteMatrixGroup& g, const FiniteMatrixGroup& h) {
  QuotientGroup q(g, h);
  auto dec = decompose_abelian(q.size(), [&q](int i, int j) { return q.mul(i, j); });
  return {std::move(q), std::move(dec)};
}

inline FiniteAbelianGroup abelian_invariants(const FiniteMatrixGroup& g, const FiniteMatrixGroup& h) {
  return abelian_quotient(g, h).group();
}

inline FiniteAbelianGroup abelian_invariants(const FiniteMatrixGroup& g) {
  return abelian_invariants(g, trivial_group(g.modulus()));
}

}  // namespace aimg
