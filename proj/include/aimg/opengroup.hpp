#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aimg/matgroup.hpp"

namespace aimg {

/// The matrix mod n that is x at x's modulus q and the identity modulo n/q
/// (q | n with gcd(q, n/q) = 1).
inline ResidueMatrix embed_coprime(const ResidueMatrix& x, i64 n) {
  auto y = crt_combine(x, ResidueMatrix::identity(n / x.modulus()));
  return {y.a(), y.b(), y.c(), y.d(), n};
}

/// Generators of the kernel of GL2(Z/nZ) -> GL2(Z/mZ) for m | n. For m = 1
/// this generates all of GL2(Z/nZ).
inline std::vector<ResidueMatrix> reduction_kernel_generators(i64 n, i64 m) {
  if (n % m != 0) throw Error(ErrorKind::NotADivisor, std::to_string(m) + " does not divide " + std::to_string(n));
  std::vector<ResidueMatrix> out;
  for (auto [p, b] : nt::factorize(n)) {
    const i64 q = nt::ipow(p, b);
    const int a = nt::valuation(m, p);
    if (a == b) continue;
    std::vector<ResidueMatrix> local;
    if (a >= 1) {
      const i64 pa = nt::ipow(p, a);
      local = {{1, pa, 0, 1, q}, {1, 0, pa, 1, q}, ResidueMatrix::diagonal(1 + pa, 1, q), ResidueMatrix::diagonal(1, 1 + pa, q)};
      if (p == 2 && a == 1) {
        local.push_back(ResidueMatrix::diagonal(-1, 1, q));
        local.push_back(ResidueMatrix::diagonal(1, -1, q));
      }
    } else {
      local = gl2_generators(q);
    }
    for (const auto& x : local) out.push_back(embed_coprime(x, n));
  }
  return out;
}

/// Some lift of x (mod m) to modulus n (m | n) that is the identity at every
/// prime of n not dividing m.
inline ResidueMatrix lift_matrix(const ResidueMatrix& x, i64 n) {
  const i64 m = x.modulus();
  if (n % m != 0) throw Error(ErrorKind::NotADivisor, std::to_string(m) + " does not divide " + std::to_string(n));
  i64 away = 1;
  for (auto [p, e] : nt::factorize(n))
    if (m % p != 0) away *= nt::ipow(p, e);
  auto y = crt_combine(x, ResidueMatrix::identity(away));
  return {y.a(), y.b(), y.c(), y.d(), n};
}

/// An open subgroup of GL2(Zhat): the full preimage of the subgroup of
/// GL2(Z/mZ) generated by `gens`.
class OpenSubgroup {
 public:
  OpenSubgroup() : OpenSubgroup(1, {}) {}

  OpenSubgroup(i64 level, std::vector<ResidueMatrix> gens) : level_(level), state_(std::make_shared<State>()) {
    if (level < 1) throw Error(ErrorKind::NotADivisor, "level must be positive");
    for (const auto& g : gens) {
      if (g.modulus() != level) throw Error(ErrorKind::ModulusMismatch, g.to_string() + " at level " + std::to_string(level));
      if (!g.is_invertible()) throw Error(ErrorKind::NotInvertible, g.to_string());
      if (!g.is_identity() && std::find(gens_.begin(), gens_.end(), g) == gens_.end()) gens_.push_back(g);
    }
  }

  static OpenSubgroup full() { return OpenSubgroup(1, {}); }
  static OpenSubgroup from_group(const FiniteMatrixGroup& g) { return OpenSubgroup(g.modulus(), g.generators()); }

  i64 level() const { return level_; }
  const std::vector<ResidueMatrix>& generators() const { return gens_; }

  /// The image modulo the level.
  const FiniteMatrixGroup& image() const {
    std::call_once(state_->once, [this] { state_->image = FiniteMatrixGroup(level_, gens_); });
    return state_->image;
  }

  i64 index() const { return nt::gl2_order(level_) / image().order(); }

 private:
  struct State {
    std::once_flag once;
    FiniteMatrixGroup image;
  };
  i64 level_;
  std::vector<ResidueMatrix> gens_;
  std::shared_ptr<State> state_;
};

/// Image of G modulo n, for any positive n.
inline FiniteMatrixGroup image_at(const OpenSubgroup& g, i64 n, i64 cap = default_cap_order()) {
  const i64 m = g.level();
  if (m % n == 0) {
    std::vector<ResidueMatrix> gens;
    for (const auto& s : g.generators()) gens.push_back(reduce_mod(s, n));
    return FiniteMatrixGroup(n, gens, cap);
  }
  if (n % m != 0) return reduce_group(image_at(g, std::lcm(n, m), cap), n);
  std::vector<ResidueMatrix> gens;
  for (const auto& s : g.generators()) gens.push_back(lift_matrix(s, n));
  for (auto& k : reduction_kernel_generators(n, m)) gens.push_back(std::move(k));
  return FiniteMatrixGroup(n, gens, cap);
}

/// The same open subgroup presented at a multiple of its level.
inline OpenSubgroup at_level(const OpenSubgroup& g, i64 n) {
  if (n % g.level() != 0) throw Error(ErrorKind::NotADivisor, "presentation level must be a multiple of the level");
  return OpenSubgroup::from_group(image_at(g, n));
}

inline FiniteMatrixGroup intersect_sl2(const OpenSubgroup& g) { return sl2_part(g.image()); }

struct DetImage {
  i64 modulus = 1;
  std::vector<i64> residues;  // sorted
  bool full = true;
};

inline DetImage det_image(const OpenSubgroup& g) {
  DetImage out;
  out.modulus = g.level();
  std::vector<i64> queue{nt::mod(1, g.level())};
  std::vector<char> seen(static_cast<std::size_t>(g.level()), 0);
  seen[static_cast<std::size_t>(queue[0])] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto& s : g.generators()) {
      i64 d = nt::mulmod(queue[h], s.det(), g.level());
      if (!seen[static_cast<std::size_t>(d)]) {
        seen[static_cast<std::size_t>(d)] = 1;
        queue.push_back(d);
      }
    }
  std::sort(queue.begin(), queue.end());
  out.residues = queue;
  out.full = static_cast<i64>(queue.size()) == nt::euler_phi(g.level());
  return out;
}

inline OpenSubgroup transpose_group(const OpenSubgroup& g) {
  std::vector<ResidueMatrix> gens;
  for (const auto& s : g.generators()) gens.push_back(s.transpose());
  return OpenSubgroup(g.level(), gens);
}

inline bool contains_minus_identity(const OpenSubgroup& g) {
  return g.image().contains(ResidueMatrix::minus_identity(g.level()));
}

/// The group generated by G and -I.
inline OpenSubgroup with_minus_identity(const OpenSubgroup& g) {
  if (g.level() <= 2 || contains_minus_identity(g)) return g;
  auto gens = g.generators();
  gens.push_back(ResidueMatrix::minus_identity(g.level()));
  return OpenSubgroup(g.level(), gens);
}

/// Presents G at its true level: the least divisor d of the presented level
/// with [GL2(Z/m) : G(m)] = [GL2(Z/d) : G(d)].
inline OpenSubgroup minimal_level(const OpenSubgroup& g) {
  const i64 idx = g.index();
  for (i64 d : nt::divisors(g.level())) {
    auto img = image_at(g, d);
    if (nt::gl2_order(d) / img.order() == idx) return OpenSubgroup(d, img.generators());
  }
  return g;
}

inline bool is_open_subgroup(const OpenSubgroup& h, const OpenSubgroup& g) {
  const i64 n = std::lcm(h.level(), g.level());
  auto gi = image_at(g, n);
  auto hi = image_at(h, n);
  return is_subgroup(hi, gi);
}

inline bool same_open_group(const OpenSubgroup& a, const OpenSubgroup& b) {
  const i64 n = std::lcm(a.level(), b.level());
  return same_group(image_at(a, n), image_at(b, n));
}

/// [G, G] for an open G, together with its index in G intersected with SL2.
struct CommutatorResult {
  /// Generators at the saturation level; the commutator is the full preimage
  /// of their span inside SL2(Zhat).
  OpenSubgroup commutator;
  i64 index_in_sl = 1;
  bool greater_than_two = false;
  i64 saturation_level = 1;
  bool full_determinant = true;
};

struct CommutatorOptions {
  int max_exponent = 12;
  i64 cap = default_cap_order();
};

namespace detail {

struct BlockResult {
  i64 level = 1;
  i64 index = 1;
  std::vector<ResidueMatrix> gens;  // derived subgroup generators at `level`
};

struct LevelData {
  i64 sl_order;
  FiniteMatrixGroup derived;
};

// Only the generators of G(n) are needed: the derived subgroup is a normal
// closure, and |G(n) cap SL2| = |G(m) cap SL2| * |SL2(n)| / |SL2(m)| above
// the level m.
inline LevelData level_data(const OpenSubgroup& g, i64 sl_at_level, i64 n, i64 cap) {
  auto img = image_at(g, n, cap);
  return {sl_at_level * (nt::sl2_order(n) / nt::sl2_order(g.level())), derived_subgroup(img)};
}

/// Commutator of the image of G in prod_{p | primes} GL2(Z_p), where G is
/// read as the preimage of its image at `base`, a product of powers of
/// those primes.
inline BlockResult saturate_block(const OpenSubgroup& g, i64 base, const CommutatorOptions& opt) {
  auto ps = nt::prime_divisors(base);
  i64 n = base;
  const i64 sl_at_level = intersect_sl2(g).order();
  auto cur = level_data(g, sl_at_level, n, opt.cap);
  for (;;) {
    bool stable = true;
    for (i64 p : ps) {
      for (;;) {
        if (nt::valuation(n, p) >= opt.max_exponent)
          throw Error(ErrorKind::ResourceExceeded, "commutator saturation reached level " + std::to_string(n) + " without stabilizing");
        const i64 up = n * p;
        auto next = level_data(g, sl_at_level, up, opt.cap);
        const i64 idx_n = cur.sl_order / cur.derived.order();
        const i64 idx_up = next.sl_order / next.derived.order();
        const bool preimage = next.derived.order() == cur.derived.order() * (nt::sl2_order(up) / nt::sl2_order(n));
        if (idx_n == idx_up && preimage) break;
        stable = false;
        n = up;
        cur = std::move(next);
      }
    }
    if (stable) break;
  }
  return {n, cur.sl_order / cur.derived.order(), cur.derived.generators()};
}

}  // namespace detail

/// [G, G] with level saturation. G equals its image at the primes of its
/// level times GL2(Z_l) at every other l; the factors at 2 and 3 (when they
/// do not divide the level) are saturated separately, and the remaining
/// primes contribute all of SL2(Z_l).
inline CommutatorResult commutator_open(const OpenSubgroup& g, const CommutatorOptions& opt = {}) {
  CommutatorResult out;
  out.full_determinant = det_image(g).full;
  std::vector<detail::BlockResult> blocks;
  if (g.level() > 1) blocks.push_back(detail::saturate_block(g, g.level(), opt));
  for (i64 p : {2, 3})
    if (g.level() % p != 0) blocks.push_back(detail::saturate_block(OpenSubgroup::full(), p, opt));
  i64 total = 1;
  for (const auto& b : blocks) {
    total *= b.level;
    out.index_in_sl *= b.index;
  }
  std::vector<ResidueMatrix> gens;
  for (const auto& b : blocks)
    for (const auto& x : b.gens) gens.push_back(embed_coprime(x, total));
  out.commutator = OpenSubgroup(total, gens);
  out.saturation_level = total;
  out.greater_than_two = out.index_in_sl > 2;
  return out;
}

enum class IndexClass { IndexOne, IndexTwo, Other };

struct CommutatorIndexClass {
  IndexClass kind = IndexClass::Other;
  i64 index = 0;
};

inline std::string to_string(IndexClass k) {
  switch (k) {
    case IndexClass::IndexOne: return "IndexOne";
    case IndexClass::IndexTwo: return "IndexTwo";
    case IndexClass::Other: return "Other";
  }
  return "Other";
}

inline CommutatorIndexClass classify_index(i64 index) {
  if (index == 1) return {IndexClass::IndexOne, 1};
  if (index == 2) return {IndexClass::IndexTwo, 2};
  return {IndexClass::Other, index};
}

/// Classifies G^t by the index of its commutator in G^t intersected with SL2.
inline CommutatorIndexClass commutator_index_class(const OpenSubgroup& g, const CommutatorOptions& opt = {}) {
  return classify_index(commutator_open(transpose_group(g), opt).index_in_sl);
}

}  // namespace aimg
