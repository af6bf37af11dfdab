#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aimg/lattice.hpp"
#include "aimg/opengroup.hpp"

namespace aimg {

/// Order of PSL2(F_l).
inline i64 psl2_order(i64 l) { return l * (l * l - 1) / (l == 2 ? 1 : 2); }

/// "PSL2(F_l)" when the order matches a PSL2 over a prime field, otherwise
/// "simple:<order>".
inline std::string simple_group_tag(i64 order) {
  for (i64 l = 5; psl2_order(l) <= order; ++l)
    if (nt::is_prime(l) && psl2_order(l) == order) return "PSL2(F_" + std::to_string(l) + ")";
  return "simple:" + std::to_string(order);
}

/// Group order encoded in a tag from simple_group_tag.
inline i64 simple_tag_order(const std::string& tag) {
  if (tag.rfind("PSL2(F_", 0) == 0) return psl2_order(std::stoll(tag.substr(7)));
  if (tag.rfind("simple:", 0) == 0) return std::stoll(tag.substr(7));
  throw Error(ErrorKind::ParseError, "unknown simple group tag '" + tag + "'");
}

/// Last term of the derived series.
inline FiniteMatrixGroup perfect_core(const FiniteMatrixGroup& g) {
  auto cur = g;
  for (;;) {
    auto next = derived_subgroup(cur);
    if (next.order() == cur.order()) return cur;
    cur = next;
  }
}

inline bool is_solvable(const FiniteMatrixGroup& g) { return perfect_core(g).order() == 1; }

/// Tags of the nonabelian simple groups occurring as composition factors of
/// G. Abelian factors all sit above the perfect core P, and each maximal
/// normal subgroup N of P gives a nonabelian simple P/N; the search then
/// continues in the perfect core of N.
inline std::set<std::string> quo_simple_quotients(const FiniteMatrixGroup& g) {
  if (g.order() > g.cap()) throw Error(ErrorKind::ResourceExceeded, "group order beyond cap");
  std::set<std::string> out;
  auto p = perfect_core(g);
  while (p.order() > 1) {
    GroupTable t(p);
    auto normals = normal_subgroups(t);
    const std::size_t n = static_cast<std::size_t>(t.size());
    const SubgroupRecord* best = nullptr;
    for (const auto& a : normals) {
      const std::size_t k = a.elements.count();
      if (k == n) continue;
      if (!best || k > best->elements.count()) best = &a;
    }
    // a largest proper normal subgroup is maximal
    out.insert(simple_group_tag(static_cast<i64>(n / best->elements.count())));
    p = perfect_core(t.to_group(best->generators));
  }
  return out;
}

inline bool quo_disjointness(const FiniteMatrixGroup& a, const FiniteMatrixGroup& b) {
  auto qa = quo_simple_quotients(a), qb = quo_simple_quotients(b);
  for (const auto& x : qa)
    if (qb.count(x)) return false;
  return true;
}

/// G_M x prod_l G_l at a finite truncation. A prime part without a group
/// stands for all of GL2(Z/l^k).
struct TruncatedAdelicGroup {
  struct PrimePart {
    i64 ell = 2;
    int k = 1;
    std::optional<FiniteMatrixGroup> group;

    i64 modulus() const { return nt::ipow(ell, k); }
    FiniteMatrixGroup resolved() const { return group ? *group : gl2_group(modulus()); }
  };

  FiniteMatrixGroup m_part;
  std::vector<PrimePart> primes;

  TruncatedAdelicGroup(FiniteMatrixGroup m, std::vector<PrimePart> ps) : m_part(std::move(m)), primes(std::move(ps)) {
    for (const auto& p : primes) {
      if (!nt::is_prime(p.ell) || p.k < 1) throw Error(ErrorKind::SchemaError, "prime part needs a prime and k >= 1");
      if (m_part.modulus() % p.ell == 0)
        throw Error(ErrorKind::SchemaError, std::to_string(p.ell) + " divides the M-part modulus");
      if (p.group && p.group->modulus() != p.modulus())
        throw Error(ErrorKind::ModulusMismatch, "prime part group at the wrong modulus");
    }
  }

  i64 modulus() const {
    i64 n = m_part.modulus();
    for (const auto& p : primes) n *= p.modulus();
    return n;
  }

  /// The product as one group at the full truncation modulus.
  FiniteMatrixGroup product() const {
    const i64 n = modulus();
    std::vector<ResidueMatrix> gens;
    for (const auto& s : m_part.generators()) gens.push_back(embed_coprime(s, n));
    for (const auto& p : primes) {
      const auto g = p.resolved();
      for (const auto& s : g.generators()) gens.push_back(embed_coprime(s, n));
    }
    return FiniteMatrixGroup(n, gens, m_part.cap());
  }
};

struct SurjectivityVerdict {
  enum class Kind { Surjective, FailsProjection, FailsAbelianQuotient };
  Kind kind = Kind::Surjective;
  /// "M" or the prime, for FailsProjection.
  std::string which;

  std::string to_string() const {
    switch (kind) {
      case Kind::Surjective: return "Surjective";
      case Kind::FailsProjection: return "FailsProjection(" + which + ")";
      case Kind::FailsAbelianQuotient: return "FailsAbelianQuotient";
    }
    return "?";
  }
};

/// Precomputed factor groups and G/[G,G] for repeated checks against one G.
class SurjectivityContext {
 public:
  explicit SurjectivityContext(TruncatedAdelicGroup g) : g_(std::move(g)) {
    factors_.push_back(g_.m_part);
    labels_.push_back("M");
    for (const auto& p : g_.primes) {
      factors_.push_back(p.resolved());
      labels_.push_back(std::to_string(p.ell));
    }
    product_ = g_.product();
    abelianization_.emplace(abelian_quotient(product_, derived_subgroup(product_)));
  }

  const TruncatedAdelicGroup& group() const { return g_; }
  const FiniteMatrixGroup& product() const { return product_; }
  const FiniteAbelianGroup& abelianization() const { return abelianization_->group(); }

  SurjectivityVerdict check(const std::vector<ResidueMatrix>& h_gens) const {
    const i64 n = g_.modulus();
    for (const auto& x : h_gens) {
      if (x.modulus() != n) throw Error(ErrorKind::ModulusMismatch, "subgroup generators must be given modulo " + std::to_string(n));
      if (!product_.contains(x)) throw Error(ErrorKind::NotASubgroup, x.to_string() + " is not in G");
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto& f = factors_[i];
      std::vector<ResidueMatrix> proj;
      for (const auto& x : h_gens) proj.push_back(reduce_mod(x, f.modulus()));
      if (FiniteMatrixGroup(f.modulus(), proj, f.cap()).order() != f.order())
        return {SurjectivityVerdict::Kind::FailsProjection, labels_[i]};
    }
    const auto& ab = abelianization();
    std::vector<FiniteAbelianGroup::Element> seen{ab.zero()};
    std::vector<FiniteAbelianGroup::Element> imgs;
    for (const auto& x : h_gens) imgs.push_back(abelianization_->log(x));
    for (std::size_t k = 0; k < seen.size(); ++k)
      for (const auto& y : imgs) {
        auto z = ab.add(seen[k], y);
        if (std::find(seen.begin(), seen.end(), z) == seen.end()) seen.push_back(z);
      }
    if (static_cast<i64>(seen.size()) != ab.order()) return {SurjectivityVerdict::Kind::FailsAbelianQuotient, ""};
    return {};
  }

 private:
  TruncatedAdelicGroup g_;
  std::vector<FiniteMatrixGroup> factors_;
  std::vector<std::string> labels_;
  FiniteMatrixGroup product_;
  std::optional<AbelianQuotient> abelianization_;
};

/// H = G iff every factor projection of H is onto and H maps onto G/[G,G],
/// provided the factors share no nonabelian simple quotient.
inline SurjectivityVerdict surjectivity_check(const TruncatedAdelicGroup& g, const std::vector<ResidueMatrix>& h_gens) {
  return SurjectivityContext(g).check(h_gens);
}

}  // namespace aimg
