#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aimg/abelian.hpp"
#include "aimg/opengroup.hpp"

namespace aimg {

/// The data (H, G0, A, psi) with A = (Z/MZ)^x and psi = det mod M.
struct FamilySpec {
  OpenSubgroup g0;
  OpenSubgroup h;
  i64 m = 1;
};

/// Kernel of a map from G into a finite set of labels that is a
/// homomorphism to some group, computed from Schreier generators.
/// `label` returns a small nonnegative integer with label(identity) == 0.
template <class Label>
FiniteMatrixGroup homomorphism_kernel(const FiniteMatrixGroup& g, Label&& label) {
  const i64 n = g.modulus();
  std::vector<std::optional<ResidueMatrix>> transversal;
  auto slot = [&](int k) -> std::optional<ResidueMatrix>& {
    if (static_cast<std::size_t>(k) >= transversal.size()) transversal.resize(static_cast<std::size_t>(k) + 1);
    return transversal[static_cast<std::size_t>(k)];
  };
  std::vector<int> queue{0};
  slot(0) = ResidueMatrix::identity(n);
  std::vector<ResidueMatrix> gens;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto t = *slot(queue[h]);
    for (const auto& s : g.generators()) {
      auto ts = t * s;
      const int k = label(ts);
      auto& rep = slot(k);
      if (!rep) {
        rep = ts;
        queue.push_back(k);
      } else {
        auto sch = ts * rep->inverse();
        if (!sch.is_identity() && std::find(gens.begin(), gens.end(), sch) == gens.end()) gens.push_back(sch);
      }
    }
  }
  return FiniteMatrixGroup(n, gens, g.cap());
}

/// A validated family: H normal in G0 with abelian quotient, together with
/// the explicit groups A and G0/H.
class Family {
 public:
  explicit Family(FamilySpec spec) : spec_(std::move(spec)), cache_(std::make_shared<Cache>()) {
    if (spec_.m < 1) throw Error(ErrorKind::SchemaError, "family modulus M must be positive");
    level_ = std::lcm(spec_.g0.level(), spec_.h.level());
    g0_at_level_ = image_at(spec_.g0, level_);
    auto h_at_level = image_at(spec_.h, level_);
    if (!is_subgroup(h_at_level, g0_at_level_)) throw Error(ErrorKind::NotASubgroup, "H is not contained in G0");
    quotient_ = std::make_shared<AbelianQuotient>(abelian_quotient(g0_at_level_, h_at_level));
    units_ = unit_group(spec_.m);
  }

  const FamilySpec& spec() const { return spec_; }
  /// lcm of the levels of G0 and H.
  i64 common_level() const { return level_; }
  /// Level at which members are presented: lcm(common level, M).
  i64 member_level() const { return std::lcm(level_, spec_.m); }
  const FiniteAbelianGroup& quotient() const { return quotient_->group(); }
  const FiniteAbelianGroup& source() const { return units_.group(); }
  const UnitGroup& units() const { return units_; }

  /// Class of g (at any multiple of the common level) in G0/H.
  FiniteAbelianGroup::Element quotient_class(const ResidueMatrix& g) const {
    return quotient_->log(reduce_mod(g, level_));
  }

  FiniteAbelianGroup::Element psi(const ResidueMatrix& g) const {
    return units_.log(nt::mod(g.det(), spec_.m));
  }

  const CommutatorResult& base_commutator() const {
    std::call_once(cache_->once, [this] { cache_->commutator = commutator_open(spec_.g0); });
    return cache_->commutator;
  }

 private:
  struct Cache {
    std::once_flag once;
    CommutatorResult commutator;
  };
  FamilySpec spec_;
  i64 level_ = 1;
  FiniteMatrixGroup g0_at_level_;
  std::shared_ptr<AbelianQuotient> quotient_;
  UnitGroup units_;
  std::shared_ptr<Cache> cache_;
};

struct FamilyMember {
  AbelianHom phi;
  OpenSubgroup group;
  std::optional<std::string> v_tag;
  bool dissolve_eligible = false;
  /// Index of an earlier member with the same group, when enumerating.
  std::optional<std::size_t> duplicate_of;
};

namespace detail {

/// Subgroup of a finite abelian group generated by the given elements.
inline i64 generated_order(const FiniteAbelianGroup& q, const std::vector<FiniteAbelianGroup::Element>& gens) {
  std::vector<FiniteAbelianGroup::Element> seen{q.zero()};
  for (std::size_t h = 0; h < seen.size(); ++h)
    for (const auto& g : gens) {
      auto y = q.add(seen[h], g);
      if (std::find(seen.begin(), seen.end(), y) == seen.end()) seen.push_back(y);
    }
  return static_cast<i64>(seen.size());
}

/// Whether phi restricted to the units of the coprime factor `part` of M
/// (embedded as residues that are 1 modulo M / part) is onto G0/H.
inline bool restriction_onto(const Family& fam, const AbelianHom& phi, i64 part) {
  const i64 m = fam.spec().m;
  if (part == 1) return fam.quotient().order() == 1;
  std::vector<FiniteAbelianGroup::Element> images;
  auto local = unit_group(part);
  for (int b : local.dec.basis) {
    const i64 u = nt::crt(local.residues[static_cast<std::size_t>(b)], part, 1, m / part);
    images.push_back(phi.apply(fam.quotient(), fam.units().log(u)));
  }
  return generated_order(fam.quotient(), images) == fam.quotient().order();
}

/// Product of the prime powers of M at primes >= 5 not dividing the given level.
inline i64 escape_part(i64 m, i64 level) {
  i64 part = 1;
  for (auto [p, e] : nt::factorize(m))
    if (p >= 5 && level % p != 0) part *= nt::ipow(p, e);
  return part;
}

}  // namespace detail

/// H_phi = { g in G0 : gH = phi(psi(g)) }, presented at lcm(common level, M).
inline FamilyMember build_member(const Family& fam, const AbelianHom& phi, std::optional<std::string> v_tag = std::nullopt) {
  if (!is_homomorphism(fam.source(), fam.quotient(), phi))
    throw Error(ErrorKind::NotAHomomorphism, "generator images do not define a homomorphism A -> G0/H");
  const i64 v = fam.member_level();
  const auto& q = fam.quotient();
  auto g0v = image_at(fam.spec().g0, v);
  std::vector<FiniteAbelianGroup::Element> labels;
  auto label = [&](const ResidueMatrix& g) {
    auto e = q.add(fam.quotient_class(g), q.negate(phi.apply(q, fam.psi(g))));
    auto it = std::find(labels.begin(), labels.end(), e);
    if (it != labels.end()) return static_cast<int>(it - labels.begin());
    labels.push_back(e);
    return static_cast<int>(labels.size()) - 1;
  };
  label(ResidueMatrix::identity(v));  // the zero class gets label 0
  auto kernel = homomorphism_kernel(g0v, label);
  FamilyMember out;
  out.phi = phi;
  out.group = OpenSubgroup(v, kernel.generators());
  out.v_tag = std::move(v_tag);
  const i64 part = detail::escape_part(fam.spec().m, fam.common_level());
  out.dissolve_eligible = q.order() == 1 || (part > 1 && detail::restriction_onto(fam, phi, part));
  return out;
}

/// phi determined by its values on residues generating (Z/MZ)^x. Throws
/// NotAHomomorphism when the assignment is inconsistent or incomplete.
inline AbelianHom phi_from_residues(const Family& fam, const std::vector<i64>& residues,
                                    const std::vector<FiniteAbelianGroup::Element>& images) {
  if (residues.size() != images.size()) throw Error(ErrorKind::SchemaError, "residue and image lists differ in length");
  const auto& units = fam.units();
  const auto& q = fam.quotient();
  const i64 m = fam.spec().m;
  std::vector<std::optional<FiniteAbelianGroup::Element>> value(units.residues.size());
  value[0] = q.zero();
  std::vector<i64> queue{nt::mod(1, m)};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto cur = *value[static_cast<std::size_t>(units.index_of_residue(queue[h]))];
    for (std::size_t i = 0; i < residues.size(); ++i) {
      const i64 nxt = nt::mulmod(queue[h], nt::mod(residues[i], m), m);
      auto img = q.add(cur, q.reduce(images[i]));
      auto& slot = value[static_cast<std::size_t>(units.index_of_residue(nxt))];
      if (!slot) {
        slot = img;
        queue.push_back(nxt);
      } else if (*slot != img) {
        throw Error(ErrorKind::NotAHomomorphism, "images are not multiplicative on the given residues");
      }
    }
  }
  if (queue.size() != units.residues.size())
    throw Error(ErrorKind::NotAHomomorphism, "residues do not generate (Z/" + std::to_string(m) + "Z)^x");
  AbelianHom phi;
  for (int b : units.dec.basis) phi.images.push_back(*value[static_cast<std::size_t>(b)]);
  return phi;
}

/// One member per homomorphism A -> G0/H, in the order of enumerate_homs.
inline std::vector<FamilyMember> enumerate_members(const Family& fam) {
  std::vector<FamilyMember> out;
  for (const auto& phi : enumerate_homs(fam.source(), fam.quotient())) {
    auto mem = build_member(fam, phi);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!out[i].duplicate_of && same_open_group(out[i].group, mem.group)) {
        mem.duplicate_of = i;
        break;
      }
    out.push_back(std::move(mem));
  }
  return out;
}

/// Compares the derived subgroups of H_phi and G0 at the member level.
inline bool check_dissolve(const Family& fam, const FamilyMember& mem) {
  if (!mem.dissolve_eligible) throw Error(ErrorKind::NotEligible, "member does not satisfy the dissolve hypotheses");
  const i64 v = fam.member_level();
  return same_group(derived_subgroup(image_at(mem.group, v)), derived_subgroup(image_at(fam.spec().g0, v)));
}

/// When M_v has a prime p >= 5 outside the level of G0 at which phi is onto
/// G0/H, the member's commutator is that of G0; returns it with the index
/// taken inside the member's SL2 part. Otherwise nullopt.
inline std::optional<CommutatorResult> commutator_shortcut(const Family& fam, const FamilyMember& mem, i64 mv) {
  const i64 m = fam.spec().m;
  bool applies = false;
  for (i64 p : nt::prime_divisors(mv)) {
    if (p < 5 || fam.spec().g0.level() % p == 0 || m % p != 0) continue;
    if (detail::restriction_onto(fam, mem.phi, nt::ipow(p, nt::valuation(m, p)))) {
      applies = true;
      break;
    }
  }
  if (!applies) return std::nullopt;
  CommutatorResult r = fam.base_commutator();
  // member cap SL2 = H cap SL2, whose index in G0 cap SL2 is read at the common level
  const i64 l = fam.common_level();
  const i64 drop = sl2_part(image_at(fam.spec().g0, l)).order() / sl2_part(image_at(fam.spec().h, l)).order();
  r.index_in_sl /= drop;
  r.greater_than_two = r.index_in_sl > 2;
  r.full_determinant = det_image(mem.group).full;
  return r;
}

}  // namespace aimg
