#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "aimg/arithcond.hpp"
#include "aimg/families.hpp"
#include "aimg/lattice.hpp"
#include "aimg/modgenus.hpp"
#include "aimg/ratfunc.hpp"

namespace aimg {

/// phi given by its values on residues generating (Z/MZ)^x.
struct PhiSpec {
  i64 m = 1;
  std::vector<i64> residues;
  std::vector<FiniteAbelianGroup::Element> images;
};

struct CatalogSample {
  std::optional<Rational> v;
  std::optional<PhiSpec> phi;
};

struct FamilyData {
  std::optional<int> index;  // i of pi_{i,v}
  std::optional<Rational> alpha;
  std::optional<OpenSubgroup> g0;  // recovered when absent
};

struct CatalogEntry {
  std::string label;
  OpenSubgroup group;
  RationalMap pi;
  /// A = { f : u o f = u }.
  RationalMap u;
  std::optional<std::vector<i64>> automorphism_orders;
  FamilyData family;
  VCondition conditions;
  bool in_s = false;
  std::vector<CatalogSample> samples;
};

inline const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, const std::string& label) {
  for (const auto& e : catalog)
    if (e.label == label) return e;
  throw Error(ErrorKind::UnknownLabel, "no catalog entry '" + label + "'");
}

/// The J with pi = J o u.
inline RationalMap recover_j(const CatalogEntry& e) {
  try {
    return solve_left_factor(e.pi, e.u);
  } catch (const Error& err) {
    throw Error(ErrorKind::InvariantViolation, e.label + ": J not recoverable (" + err.what() + ")");
  }
}

/// Genus 0, deg pi equal to the index of +-G cap SL2, and a J with pi = J o u.
inline void validate_entry(const CatalogEntry& e) {
  GenusData g;
  try {
    g = genus(e.group);
  } catch (const Error& err) {
    throw Error(ErrorKind::InvariantViolation, e.label + ": genus (" + err.what() + ")");
  }
  if (g.genus != 0) throw Error(ErrorKind::InvariantViolation, e.label + ": genus " + std::to_string(g.genus));
  if (e.pi.degree() != g.degree)
    throw Error(ErrorKind::InvariantViolation, e.label + ": degree of pi is " + std::to_string(e.pi.degree()) +
                                                   ", the SL2 index is " + std::to_string(g.degree));
  recover_j(e);
}

inline void validate_catalog(const std::vector<CatalogEntry>& catalog) {
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k)
      if (catalog[k].label == catalog[i].label)
        throw Error(ErrorKind::InvariantViolation, catalog[i].label + ": duplicate label");
    validate_entry(catalog[i]);
  }
}

/// Ramification indices over 0, 1728 and infinity.
struct RamificationProfile {
  int degree = 1;
  std::vector<int> over_0, over_1728, over_inf;

  friend bool operator==(const RamificationProfile&, const RamificationProfile&) = default;
};

inline RamificationProfile ramification_of(const RationalMap& j) {
  return {j.degree(), fiber_multiplicities(j, Rational(0)), fiber_multiplicities(j, Rational(1728)),
          fiber_multiplicities(j, std::nullopt)};
}

namespace detail {

inline std::vector<int> cycle_lengths(const Permutation& p) {
  std::vector<int> out;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    int len = 0;
    for (std::size_t k = i; !seen[k]; k = static_cast<std::size_t>(p[k])) {
      seen[k] = 1;
      ++len;
    }
    if (len) out.push_back(len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// The profile of pi_G read off the coset action: ST over 0, S over 1728,
/// T over the cusps.
inline RamificationProfile ramification_of(const OpenSubgroup& g) {
  auto a = coset_action(g);
  return {a.degree, detail::cycle_lengths(a.perm_st), detail::cycle_lengths(a.perm_s), detail::cycle_lengths(a.perm_t)};
}

struct G0Recovery {
  OpenSubgroup g0;
  RationalMap j;
  /// Every candidate that passed, the chosen one first.
  std::vector<OpenSubgroup> matches;
};

/// Sorted element keys modulo n; orders candidates deterministically.
inline std::vector<std::uint64_t> canonical_key(const OpenSubgroup& g, i64 n) {
  auto keys = image_at(g, n).keys();
  std::sort(keys.begin(), keys.end());
  return keys;
}

/// Overgroups G' of G at level(G) with [G' cap SL2 : G cap SL2] = |A|, full
/// determinant, G normal in G' with abelian quotient and genus 0, whose
/// ramification over 0, 1728, infinity matches that of J.
inline G0Recovery recover_g0(const CatalogEntry& e) {
  auto j = recover_j(e);
  const i64 a = e.u.degree();
  if (a == 1) return {e.group, j, {e.group}};
  const i64 n = e.group.level();
  const auto target = ramification_of(j);
  std::vector<OpenSubgroup> found;
  if (n > 1) {
    GroupTable t(gl2_group(n));
    const auto& img = e.group.image();
    std::vector<int> gens;
    for (const auto& s : img.generators()) gens.push_back(t.index(s));
    const i64 sl_order = sl2_part(img).order();
    for (const auto& rec : overgroups(t, {t.closure(gens), gens})) {
      if (static_cast<i64>(rec.elements.count()) % a != 0) continue;
      auto cand = t.to_group(rec.generators);
      if (sl2_part(cand).order() != a * sl_order) continue;
      auto og = OpenSubgroup(n, cand.generators());
      if (!det_image(og).full || !is_normal(img, cand)) continue;
      if (!is_subgroup(derived_subgroup(cand), img)) continue;
      GenusData gd;
      try {
        gd = genus(og);
      } catch (const Error&) {
        continue;
      }
      if (gd.genus != 0 || ramification_of(og) != target) continue;
      found.push_back(minimal_level(og));
    }
  }
  if (found.empty())
    throw Error(ErrorKind::NoMatch, e.label + ": no overgroup of index " + std::to_string(a) + " matches J = " + j.to_string());
  std::sort(found.begin(), found.end(),
            [n](const OpenSubgroup& x, const OpenSubgroup& y) { return canonical_key(x, n) < canonical_key(y, n); });
  return {found.front(), j, found};
}

/// b from b0 = lcm of the automorphism orders dividing a power of N.
inline i64 level_bound_b(const CatalogEntry& e) {
  if (!e.automorphism_orders) throw Error(ErrorKind::MissingAutomorphismData, e.label + ": no automorphism orders");
  const i64 n = e.group.level();
  i64 b0 = 1;
  for (i64 a : *e.automorphism_orders) {
    if (a < 1) throw Error(ErrorKind::SchemaError, e.label + ": automorphism orders must be positive");
    bool divides_power = true;
    for (i64 p : nt::prime_divisors(a)) divides_power = divides_power && n % p == 0;
    if (divides_power) b0 = std::lcm(b0, a);
  }
  return n % 4 == 2 ? 2 * b0 : b0;
}

enum class Bucket { Theorem1, Theorem2, Excluded, Error };

inline std::string to_string(Bucket b) {
  switch (b) {
    case Bucket::Theorem1: return "Theorem1";
    case Bucket::Theorem2: return "Theorem2";
    case Bucket::Excluded: return "Excluded";
    case Bucket::Error: return "Error";
  }
  return "Error";
}

inline Bucket bucket_of(IndexClass k) {
  switch (k) {
    case IndexClass::IndexOne: return Bucket::Theorem1;
    case IndexClass::IndexTwo: return Bucket::Theorem2;
    case IndexClass::Other: return Bucket::Excluded;
  }
  return Bucket::Excluded;
}

struct ReportError {
  ErrorKind kind = ErrorKind::SchemaError;
  std::string message;
};

struct MemberReport {
  std::string source;  // "sample" or "level <L>"
  std::optional<Rational> v;
  i64 m = 1;
  std::vector<FiniteAbelianGroup::Element> phi_images;  // on the basis of (Z/MZ)^x
  i64 level = 1;
  i64 commutator_index = 0;
  Bucket bucket = Bucket::Error;
  bool shortcut = false;
  std::optional<std::string> map;  // J o pi_{i,v}
  bool map_degenerate = false;
  std::optional<ConditionResult> condition;
  std::optional<ReportError> error;
};

struct EntryReport {
  std::string label;
  bool in_s = false;
  Bucket bucket = Bucket::Error;
  std::optional<IndexClass> index_class;
  i64 commutator_index = 0;
  std::optional<std::string> j;
  std::optional<OpenSubgroup> g0;
  std::size_t g0_matches = 0;
  std::optional<i64> b;
  std::vector<MemberReport> members;
  std::optional<ReportError> error;
  double seconds = 0;
};

struct ClassificationReport {
  std::vector<EntryReport> entries;
  i64 cap = 0;
  int jobs = 1;
  bool extra_levels = false;
  double seconds = 0;

  bool has_invariant_violation() const {
    for (const auto& e : entries)
      if (e.error && e.error->kind == ErrorKind::InvariantViolation) return true;
    return false;
  }
};

struct ClassifyOptions {
  int jobs = 1;
  i64 cap = default_cap_order();
  /// Also enumerate family members at levels L with N | L | N b, L > N, for
  /// labels outside S.
  bool extra_levels = false;
};

namespace detail {

/// The quadratic character of Q(sqrt(v)) as a map (Z/|D|Z)^x -> C2.
inline PhiSpec kronecker_phi(const Rational& v) {
  const BigInt d = squarefree_part(v);
  if (d == 1) return {1, {}, {}};
  const BigInt disc = quadratic_discriminant(d);
  if (boost::multiprecision::abs(disc) > 1000000)
    throw Error(ErrorKind::ResourceExceeded, "conductor of Q(sqrt(" + to_string(v) + ")) is too large");
  const i64 dd = disc.convert_to<i64>();
  PhiSpec out;
  out.m = dd < 0 ? -dd : dd;
  auto units = unit_group(out.m);
  for (int b : units.dec.basis) {
    const i64 r = units.residues[static_cast<std::size_t>(b)];
    out.residues.push_back(r);
    out.images.push_back({nt::kronecker(dd, r) == 1 ? 0 : 1});
  }
  return out;
}

inline void fill_commutator(MemberReport& r, const Family& fam, const FamilyMember& mem, const ClassifyOptions& opt) {
  r.level = mem.group.level();
  if (auto s = commutator_shortcut(fam, mem, r.m)) {
    r.shortcut = true;
    r.commutator_index = s->index_in_sl;
  } else {
    r.commutator_index = commutator_index_class(mem.group, {12, opt.cap}).index;
  }
  r.bucket = bucket_of(classify_index(r.commutator_index).kind);
}

inline MemberReport classify_sample(const CatalogEntry& e, const OpenSubgroup& g0, const RationalMap& j,
                                    const CatalogSample& s, const ClassifyOptions& opt) {
  MemberReport r;
  r.source = "sample";
  r.v = s.v;
  try {
    if (s.v) r.condition = eval_condition(e.conditions, *s.v, j);
    PhiSpec spec;
    if (s.phi) {
      spec = *s.phi;
    } else {
      if (!s.v) throw Error(ErrorKind::MissingParameter, "sample needs v or phi");
      const i64 q = image_at(g0, e.group.level()).order() / e.group.image().order();
      if (q == 1) spec = {1, {}, {}};
      else if (q == 2) spec = kronecker_phi(*s.v);
      else throw Error(ErrorKind::MissingParameter, "G0/G has order " + std::to_string(q) + "; give phi explicitly");
    }
    r.m = spec.m;
    Family fam({g0, e.group, spec.m});
    auto phi = phi_from_residues(fam, spec.residues, spec.images);
    r.phi_images = phi.images;
    auto mem = build_member(fam, phi, s.v ? std::optional<std::string>(to_string(*s.v)) : std::nullopt);
    fill_commutator(r, fam, mem, opt);
    if (s.v && e.family.index) {
      auto m = instantiate(default_map_catalog(), *e.family.index, e.family.alpha, s.v, true);
      r.map = compose(j, m.map).to_string();
      r.map_degenerate = m.degenerate;
    }
  } catch (const Error& err) {
    r.error = ReportError{err.kind(), err.what()};
    r.bucket = Bucket::Error;
  }
  return r;
}

inline void extra_members(const CatalogEntry& e, const OpenSubgroup& g0, i64 b, const ClassifyOptions& opt,
                          std::vector<MemberReport>& out) {
  const i64 n = e.group.level();
  for (i64 l : nt::divisors(n * b)) {
    if (l == n || l % n != 0) continue;
    Family fam({g0, e.group, l});
    for (const auto& mem : enumerate_members(fam)) {
      if (mem.duplicate_of) continue;
      MemberReport r;
      r.source = "level " + std::to_string(l);
      r.m = l;
      r.phi_images = mem.phi.images;
      try {
        fill_commutator(r, fam, mem, opt);
      } catch (const Error& err) {
        r.error = ReportError{err.kind(), err.what()};
      }
      out.push_back(std::move(r));
    }
  }
}

}  // namespace detail

/// One entry of the report. Errors are recorded, never thrown.
inline EntryReport classify_entry(const CatalogEntry& e, const ClassifyOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  EntryReport r;
  r.label = e.label;
  r.in_s = e.in_s;
  try {
    validate_entry(e);
    OpenSubgroup g0;
    if (e.family.g0) {
      g0 = *e.family.g0;
      r.j = recover_j(e).to_string();
      r.g0_matches = 1;
    } else {
      auto rec = recover_g0(e);
      g0 = rec.g0;
      r.j = rec.j.to_string();
      r.g0_matches = rec.matches.size();
    }
    r.g0 = g0;
    const auto j = recover_j(e);
    // generic member: [G0, G0] measured inside G cap SL2
    Family fam({g0, e.group, 1});
    if (fam.quotient().order() == 1) {
      r.commutator_index = commutator_index_class(e.group, {12, opt.cap}).index;
    } else {
      const i64 l = fam.common_level();
      const i64 drop = sl2_part(image_at(g0, l)).order() / sl2_part(image_at(e.group, l)).order();
      r.commutator_index = fam.base_commutator().index_in_sl / drop;
    }
    r.index_class = classify_index(r.commutator_index).kind;
    r.bucket = bucket_of(*r.index_class);
    for (const auto& s : e.samples) r.members.push_back(detail::classify_sample(e, g0, j, s, opt));
    if (opt.extra_levels && !e.in_s) {
      r.b = level_bound_b(e);
      detail::extra_members(e, g0, *r.b, opt, r.members);
    } else if (e.automorphism_orders) {
      r.b = level_bound_b(e);
    }
  } catch (const Error& err) {
    r.error = ReportError{err.kind(), err.what()};
    r.bucket = Bucket::Error;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Entries are classified independently and reported in catalog order.
inline ClassificationReport classify(const std::vector<CatalogEntry>& catalog, const ClassifyOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  ClassificationReport rep;
  rep.cap = opt.cap;
  rep.jobs = std::max(1, opt.jobs);
  rep.extra_levels = opt.extra_levels;
  rep.entries.resize(catalog.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < catalog.size();) rep.entries[i] = classify_entry(catalog[i], opt);
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < rep.jobs; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

enum class CurveVerdict { Member, NotMember, ExcludedJ };

inline std::string to_string(CurveVerdict v) {
  switch (v) {
    case CurveVerdict::Member: return "Member";
    case CurveVerdict::NotMember: return "NotMember";
    case CurveVerdict::ExcludedJ: return "ExcludedJ";
  }
  return "?";
}

struct CurveCheck {
  CurveVerdict verdict = CurveVerdict::NotMember;
  std::optional<ProjPoint> witness;
};

/// Whether j lies in pi_G(P^1(Q)), with a rational t when it does.
inline CurveCheck check_curve(const std::vector<CatalogEntry>& catalog, const std::string& label, const Rational& j) {
  const auto& e = find_entry(catalog, label);
  if (j == 0 || j == 1728) return {CurveVerdict::ExcludedJ, std::nullopt};
  auto fiber = rational_fibers(e.pi, j);
  if (fiber.empty()) return {CurveVerdict::NotMember, std::nullopt};
  // finite points first, smallest absolute value, positive before negative
  auto key = [](const ProjPoint& x) { return std::tuple(!x, x ? Rational(abs(*x)) : Rational(0), x && *x < 0); };
  return {CurveVerdict::Member, *std::min_element(fiber.begin(), fiber.end(),
                                                  [&](const auto& a, const auto& b) { return key(a) < key(b); })};
}

}  // namespace aimg
