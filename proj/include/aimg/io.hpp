#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aimg/classifier.hpp"
#include "aimg/surjectivity.hpp"

namespace aimg::io {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, path + ": " + e.what());
  }
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::SchemaError, where + ": missing '" + key + "'");
  return j.at(key);
}

inline i64 as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw Error(ErrorKind::SchemaError, where + ": expected an integer");
  return j.get<i64>();
}

}  // namespace detail

/// Integers, or strings holding integers or fractions.
inline Rational parse_rational_json(const json& j, const std::string& where = "value") {
  if (j.is_number_integer()) return Rational(j.get<i64>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorKind::SchemaError, where + ": " + e.what());
    }
  }
  throw Error(ErrorKind::SchemaError, where + ": expected an integer or a rational string");
}

inline Poly parse_poly(const json& j, const std::string& where = "poly") {
  if (!j.is_array()) throw Error(ErrorKind::SchemaError, where + ": expected a coefficient list");
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(parse_rational_json(x, where));
  return Poly(std::move(c));
}

inline json poly_to_json(const Poly& p) {
  json out = json::array();
  for (int i = 0; i <= p.degree(); ++i) out.push_back(to_string(p.coeff(i)));
  return out;
}

inline RationalMap parse_map(const json& j, const std::string& where = "map") {
  auto num = parse_poly(detail::field(j, "num", where), where + ".num");
  auto den = j.contains("den") ? parse_poly(j.at("den"), where + ".den") : Poly::constant(1);
  try {
    return RationalMap(num, den);
  } catch (const Error& e) {
    throw Error(ErrorKind::SchemaError, where + ": " + e.what());
  }
}

inline json map_to_json(const RationalMap& f) { return {{"num", poly_to_json(f.num())}, {"den", poly_to_json(f.den())}}; }

/// A generator: [a, b, c, d] at the given modulus, or a matrix literal.
inline ResidueMatrix parse_generator(const json& j, i64 modulus, const std::string& where) {
  if (j.is_string()) {
    auto m = parse_matrix(j.get<std::string>());
    if (m.modulus() != modulus) throw Error(ErrorKind::ModulusMismatch, where + ": literal modulus differs from level");
    return m;
  }
  if (!j.is_array() || j.size() != 4) throw Error(ErrorKind::SchemaError, where + ": expected [a, b, c, d]");
  return ResidueMatrix(detail::as_int(j[0], where), detail::as_int(j[1], where), detail::as_int(j[2], where),
                       detail::as_int(j[3], where), modulus);
}

inline std::vector<ResidueMatrix> parse_generators(const json& j, i64 modulus, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::SchemaError, where + ": 'gens' must be a list");
  std::vector<ResidueMatrix> out;
  for (const auto& g : j) out.push_back(parse_generator(g, modulus, where));
  return out;
}

/// {"level": m, "gens": [[a, b, c, d], ...]}
inline OpenSubgroup parse_group(const json& j, const std::string& where = "group") {
  const i64 level = detail::as_int(detail::field(j, "level", where), where + ".level");
  if (level < 1) throw Error(ErrorKind::SchemaError, where + ": level must be positive");
  return OpenSubgroup(level, parse_generators(detail::field(j, "gens", where), level, where));
}

inline json group_to_json(const OpenSubgroup& g) {
  json gens = json::array();
  for (const auto& s : g.generators()) gens.push_back({s.a(), s.b(), s.c(), s.d()});
  return {{"level", g.level()}, {"gens", gens}};
}

/// {"level": m, "gens": [...], "primes": [{"ell": l, "k": k, "gens": [...]?}, ...]}
inline TruncatedAdelicGroup parse_adelic_group(const json& j, const std::string& where = "group") {
  auto m = parse_group(j, where);
  std::vector<TruncatedAdelicGroup::PrimePart> parts;
  if (j.contains("primes")) {
    for (const auto& p : j.at("primes")) {
      TruncatedAdelicGroup::PrimePart part;
      part.ell = detail::as_int(detail::field(p, "ell", where), where + ".ell");
      part.k = static_cast<int>(p.contains("k") ? detail::as_int(p.at("k"), where + ".k") : 1);
      if (p.contains("gens")) part.group = FiniteMatrixGroup(part.modulus(), parse_generators(p.at("gens"), part.modulus(), where));
      parts.push_back(std::move(part));
    }
  }
  return TruncatedAdelicGroup(m.image(), std::move(parts));
}

inline VLeaf parse_leaf(const json& j, const std::string& where) {
  const auto kind = detail::field(j, "kind", where).get<std::string>();
  VLeaf l;
  using K = VLeaf::Kind;
  auto mode = [&] {
    if (!j.contains("mode")) return CycMode::Tower;
    const auto s = j.at("mode").get<std::string>();
    if (s == "tower") return CycMode::Tower;
    if (s == "fixed") return CycMode::Fixed;
    throw Error(ErrorKind::SchemaError, where + ": mode must be 'tower' or 'fixed'");
  };
  auto modulus = [&] { return detail::as_int(detail::field(j, "M", where), where + ".M"); };
  if (kind == "squarefree_not_pm1") {
    l.kind = K::SquarefreeIntNotPm1;
  } else if (kind == "not_square") {
    l.kind = K::NotASquare;
    l.p = parse_poly(detail::field(j, "poly", where), where);
  } else if (kind == "quad_cyc_trivial") {
    l.kind = K::QuadCycTrivial;
    l.p = parse_poly(detail::field(j, "poly", where), where);
    l.m = modulus();
    l.mode = mode();
  } else if (kind == "quartic_irreducible" || kind == "quartic_cyc_trivial") {
    l.kind = kind == "quartic_irreducible" ? K::QuarticIrreducible : K::QuarticCycTrivial;
    l.p = parse_poly(detail::field(j, "p", where), where);
    l.q = parse_poly(detail::field(j, "q", where), where);
    if (l.kind == K::QuarticCycTrivial) {
      l.m = modulus();
      l.mode = mode();
    }
  } else if (kind == "nested_radical_degree4") {
    l.kind = K::NestedRadicalDegree4;
    try {
      l.shape = parse_radical_shape(detail::field(j, "shape", where).get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorKind::SchemaError, where + ": " + e.what());
    }
  } else if (kind == "cubic_proxy_irreducible") {
    l.kind = K::CubicProxyIrreducible;
  } else if (kind == "specific_set") {
    l.kind = K::SpecificSet;
    for (const auto& x : detail::field(j, "values", where)) l.values.push_back(parse_rational_json(x, where));
  } else if (kind == "avoid_j") {
    l.kind = K::AvoidJValues;
    l.j = parse_map(detail::field(j, "j", where), where);
  } else {
    throw Error(ErrorKind::SchemaError, where + ": unknown condition kind '" + kind + "'");
  }
  return l;
}

inline VCondition parse_condition(const json& j, const std::string& where = "conditions") {
  VCondition c;
  const auto& all = detail::field(j, "all", where);
  if (!all.is_array()) throw Error(ErrorKind::SchemaError, where + ": 'all' must be a list");
  for (const auto& x : all) c.all.push_back(parse_leaf(x, where));
  return c;
}

inline PhiSpec parse_phi(const json& j, const std::string& where) {
  PhiSpec p;
  p.m = detail::as_int(detail::field(j, "M", where), where + ".M");
  for (const auto& r : detail::field(j, "residues", where)) p.residues.push_back(detail::as_int(r, where));
  for (const auto& img : detail::field(j, "images", where)) {
    FiniteAbelianGroup::Element e;
    for (const auto& x : img) e.push_back(detail::as_int(x, where));
    p.images.push_back(std::move(e));
  }
  return p;
}

inline CatalogEntry parse_entry(const json& j) {
  CatalogEntry e;
  e.label = detail::field(j, "label", "entry").get<std::string>();
  const std::string w = "entry " + e.label;
  e.group = parse_group(detail::field(j, "group", w), w + ".group");
  e.pi = parse_map(detail::field(j, "piG", w), w + ".piG");
  e.u = j.contains("u") ? parse_map(j.at("u"), w + ".u") : RationalMap::identity();
  if (j.contains("automorphism_orders")) {
    std::vector<i64> orders;
    for (const auto& x : j.at("automorphism_orders")) orders.push_back(detail::as_int(x, w));
    e.automorphism_orders = std::move(orders);
  }
  if (j.contains("family")) {
    const auto& f = j.at("family");
    if (f.contains("index") && !f.at("index").is_null()) e.family.index = static_cast<int>(detail::as_int(f.at("index"), w));
    if (f.contains("alpha") && !f.at("alpha").is_null()) e.family.alpha = parse_rational_json(f.at("alpha"), w + ".alpha");
    if (f.contains("G0") && !f.at("G0").is_null()) e.family.g0 = parse_group(f.at("G0"), w + ".G0");
  }
  if (j.contains("conditions")) e.conditions = parse_condition(j.at("conditions"), w + ".conditions");
  if (j.contains("in_S")) e.in_s = j.at("in_S").get<bool>();
  if (j.contains("samples")) {
    for (const auto& s : j.at("samples")) {
      CatalogSample cs;
      if (s.contains("v")) cs.v = parse_rational_json(s.at("v"), w + ".v");
      if (s.contains("phi")) cs.phi = parse_phi(s.at("phi"), w + ".phi");
      e.samples.push_back(std::move(cs));
    }
  }
  return e;
}

/// Schema checks only; see load_catalog for the invariant checks.
inline std::vector<CatalogEntry> parse_catalog(const json& j) {
  try {
    const auto& entries = detail::field(j, "entries", "catalog");
    if (!entries.is_array()) throw Error(ErrorKind::SchemaError, "catalog: 'entries' must be a list");
    std::vector<CatalogEntry> out;
    for (const auto& x : entries) out.push_back(parse_entry(x));
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("catalog: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaError) throw;
    throw Error(ErrorKind::SchemaError, e.what());
  }
}

inline std::vector<CatalogEntry> parse_catalog_file(const std::string& path) { return parse_catalog(read_json_file(path)); }

/// Parses and validates every entry.
inline std::vector<CatalogEntry> load_catalog(const std::string& path) {
  auto c = parse_catalog_file(path);
  validate_catalog(c);
  return c;
}

inline json error_to_json(const ReportError& e) { return {{"kind", std::string(to_string(e.kind))}, {"message", e.message}}; }

inline json condition_to_json(const ConditionResult& c) {
  json trace = json::array();
  for (const auto& l : c.trace) {
    json x{{"leaf", l.leaf}, {"holds", l.holds}, {"reason", l.reason}};
    if (l.experimental) x["experimental"] = true;
    trace.push_back(std::move(x));
  }
  return {{"holds", c.holds}, {"trace", trace}};
}

inline json member_to_json(const MemberReport& m) {
  json out{{"source", m.source}, {"M", m.m}, {"phi", m.phi_images}, {"level", m.level},
           {"commutator_index", m.commutator_index}, {"bucket", to_string(m.bucket)}, {"shortcut", m.shortcut}};
  if (m.v) out["v"] = to_string(*m.v);
  if (m.map) {
    out["map"] = *m.map;
    if (m.map_degenerate) out["map_degenerate"] = true;
  }
  if (m.condition) out["condition"] = condition_to_json(*m.condition);
  if (m.error) out["error"] = error_to_json(*m.error);
  return out;
}

inline json entry_to_json(const EntryReport& e) {
  json out{{"label", e.label}, {"in_S", e.in_s}, {"bucket", to_string(e.bucket)}};
  if (e.index_class) {
    out["index_class"] = to_string(*e.index_class);
    out["commutator_index"] = e.commutator_index;
  }
  if (e.j) out["J"] = *e.j;
  if (e.g0) {
    out["G0"] = group_to_json(*e.g0);
    out["G0_matches"] = e.g0_matches;
  }
  if (e.b) out["b"] = *e.b;
  json members = json::array();
  for (const auto& m : e.members) members.push_back(member_to_json(m));
  out["members"] = members;
  if (e.error) out["error"] = error_to_json(*e.error);
  out["seconds"] = e.seconds;
  return out;
}

inline json report_to_json(const ClassificationReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back(entry_to_json(e));
  return {{"entries", entries},
          {"metadata", {{"cap_order", r.cap}, {"jobs", r.jobs}, {"extra_levels", r.extra_levels}, {"seconds", r.seconds}}}};
}

/// One line per label, members indented below.
inline std::string report_table(const ClassificationReport& r) {
  std::ostringstream os;
  for (const auto& e : r.entries) {
    os << e.label << "  " << to_string(e.bucket);
    if (e.index_class) os << "  index " << e.commutator_index;
    if (e.j) os << "  J = " << *e.j;
    if (e.error) os << "  " << e.error->message;
    os << "\n";
    for (const auto& m : e.members) {
      os << "    " << m.source;
      if (m.v) os << " v = " << to_string(*m.v);
      os << "  M = " << m.m << "  " << to_string(m.bucket);
      if (!m.error) os << "  index " << m.commutator_index << (m.shortcut ? " (shortcut)" : "");
      else os << "  " << m.error->message;
      if (m.condition) os << "  conditions " << (m.condition->holds ? "hold" : "fail");
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace aimg::io
