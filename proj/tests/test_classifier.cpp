#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>

#include "aimg/io.hpp"

using namespace aimg;

namespace {

const std::string kSample = std::string(AIMG_DATA_DIR) + "/sample_catalog.json";

std::vector<CatalogEntry> sample() { return io::load_catalog(kSample); }

RationalMap map_of(std::vector<Rational> num, std::vector<Rational> den = {1}) { return {Poly(num), Poly(den)}; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::SchemaError;
}

std::string write_temp(const std::string& text) {
  std::string path = ::testing::TempDir() + "aimg_catalog_" + std::to_string(std::rand()) + ".json";
  std::ofstream(path) << text;
  return path;
}

const EntryReport& entry_named(const ClassificationReport& r, const std::string& label) {
  for (const auto& e : r.entries)
    if (e.label == label) return e;
  throw std::runtime_error("missing " + label);
}

const MemberReport& member_at(const EntryReport& e, const Rational& v) {
  for (const auto& m : e.members)
    if (m.v == v) return m;
  throw std::runtime_error("missing member");
}

}  // namespace

TEST(Classifier, LoadSample) {
  auto c = sample();
  ASSERT_EQ(c.size(), 3u);
  const auto& e = find_entry(c, "2A-2A");
  EXPECT_EQ(recover_j(e), map_of({1728, 1}));
  EXPECT_EQ(kind_of([&] { find_entry(c, "nope"); }), ErrorKind::UnknownLabel);
}

TEST(Classifier, LoadErrors) {
  EXPECT_EQ(kind_of([] { io::load_catalog(write_temp("{\"entries\": [")); }), ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] { io::load_catalog(write_temp("{\"entries\": [{\"label\": \"x\"}]}")); }), ErrorKind::SchemaError);
  // +-Gamma(7)-type group: genus 3
  const std::string genus3 = R"({"entries": [{"label": "g3", "group": {"level": 7, "gens": [[3, 0, 0, 1]]},
      "piG": {"num": ["0", "1"]}}]})";
  try {
    io::load_catalog(write_temp(genus3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvariantViolation);
    EXPECT_NE(std::string(e.what()).find("genus 3"), std::string::npos) << e.what();
  }
  // no J with pi = J o u
  const std::string no_j = R"({"entries": [{"label": "bad", "group": {"level": 2, "gens": [[1, 1, 1, 0]]},
      "piG": {"num": ["1728", "0", "1"]}, "u": {"num": ["0", "1", "1"]}}]})";
  EXPECT_EQ(kind_of([&] { io::load_catalog(write_temp(no_j)); }), ErrorKind::InvariantViolation);
  const std::string dup = R"({"entries": [
      {"label": "a", "group": {"level": 2, "gens": [[1, 1, 1, 0]]}, "piG": {"num": ["1728", "0", "1"]}},
      {"label": "a", "group": {"level": 2, "gens": [[1, 1, 1, 0]]}, "piG": {"num": ["1728", "0", "1"]}}]})";
  EXPECT_EQ(kind_of([&] { io::load_catalog(write_temp(dup)); }), ErrorKind::InvariantViolation);
}

TEST(Classifier, ParseFormats) {
  auto g = io::parse_group(io::json::parse(R"({"level": 4, "gens": ["[[1,1],[0,1]] mod 4", [3, 0, 0, 1]]})"));
  EXPECT_EQ(g.image().order(), 8);
  EXPECT_EQ(kind_of([] { io::parse_group(io::json::parse(R"({"level": 4, "gens": ["[[1,1],[0,1]] mod 5"]})")); }),
            ErrorKind::ModulusMismatch);
  EXPECT_EQ(kind_of([] { io::parse_group(io::json::parse(R"({"level": 4, "gens": [[1, 1, 0]]})")); }), ErrorKind::SchemaError);
  auto cond = io::parse_condition(io::json::parse(
      R"({"all":[{"kind":"squarefree_not_pm1"},{"kind":"not_square","poly":[-8,0,1]},{"kind":"quad_cyc_trivial","poly":[-8,0,1],"M":2,"mode":"tower"}]})"));
  ASSERT_EQ(cond.all.size(), 3u);
  EXPECT_EQ(cond.all[2].m, 2);
  EXPECT_EQ(kind_of([] { io::parse_condition(io::json::parse(R"({"all":[{"kind":"bogus"}]})")); }), ErrorKind::SchemaError);
  auto f = io::parse_map(io::json::parse(R"({"num": ["1/2", 3], "den": ["2"]})"));
  EXPECT_EQ(io::parse_map(io::map_to_json(f)), f);
}

TEST(Classifier, Ramification) {
  // 256 (t^2 - t + 1)^3 / (t^2 (t - 1)^2)
  auto x2 = find_entry(sample(), "X(2)-model").pi;
  auto prof = ramification_of(x2);
  EXPECT_EQ(prof.over_0, (std::vector<int>{3, 3}));
  EXPECT_EQ(prof.over_1728, (std::vector<int>{2, 2, 2}));
  EXPECT_EQ(prof.over_inf, (std::vector<int>{2, 2, 2}));
  auto x0 = ramification_of(map_of({4096, 768, 48, 1}, {0, 1}));
  EXPECT_EQ(x0.over_1728, (std::vector<int>{1, 2}));
  EXPECT_EQ(x0.over_inf, (std::vector<int>{1, 2}));
  for (const auto& e : sample()) EXPECT_EQ(ramification_of(e.pi), ramification_of(e.group)) << e.label;
}

TEST(Classifier, RecoverG0) {
  auto c = sample();
  auto r = recover_g0(find_entry(c, "2A-2A"));
  EXPECT_EQ(r.g0.level(), 1);
  EXPECT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.j, map_of({1728, 1}));

  const auto& x0 = find_entry(c, "X0(2)-model");
  EXPECT_TRUE(same_open_group(recover_g0(x0).g0, x0.group));  // |A| = 1

  auto x2 = recover_g0(find_entry(c, "X(2)-model"));
  EXPECT_TRUE(same_open_group(x2.g0, find_entry(c, "2A-2A").group));
  EXPECT_EQ(x2.j.degree(), 2);

  // quotient by t -> 1 - t: three conjugate Borel overgroups fit
  auto alt = find_entry(c, "X(2)-model");
  alt.u = map_of({0, 1, -1});
  auto b = recover_g0(alt);
  EXPECT_EQ(b.matches.size(), 3u);
  EXPECT_EQ(b.g0.image().order(), 2);
  EXPECT_EQ(recover_g0(alt).g0.generators(), b.g0.generators());

  // Borel is not normal in GL2(Z/2)
  auto bad = x0;
  bad.u = bad.pi;
  EXPECT_EQ(kind_of([&] { recover_g0(bad); }), ErrorKind::NoMatch);
}

TEST(Classifier, LevelBound) {
  CatalogEntry e;
  e.label = "x";
  e.group = OpenSubgroup(3, {});
  EXPECT_EQ(kind_of([&] { level_bound_b(e); }), ErrorKind::MissingAutomorphismData);
  e.automorphism_orders = std::vector<i64>{1};
  EXPECT_EQ(level_bound_b(e), 1);
  e.group = OpenSubgroup(8, {});
  e.automorphism_orders = std::vector<i64>{2, 4};
  EXPECT_EQ(level_bound_b(e), 4);
  e.group = OpenSubgroup(6, {});
  e.automorphism_orders = std::vector<i64>{3};
  EXPECT_EQ(level_bound_b(e), 6);
  e.automorphism_orders = std::vector<i64>{5, 2};
  EXPECT_EQ(level_bound_b(e), 4);
}

TEST(Classifier, ClassifySample) {
  auto rep = classify(sample());
  ASSERT_EQ(rep.entries.size(), 3u);
  const auto& a = entry_named(rep, "2A-2A");
  ASSERT_FALSE(a.error) << a.error->message;
  EXPECT_EQ(a.bucket, Bucket::Theorem1);
  EXPECT_EQ(*a.j, "t + 1728");
  const auto& v5 = member_at(a, 5);
  EXPECT_EQ(v5.bucket, Bucket::Theorem1);
  EXPECT_TRUE(v5.shortcut);
  EXPECT_EQ(*v5.map, "5*t^2 + 1728");
  const auto& vm1 = member_at(a, -1);
  EXPECT_EQ(vm1.bucket, Bucket::Theorem2);
  EXPECT_EQ(vm1.m, 4);
  EXPECT_TRUE(vm1.condition && !vm1.condition->holds);
  EXPECT_TRUE(v5.condition && v5.condition->holds);
  for (const auto& e : rep.entries) EXPECT_FALSE(e.error) << e.label << ": " << e.error->message;
  EXPECT_FALSE(rep.has_invariant_violation());
  EXPECT_TRUE(classify({}).entries.empty());
}

TEST(Classifier, MemberIndicesAgreeWithDirectComputation) {
  auto c = sample();
  const auto& e = find_entry(c, "2A-2A");
  auto g0 = recover_g0(e).g0;
  for (int v : {5, -1, 2, -3, 3, -7}) {
    auto m = detail::classify_sample(e, g0, recover_j(e), {Rational(v), std::nullopt}, {});
    ASSERT_FALSE(m.error) << m.error->message;
    auto spec = detail::kronecker_phi(v);
    Family fam({g0, e.group, spec.m});
    auto mem = build_member(fam, phi_from_residues(fam, spec.residues, spec.images));
    EXPECT_EQ(m.commutator_index, commutator_open(mem.group).index_in_sl) << v;
    EXPECT_EQ(m.commutator_index, commutator_index_class(mem.group).index) << v;
    // brute force at the saturation level
    const auto sat = commutator_open(mem.group).saturation_level;
    const auto img = image_at(mem.group, sat);
    EXPECT_EQ(m.commutator_index, sl2_part(img).order() / derived_subgroup(img).order()) << v;
  }
}

TEST(Classifier, ExcludedEntry) {
  auto rep = classify(sample());
  const auto& x0 = entry_named(rep, "X0(2)-model");
  EXPECT_EQ(x0.commutator_index, 4);
  EXPECT_EQ(x0.bucket, Bucket::Excluded);
  // brute force at the 2-part of the saturation level; the 3-adic factor is
  // GL2(Z_3), whose commutator is SL2(Z_3)
  const auto c = sample();
  const auto& g = find_entry(c, "X0(2)-model").group;
  const i64 two = nt::ipow(2, nt::valuation(commutator_open(g).saturation_level, 2));
  const auto img = image_at(g, two);
  EXPECT_EQ(sl2_part(img).order() / derived_subgroup(img).order(), 4);
  const auto three = gl2_group(9);
  EXPECT_EQ(derived_subgroup(three).order(), sl2_part(three).order());
  EXPECT_EQ(entry_named(rep, "X(2)-model").bucket, Bucket::Theorem2);
}

TEST(ClassifierProperty, DeterministicUnderPermutationAndJobs) {
  auto c = sample();
  auto base = classify(c);
  std::mt19937 rng(7);
  for (int k = 0; k < 3; ++k) {
    auto p = c;
    std::shuffle(p.begin(), p.end(), rng);
    auto r = classify(p, {3, default_cap_order(), false});
    for (const auto& e : base.entries) {
      const auto& f = entry_named(r, e.label);
      EXPECT_EQ(f.bucket, e.bucket);
      EXPECT_EQ(f.commutator_index, e.commutator_index);
      EXPECT_EQ(io::entry_to_json(f).at("members").dump(), io::entry_to_json(e).at("members").dump());
    }
  }
  auto j = io::report_to_json(base);
  std::set<std::string> labels;
  for (const auto& e : j.at("entries")) labels.insert(e.at("label").get<std::string>());
  EXPECT_EQ(labels.size(), c.size());
}

TEST(Classifier, ExtraLevels) {
  auto c = sample();
  auto r = classify_entry(find_entry(c, "2A-2A"), {1, default_cap_order(), true});
  ASSERT_FALSE(r.error) << r.error->message;
  EXPECT_EQ(*r.b, 4);
  int extra = 0;
  for (const auto& m : r.members) extra += m.source != "sample";
  EXPECT_GT(extra, 0);
  auto s = find_entry(c, "2A-2A");
  s.in_s = true;
  EXPECT_EQ(classify_entry(s, {1, default_cap_order(), true}).members.size(), s.samples.size());
}

TEST(Classifier, PerEntryErrorsAreRecorded) {
  auto c = sample();
  auto bad = find_entry(c, "X0(2)-model");
  bad.label = "broken";
  bad.u = bad.pi;
  c.push_back(bad);
  auto g7 = c[0];
  g7.label = "genus3";
  g7.group = OpenSubgroup(7, {ResidueMatrix::diagonal(3, 1, 7)});
  c.push_back(g7);
  auto rep = classify(c);
  ASSERT_EQ(rep.entries.size(), 5u);
  EXPECT_EQ(entry_named(rep, "broken").error->kind, ErrorKind::NoMatch);
  EXPECT_EQ(entry_named(rep, "genus3").bucket, Bucket::Error);
  EXPECT_TRUE(rep.has_invariant_violation());
  EXPECT_EQ(entry_named(rep, "2A-2A").bucket, Bucket::Theorem1);
}

TEST(Classifier, CheckCurve) {
  auto c = sample();
  auto r = check_curve(c, "2A-2A", 1732);
  EXPECT_EQ(r.verdict, CurveVerdict::Member);
  ASSERT_TRUE(r.witness && *r.witness);
  EXPECT_EQ(**r.witness * **r.witness, 4);
  EXPECT_EQ(check_curve(c, "2A-2A", 1728).verdict, CurveVerdict::ExcludedJ);
  EXPECT_EQ(check_curve(c, "2A-2A", 0).verdict, CurveVerdict::ExcludedJ);
  EXPECT_EQ(check_curve(c, "2A-2A", 1727).verdict, CurveVerdict::NotMember);
  EXPECT_EQ(kind_of([&] { check_curve(c, "9Z-9Z", 5); }), ErrorKind::UnknownLabel);
}

TEST(ClassifierProperty, ImagesOfRationalPointsAreMembers) {
  auto c = sample();
  std::mt19937 rng(3);
  int checked = 0;
  for (const auto& e : c) {
    const int quota = (static_cast<int>(&e - &c[0]) + 1) * 100 / static_cast<int>(c.size());
    while (checked < quota) {
      const Rational t(static_cast<long>(rng() % 2001) - 1000, static_cast<long>(rng() % 50) + 1);
      auto j = evaluate(e.pi, t);
      if (!j || *j == 0 || *j == 1728) continue;
      auto r = check_curve(c, e.label, *j);
      EXPECT_EQ(r.verdict, CurveVerdict::Member) << e.label << " t = " << to_string(t);
      EXPECT_EQ(evaluate(e.pi, *r.witness), j);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 100);
}
