#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aimg/io.hpp"

#ifndef AIMG_DATA_DIR
#define AIMG_DATA_DIR "data"
#endif

using namespace aimg;
using io::json;

namespace {

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_classify(const std::string& catalog, const std::string& out, int jobs, bool extra, bool table) {
  auto entries = io::parse_catalog_file(catalog);
  ClassifyOptions opt;
  opt.jobs = jobs;
  opt.extra_levels = extra;
  auto rep = classify(entries, opt);
  const auto j = io::report_to_json(rep);
  if (out.empty() || out == "-") {
    print(j);
  } else {
    std::ofstream f(out);
    if (!f) throw Error(ErrorKind::SchemaError, "cannot write " + out);
    f << j.dump(2) << "\n";
  }
  if (table) std::cerr << io::report_table(rep);
  return rep.has_invariant_violation() ? 1 : 0;
}

int cmd_check_curve(const std::string& catalog, const std::string& label, const std::string& jtext) {
  auto c = io::load_catalog(catalog);
  auto r = check_curve(c, label, parse_rational(jtext));
  json out{{"label", label}, {"j", jtext}, {"verdict", to_string(r.verdict)}};
  if (r.witness) out["witness"] = to_string(*r.witness);
  print(out);
  return 0;
}

int cmd_condition(const std::string& catalog, const std::string& label, const std::string& vtext) {
  auto c = io::load_catalog(catalog);
  const auto& e = find_entry(c, label);
  auto r = eval_condition(e.conditions, parse_rational(vtext), recover_j(e));
  json out = io::condition_to_json(r);
  out["label"] = label;
  out["v"] = vtext;
  print(out);
  return 0;
}

int cmd_genus(const std::string& file) {
  auto g = io::parse_group(io::read_json_file(file));
  auto d = genus(g);
  print({{"level", g.level()}, {"d", d.degree}, {"e2", d.e2}, {"e3", d.e3}, {"eInf", d.e_inf}, {"g", d.genus}});
  return 0;
}

int cmd_commutator(const std::string& file) {
  auto g = io::parse_group(io::read_json_file(file));
  auto r = commutator_open(g);
  auto t = commutator_index_class(g);
  print({{"level", g.level()},
         {"index_in_sl", r.index_in_sl},
         {"saturation_level", r.saturation_level},
         {"full_determinant", r.full_determinant},
         {"transposed_index_class", to_string(t.kind)},
         {"commutator", io::group_to_json(r.commutator)}});
  return 0;
}

int cmd_surjectivity(const std::string& group_file, const std::string& sub_file) {
  auto g = io::parse_adelic_group(io::read_json_file(group_file));
  auto h = io::parse_group(io::read_json_file(sub_file), "subgroup");
  if (h.level() != g.modulus())
    throw Error(ErrorKind::ModulusMismatch, "subgroup level must be " + std::to_string(g.modulus()));
  SurjectivityContext ctx(g);
  bool disjoint = true;
  for (const auto& p : g.primes) disjoint = disjoint && quo_disjointness(g.m_part, p.resolved());
  auto v = ctx.check(h.generators());
  json out{{"verdict", v.to_string()}, {"quo_disjoint", disjoint}};
  if (!v.which.empty()) out["factor"] = v.which;
  print(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adelic images of elliptic curves: groups, families and catalog classification"};
  app.require_subcommand(1);
  std::int64_t cap = 0;
  app.add_option("--cap-order", cap, "Largest finite group order materialized (overrides AIMG_CAP_ORDER)");
  const std::string default_catalog = std::string(AIMG_DATA_DIR) + "/sample_catalog.json";

  std::string catalog = default_catalog, out, label, num, group_file, sub_file;
  int jobs = 1;
  bool extra = false, table = false;

  auto* classify_cmd = app.add_subcommand("classify", "Classify every catalog entry");
  classify_cmd->add_option("--catalog", catalog)->required();
  classify_cmd->add_option("--out", out, "Report path (stdout when omitted)");
  classify_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  classify_cmd->add_option("--cap-order", cap);
  classify_cmd->add_flag("--extra-levels", extra, "Enumerate members at levels dividing N b for labels outside S");
  classify_cmd->add_flag("--table", table, "Also print a table to stderr");

  auto* check_cmd = app.add_subcommand("check-curve", "Is j in pi_G(P^1(Q))?");
  check_cmd->add_option("--catalog", catalog);
  check_cmd->add_option("--label", label)->required();
  check_cmd->add_option("--j", num)->required();

  auto* cond_cmd = app.add_subcommand("condition", "Evaluate the v-conditions of a label");
  cond_cmd->add_option("--catalog", catalog);
  cond_cmd->add_option("--label", label)->required();
  cond_cmd->add_option("--v", num)->required();

  auto* genus_cmd = app.add_subcommand("genus", "Genus of X_G");
  genus_cmd->add_option("--group", group_file)->required();

  auto* comm_cmd = app.add_subcommand("commutator", "Commutator subgroup of G");
  comm_cmd->add_option("--group", group_file)->required();

  auto* surj_cmd = app.add_subcommand("surjectivity", "Is H all of G_M x prod G_l?");
  surj_cmd->add_option("--group", group_file)->required();
  surj_cmd->add_option("--subgroup", sub_file)->required();

  CLI11_PARSE(app, argc, argv);
  if (cap > 0) setenv("AIMG_CAP_ORDER", std::to_string(cap).c_str(), 1);

  try {
    if (*classify_cmd) return cmd_classify(catalog, out, jobs, extra, table);
    if (*check_cmd) return cmd_check_curve(catalog, label, num);
    if (*cond_cmd) return cmd_condition(catalog, label, num);
    if (*genus_cmd) return cmd_genus(group_file);
    if (*comm_cmd) return cmd_commutator(group_file);
    if (*surj_cmd) return cmd_surjectivity(group_file, sub_file);
  } catch (const Error& e) {
    std::cerr << "aimg: " << e.what() << "\n";
    return e.kind() == ErrorKind::InvariantViolation ? 1 : 2;
  }
  return 0;
}
