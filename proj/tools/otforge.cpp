// SPDX-License-Identifier: Apache-2.0
//
// otforge: certified construction of the manifolds T(M, D) from integer
// matrix data, with JSON certificates at every stage.
//
//   classify    type hierarchy verdict for a matrix and its factorization
//   dirichlet   search for a certified family of monodromy polynomials
//   build       assemble the manifold data and re-verify every certificate
//   invariants  obstruction report (b1, LCK, OT comparison) for a manifold
//   ot-compare  exact identity check against the number-field construction
//
// Exit codes: 0 success / type J verdict, 1 input parse error, 2 definite
// failure, 3 irreducibility unknown, 4 search exhausted.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "otforge/io.hpp"

namespace {

using namespace otforge;

struct JobConfig {
  long coeff_bound = 8;
  long search_bound = 3;
  long precision = 256;
  std::string tolerance = "1e-8";
  std::string output;
  bool primary = false;  // flag presence only; --custom turns primary off
  std::string custom_path;
};

void emit(const Json& doc, const JobConfig& cfg) {
  std::string text = dump_json(doc);
  if (cfg.output.empty())
    std::cout << text;
  else
    write_text_file(cfg.output, text);
}

ZMat read_matrix(const std::string& path) {
  return zmat_from_json(load_json_file(path), "$");
}

FactoredCharPoly read_factorization(const std::string& path) {
  return factorization_from_json(load_json_file(path), "$");
}

int cmd_classify(const JobConfig& cfg, const std::string& mpath,
                 const std::string& fpath) {
  TypeCertificate cert =
      check_type_j(read_matrix(mpath), read_factorization(fpath));
  emit(type_certificate_to_json(cert), cfg);
  if (cert.j) return 0;
  if (cert.definite_failure) return 2;
  return cert.witness_unknown ? 3 : 2;
}

int cmd_dirichlet(const JobConfig& cfg, const std::string& mpath,
                  const std::string& fpath) {
  FamilyBuildOptions opt;
  opt.coeff_bound = Int(cfg.coeff_bound);
  opt.precision_bits = cfg.precision;
  opt.primary = cfg.custom_path.empty();
  if (!opt.primary)
    opt.custom_e = poly_list_from_json(load_json_file(cfg.custom_path), "$");
  DirichletFamily fam =
      build_dirichlet_family(read_matrix(mpath), read_factorization(fpath),
                             opt);
  emit(dirichlet_family_to_json(fam), cfg);
  return 0;
}

int cmd_build(const JobConfig& cfg, const std::string& mpath,
              const std::string& fpath, const std::string& fampath) {
  ZMat m = read_matrix(mpath);
  FactoredCharPoly f = read_factorization(fpath);
  std::vector<IntPoly> family =
      poly_list_from_json(load_json_file(fampath), "$");
  ManifoldOptions opt;
  opt.float_precision = static_cast<unsigned long>(cfg.precision);
  opt.budget_bits = cfg.precision;
  opt.tolerance = rat_from_decimal(cfg.tolerance, "--tolerance");
  if (sign_of(opt.tolerance) <= 0)
    throw ParseError("--tolerance: must be positive");
  ManifoldData md = build_manifold(m, f, family, opt);
  emit(manifold_to_json(md, m, f), cfg);
  return 0;
}

int cmd_invariants(const JobConfig& cfg, const std::string& manpath) {
  ManifoldInput in = manifold_input_from_json(load_json_file(manpath));
  ObstructionOptions opt;
  opt.search_bound = cfg.search_bound;
  opt.budget_bits = cfg.precision;
  ObstructionReport rep =
      obstruction_report(in.matrix, in.factorization, in.family, opt);
  emit(obstruction_report_to_json(rep), cfg);
  return 0;
}

int cmd_ot_compare(const JobConfig& cfg, const std::string& ppath,
                   const std::string& upath) {
  IntPoly p = poly_from_json(load_json_file(ppath), "$");
  std::vector<IntPoly> units =
      poly_list_from_json(load_json_file(upath), "$");
  OTBridgeOptions opt;
  opt.budget_bits = cfg.precision;
  IdentityCertificate cert = compare_with_tm(p, units, opt);
  emit(identity_certificate_to_json(cert), cfg);
  return cert.matched ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "otforge: certified construction and verification of the solvmanifolds "
      "T(M, D) built from integer matrices of type J"};
  app.fallthrough();
  app.require_subcommand(1);

  JobConfig cfg;
  app.add_option("--coeff-bound", cfg.coeff_bound,
                 "coefficient bound for the unit search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--search-bound", cfg.search_bound,
                 "exponent bound for the specialness witness search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--precision", cfg.precision,
                 "working precision budget in bits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance,
                 "residual tolerance for the lattice invariance check")
      ->capture_default_str();
  app.add_option("--output", cfg.output,
                 "write the JSON document here instead of stdout");

  std::string mpath, fpath, fampath, manpath, ppath, upath;

  CLI::App* classify = app.add_subcommand(
      "classify", "certify where a matrix sits in the type hierarchy");
  classify->add_option("matrix", mpath, "matrix JSON file")->required();
  classify->add_option("factorization", fpath, "factorization JSON file")
      ->required();

  CLI::App* dirichlet = app.add_subcommand(
      "dirichlet", "construct a certified family for a type J matrix");
  dirichlet->add_option("matrix", mpath, "matrix JSON file")->required();
  dirichlet->add_option("factorization", fpath, "factorization JSON file")
      ->required();
  CLI::Option* primary = dirichlet->add_flag(
      "--primary", cfg.primary, "use the residue t modulo b0 (default)");
  CLI::Option* custom = dirichlet->add_option(
      "--custom", cfg.custom_path, "file with one residue per family member");
  primary->excludes(custom);

  CLI::App* build = app.add_subcommand(
      "build", "assemble the manifold data with all certificates");
  build->add_option("matrix", mpath, "matrix JSON file")->required();
  build->add_option("factorization", fpath, "factorization JSON file")
      ->required();
  build->add_option("family", fampath, "family JSON file")->required();

  CLI::App* invariants = app.add_subcommand(
      "invariants", "obstruction report for a built manifold");
  invariants->add_option("manifold", manpath, "manifold JSON file")
      ->required();

  CLI::App* compare = app.add_subcommand(
      "ot-compare", "compare against the number-field construction");
  compare->add_option("polynomial", ppath, "field polynomial JSON file")
      ->required();
  compare->add_option("units", upath, "unit polynomial list JSON file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(classify)) return cmd_classify(cfg, mpath, fpath);
    if (app.got_subcommand(dirichlet)) return cmd_dirichlet(cfg, mpath, fpath);
    if (app.got_subcommand(build)) return cmd_build(cfg, mpath, fpath, fampath);
    if (app.got_subcommand(invariants)) return cmd_invariants(cfg, manpath);
    if (app.got_subcommand(compare)) return cmd_ot_compare(cfg, ppath, upath);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnknownIrreducibility& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SearchExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
