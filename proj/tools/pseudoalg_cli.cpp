// Batch front end: ingest JSON specs, run constructions and verifications,
// emit machine-readable and human-readable reports.
//
// Exit codes: 0 = all checks pass, 1 = mathematical failure, 2 = input error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pseudoalg/json_io.hpp"

using namespace pseudoalg;

namespace {

struct Output {
  json report;
  std::string json_path;

  void flush() const {
    if (json_path.empty()) return;
    std::ofstream out(json_path);
    out << report.dump(2) << "\n";
  }
};

int cmd_validate(const std::string& algebra_path, Output& out) {
  AlgebraFile af = algebra_from_file(algebra_path);
  bool ok = true;
  json rep;

  auto lie = validate_lie(af.algebra);
  rep["lie_valid"] = lie.ok();
  if (!lie.ok()) {
    ok = false;
    json v = json::array();
    for (const auto& viol : lie.violations) v.push_back(viol.str());
    rep["lie_violations"] = v;
    std::cout << "structure constants INVALID:\n" << lie.str();
  } else {
    std::cout << "structure constants valid (dim " << af.algebra.dim() << ")\n";
  }

  const LieAlgebra* small = &af.algebra;
  std::optional<SubalgebraPair> pair;
  std::optional<LieAlgebra> small_store;
  if (af.subalgebra_split && *af.subalgebra_split > 0) {
    pair.emplace(af.algebra, *af.subalgebra_split);
    small_store = pair->small();
    small = &*small_store;
    std::cout << "subalgebra split r=" << *af.subalgebra_split << " closed\n";
    rep["subalgebra_closed"] = true;
  }

  if (af.chi) {
    bool tf = check_traceform(*small, *af.chi);
    rep["chi_traceform"] = tf;
    std::cout << "chi traceform: " << (tf ? "yes" : "NO") << "\n";
    if (!tf) ok = false;
  }
  if (af.omega) {
    RatVec chi = af.chi ? *af.chi : zero_vec(small->dim());
    auto sb = build_symplectic(*small, *af.omega, chi);
    rep["cocycle_ok"] = sb.ok();
    if (!sb.ok()) {
      ok = false;
      json v = json::array();
      for (const auto& viol : sb.cocycle.violations) v.push_back(viol.str());
      rep["cocycle_violations"] = v;
      std::cout << "omega cocycle FAILS:\n";
      for (const auto& viol : sb.cocycle.violations) std::cout << "  " << viol.str() << "\n";
    } else {
      std::cout << "omega cocycle holds; s = (";
      for (int i = 0; i < small->dim(); ++i)
        std::cout << (i ? "," : "") << rat_str(sb.data->s[static_cast<size_t>(i)]);
      std::cout << ")\n";
      rep["s"] = vec_to_json(sb.data->s);
      // d_+ is revalidated as an honest Lie algebra
      build_dplus(*sb.data);
      rep["dplus_valid"] = true;
    }
  }
  out.report = {{"command", "validate"}, {"ok", ok}, {"detail", rep}};
  return ok ? 0 : 1;
}

int cmd_verify_algebra(const std::string& algebra_path, Output& out) {
  std::ifstream in(algebra_path);
  if (!in) throw std::runtime_error("cannot open " + algebra_path);
  json j;
  in >> j;
  AlgebraFile af = algebra_from_json(j.at("algebra"));
  std::shared_ptr<const LieAlgebra> base;
  std::shared_ptr<const SubalgebraPair> pair;
  if (af.subalgebra_split && *af.subalgebra_split > 0) {
    pair = std::make_shared<SubalgebraPair>(af.algebra, *af.subalgebra_split);
    base = std::make_shared<LieAlgebra>(pair->small());
  } else {
    base = std::make_shared<LieAlgebra>(af.algebra);
  }
  auto lie = validate_lie(*base);
  if (!lie.ok()) {
    std::cout << "base algebra invalid:\n" << lie.str();
    out.report = {{"command", "verify-algebra"}, {"ok", false}};
    return 1;
  }
  auto alg = std::make_shared<PseudoAlgebra>(pseudo_from_json(j.at("pseudo"), base));
  if (pair && j.value("current", false))
    alg = std::make_shared<PseudoAlgebra>(current_algebra(alg, pair));

  auto skew = verify_skew(*alg);
  auto jac = verify_jacobi(*alg);
  bool ok = skew.ok() && jac.ok();
  std::cout << "kind " << kind_name(alg->kind) << ", " << alg->ngens()
            << " generators\n";
  std::cout << "skew: " << (skew.ok() ? "pass" : "FAIL") << "\n";
  if (!skew.ok()) std::cout << skew.str();
  std::cout << "jacobi: " << (jac.ok() ? "pass" : "FAIL") << "\n";
  if (!jac.ok()) std::cout << jac.str();
  out.report = {{"command", "verify-algebra"},
                {"ok", ok},
                {"skew", skew.entries},
                {"jacobi", jac.entries}};
  return ok ? 0 : 1;
}

int cmd_verify_module(const std::string& module_path, Output& out) {
  std::ifstream in(module_path);
  if (!in) throw std::runtime_error("cannot open " + module_path);
  json j;
  in >> j;
  ModuleJob job = module_job_from_json(j);
  auto rep = verify_action(job.module);
  bool ok = rep.ok();
  std::cout << "module over " << kind_name(job.module.alg->primitive_kind())
            << (job.module.alg->is_current() ? " current" : "") << ", dim R = "
            << job.module.dim_r << "\n";
  std::cout << "action axiom: " << (ok ? "pass" : "FAIL") << "\n";
  if (!ok) std::cout << rep.str();
  out.report = {{"command", "verify-module"}, {"ok", ok}, {"residuals", rep.entries}};
  return ok ? 0 : 1;
}

int cmd_admissible_t(const std::string& algebra_path, Output& out) {
  AlgebraFile af = algebra_from_file(algebra_path);
  if (!af.subalgebra_split || !af.omega)
    throw std::runtime_error("admissible-t needs subalgebra_split and omega");
  SubalgebraPair pair(af.algebra, *af.subalgebra_split);
  LieAlgebra small = pair.small();
  RatVec chi = af.chi ? *af.chi : zero_vec(small.dim());
  auto sb = build_symplectic(small, *af.omega, chi);
  if (!sb.ok()) throw std::runtime_error("omega cocycle fails on d");
  auto space = admissible_t_space(pair, chi, *sb.data);

  json basis = json::array();
  bool any_outside = false;
  std::cout << "admissible t-space dimension " << space.basis.size() << "\n";
  for (size_t i = 0; i < space.basis.size(); ++i) {
    basis.push_back(vec_to_json(space.basis[i]));
    std::cout << "  t" << i + 1 << " = (";
    for (size_t c = 0; c < space.basis[i].size(); ++c)
      std::cout << (c ? "," : "") << rat_str(space.basis[i][c]);
    std::cout << ")" << (space.inside_small[i] ? "  [inside d]" : "  [outside d]") << "\n";
    if (!space.inside_small[i]) any_outside = true;
  }
  std::string verdict;
  if (pair.split() == 0)
    verdict = "degenerate: d' = d, no twist directions exist";
  else if (!any_outside)
    verdict = "no admissible t outside d: every finite irreducible module is current";
  else if (static_cast<int>(space.basis.size()) == pair.big().dim())
    verdict = "every t in d' is admissible";
  else
    verdict = "admissible twists exist outside d";
  std::cout << verdict << "\n";
  out.report = {{"command", "admissible-t"},
                {"ok", true},
                {"basis", basis},
                {"verdict", verdict}};
  return 0;
}

int cmd_singular(const std::string& module_path, int degree, Output& out) {
  std::ifstream in(module_path);
  if (!in) throw std::runtime_error("cannot open " + module_path);
  json j;
  in >> j;
  ModuleJob job = module_job_from_json(j);
  auto basis = singular_vectors(job.module, degree);
  std::cout << "singular vectors at degree <= " << degree << ": "
            << basis.size() << "\n";
  json jb = json::array();
  for (const auto& b : basis) {
    std::cout << "  " << b.str() << "\n";
    jb.push_back(carrier_to_json(b));
  }
  out.report = {{"command", "singular"}, {"ok", true}, {"degree", degree}, {"basis", jb}};
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact pseudoalgebra calculator"};
  app.require_subcommand(1);

  std::string algebra_file, module_file, json_out;
  int degree = 2;
  unsigned seed = 0;

  app.add_option("--json", json_out, "write a JSON report to this path");
  app.add_option("--seed", seed, "seed for randomized suites (reports only)");

  auto* validate = app.add_subcommand("validate", "validate an algebra file");
  validate->add_option("--algebra", algebra_file, "algebra JSON file")->required();
  auto* va = app.add_subcommand("verify-algebra", "check pseudoalgebra axioms");
  va->add_option("--algebra", algebra_file, "job JSON file")->required();
  auto* vm = app.add_subcommand("verify-module", "check the representation axiom");
  vm->add_option("--module", module_file, "module job JSON file")->required();
  auto* at = app.add_subcommand("admissible-t", "solve the twist conditions");
  at->add_option("--algebra", algebra_file, "algebra JSON file")->required();
  auto* sg = app.add_subcommand("singular", "solve for singular vectors");
  sg->add_option("--module", module_file, "module job JSON file")->required();
  sg->add_option("--degree", degree, "PBW degree bound");
  for (auto* sub : {validate, va, vm, at, sg}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  Output out;
  out.json_path = json_out;
  int rc = 0;
  try {
    if (validate->parsed()) rc = cmd_validate(algebra_file, out);
    else if (va->parsed()) rc = cmd_verify_algebra(algebra_file, out);
    else if (vm->parsed()) rc = cmd_verify_module(module_file, out);
    else if (at->parsed()) rc = cmd_admissible_t(algebra_file, out);
    else if (sg->parsed()) rc = cmd_singular(module_file, degree, out);
  } catch (const std::domain_error& e) {
    // a mathematical precondition failed (degenerate omega, rank-1
    // identities, inadmissible twist placement)
    std::cerr << "check failed: " << e.what() << "\n";
    out.report = {{"ok", false}, {"error", e.what()}, {"seed", seed}};
    out.flush();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    out.report = {{"ok", false}, {"error", e.what()}, {"seed", seed}};
    out.flush();
    return 2;
  }
  out.report["seed"] = seed;
  out.flush();
  return rc;
}
