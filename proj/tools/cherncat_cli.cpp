// Command-line front end: scenario ingestion, check dispatch, JSON/text reports.
// Exit codes: 0 pass, 1 check failure, 2 usage or parse error, 3 numerical singularity.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cherncat/cherncat.hpp"

namespace {

using namespace cherncat;

struct Options {
  std::string scenario;
  std::string lhs, rhs;
  int degree = 0;
  int steps = 64;
  double tolerance = 1e-9;
  std::string output = "json";
  bool parallel = false;
  std::string out;
};

void add_common(CLI::App* cmd, Options& opt, bool needs_scenario) {
  if (needs_scenario)
    cmd->add_option("scenario", opt.scenario, "Scenario JSON file")->required();
  cmd->add_option("--tolerance", opt.tolerance, "Absolute tolerance on scaled residuals")
      ->capture_default_str();
  cmd->add_option("--output", opt.output, "Report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_flag("--parallel", opt.parallel, "Evaluate tensors data-parallel");
  cmd->add_option("--out", opt.out, "Write the command's payload (a cochain document) to this path");
}

Scenario load_with_digest(const std::string& path, CheckReport& rep) {
  const std::string bytes = read_file(path);
  rep.inputs["scenario"] = path;
  rep.inputs["digest"] = fnv1a64_hex(bytes);
  Json j;
  try {
    j = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_scenario(j);
}

void require_even_degree(int degree) {
  if (degree < 0 || degree % 2 != 0)
    throw ParseError("--degree must be even and nonnegative (characters live in even degree)");
}

void run_validate(const Options& opt, CheckReport& rep) {
  Scenario sc = load_with_digest(opt.scenario, rep);
  AlgebraReport ar = validate_algebra(sc.algebra);
  rep.residuals["algebra_associativity"] = ar.associativity_residual;
  rep.residuals["algebra_unit"] = ar.unit_residual;
  rep.decisions["algebra"] = ar.pass(opt.tolerance);
  FredholmReport fr = validate_fredholm(sc.module);
  rep.residuals["f_square"] = fr.f_square_residual;
  rep.residuals["f_grading"] = fr.f_grading_residual;
  rep.residuals["homomorphism"] = fr.homomorphism_residual;
  double comm = 0.0;
  for (double v : fr.commutator_schatten) comm = std::max(comm, v);
  rep.residuals["commutator_schatten_max"] = comm;
  rep.decisions["module"] = fr.pass(opt.tolerance);
  if (sc.path) {
    PathGridReport pr = validate_path(*sc.path, 16);
    rep.residuals["path_homomorphism"] = pr.homomorphism_residual;
    rep.residuals["path_f_square"] = pr.f_square_residual;
    rep.decisions["path"] = pr.pass(opt.tolerance);
  }
}

void run_chern(const Options& opt, CheckReport& rep, bool check_cocycle) {
  require_even_degree(opt.degree);
  Scenario sc = load_with_digest(opt.scenario, rep);
  CyclicCochain tau = chern_character(sc.module, opt.degree);
  rep.residuals["sup_abs"] = sup_abs(tau);
  if (check_cocycle) {
    CocycleReport cr = is_cyclic_cocycle(tau);
    rep.residuals["lambda_residual"] = cr.lambda_residual;
    rep.residuals["b_residual"] = cr.b_residual;
    rep.residuals["scale"] = cr.scale;
    rep.decisions["cyclic_cocycle"] = cr.pass(opt.tolerance);
  }
  const Json doc = cochain_to_json(tau);
  if (!opt.out.empty())
    write_json_file(doc, opt.out);
  else if (!check_cocycle)
    std::cout << doc.dump(2) << "\n";
}

void run_periodicity(const Options& opt, CheckReport& rep) {
  require_even_degree(opt.degree);
  Scenario sc = load_with_digest(opt.scenario, rep);
  WitnessResult w = periodicity_witness(sc.module, opt.degree);
  rep.residuals["witness_residual"] = w.residual;
  rep.residuals["witness_scale"] = w.scale;
  rep.decisions["witness"] = w.residual <= opt.tolerance * w.scale;
  CohomologousResult coh =
      cohomologous(s_operator(sc.module, opt.degree), chern_character(sc.module, opt.degree + 2), opt.tolerance);
  rep.residuals["cohomologous_residual"] = coh.residual;
  rep.decisions["cohomologous"] = coh.decision;
  if (!opt.out.empty()) write_json_file(cochain_to_json(w.phi), opt.out);
}

void run_homotopy(const Options& opt, CheckReport& rep) {
  require_even_degree(opt.degree);
  if (opt.steps < 2) throw ParseError("--steps must be at least 2");
  Scenario sc = load_with_digest(opt.scenario, rep);
  if (!sc.path) throw ParseError(opt.scenario + ": scenario carries no path section");
  OperatorPath norm = normalize_conjugate(*sc.path, opt.steps, opt.tolerance);
  PathGridReport pr = validate_path(norm, opt.steps);
  rep.residuals["path_homomorphism"] = pr.homomorphism_residual;
  rep.residuals["path_f_square"] = pr.f_square_residual;
  rep.decisions["path"] = pr.pass(opt.tolerance);
  HomotopyReport hr = homotopy_check(norm, opt.degree, opt.steps, opt.tolerance);
  rep.residuals["transgression"] = hr.residual_transgression;
  rep.residuals["symmetrized"] = hr.residual_symmetrized;
  rep.residuals["cohomologous_residual"] = hr.cohomologous_residual;
  rep.residuals["scale"] = hr.scale;
  rep.decisions["transgression"] = hr.residual_transgression <= opt.tolerance * hr.scale;
  rep.decisions["symmetrized"] = hr.residual_symmetrized <= opt.tolerance * hr.scale;
  rep.decisions["cohomologous"] = hr.cohomologous_decision;
  if (!opt.out.empty())
    write_json_file(cochain_to_json(transgression_cochain(norm, opt.degree, opt.steps)), opt.out);
}

void run_cohomologous(const Options& opt, CheckReport& rep) {
  const std::string lhs_bytes = read_file(opt.lhs);
  const std::string rhs_bytes = read_file(opt.rhs);
  rep.inputs["lhs"] = opt.lhs;
  rep.inputs["lhs_digest"] = fnv1a64_hex(lhs_bytes);
  rep.inputs["rhs"] = opt.rhs;
  rep.inputs["rhs_digest"] = fnv1a64_hex(rhs_bytes);
  CyclicCochain lhs, rhs;
  try {
    lhs = cochain_from_json(Json::parse(lhs_bytes));
  } catch (const Json::parse_error& e) {
    throw ParseError(opt.lhs + ": " + e.what());
  }
  try {
    rhs = cochain_from_json(Json::parse(rhs_bytes));
  } catch (const Json::parse_error& e) {
    throw ParseError(opt.rhs + ": " + e.what());
  }
  if (lhs.degree != opt.degree || rhs.degree != opt.degree)
    throw ParseError("--degree does not match the loaded cochains");
  if (lhs.algebra.basis != rhs.algebra.basis || lhs.algebra.structure != rhs.algebra.structure)
    throw ParseError("cochain algebras differ between --lhs and --rhs");
  CohomologousResult r = cohomologous(lhs, rhs, opt.tolerance);
  rep.residuals["residual"] = r.residual;
  rep.residuals["scale"] = r.scale;
  rep.decisions["cohomologous"] = r.decision;
  if (!opt.out.empty() && r.witness) write_json_file(cochain_to_json(*r.witness), opt.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional Fredholm modules, Chern characters, and cyclic-cohomology checks"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* validate = app.add_subcommand("validate", "Run algebra, module, and path validators");
  add_common(validate, opt, true);

  CLI::App* chern = app.add_subcommand("chern", "Compute the degree-n character tensor");
  add_common(chern, opt, true);
  chern->add_option("--degree", opt.degree, "Even character degree n")->required();

  CLI::App* cocycle = app.add_subcommand("cocycle", "Check the character is a cyclic cocycle");
  add_common(cocycle, opt, true);
  cocycle->add_option("--degree", opt.degree, "Even character degree n")->required();

  CLI::App* periodicity =
      app.add_subcommand("periodicity", "Check S tau^n and tau^{n+2} agree up to the explicit coboundary");
  add_common(periodicity, opt, true);
  periodicity->add_option("--degree", opt.degree, "Even character degree n")->required();

  CLI::App* homotopy = app.add_subcommand("homotopy", "Certify homotopy invariance along the scenario path");
  add_common(homotopy, opt, true);
  homotopy->add_option("--degree", opt.degree, "Even character degree p")->required();
  homotopy->add_option("--steps", opt.steps, "Simpson subintervals")->capture_default_str();

  CLI::App* cohom = app.add_subcommand("cohomologous", "Decide whether two cyclic cocycles differ by b(x)");
  add_common(cohom, opt, false);
  cohom->add_option("--lhs", opt.lhs, "Left cochain document")->required();
  cohom->add_option("--rhs", opt.rhs, "Right cochain document")->required();
  cohom->add_option("--degree", opt.degree, "Common degree of both cochains")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cherncat::CheckReport rep;
  rep.tolerance = opt.tolerance;
  cherncat::parallel_enabled() = opt.parallel;
  const auto start = std::chrono::steady_clock::now();
  bool emit_report = true;
  try {
    if (app.got_subcommand(validate)) {
      rep.command = "validate";
      run_validate(opt, rep);
    } else if (app.got_subcommand(chern)) {
      rep.command = "chern";
      run_chern(opt, rep, false);
      emit_report = !opt.out.empty();
    } else if (app.got_subcommand(cocycle)) {
      rep.command = "cocycle";
      run_chern(opt, rep, true);
    } else if (app.got_subcommand(periodicity)) {
      rep.command = "periodicity";
      run_periodicity(opt, rep);
    } else if (app.got_subcommand(homotopy)) {
      rep.command = "homotopy";
      run_homotopy(opt, rep);
    } else {
      rep.command = "cohomologous";
      run_cohomologous(opt, rep);
    }
  } catch (const cherncat::SingularityError& e) {
    std::cerr << "singularity: " << e.what() << "\n";
    return 3;
  } catch (const cherncat::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const cherncat::ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return 2;
  } catch (const cherncat::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                       .count();

  if (emit_report) {
    if (opt.output == "json")
      std::cout << rep.to_json().dump(2) << "\n";
    else
      std::cout << rep.to_text();
  }
  return rep.all_pass() ? 0 : 1;
}
