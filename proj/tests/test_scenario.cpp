#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>

#include "support/builders.hpp"

using namespace cherncat;
namespace fs = std::filesystem;

namespace {

std::string fixture(const char* name) { return std::string(FIXTURES_DIR) + "/" + name; }

fs::path temp_file(const std::string& stem) {
  static int counter = 0;
  return fs::temp_directory_path() / (stem + "_" + std::to_string(++counter) + ".json");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  const fs::path out = temp_file("cli_stdout");
  const fs::path err = temp_file("cli_stderr");
  const std::string cmd =
      std::string(CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int rc = std::system(cmd.c_str());
  CliResult res;
  res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return res;
}

Json parse_report(const std::string& text) { return Json::parse(text); }

}  // namespace

TEST_CASE("digest has known values and tracks content") {
  REQUIRE(fnv1a64_hex("") == "fnv1a64:cbf29ce484222325");
  REQUIRE(fnv1a64_hex("a") == "fnv1a64:af63dc4c8601ec8c");
  REQUIRE(fnv1a64_hex("ab") != fnv1a64_hex("ba"));
}

TEST_CASE("projection scenario parses and reproduces its characters") {
  Scenario sc = load_scenario(fixture("proj.json"));
  REQUIRE(sc.algebra.basis == std::vector<std::string>{"e"});
  REQUIRE(sc.module.p == 2.0);
  REQUIRE_FALSE(sc.path.has_value());
  REQUIRE(validate_fredholm(sc.module).pass(1e-12));

  CyclicCochain tau0 = chern_character(sc.module, 0);
  REQUIRE(std::abs(tau0.tensor[0] - Cplx(1.0)) < 1e-14);
  CyclicCochain tau2 = chern_character(sc.module, 2);
  REQUIRE(std::abs(tau2.tensor[0] - Cplx(0.0, 2.0 * std::numbers::pi)) < 1e-13);
}

TEST_CASE("two-simple scenario weights the supertrace by quantum dimension") {
  Scenario sc = load_scenario(fixture("two_simple.json"));
  REQUIRE(sc.category->simples == std::vector<std::string>{"s", "t"});
  REQUIRE(validate_fredholm(sc.module).pass(1e-12));
  CyclicCochain tau0 = chern_character(sc.module, 0);
  REQUIRE(std::abs(tau0.tensor[0] - Cplx(1.0)) < 1e-14);   // e1: only the d=1 simple sees it
  REQUIRE(std::abs(tau0.tensor[1] - Cplx(-1.0)) < 1e-14);  // e2: minus side on d=1, cancels on d=2
}

TEST_CASE("path sections parse into working operator paths") {
  Scenario moving = load_scenario(fixture("proj_path.json"));
  REQUIRE(moving.path.has_value());
  REQUIRE(moving.path->has_f_path);
  REQUIRE(validate_path(*moving.path, 16).pass(1e-9));

  Scenario conj = load_scenario(fixture("conjugation_path.json"));
  REQUIRE(conj.path.has_value());
  REQUIRE_FALSE(conj.path->has_f_path);
  OperatorPath reference = builders::conjugation_path();
  REQUIRE(conj.path->t_end == reference.t_end);
  for (double t : {0.0, 0.3, 0.5}) {
    FredholmModule a = eval_path(*conj.path, t);
    FredholmModule b = eval_path(reference, t);
    for (std::size_t i = 0; i < a.rho.size(); ++i)
      REQUIRE(sup_operator_norm(sub(a.rho[i], b.rho[i])) == 0.0);
  }
}

TEST_CASE("parse errors name the offending location") {
  Json good = Json::parse(read_file(fixture("proj.json")));

  Json j = good;
  j.erase("schema_version");
  REQUIRE_THROWS_WITH(parse_scenario(j), Catch::Matchers::ContainsSubstring("schema_version"));

  j = good;
  j["schema_version"] = 2;
  REQUIRE_THROWS_WITH(parse_scenario(j), Catch::Matchers::ContainsSubstring("unsupported version 2"));

  j = good;
  j["module"]["rho"]["e"]["triv"]["pp"][0][0] = 1.0;  // bare number, not [re, im]
  REQUIRE_THROWS_WITH(parse_scenario(j),
                      Catch::Matchers::ContainsSubstring("scenario.module.rho.e.triv.pp[0][0]"));

  j = good;
  j["module"]["rho"]["x"] = Json::object();
  REQUIRE_THROWS_WITH(parse_scenario(j), Catch::Matchers::ContainsSubstring("unknown basis label"));

  j = good;
  j["module"]["f"].erase("triv");
  REQUIRE_THROWS_WITH(parse_scenario(j), Catch::Matchers::ContainsSubstring("scenario.module.f.triv"));

  j = good;
  j["module"]["p"] = 0.5;
  REQUIRE_THROWS_WITH(parse_scenario(j), Catch::Matchers::ContainsSubstring("p >= 1"));

  Json path_doc = Json::parse(read_file(fixture("proj_path.json")));
  j = path_doc;
  j["path"]["t_end"] = -0.5;
  REQUIRE_THROWS_WITH(parse_scenario(j), Catch::Matchers::ContainsSubstring("t_end"));

  j = path_doc;
  Json overlong = Json::array();
  for (int i = 0; i < 10; ++i) overlong.push_back(Json::array({1.0, 0.0}));
  j["path"]["rho_t"]["e"]["triv"]["pp"] = Json::array({Json::array({overlong})});
  REQUIRE_THROWS_WITH(parse_scenario(j), Catch::Matchers::ContainsSubstring("exceeds the cap"));
}

TEST_CASE("cochain documents round-trip bit-exactly") {
  Scenario sc = load_scenario(fixture("two_simple.json"));
  CyclicCochain tau = chern_character(sc.module, 2);
  tau.unital_tensor.reset();  // documents carry the plain tensor only

  Json doc = cochain_to_json(tau);
  CyclicCochain back = cochain_from_json(doc);
  REQUIRE(back.degree == tau.degree);
  REQUIRE(back.algebra.basis == tau.algebra.basis);
  REQUIRE(back.tensor == tau.tensor);

  const fs::path file = temp_file("cochain_roundtrip");
  write_json_file(doc, file);
  CyclicCochain loaded = load_cochain(file.string());
  REQUIRE(loaded.tensor == tau.tensor);

  // serialized form is a fixed point of parse + dump
  const std::string bytes = slurp(file);
  REQUIRE(Json::parse(bytes).dump(2) + "\n" == bytes);
  fs::remove(file);

  Json bad = doc;
  bad["tensor"].erase(0);
  REQUIRE_THROWS_WITH(cochain_from_json(bad), Catch::Matchers::ContainsSubstring("cochain.tensor"));
}

TEST_CASE("algebra serialization round-trips") {
  FiniteAlgebra a = builders::two_point_algebra();
  Json j = detail::algebra_to_json(a);
  FiniteAlgebra back = detail::parse_algebra(j, "roundtrip");
  REQUIRE(back.basis == a.basis);
  REQUIRE(back.structure == a.structure);
  REQUIRE(back.unit.has_value());
  REQUIRE((*back.unit - *a.unit).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("parallel evaluation matches serial bit for bit") {
  Scenario sc = load_scenario(fixture("two_simple.json"));
  parallel_enabled() = false;
  CyclicCochain serial = chern_character(sc.module, 2);
  parallel_enabled() = true;
  CyclicCochain parallel = chern_character(sc.module, 2);
  parallel_enabled() = false;
  REQUIRE(serial.tensor == parallel.tensor);
  REQUIRE(*serial.unital_tensor == *parallel.unital_tensor);
}

TEST_CASE("cli validates scenarios") {
  CliResult res = run_cli("validate " + fixture("proj.json"));
  REQUIRE(res.code == 0);
  Json rep = parse_report(res.out);
  REQUIRE(rep["command"] == "validate");
  REQUIRE(rep["schema_version"] == kSchemaVersion);
  REQUIRE(rep["decisions"]["algebra"] == true);
  REQUIRE(rep["decisions"]["module"] == true);
  REQUIRE(rep["inputs"]["digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  REQUIRE(rep["residuals"]["f_square"].get<double>() == 0.0);

  REQUIRE(run_cli("validate " + fixture("two_simple.json")).code == 0);
  REQUIRE(run_cli("validate " + fixture("proj_path.json")).code == 0);
  REQUIRE(run_cli("validate " + fixture("conjugation_path.json")).code == 0);

  // the degenerate symmetry family fails the grid check but parses fine
  CliResult singular = run_cli("validate " + fixture("singular_path.json"));
  REQUIRE(singular.code == 1);
  REQUIRE(parse_report(singular.out)["decisions"]["path"] == false);
}

TEST_CASE("cli validate reports text when asked") {
  CliResult res = run_cli("validate --output text " + fixture("proj.json"));
  REQUIRE(res.code == 0);
  REQUIRE(res.out.find("command: validate") != std::string::npos);
  REQUIRE(res.out.find("overall: pass") != std::string::npos);
}

TEST_CASE("cli chern streams or writes the character document") {
  CliResult res = run_cli("chern --degree 0 " + fixture("proj.json"));
  REQUIRE(res.code == 0);
  Json doc = parse_report(res.out);
  REQUIRE(doc["kind"] == "cochain");
  REQUIRE(doc["degree"] == 0);
  REQUIRE(doc["tensor"][0][0].get<double>() == 1.0);

  const fs::path out = temp_file("chern_doc");
  CliResult written = run_cli("chern --degree 2 --out " + out.string() + " " + fixture("proj.json"));
  REQUIRE(written.code == 0);
  REQUIRE(parse_report(written.out)["command"] == "chern");  // report on stdout, doc in the file
  CyclicCochain tau = load_cochain(out.string());
  REQUIRE(std::abs(tau.tensor[0] - Cplx(0.0, 2.0 * std::numbers::pi)) < 1e-13);
  fs::remove(out);

  REQUIRE(run_cli("chern --degree 1 " + fixture("proj.json")).code == 2);
  REQUIRE(run_cli("chern --degree -2 " + fixture("proj.json")).code == 2);
}

TEST_CASE("cli cocycle and periodicity certify the projection module") {
  CliResult coc = run_cli("cocycle --degree 2 " + fixture("proj.json"));
  REQUIRE(coc.code == 0);
  REQUIRE(parse_report(coc.out)["decisions"]["cyclic_cocycle"] == true);

  const fs::path out = temp_file("witness_doc");
  CliResult per = run_cli("periodicity --degree 0 --out " + out.string() + " " + fixture("proj.json"));
  REQUIRE(per.code == 0);
  Json rep = parse_report(per.out);
  REQUIRE(rep["decisions"]["witness"] == true);
  REQUIRE(rep["decisions"]["cohomologous"] == true);
  CyclicCochain phi = load_cochain(out.string());
  REQUIRE(phi.degree == 1);
  fs::remove(out);

  REQUIRE(run_cli("periodicity --degree 2 " + fixture("two_simple.json")).code == 0);
}

TEST_CASE("cli homotopy certifies paths and reports singularities") {
  CliResult flat = run_cli("homotopy --degree 0 " + fixture("proj_path.json"));
  REQUIRE(flat.code == 0);
  Json rep = parse_report(flat.out);
  REQUIRE(rep["decisions"]["path"] == true);
  REQUIRE(rep["decisions"]["transgression"] == true);
  REQUIRE(rep["decisions"]["cohomologous"] == true);

  const fs::path out = temp_file("transgression_doc");
  CliResult conj = run_cli("homotopy --degree 2 --steps 64 --tolerance 1e-6 --out " + out.string() +
                           " " + fixture("conjugation_path.json"));
  REQUIRE(conj.code == 0);
  Json crep = parse_report(conj.out);
  REQUIRE(crep["decisions"]["transgression"] == true);
  REQUIRE(crep["residuals"]["transgression"].get<double>() < 1e-6);
  CyclicCochain phi = load_cochain(out.string());
  REQUIRE(phi.degree == 3);
  fs::remove(out);

  // quadrature error exceeds a 1e-9 tolerance: check failure, not usage error
  CliResult strict = run_cli("homotopy --degree 2 --steps 64 " + fixture("conjugation_path.json"));
  REQUIRE(strict.code == 1);
  REQUIRE(parse_report(strict.out)["decisions"]["transgression"] == false);

  CliResult singular = run_cli("homotopy --degree 0 " + fixture("singular_path.json"));
  REQUIRE(singular.code == 3);
  REQUIRE(singular.err.find("singular") != std::string::npos);

  REQUIRE(run_cli("homotopy --degree 0 " + fixture("proj.json")).code == 2);  // no path section
  REQUIRE(run_cli("homotopy --degree 0 --steps 1 " + fixture("proj_path.json")).code == 2);
}

TEST_CASE("cli cohomologous compares stored cochains") {
  const fs::path lhs = temp_file("lhs_doc");
  REQUIRE(run_cli("chern --degree 2 --out " + lhs.string() + " " + fixture("proj.json")).code == 0);

  CliResult same = run_cli("cohomologous --lhs " + lhs.string() + " --rhs " + lhs.string() +
                           " --degree 2");
  REQUIRE(same.code == 0);
  REQUIRE(parse_report(same.out)["decisions"]["cohomologous"] == true);

  // doubling the class changes it: valid cocycle, different class
  Json doubled = Json::parse(slurp(lhs));
  for (auto& entry : doubled["tensor"])
    for (auto& part : entry) part = part.get<double>() * 2.0;
  const fs::path rhs = temp_file("rhs_doc");
  write_json_file(doubled, rhs);
  CliResult diff = run_cli("cohomologous --lhs " + lhs.string() + " --rhs " + rhs.string() +
                           " --degree 2");
  REQUIRE(diff.code == 1);
  REQUIRE(parse_report(diff.out)["decisions"]["cohomologous"] == false);

  REQUIRE(run_cli("cohomologous --lhs " + lhs.string() + " --rhs " + rhs.string() +
                  " --degree 0").code == 2);
  fs::remove(lhs);
  fs::remove(rhs);
}

TEST_CASE("cli rejects bad usage") {
  REQUIRE(run_cli("").code == 2);
  REQUIRE(run_cli("frobnicate x.json").code == 2);
  REQUIRE(run_cli("validate /nonexistent/file.json").code == 2);
  REQUIRE(run_cli("validate --output yaml " + fixture("proj.json")).code == 2);

  const fs::path garbled = temp_file("garbled");
  std::ofstream(garbled) << "{ not json";
  REQUIRE(run_cli("validate " + garbled.string()).code == 2);
  fs::remove(garbled);
}

TEST_CASE("cli parallel flag leaves results unchanged") {
  CliResult serial = run_cli("chern --degree 2 " + fixture("two_simple.json"));
  CliResult parallel = run_cli("chern --degree 2 --parallel " + fixture("two_simple.json"));
  REQUIRE(serial.code == 0);
  REQUIRE(parallel.code == 0);
  REQUIRE(serial.out == parallel.out);
}

TEST_CASE("cli reports are deterministic apart from timing") {
  CliResult first = run_cli("validate " + fixture("proj.json"));
  CliResult second = run_cli("validate " + fixture("proj.json"));
  REQUIRE(first.code == 0);
  REQUIRE(second.code == 0);
  Json a = Json::parse(first.out);
  Json b = Json::parse(second.out);
  a.erase("elapsed_ms");
  b.erase("elapsed_ms");
  REQUIRE(a == b);
}
