#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "emtlab/runner.hpp"

using namespace emtlab;
using scene::json;

namespace {

std::string write_scene(const std::string& name, const json& doc) {
  std::string path = "cli_" + name + ".json";
  std::ofstream out(path);
  out << doc.dump(2);
  return path;
}

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("check on an off-vacuum mexican-hat scene exits 2 with an SEC witness") {
  json doc{{"builtin", "higgs-vacuum-mexhat"}};
  doc["fields"] = {{"params", {{"v", 1.2}}}};
  doc["solution_flag"] = false;
  auto path = write_scene("mexhat_off", doc);
  auto r = run_cli({"check", "--scene", path});
  CHECK(r.code == 2);
  CHECK(r.out.find("SEC") != std::string::npos);
  CHECK(r.out.find("violated") != std::string::npos);
  CHECK(r.out.find("witness") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("verify on the dirac plane-wave scene exits 0 with small residuals") {
  json doc{{"builtin", "dirac-planewave-m4"}};
  auto path = write_scene("dirac", doc);
  auto r = run_cli({"verify", "--scene", path, "--out", "dirac_verify.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("divergence_total_on_shell") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  std::string rep = slurp("dirac_verify.json");
  CHECK(rep.find("\"pass\": true") != std::string::npos);
  CHECK(rep.find("\"pass\": false") == std::string::npos);
}

TEST_CASE("verify on the constant-em scene covers the variational row") {
  json doc{{"builtin", "minkowski-constant-em"}};
  auto path = write_scene("emverify", doc);
  auto r = run_cli({"verify", "--scene", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("variational_rel_error") != std::string::npos);
  CHECK(r.out.find("divergence_yang_mills_identity") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("verify on the dirac scene covers the weitzenboeck row") {
  json doc{{"builtin", "dirac-planewave-m4"}};
  auto path = write_scene("wverify", doc);
  auto r = run_cli({"verify", "--scene", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("weitzenboeck") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("classify on a pure yang-mills scene exits 0 with an all-holds aggregate") {
  json doc{{"builtin", "minkowski-constant-em"}};
  auto path = write_scene("ym", doc);
  auto r = run_cli({"classify", "--scene", path, "--out", "ym_report.csv", "--format", "csv"});
  CHECK(r.code == 0);
  std::string csv = slurp("ym_report.csv");
  CHECK(csv.find("scope,point,coords,sector,condition,status,margin,witness") == 0);
  for (const char* cond : {"NEC", "WEC", "SEC", "DEC"}) {
    std::string row = std::string(",,yang_mills,") + cond + ",holds";
    CHECK(csv.find(row) != std::string::npos);
  }
  CHECK(csv.find("violated") == std::string::npos);
}

TEST_CASE("classify reports are byte-identical across runs and thread counts") {
  json doc{{"builtin", "higgs-vacuum-mexhat"}};
  doc["fields"] = {{"params", {{"v", 1.15}}}};
  doc["solution_flag"] = false;
  auto path = write_scene("det", doc);
  auto r1 = run_cli({"classify", "--scene", path, "--out", "det1.json", "--threads", "1"});
  auto r2 = run_cli({"classify", "--scene", path, "--out", "det2.json", "--threads", "2"});
  auto r3 = run_cli({"classify", "--scene", path, "--out", "det3.json", "--threads", "2"});
  CHECK(r1.code == 2);  // SEC violated off vacuum
  CHECK(r2.code == 2);
  CHECK(r3.code == 2);
  std::string a = slurp("det1.json"), b = slurp("det2.json"), c = slurp("det3.json");
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("exit code 2 exactly when the report contains a violated verdict") {
  json good{{"builtin", "minkowski-constant-em"}};
  auto gp = write_scene("good", good);
  CHECK(run_cli({"check", "--scene", gp}).code == 0);

  json bad{{"builtin", "dirac-planewave-m4"}};
  auto bp = write_scene("bad", bad);
  CHECK(run_cli({"check", "--scene", bp}).code == 2);  // WEC violation witness
}

TEST_CASE("scan sweeps a named parameter and reports margins per step") {
  json doc{{"builtin", "higgs-vacuum-mexhat"}};
  doc["solution_flag"] = false;
  auto path = write_scene("scan", doc);
  auto r = run_cli({"scan", "--scene", path, "--param", "v", "--from", "1.0", "--to", "1.4",
                    "--steps", "3", "--out", "scan.csv", "--format", "csv"});
  CHECK(r.code == 2);  // off-vacuum steps violate the SEC
  std::string csv = slurp("scan.csv");
  CHECK(csv.find("param,value,sector,condition,status,margin") == 0);
  CHECK(csv.find("v,1.2") != std::string::npos);
  CHECK(csv.find("v,1.3999") != std::string::npos);
  CHECK(csv.find("SEC,violated") != std::string::npos);

  auto r2 = run_cli({"scan", "--scene", path, "--param", "nope", "--from", "0", "--to", "1",
                     "--steps", "2"});
  CHECK(r2.code == 1);
  CHECK(r2.err.find("nope") != std::string::npos);
}

TEST_CASE("bad invocations exit 1 with a diagnostic on stderr") {
  auto missing = run_cli({"check", "--scene", "does_not_exist.json"});
  CHECK(missing.code == 1);
  CHECK(!missing.err.empty());

  auto unknown_flag = run_cli({"check", "--scene", "x.json", "--frobnicate"});
  CHECK(unknown_flag.code == 1);

  json broken;
  broken["dimension"] = 4;
  auto bp = write_scene("broken", broken);
  auto r = run_cli({"check", "--scene", bp});
  CHECK(r.code == 1);
  CHECK(r.err.find("missing top-level key") != std::string::npos);

  std::ofstream("cli_notjson.json") << "this is not json";
  auto nj = run_cli({"check", "--scene", "cli_notjson.json"});
  CHECK(nj.code == 1);
}

TEST_CASE("emt command dumps sector tensors per sample point") {
  json doc{{"builtin", "minkowski-constant-em"}};
  auto path = write_scene("emtcmd", doc);
  auto r = run_cli({"emt", "--scene", path, "--out", "emt_dump.json", "--samples", "2"});
  CHECK(r.code == 0);
  std::string rep = slurp("emt_dump.json");
  CHECK(rep.find("\"tensors\"") != std::string::npos);
  CHECK(rep.find("yang_mills") != std::string::npos);
  CHECK(rep.find("trace_yang_mills") != std::string::npos);
}

TEST_CASE("a three-dimensional scene runs through the full pipeline") {
  json doc;
  doc["dimension"] = 3;
  doc["metric"] = {{"family", "minkowski"}};
  doc["algebra"] = "u1";
  doc["representations"] = {{"rho", {{"preset", "trivial"}, {"dim", 1}}}};
  json higgs = json::array();
  higgs.push_back(json::array({"1.3", "0"}));  // constant field, off-vacuum potential
  doc["fields"] = {{"higgs", higgs}};
  doc["potential"] = {{"kind", "mexican_hat"}, {"lambda", 2.0}, {"mu", 2.0}};
  doc["yukawa"] = {{"kind", "zero"}};
  doc["region"] = {{"center", {0, 0, 0}}, {"half_widths", {1, 1, 1}}, {"samples_per_axis", 2}};
  doc["checks"] = {"traces", "energy_conditions"};
  doc["tolerances"] = json::object();
  auto path = write_scene("m3", doc);
  auto r = run_cli({"classify", "--scene", path});
  CHECK(r.code == 2);  // U > 0 violates the SEC at m = 3 too
  CHECK(r.out.find("SEC") != std::string::npos);
  CHECK(run_cli({"verify", "--scene", path}).code == 0);
}

TEST_CASE("seed and overrides land in the report provenance") {
  json doc{{"builtin", "minkowski-constant-em"}};
  auto path = write_scene("prov", doc);
  auto r = run_cli({"check", "--scene", path, "--seed", "0xABC", "--out", "prov.json"});
  CHECK(r.code == 0);
  std::string rep = slurp("prov.json");
  CHECK(rep.find("\"seed\": \"0xABC\"") != std::string::npos);
  CHECK(rep.find("\"scene_hash\"") != std::string::npos);
}
