#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hopf/ansatz1d.hpp"
#include "hopf/field.hpp"
#include "hopf/io.hpp"

using namespace hopf;
using json = nlohmann::json;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("io_test_") + name;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  std::string cmd = std::string(HOPF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  if (output) *output = out;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal JSON-schema validator covering the subset the report schema uses:
// type / enum / const / required / additionalProperties / items / bounds.
bool type_matches(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "null") return v.is_null();
  return false;
}

void validate_schema(const json& schema, const json& value) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) ok = type_matches(value, t.get<std::string>());
    else
      for (const auto& alt : t)
        ok = ok || type_matches(value, alt.get<std::string>());
    REQUIRE_MESSAGE(ok, "type mismatch: " << value.dump());
  }
  if (schema.contains("enum") && !value.is_null()) {
    bool ok = false;
    for (const auto& e : schema["enum"]) ok = ok || e == value;
    REQUIRE_MESSAGE(ok, "enum mismatch: " << value.dump());
  }
  if (schema.contains("const")) REQUIRE(schema["const"] == value);
  if (value.is_number()) {
    if (schema.contains("minimum"))
      REQUIRE(value.get<double>() >= schema["minimum"].get<double>());
    if (schema.contains("exclusiveMinimum"))
      REQUIRE(value.get<double>() > schema["exclusiveMinimum"].get<double>());
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& k : schema["required"])
        REQUIRE_MESSAGE(value.contains(k.get<std::string>()),
                        "missing key " << k);
    if (schema.contains("properties")) {
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (schema["properties"].contains(it.key()))
          validate_schema(schema["properties"][it.key()], it.value());
        else if (schema.value("additionalProperties", true) == false)
          FAIL("unexpected key " << it.key());
      }
    }
  }
  if (value.is_array() && schema.contains("items"))
    for (const auto& item : value) validate_schema(schema["items"], item);
}

}  // namespace

TEST_CASE("field file round trip is bit identical") {
  ManifoldSpec spec{Manifold::S2xS1, {8, 8, 8}, 1.51, {}};
  Field f = init_vav_s2s1(spec, vav_minimize(64, 1.51));
  std::string path = tmp_path("roundtrip.hpf");
  write_field(path, f, 2);
  LoadedField lf = read_field(path);
  CHECK(lf.field.data == f.data);
  CHECK(lf.field.spec == spec);
  REQUIRE(lf.charge.has_value());
  CHECK(*lf.charge == 2);
  CHECK_FALSE(lf.renormalized);
  std::remove(path.c_str());
}

TEST_CASE("field file rejects bad magic, truncation and bad norms") {
  ManifoldSpec spec{Manifold::T2, {8, 8}, {}, {}};
  Field f = init_baby_t2(spec);
  std::string path = tmp_path("bad.hpf");

  write_field(path, f);
  std::string good = slurp(path);
  {
    std::ofstream out(path, std::ios::binary);
    out << "XXXX" << good.substr(4);
  }
  CHECK_THROWS_AS(read_field(path), IoError);
  {
    std::ofstream out(path, std::ios::binary);
    out << good.substr(0, good.size() - 16);
  }
  CHECK_THROWS_AS(read_field(path), IoError);

  Field broken = f;
  broken.data[0] *= 1.5;  // norm off by far more than 1e-6
  write_field(path, broken);
  CHECK_THROWS_AS(read_field(path), IoError);

  Field slight = f;
  for (auto& x : slight.data) x *= 1.0 + 3e-8;  // within warn band
  write_field(path, slight);
  LoadedField lf = read_field(path);
  CHECK(lf.renormalized);
  std::remove(path.c_str());
}

TEST_CASE("run report JSON validates against the shipped schema") {
  json schema = json::parse(slurp(HOPF_SCHEMA_PATH));

  RunReport rep;
  rep.manifold = "t3";
  rep.dims = {16, 16, 16};
  rep.Q = 2;
  rep.Q_numeric = 2.01;
  rep.residual = 0.01;
  rep.charge_method = "spectral";
  rep.E4 = 2.08;
  rep.E2 = 1.9;
  rep.E_over_bound = 1.04;
  rep.E_x = 0.9;
  rep.E_y = 0.59;
  rep.E_z = 0.59;
  rep.kappa = 0.00316;
  rep.converged = true;
  rep.iterations = 100;
  rep.wall_seconds = 1.5;
  validate_schema(schema, json::parse(rep.to_json()));

  RunReport twod;  // nullable fields exercised
  twod.manifold = "t2";
  twod.dims = {48, 48};
  twod.charge_method = "none";
  twod.E4 = 1.2;
  twod.E2 = 3.4;
  twod.kappa = 0.125;
  twod.discontinuous = true;
  validate_schema(schema, json::parse(twod.to_json()));
}

TEST_CASE("CSV exports") {
  std::vector<TraceRow> tr = {{0, 1, 2.5, 1.25, 1e-3}};
  CHECK(trace_csv(tr) == "iteration,E4,E2,grad_norm\n1,2.5,1.25,0.001\n");
  ProfileSolution p;
  p.grid = {0.0, 0.5};
  p.f = {0.0, 1.0};
  CHECK(profile_csv(p) == "x,f\n0,0\n0.5,1\n");
  PreimageCurve c;
  c.components = {{{0, 0, 0}, {1, 0, 0}}};
  CHECK(curves_csv(c) == "component,vertex,x,y,z\n0,0,0,0,0\n0,1,1,0,0\n");
}

TEST_CASE("cli: version and usage errors") {
  std::string out;
  CHECK(run_cli("--version", &out) == 0);
  CHECK(out.find("HPF1") != std::string::npos);
  CHECK(run_cli("init --manifold s2s1 --size 8 --ansatz vav -o x.hpf") == 2);
  CHECK(run_cli("init --manifold t2 --size 8 --ansatz amn -o x.hpf") == 2);
  CHECK(run_cli("charge -i does_not_exist.hpf") == 2);
}

TEST_CASE("cli: init/charge/energy pipeline on the exact T2 solution") {
  std::string f = tmp_path("cli_t2.hpf");
  REQUIRE(run_cli("init --manifold t2 --size 48 --ansatz baby-t2 -o " + f) ==
          0);
  std::string out;
  REQUIRE(run_cli("charge -i " + f, &out) == 0);
  json j = json::parse(out);
  CHECK(j["Q"] == 2);
  CHECK(j["method"] == "degree");
  REQUIRE(run_cli("energy -i " + f, &out) == 0);
  j = json::parse(out);
  CHECK(std::abs(j["E4"].get<double>() - 4.0) < 0.05);
  CHECK(std::abs(j["E_over_bound"].get<double>() - 1.0) < 0.02);
  std::remove(f.c_str());
}

TEST_CASE("cli: relax pipeline writes a schema-valid report and trace") {
  std::string f = tmp_path("cli_s3.hpf");
  std::string fr = tmp_path("cli_s3_rel.hpf");
  std::string rep = tmp_path("cli_rep.json");
  std::string trc = tmp_path("cli_trace.csv");
  REQUIRE(run_cli("init --manifold s3 --size 12 --ansatz amn --m 1 --n 1 "
                  "--perturb 0.05 --seed 9 -o " +
                  f) == 0);
  std::string out;
  int code = run_cli("relax -i " + f + " -o " + fr + " --report " + rep +
                         " --trace " + trc +
                         " --tol 1e-5 --max-iters 400 --stages 4",
                     &out);
  CHECK(code == 0);
  json schema = json::parse(slurp(HOPF_SCHEMA_PATH));
  json report = json::parse(slurp(rep));
  validate_schema(schema, report);
  CHECK(report["manifold"] == "s3");
  CHECK(report["discontinuous"] == false);
  CHECK(std::abs(report["E4"].get<double>() - 1.0) < 0.05);
  std::string trace = slurp(trc);
  CHECK(trace.rfind("iteration,E4,E2,grad_norm\n", 0) == 0);
  LoadedField relaxed = read_field(fr);
  CHECK(relaxed.charge.has_value());
  for (auto p : {f, fr, rep, trc}) std::remove(p.c_str());
}

TEST_CASE("cli: degree-1 spreading run exits with code 3") {
  std::string f = tmp_path("cli_q1.hpf");
  REQUIRE(run_cli("init --manifold t2 --size 48 --ansatz baby-t2 --Q 1 -o " +
                  f) == 0);
  std::string rep = tmp_path("cli_q1_rep.json");
  int code = run_cli("relax -i " + f + " --report " + rep +
                     " --tol 1e-9 --max-iters 3000");
  CHECK(code == 3);
  json report = json::parse(slurp(rep));
  CHECK(report["discontinuous"] == true);
  std::remove(f.c_str());
  std::remove(rep.c_str());
}

TEST_CASE("cli: profile subcommands print the expected energies") {
  std::string out;
  REQUIRE(run_cli("profile amn --m 3 --n-winding 2 --n-r 512", &out) == 0);
  json j = json::parse(out);
  CHECK(std::abs(j["energy"].get<double>() - 6.1657587) < 1e-3);
  CHECK(std::abs(j["formula_energy"].get<double>() - 6.1657587) < 1e-6);

  REQUIRE(run_cli("profile vav --L auto --n 128", &out) == 0);
  j = json::parse(out);
  CHECK(std::abs(j["L"].get<double>() - 1.509) < 0.05);
  CHECK(std::abs(j["E_over_Q"].get<double>() - 1.0670) < 0.005);
}

TEST_CASE("cli: preimage export on A22") {
  std::string f = tmp_path("cli_a22.hpf");
  std::string csv = tmp_path("cli_a22.csv");
  REQUIRE(run_cli("init --manifold s3 --size 24 --ansatz amn --m 2 --n 2 -o " +
                  f) == 0);
  std::string out;
  REQUIRE(run_cli("preimage -i " + f + " --value 1,0,0 --project stereo -o " +
                      csv,
                  &out) == 0);
  json j = json::parse(out);
  CHECK(j["components"] == 2);
  std::string data = slurp(csv);
  CHECK(data.rfind("component,vertex,x,y,z\n", 0) == 0);
  CHECK(data.find("\n1,") != std::string::npos);  // second component present
  std::remove(f.c_str());
  std::remove(csv.c_str());
}

TEST_CASE("cli: bound") {
  std::string out;
  REQUIRE(run_cli("bound --manifold t2 --Q 2", &out) == 0);
  CHECK(json::parse(out)["bound"] == 4.0);
  REQUIRE(run_cli("bound --manifold s3 --Q 6", &out) == 0);
  CHECK(json::parse(out)["bound"] == 6.0);
}
