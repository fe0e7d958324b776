// SPDX-License-Identifier: Apache-2.0
//
// End-to-end runs of the command-line tool: exit codes, document schemas,
// determinism and the file output path.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "otforge/io.hpp"

using namespace otforge;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string data(const std::string& name) {
  return std::string(OTFORGE_DATA_DIR) + "/" + name;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string err_path = "/tmp/otforge_cli_stderr.txt";
  std::string cmd = env.empty() ? std::string() : env + " ";
  cmd += std::string(OTFORGE_CLI_PATH) + " " + args + " 2>" + err_path;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp_file(err_path);
  return r;
}

void expect_schema(const std::string& schema_name, const std::string& text) {
  Json schema =
      load_json_file(std::string(OTFORGE_SCHEMA_DIR) + "/" + schema_name);
  Json doc = parse_json_text(text);
  auto violation = json_schema_validate(schema, doc);
  INFO(schema_name << ": " << (violation ? *violation : ""));
  CHECK_FALSE(violation.has_value());
}

}  // namespace

TEST_CASE("classify certifies the worked examples", "[cli]") {
  RunResult r = run_cli("classify " + data("matrix6.json") + " " +
                        data("fact6.json"));
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  expect_schema("type_certificate.schema.json", r.out);
  Json doc = parse_json_text(r.out);
  CHECK(doc["j"] == true);
  CHECK(doc["j1"] == true);

  RunResult r10 = run_cli("classify " + data("matrix10.json") + " " +
                          data("fact10.json"));
  CHECK(r10.code == 0);
  Json doc10 = parse_json_text(r10.out);
  CHECK(doc10["j"] == true);
  CHECK(doc10["j1"] == false);
}

TEST_CASE("classify failure exit codes", "[cli]") {
  SECTION("structural rejection") {
    RunResult r = run_cli("classify " + data("matrix2.json") + " " +
                          data("fact2.json"));
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
  }
  SECTION("axiom failure still emits a certificate") {
    RunResult r = run_cli("classify " + data("matrix2.json") + " " +
                          data("fact2soft.json"));
    CHECK(r.code == 2);
    expect_schema("type_certificate.schema.json", r.out);
    Json doc = parse_json_text(r.out);
    CHECK(doc["j"] == false);
    CHECK(doc["definite_failure"] == true);
  }
  SECTION("missing irreducibility witness") {
    RunResult r = run_cli("classify " + data("matrix7.json") + " " +
                          data("fact7.json"));
    CHECK(r.code == 3);
    expect_schema("type_certificate.schema.json", r.out);
    Json doc = parse_json_text(r.out);
    CHECK(doc["witness_unknown"] == true);
    CHECK(doc["definite_failure"] == false);
  }
  SECTION("malformed input reports line and column") {
    RunResult r = run_cli("classify " + data("bad.json") + " " +
                          data("fact6.json"));
    CHECK(r.code == 1);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(r.err.find("column") != std::string::npos);
  }
}

TEST_CASE("dirichlet build and downstream commands", "[cli]") {
  const std::string fam_path = "/tmp/otforge_cli_family.json";
  const std::string man_path = "/tmp/otforge_cli_manifold.json";

  RunResult rd = run_cli("dirichlet " + data("matrix6.json") + " " +
                         data("fact6.json") + " --output " + fam_path);
  REQUIRE(rd.code == 0);
  CHECK(rd.out.empty());
  expect_schema("dirichlet_family.schema.json", slurp_file(fam_path));
  Json fam = parse_json_text(slurp_file(fam_path));
  CHECK(fam["accepted"] == true);
  CHECK(fam["delta3"] == "certified");

  RunResult rb = run_cli("build " + data("matrix6.json") + " " +
                         data("fact6.json") + " " + fam_path + " --output " +
                         man_path);
  REQUIRE(rb.code == 0);
  expect_schema("manifold.schema.json", slurp_file(man_path));
  Json man = parse_json_text(slurp_file(man_path));
  CHECK(man["cross_section"] == true);
  CHECK(man["lattice_report"]["passed"] == true);

  RunResult ri = run_cli("invariants " + man_path);
  REQUIRE(ri.code == 0);
  expect_schema("obstruction_report.schema.json", ri.out);
  Json rep = parse_json_text(ri.out);
  CHECK(rep["b1"] == 2);
  CHECK(rep["verdict_lck"] == "inconclusive");
}

TEST_CASE("dirichlet exhaustion and flag conflicts", "[cli]") {
  RunResult r = run_cli("dirichlet " + data("matrix4.json") + " " +
                        data("fact4.json") + " --coeff-bound 2");
  CHECK(r.code == 4);
  CHECK(r.err.find("coeff-bound") != std::string::npos);

  RunResult conflict =
      run_cli("dirichlet " + data("matrix6.json") + " " + data("fact6.json") +
              " --primary --custom " + data("fact6.json"));
  CHECK(conflict.code != 0);
}

TEST_CASE("ot-compare certifies the bridge example", "[cli]") {
  RunResult r =
      run_cli("ot-compare " + data("p4.json") + " " + data("units4.json"));
  CHECK(r.code == 0);
  expect_schema("identity_certificate.schema.json", r.out);
  Json doc = parse_json_text(r.out);
  CHECK(doc["matched"] == true);

  // a shifted polynomial cannot match the recorded units
  RunResult bad =
      run_cli("ot-compare " + data("p4.json") + " " + data("fact6.json"));
  CHECK(bad.code != 0);
}

TEST_CASE("output bytes are deterministic", "[cli]") {
  const std::string args = "dirichlet " + data("matrix6.json") + " " +
                           data("fact6.json");
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);

  RunResult t1 = run_cli(args, "OTFORGE_THREADS=1");
  RunResult t4 = run_cli(args, "OTFORGE_THREADS=4");
  REQUIRE(t1.code == 0);
  REQUIRE(t4.code == 0);
  CHECK(t1.out == a.out);
  CHECK(t4.out == a.out);

  // classify output is byte-stable as well
  RunResult c1 = run_cli("classify " + data("matrix10.json") + " " +
                         data("fact10.json"));
  RunResult c2 = run_cli("classify " + data("matrix10.json") + " " +
                         data("fact10.json"),
                         "OTFORGE_THREADS=3");
  CHECK(c1.out == c2.out);
}
