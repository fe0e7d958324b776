// SPDX-License-Identifier: Apache-2.0
//
// Serialization layer: parse-error reporting, strict round trips, document
// envelopes and validation of every emitted document against the shipped
// schemas.
#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "otforge/io.hpp"

using namespace otforge;

namespace {

Json load_schema(const std::string& name) {
  return load_json_file(std::string(OTFORGE_SCHEMA_DIR) + "/" + name);
}

void expect_valid(const std::string& schema_name, const Json& doc) {
  auto violation = json_schema_validate(load_schema(schema_name), doc);
  INFO(schema_name << ": " << (violation ? *violation : ""));
  CHECK_FALSE(violation.has_value());
}

}  // namespace

TEST_CASE("parse errors carry one-based line and column", "[io]") {
  try {
    parse_json_text("{\"a\": [1,\n 2,]}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 4);
    CHECK(std::string(e.what()).find("line 2, column 4") != std::string::npos);
  }
}

TEST_CASE("shape errors name the offending path", "[io]") {
  try {
    poly_from_json(parse_json_text("[\"1\", 3]"), "$");
    FAIL("expected a shape error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("$[1]") != std::string::npos);
  }
  CHECK_THROWS_AS(rat_from_string("1/0", "$"), ParseError);
  CHECK_THROWS_AS(int_from_json(parse_json_text("\"12x\""), "$"), ParseError);
}

TEST_CASE("polynomial and rational round trips", "[io]") {
  IntPoly b1({1, 3, 3, 3, 1});
  CHECK(poly_from_json(poly_to_json(b1), "$") == b1);
  CHECK(poly_to_json(IntPoly::zero()).dump() == "[\"0\"]");
  CHECK(poly_from_json(parse_json_text("[\"0\"]"), "$").is_zero());
  CHECK(rat_from_string("3/6", "$") == Rat(1, 2));
  CHECK(rat_from_string("-5", "$") == Rat(-5));
  CHECK(rat_from_decimal("1e-8", "$") == Rat(1, 100000000));
  CHECK(rat_from_decimal("0.25", "$") == Rat(1, 4));
  CHECK(rat_from_decimal("-1.5e1", "$") == Rat(-15));
}

TEST_CASE("matrix and factorization round trips", "[io]") {
  IntPoly a2({1, 0, 1});
  IntPoly b1({1, 3, 3, 3, 1});
  ZMat m = companion(a2 * b1);
  CHECK(zmat_from_json(zmat_to_json(m), "$") == m);

  FactoredCharPoly f{a2, {b1}};
  FactoredCharPoly f2 = factorization_from_json(factorization_to_json(f), "$");
  CHECK(f2.b0 == f.b0);
  CHECK(f2.factors == f.factors);

  auto list1 = poly_list_from_json(parse_json_text("[[\"0\",\"1\"]]"), "$");
  REQUIRE(list1.size() == 1);
  CHECK(list1[0] == IntPoly::var());
  auto list2 =
      poly_list_from_json(parse_json_text("{\"polys\": [[\"0\",\"1\"]]}"), "$");
  CHECK(list2 == list1);
}

TEST_CASE("float and interval formatting is canonical", "[io]") {
  CHECK(mpf_to_string(Mpf(0, 128)) == "0");
  CHECK(mpf_to_string(Mpf(1.5, 128)) == "0.15e1");
  CHECK(mpf_to_string(Mpf(-0.25, 128)) == "-0.25e0");
  Interval iv(Rat(-1, 3), Rat(1, 2));
  CHECK(interval_to_json(iv).dump() == "{\"lo\":\"-1/3\",\"hi\":\"1/2\"}");
}

TEST_CASE("documents carry the envelope and validate", "[io]") {
  IntPoly a2({1, 0, 1});
  IntPoly b1({1, 3, 3, 3, 1});
  ZMat m = companion(a2 * b1);
  FactoredCharPoly f{a2, {b1}};

  expect_valid("polynomial.schema.json", poly_to_json(b1));
  expect_valid("matrix.schema.json", zmat_to_json(m));
  expect_valid("factorization.schema.json", factorization_to_json(f));
  expect_valid("polynomial_list.schema.json",
               parse_json_text("[[\"0\",\"1\"]]"));

  TypeCertificate tc = check_type_j(m, f);
  REQUIRE(tc.j);
  Json jt = type_certificate_to_json(tc);
  CHECK(jt["schema_version"] == schema_version);
  CHECK(jt["kind"] == "type_certificate");
  CHECK(jt["s"] == 2);
  CHECK(jt["factors"][0]["witness"]["method"] == "filaseta-gross");
  CHECK(jt["coprimality"].size() == 1);
  expect_valid("type_certificate.schema.json", jt);
  // serialization is a pure function of the certificate
  CHECK(dump_json(jt) == dump_json(type_certificate_to_json(tc)));

  DirichletFamily cert = build_dirichlet_family(m, f, {});
  REQUIRE(cert.accepted);
  Json jf = dirichlet_family_to_json(cert);
  CHECK(jf["kind"] == "dirichlet_family");
  CHECK(jf["delta3"] == "certified");
  CHECK(jf["dets"][0] == "1");
  CHECK(poly_list_from_json(jf, "$") == cert.polys);
  expect_valid("dirichlet_family.schema.json", jf);

  ManifoldData md = build_manifold(m, f, cert.polys);
  Json jm = manifold_to_json(md, m, f);
  CHECK(jm["kind"] == "manifold");
  CHECK(jm["s"] == 2);
  CHECK(jm["complex_dimension"] == 4);
  CHECK(jm["lattice_report"]["passed"] == true);
  expect_valid("manifold.schema.json", jm);

  // the manifold document echoes its own input
  ManifoldInput in = manifold_input_from_json(jm);
  CHECK(in.matrix == m);
  CHECK(in.factorization.b0 == f.b0);
  CHECK(in.factorization.factors == f.factors);
  CHECK(in.family == cert.polys);

  ObstructionReport rep = obstruction_report(m, f, cert.polys);
  Json jr = obstruction_report_to_json(rep);
  CHECK(jr["kind"] == "obstruction_report");
  CHECK(jr["special"].is_object());
  CHECK(jr["b1"] == 2);
  CHECK(jr["verdict_lck"] == "inconclusive");
  expect_valid("obstruction_report.schema.json", jr);

  IdentityCertificate ic;
  ic.matched = true;
  ic.checks = {"one", "two"};
  Json ji = identity_certificate_to_json(ic);
  CHECK(ji["kind"] == "identity_certificate");
  CHECK(ji["checks"].size() == 2);
  expect_valid("identity_certificate.schema.json", ji);
}

TEST_CASE("schema checker reports first violations", "[io]") {
  Json schema = parse_json_text(R"({
    "type": "object",
    "required": ["kind", "polys"],
    "properties": {
      "kind": {"enum": ["dirichlet_family"]},
      "polys": {
        "type": "array",
        "minItems": 1,
        "items": {"type": "array",
                  "items": {"type": "string", "pattern": "^-?[0-9]+$"}}
      },
      "precision_bits": {"type": "integer"}
    }
  })");
  Json good = parse_json_text(
      R"({"kind": "dirichlet_family", "polys": [["1","-2"]], "precision_bits": 64})");
  CHECK_FALSE(json_schema_validate(schema, good).has_value());

  Json bad1 = good;
  bad1.erase("polys");
  auto r1 = json_schema_validate(schema, bad1);
  REQUIRE(r1.has_value());
  CHECK(r1->find("missing required") != std::string::npos);

  Json bad2 = good;
  bad2["polys"][0][0] = "x1";
  auto r2 = json_schema_validate(schema, bad2);
  REQUIRE(r2.has_value());
  CHECK(r2->find("$.polys[0][0]") != std::string::npos);

  Json bad3 = good;
  bad3["kind"] = "manifold";
  CHECK(json_schema_validate(schema, bad3).has_value());

  Json bad4 = good;
  bad4["precision_bits"] = "64";
  auto r4 = json_schema_validate(schema, bad4);
  REQUIRE(r4.has_value());
  CHECK(r4->find("expected type") != std::string::npos);

  Json anyof = parse_json_text(
      R"({"anyOf": [{"type": "array"}, {"type": "object", "required": ["polys"]}]})");
  CHECK_FALSE(json_schema_validate(anyof, good).has_value());
  CHECK_FALSE(json_schema_validate(anyof, parse_json_text("[]")).has_value());
  CHECK(json_schema_validate(anyof, parse_json_text("{\"a\": 1}")).has_value());
}
