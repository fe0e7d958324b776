// SPDX-License-Identifier: Apache-2.0
//
// JSON layer. One envelope for every emitted document (schema_version plus a
// kind tag), readers for the four input shapes the front end accepts, and a
// small draft-07-subset schema checker that the test suite runs against the
// shipped schema files.
//
// Serialization conventions: integers of unbounded magnitude (coefficients,
// matrix entries, determinants, witness evidence) are decimal strings;
// bounded structural data (counts, indices, precisions, signs) are plain JSON
// numbers. Rationals are "p/q" (or "p"), enclosures are {lo, hi} rational
// pairs, floats are "0.<mantissa>e<exp>" at a stated digit count.
#pragma once

#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "otforge/arith.hpp"
#include "otforge/classify.hpp"
#include "otforge/errors.hpp"
#include "otforge/interval.hpp"
#include "otforge/invariants.hpp"
#include "otforge/manifold.hpp"
#include "otforge/matrix.hpp"
#include "otforge/numeric.hpp"
#include "otforge/otbridge.hpp"
#include "otforge/poly.hpp"
#include "otforge/units.hpp"

namespace otforge {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// --- text <-> documents ----------------------------------------------------

namespace detail {

// nlohmann prefixes diagnostics with "[json.exception...] parse error at
// line L, column C: "; keep only the human part.
inline std::string json_diag_tail(const std::string& what) {
  static const std::regex re("^\\[[^\\]]*\\] parse error( at [^:]*)?: ");
  std::smatch m;
  if (std::regex_search(what, m, re)) return what.substr(m[0].length());
  return what;
}

inline std::pair<std::size_t, std::size_t> line_col_of_byte(
    const std::string& text, std::size_t byte_1based) {
  std::size_t stop = byte_1based == 0 ? 0 : byte_1based - 1;
  if (stop > text.size()) stop = text.size();
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_col_of_byte(text, e.byte);
    throw ParseError(detail::json_diag_tail(e.what()), line, col);
  }
}

inline std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json load_json_file(const std::string& path) {
  return parse_json_text(slurp_file(path));
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write to " + path + " failed");
}

// --- scalar readers ----------------------------------------------------------

namespace detail {

inline bool is_decimal_string(const std::string& s) {
  std::size_t i = !s.empty() && s[0] == '-' ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

// Always base 10: the gmp string constructor would otherwise treat a
// leading zero as an octal prefix.
inline Int int_base10(const std::string& s) { return Int(s, 10); }

}  // namespace detail

inline Int int_from_json(const Json& j, const std::string& where) {
  if (!j.is_string() || !detail::is_decimal_string(j.get<std::string>()))
    throw ParseError(where + ": expected a decimal string");
  return detail::int_base10(j.get<std::string>());
}

// "p" or "p/q" with q > 0; reduced on the way in.
inline Rat rat_from_string(const std::string& s, const std::string& where) {
  std::size_t slash = s.find('/');
  std::string num = s.substr(0, slash);
  if (!detail::is_decimal_string(num))
    throw ParseError(where + ": expected a rational \"p\" or \"p/q\"");
  if (slash == std::string::npos) return Rat(detail::int_base10(num));
  std::string den = s.substr(slash + 1);
  if (!detail::is_decimal_string(den) || den[0] == '-' ||
      detail::int_base10(den) == 0)
    throw ParseError(where + ": denominator must be a positive integer");
  Rat r{detail::int_base10(num), detail::int_base10(den)};
  r.canonicalize();
  return r;
}

// Exact rational value of a decimal literal like "1e-8", "0.25" or "3";
// "p/q" is accepted too. No binary floats anywhere on the way.
inline Rat rat_from_decimal(const std::string& s, const std::string& where) {
  if (s.find('/') != std::string::npos) return rat_from_string(s, where);
  static const std::regex re(
      "^(-?)([0-9]+)(?:\\.([0-9]+))?(?:[eE]([-+]?[0-9]+))?$");
  std::smatch m;
  if (!std::regex_match(s, m, re))
    throw ParseError(where + ": expected a decimal number");
  if (m[4].matched && m[4].length() > 6)
    throw ParseError(where + ": exponent out of range");
  Rat v{detail::int_base10(m[2].str() + m[3].str())};
  long shift = (m[4].matched ? std::stol(m[4].str()) : 0) -
               static_cast<long>(m[3].length());
  Rat scale{pow_int(Int(10), static_cast<unsigned long>(
                                 shift < 0 ? -shift : shift))};
  v = shift >= 0 ? Rat(v * scale) : Rat(v / scale);
  if (m[1].length() > 0) v = -v;
  v.canonicalize();
  return v;
}

// --- polynomials, matrices, factorizations ---------------------------------

inline Json poly_to_json(const IntPoly& p) {
  Json a = Json::array();
  if (p.is_zero()) {
    a.push_back("0");
    return a;
  }
  for (const Int& c : p.coeffs()) a.push_back(to_decimal(c));
  return a;
}

inline IntPoly poly_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ParseError(where +
                     ": expected a nonempty array of decimal strings, "
                     "constant term first");
  std::vector<Int> cs;
  cs.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    cs.push_back(int_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return IntPoly(std::move(cs));
}

inline Json zmat_to_json(const ZMat& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(to_decimal(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ZMat zmat_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ParseError(where + ": expected a nonempty array of rows");
  std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw ParseError(where + "[0]: expected a nonempty row of decimal strings");
  std::size_t cols = j[0].size();
  ZMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = j[i];
    std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != cols)
      throw ParseError(rw + ": expected a row of width " +
                       std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c)
      m.at(i, c) = int_from_json(row[c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline Json factorization_to_json(const FactoredCharPoly& f) {
  Json j;
  j["b0"] = poly_to_json(f.b0);
  Json fs = Json::array();
  for (const IntPoly& p : f.factors) fs.push_back(poly_to_json(p));
  j["factors"] = std::move(fs);
  return j;
}

inline FactoredCharPoly factorization_from_json(const Json& j,
                                                const std::string& where) {
  if (!j.is_object())
    throw ParseError(where + ": expected an object {b0, factors}");
  if (!j.contains("b0")) throw ParseError(where + ": missing \"b0\"");
  if (!j.contains("factors") || !j["factors"].is_array())
    throw ParseError(where + ": missing \"factors\" array");
  FactoredCharPoly f;
  f.b0 = poly_from_json(j["b0"], where + ".b0");
  const Json& fs = j["factors"];
  for (std::size_t i = 0; i < fs.size(); ++i)
    f.factors.push_back(
        poly_from_json(fs[i], where + ".factors[" + std::to_string(i) + "]"));
  return f;
}

// A family (or unit list): either a bare array of polynomials or an object
// carrying them under "polys", so emitted family documents feed back in.
inline std::vector<IntPoly> poly_list_from_json(const Json& j,
                                                const std::string& where) {
  const Json* arr = &j;
  std::string w = where;
  if (j.is_object()) {
    if (!j.contains("polys"))
      throw ParseError(where + ": missing \"polys\" array");
    arr = &j["polys"];
    w += ".polys";
  }
  if (!arr->is_array())
    throw ParseError(w + ": expected an array of polynomials");
  std::vector<IntPoly> out;
  for (std::size_t i = 0; i < arr->size(); ++i)
    out.push_back(poly_from_json((*arr)[i], w + "[" + std::to_string(i) + "]"));
  return out;
}

// --- numeric formatting ------------------------------------------------------

inline Json interval_to_json(const Interval& v) {
  Json j;
  j["lo"] = to_decimal(v.lo);
  j["hi"] = to_decimal(v.hi);
  return j;
}

// Deterministic decimal form of an mpf: sign, "0.", the first `digits`
// significant digits, and a decimal exponent.
inline std::string mpf_to_string(const Mpf& x, std::size_t digits = 30) {
  mp_exp_t ex = 0;
  std::string mant = x.get_str(ex, 10, digits);
  if (mant.empty() || mant == "-") return "0";
  bool neg = mant[0] == '-';
  if (neg) mant.erase(mant.begin());
  if (mant.empty()) return "0";
  return (neg ? std::string("-0.") : std::string("0.")) + mant + "e" +
         std::to_string(ex);
}

inline Json fmat_to_json(const FMat& a, std::size_t digits = 30) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.cols(); ++j)
      row.push_back(mpf_to_string(a.at(i, j), digits));
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- document writers --------------------------------------------------------

namespace detail {

inline Json envelope(const char* kind) {
  Json j;
  j["schema_version"] = schema_version;
  j["kind"] = kind;
  return j;
}

inline const char* witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::filaseta_gross:
      return "filaseta-gross";
    case WitnessKind::modular:
      return "modular";
    case WitnessKind::low_degree:
      return "low-degree";
  }
  return "";
}

inline Json witness_to_json(const IrreducibilityWitness& w) {
  Json j;
  j["method"] = witness_kind_name(w.kind);
  j["evidence"] = to_decimal(w.evidence);
  j["description"] = w.describe();
  return j;
}

inline Json real_algebraic_to_json(const RealAlgebraic& a) {
  Json j;
  j["defpoly"] = poly_to_json(a.defpoly());
  j["lo"] = to_decimal(a.lo());
  j["hi"] = to_decimal(a.hi());
  return j;
}

// Family body without the envelope, shared with the manifold document.
inline Json family_body(const DirichletFamily& f) {
  Json j;
  Json polys = Json::array();
  for (const IntPoly& p : f.polys) polys.push_back(poly_to_json(p));
  j["polys"] = std::move(polys);
  Json dets = Json::array();
  for (const Int& d : f.dets) dets.push_back(to_decimal(d));
  j["dets"] = std::move(dets);
  j["signs"] = f.signs;
  j["log_det"] = interval_to_json(f.log_det);
  j["precision_bits"] = f.precision_bits;
  switch (f.delta3) {
    case Delta3Status::certified:
      j["delta3"] = "certified";
      break;
    case Delta3Status::violated:
      j["delta3"] = "violated";
      break;
    case Delta3Status::undetermined:
      j["delta3"] = "undetermined";
      break;
  }
  j["accepted"] = f.accepted;
  j["failed_axiom"] = f.failed_axiom;
  j["message"] = f.message;
  return j;
}

}  // namespace detail

inline Json type_certificate_to_json(const TypeCertificate& c) {
  Json j = detail::envelope("type_certificate");
  j["j0"] = c.j0;
  j["j"] = c.j;
  j["j1"] = c.j1;
  j["witness_unknown"] = c.witness_unknown;
  j["definite_failure"] = c.definite_failure;
  j["s"] = c.s;
  j["n"] = c.n;
  j["char_poly"] = poly_to_json(c.char_poly);
  j["b0"] = poly_to_json(c.b0);
  j["b0_real_roots"] = c.b0_real_roots;
  Json factors = Json::array();
  for (const FactorEvidence& fe : c.factors) {
    Json e;
    e["poly"] = poly_to_json(fe.poly);
    e["real_roots"] = fe.real_roots;
    e["imaginary_roots"] = fe.imaginary_roots;
    e["witness"] =
        fe.witness ? detail::witness_to_json(*fe.witness) : Json(nullptr);
    e["refuted"] = fe.refuted;
    factors.push_back(std::move(e));
  }
  j["factors"] = std::move(factors);
  Json cop = Json::array();
  for (const PairCoprimality& pc : c.coprimality) {
    Json e;
    e["first"] = pc.first;
    e["second"] = pc.second;
    e["u"] = poly_to_json(pc.cert.u);
    e["v"] = poly_to_json(pc.cert.v);
    e["a"] = poly_to_json(pc.cert.a);
    e["b"] = poly_to_json(pc.cert.b);
    cop.push_back(std::move(e));
  }
  j["coprimality"] = std::move(cop);
  j["failure"] = c.failure;
  return j;
}

inline Json dirichlet_family_to_json(const DirichletFamily& f) {
  Json j = detail::envelope("dirichlet_family");
  Json body = detail::family_body(f);
  for (auto& [k, v] : body.items()) j[k] = std::move(v);
  return j;
}

// The manifold document echoes its exact inputs (matrix, factorization,
// family) so a later invariants run can rebuild everything from scratch.
inline Json manifold_to_json(const ManifoldData& md, const ZMat& m,
                             const FactoredCharPoly& f) {
  Json j = detail::envelope("manifold");
  j["matrix"] = zmat_to_json(m);
  j["factorization"] = factorization_to_json(f);
  Json fam = Json::array();
  for (const IntPoly& p : md.family) fam.push_back(poly_to_json(p));
  j["family"] = std::move(fam);

  j["s"] = md.s;
  j["n"] = md.n;
  j["complex_dimension"] = md.complex_dimension;
  Json mono = Json::array();
  for (const ZMat& d : md.monodromies) mono.push_back(zmat_to_json(d));
  j["monodromies"] = std::move(mono);
  Json eigs = Json::array();
  for (const RealAlgebraic& a : md.real_eigs)
    eigs.push_back(detail::real_algebraic_to_json(a));
  j["real_eigenvalues"] = std::move(eigs);
  Json evecs = Json::array();
  for (const RealEigenvector& v : md.eigen.real_vectors) {
    Json e;
    e["factor_index"] = v.factor_index;
    Json coords = Json::array();
    for (const IntPoly& p : v.coords) coords.push_back(poly_to_json(p));
    e["coords"] = std::move(coords);
    evecs.push_back(std::move(e));
  }
  j["real_eigenvectors"] = std::move(evecs);
  Json scales = Json::array();
  for (const auto& row : md.scale_values) {
    Json r = Json::array();
    for (const Interval& v : row) r.push_back(interval_to_json(v));
    scales.push_back(std::move(r));
  }
  j["scale_values"] = std::move(scales);
  j["cross_section"] = md.cross_section;

  Json grp;
  grp["base_rank"] = md.group.base_rank;
  grp["fiber_rank"] = md.group.fiber_rank;
  grp["description"] = md.group.description;
  j["group"] = std::move(grp);

  const LatticeReport& lr = md.lattice_report;
  Json rep;
  rep["passed"] = lr.passed;
  rep["tolerance"] = to_decimal(lr.tolerance);
  rep["worst_residual"] = mpf_to_string(lr.worst_residual);
  rep["worst_check"] = lr.worst_check;
  rep["worst_row"] = lr.worst_row;
  rep["worst_col"] = lr.worst_col;
  Json dets = Json::array();
  for (const Int& d : lr.monodromy_dets) dets.push_back(to_decimal(d));
  rep["monodromy_dets"] = std::move(dets);
  rep["message"] = lr.message;
  j["lattice_report"] = std::move(rep);

  Json eig;
  eig["precision"] = md.eigen.precision;
  Json blocks = Json::array();
  for (const WBlock& b : md.eigen.blocks) {
    Json e;
    e["beta_re"] = mpf_to_string(b.beta.re);
    e["beta_im"] = mpf_to_string(b.beta.im);
    e["size"] = b.size;
    e["from_b0"] = b.from_b0;
    blocks.push_back(std::move(e));
  }
  eig["w_blocks"] = std::move(blocks);
  eig["det_q_abs"] = mpf_to_string(md.eigen.det_q_abs);
  eig["det_q_residual"] = mpf_to_string(md.eigen.det_q_residual);
  eig["q"] = fmat_to_json(md.eigen.q);
  eig["numeric_u"] = fmat_to_json(md.eigen.numeric_u);
  j["eigen"] = std::move(eig);

  j["certificates"] = md.certificates;
  j["family_certificate"] = detail::family_body(md.family_certificate);
  return j;
}

inline Json obstruction_report_to_json(const ObstructionReport& r) {
  Json j = detail::envelope("obstruction_report");
  j["primary"] = r.primary_flag;
  if (r.special) {
    Json w;
    w["exponents"] = r.special->exponents;
    w["matrix"] = zmat_to_json(r.special->n);
    w["det_minus_one"] = to_decimal(r.special->det_minus_one);
    j["special"] = std::move(w);
  } else {
    j["special"] = nullptr;
  }
  j["b1"] = r.b1 ? Json(*r.b1) : Json(nullptr);
  j["nondiag_indices"] = r.nondiag_indices;
  j["verdict_lck"] =
      r.verdict_lck == LckVerdict::no_lck ? "no-LCK" : "inconclusive";
  j["verdict_ot"] = r.verdict_ot == OtVerdict::not_ot_homeomorphic
                        ? "not-OT-homeomorphic"
                        : "inconclusive";
  j["justification"] = r.justification;
  return j;
}

inline Json identity_certificate_to_json(const IdentityCertificate& c) {
  Json j = detail::envelope("identity_certificate");
  j["matched"] = c.matched;
  j["checks"] = c.checks;
  j["mismatch"] = c.mismatch;
  return j;
}

// --- manifold document as input ----------------------------------------------

struct ManifoldInput {
  ZMat matrix;
  FactoredCharPoly factorization;
  std::vector<IntPoly> family;
};

inline ManifoldInput manifold_input_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("$: expected a manifold document");
  if (j.contains("kind") && j["kind"] != "manifold")
    throw ParseError("$.kind: expected \"manifold\"");
  for (const char* key : {"matrix", "factorization", "family"})
    if (!j.contains(key))
      throw ParseError(std::string("$: missing \"") + key + "\"");
  ManifoldInput in;
  in.matrix = zmat_from_json(j["matrix"], "$.matrix");
  in.factorization = factorization_from_json(j["factorization"],
                                             "$.factorization");
  in.family = poly_list_from_json(j["family"], "$.family");
  return in;
}

// --- schema checker ------------------------------------------------------------

// Validates against the subset of draft-07 the shipped schemas use: type,
// properties, required, items (single schema), enum, pattern, minItems,
// anyOf, and boolean schemas. Returns the first violation, or nothing.
inline std::optional<std::string> json_schema_validate(
    const Json& schema, const Json& inst, const std::string& path = "$") {
  if (schema.is_boolean())
    return schema.get<bool>()
               ? std::nullopt
               : std::optional<std::string>(path + ": schema forbids a value");
  if (!schema.is_object()) return std::nullopt;

  if (schema.contains("anyOf")) {
    for (const Json& alt : schema["anyOf"])
      if (!json_schema_validate(alt, inst, path)) return std::nullopt;
    return path + ": no anyOf alternative matched";
  }

  if (schema.contains("type")) {
    auto matches = [&inst](const std::string& t) {
      if (t == "object") return inst.is_object();
      if (t == "array") return inst.is_array();
      if (t == "string") return inst.is_string();
      if (t == "integer") return inst.is_number_integer();
      if (t == "number") return inst.is_number();
      if (t == "boolean") return inst.is_boolean();
      if (t == "null") return inst.is_null();
      return false;
    };
    const Json& t = schema["type"];
    bool ok = t.is_array() ? [&] {
      for (const Json& e : t)
        if (matches(e.get<std::string>())) return true;
      return false;
    }() : matches(t.get<std::string>());
    if (!ok)
      return path + ": expected type " + t.dump() + ", got " +
             inst.type_name();
  }

  if (schema.contains("enum")) {
    bool ok = false;
    for (const Json& e : schema["enum"])
      if (e == inst) {
        ok = true;
        break;
      }
    if (!ok) return path + ": value not in enum " + schema["enum"].dump();
  }

  if (schema.contains("pattern") && inst.is_string()) {
    std::regex re(schema["pattern"].get<std::string>());
    if (!std::regex_search(inst.get<std::string>(), re))
      return path + ": string does not match pattern " +
             schema["pattern"].get<std::string>();
  }

  if (inst.is_array()) {
    if (schema.contains("minItems") &&
        inst.size() < schema["minItems"].get<std::size_t>())
      return path + ": fewer than " + schema["minItems"].dump() + " items";
    if (schema.contains("items"))
      for (std::size_t i = 0; i < inst.size(); ++i)
        if (auto bad = json_schema_validate(schema["items"], inst[i],
                                            path + "[" + std::to_string(i) +
                                                "]"))
          return bad;
  }

  if (inst.is_object()) {
    if (schema.contains("required"))
      for (const Json& name : schema["required"])
        if (!inst.contains(name.get<std::string>()))
          return path + ": missing required property \"" +
                 name.get<std::string>() + "\"";
    if (schema.contains("properties"))
      for (auto& [name, sub] : schema["properties"].items())
        if (inst.contains(name))
          if (auto bad =
                  json_schema_validate(sub, inst[name], path + "." + name))
            return bad;
  }

  return std::nullopt;
}

}  // namespace otforge
