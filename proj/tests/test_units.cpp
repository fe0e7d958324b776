// SPDX-License-Identifier: Apache-2.0
//
// Unit groups of the factor orders: membership certificates, enumeration,
// positivity repair, log bases and the assembled scaling family with its
// independent checker.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>

#include "otforge/units.hpp"

using namespace otforge;

namespace {

IntPoly P(std::initializer_list<long> cs) {
  std::vector<Int> v;
  for (long c : cs) v.emplace_back(c);
  return IntPoly(std::move(v));
}

const IntPoly kA = P({1, 0, 1});
const IntPoly kB1 = P({1, 3, 3, 3, 1});

}  // namespace

TEST_CASE("unit membership certificates", "[units]") {
  CHECK(is_unit(OrderElement::make(kB1, IntPoly::one())));
  CHECK(is_unit(OrderElement::make(kB1, P({0, 1}))));
  CHECK(is_unit(OrderElement::make(P({-2, 0, 1}), P({1, 1}))));
  CHECK_FALSE(is_unit(OrderElement::make(P({-2, 0, 1}), P({2, 1}))));
}

TEST_CASE("unit enumeration grows with the coefficient bound", "[units]") {
  auto r0 = find_units(kB1, Int(0));
  auto r2 = find_units(kB1, Int(2));
  CHECK(r2.units.size() > r0.units.size());
  bool has_t = false;
  for (const auto& u : r2.units)
    if (u.elem.rep == P({0, 1})) has_t = true;
  CHECK(has_t);

  // every reported unit really is one, and products stay units
  for (const auto& u : r2.units) CHECK(is_unit(u.elem));
  for (std::size_t i = 0; i < r2.units.size(); i += 3)
    for (std::size_t j = 0; j < r2.units.size(); j += 5)
      CHECK(is_unit(mul(r2.units[i].elem, r2.units[j].elem)));
}

TEST_CASE("negative units are repaired by squaring", "[units]") {
  UnitWithLogs ut;
  ut.elem = OrderElement::make(kB1, P({0, 1}));
  auto roots = isolate_real_roots(kB1);
  for (const auto& r : roots)
    ut.projected_logs.push_back(
        log_abs_enclosure(r, ut.elem.rep, Rat(1, pow_int(Int(2), 64))));
  ut.positivity = false;

  auto sq = make_positive(ut);
  CHECK(sq.positivity);
  CHECK(sq.elem.rep == mod_monic(P({0, 1}) * P({0, 1}), kB1));
  // squaring doubles every projected log
  for (std::size_t j = 0; j < sq.projected_logs.size(); ++j) {
    Interval dbl(ut.projected_logs[j].lo * 2, ut.projected_logs[j].hi * 2);
    Rat lo = std::max(dbl.lo, sq.projected_logs[j].lo);
    Rat hi = std::min(dbl.hi, sq.projected_logs[j].hi);
    CHECK(lo <= hi);
  }
  CHECK(make_positive(sq).elem.rep == sq.elem.rep);
}

TEST_CASE("log basis selection certifies independence", "[units]") {
  auto r2 = find_units(kB1, Int(2));
  auto sel = select_log_basis(r2.units, 2, 256);
  REQUIRE(sel.status == LogBasisStatus::ok);
  CHECK(sel.basis.size() == 2);
  CHECK_FALSE(sel.det_enclosure.contains_zero());

  // a duplicated row can never be certified independent
  std::vector<UnitWithLogs> dup{sel.basis[0], sel.basis[0]};
  CHECK(select_log_basis(dup, 2, 128).status != LogBasisStatus::ok);
}

TEST_CASE("family build on the six by six companion", "[units]") {
  ZMat m6 = companion(kA * kB1);
  FactoredCharPoly f{kA, {kB1}};
  DirichletFamily fam = build_dirichlet_family(m6, f, {});
  REQUIRE(fam.accepted);
  REQUIRE(fam.polys.size() == 2);
  CHECK(fam.delta3 == Delta3Status::certified);
  CHECK_FALSE(fam.log_det.contains_zero());
  for (const Int& d : fam.dets) CHECK(d == 1);
  // members are congruent to t modulo the base factor
  for (const auto& d : fam.polys)
    CHECK(mod_monic(d, kA) == mod_monic(IntPoly::var(), kA));
}

TEST_CASE("independent checker rejects bad families", "[units]") {
  ZMat m6 = companion(kA * kB1);
  FactoredCharPoly f{kA, {kB1}};
  DirichletFamily fam = build_dirichlet_family(m6, f, {});
  REQUIRE(fam.accepted);

  SECTION("constant family fails the unit axiom chain") {
    auto bad = verify_dirichlet(m6, {IntPoly::one(), IntPoly::one()}, 128);
    CHECK_FALSE(bad.accepted);
    CHECK(bad.failed_axiom >= 1);
    CHECK_FALSE(bad.message.empty());
  }
  SECTION("negated member loses positivity") {
    auto polys = fam.polys;
    polys[0] = -polys[0];
    auto bad = verify_dirichlet(m6, polys, 128);
    CHECK_FALSE(bad.accepted);
  }
  SECTION("squared family still verifies") {
    auto good = verify_dirichlet(m6, square_family(fam.polys), 256);
    CHECK(good.accepted);
  }
}

TEST_CASE("family build is deterministic under thread caps", "[units]") {
  ZMat m6 = companion(kA * kB1);
  FactoredCharPoly f{kA, {kB1}};
  setenv("OTFORGE_THREADS", "4", 1);
  DirichletFamily f4 = build_dirichlet_family(m6, f, {});
  setenv("OTFORGE_THREADS", "1", 1);
  DirichletFamily f1 = build_dirichlet_family(m6, f, {});
  unsetenv("OTFORGE_THREADS");
  REQUIRE(f4.polys.size() == f1.polys.size());
  for (std::size_t i = 0; i < f4.polys.size(); ++i)
    CHECK(f4.polys[i] == f1.polys[i]);
}

TEST_CASE("sparse unit group exhausts a small search bound", "[units]") {
  IntPoly q = P({1, -7, -8, -8, 1});
  ZMat m = companion(q);
  FactoredCharPoly f{IntPoly::one(), {q}};
  FamilyBuildOptions opt;
  opt.coeff_bound = 2;
  try {
    build_dirichlet_family(m, f, opt);
    FAIL("expected the search to exhaust");
  } catch (const SearchExhausted& e) {
    CHECK(std::string(e.what()).find("coeff-bound") != std::string::npos);
  }
}

TEST_CASE("unwitnessed factor blocks the family build", "[units]") {
  IntPoly q = P({-1, 2, -2, 2, -1, 1});
  ZMat m = companion(kA * q);
  FactoredCharPoly f{kA, {q}};
  CHECK_THROWS_AS(build_dirichlet_family(m, f, {}), UnknownIrreducibility);
}

TEST_CASE("determinant sign matches root-wise positivity",
          "[units][property]") {
  std::mt19937 rng(662607);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::vector<IntPoly> corpus{kB1, P({1, 4, 3, 4, 1}), P({-1, -1, 0, 1}),
                              P({1, -3, -7, -3, 1})};
  for (const IntPoly& f : corpus) {
    ZMat m = companion(f);
    auto roots = isolate_real_roots(f);
    int accepted = 0;
    for (int trial = 0; trial < 120 && accepted < 12; ++trial) {
      std::vector<Int> cs(4);
      for (auto& c : cs) c = coeff(rng);
      IntPoly p(std::move(cs));
      if (p.is_zero()) continue;
      bool nonneg = true;
      for (const auto& r : roots) nonneg = nonneg && sign_at(r, p) >= 0;
      if (!nonneg) continue;
      ++accepted;
      CHECK(det_bareiss(poly_at(p, m)) >= 0);
    }
    CHECK(accepted > 0);
  }
}
