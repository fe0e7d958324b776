// SPDX-License-Identifier: Apache-2.0
//
// The geometric assembly: mixed eigenbasis, lattice invariance residuals,
// Jordan chains, nondegeneracy and the end-to-end build.
#include <catch2/catch_amalgamated.hpp>

#include "otforge/manifold.hpp"

using namespace otforge;

namespace {

IntPoly P(std::initializer_list<long> cs) {
  std::vector<Int> v;
  for (long c : cs) v.emplace_back(c);
  return IntPoly(std::move(v));
}

const IntPoly kA = P({1, 0, 1});
const IntPoly kB1 = P({1, 3, 3, 3, 1});
const IntPoly kPlastic = P({-1, -1, 0, 1});

}  // namespace

TEST_CASE("quartic eigenstructure and invariance residual", "[manifold]") {
  ZMat m = companion(kB1);
  FactoredCharPoly f{IntPoly::one(), {kB1}};
  Eigenstructure e = eigenstructure(m, f, {});
  CHECK(e.s == 2);
  CHECK(e.n == 1);
  REQUIRE(e.blocks.size() == 1);
  CHECK(e.blocks[0].size == 1);

  double a0 =
      detail::refined_to_width(e.real_eigs[0], Rat(1, 1 << 20)).approx().get_d();
  double a1 =
      detail::refined_to_width(e.real_eigs[1], Rat(1, 1 << 20)).approx().get_d();
  CHECK(a0 < a1);
  CHECK(a0 < -2.15);
  CHECK((a1 > -0.47 && a1 < -0.46));

  std::vector<IntPoly> fam{IntPoly({0, 1})};
  LatticeReport rep = verify_lattice_invariance(m, fam, e, Rat(1, 100000000));
  CHECK(rep.passed);
  Mpf tiny = mpf_eps(256, 180);
  CHECK(rep.worst_residual < tiny);
  REQUIRE(rep.monodromy_dets.size() == 1);
  CHECK(rep.monodromy_dets[0] == 1);

  std::vector<IntPoly> ones{IntPoly({1})};
  CHECK(verify_lattice_invariance(m, ones, e, Rat(1, 100000000)).passed);
}

TEST_CASE("invariance residual shrinks with precision", "[manifold]") {
  ZMat m = companion(kB1);
  FactoredCharPoly f{IntPoly::one(), {kB1}};
  EigenOptions lo, hi;
  lo.precision = 53;
  hi.precision = 113;
  Eigenstructure el = eigenstructure(m, f, lo);
  Eigenstructure eh = eigenstructure(m, f, hi);
  std::vector<IntPoly> fam{IntPoly({0, 1})};
  LatticeReport rl = verify_lattice_invariance(m, fam, el, Rat(1, 1000));
  LatticeReport rh = verify_lattice_invariance(m, fam, eh, Rat(1, 1000));
  CHECK(rl.passed);
  CHECK(rh.passed);
  CHECK(rl.worst_residual > 0);
  Mpf shrink = rl.worst_residual;
  mpf_div_2exp(shrink.get_mpf_t(), shrink.get_mpf_t(), 20);
  CHECK(rh.worst_residual < shrink);
}

TEST_CASE("transpose companion eigenvectors are Vandermonde", "[manifold]") {
  ZMat m = companion(kB1).transpose();
  FactoredCharPoly f{IntPoly::one(), {kB1}};
  Eigenstructure e = eigenstructure(m, f, {});
  for (std::size_t c = 0; c < 2; ++c) {
    Rat mid =
        detail::refined_to_width(e.real_eigs[c], Rat(1, 1000000000)).approx();
    const auto& coords = e.real_vectors[c].coords;
    Rat x0 = coords[0].eval(mid);
    REQUIRE(x0 != 0);
    for (std::size_t i = 1; i < 4; ++i) {
      Rat want = coords[i].eval(mid) / x0;
      Rat diff = want - pow_rat(mid, static_cast<unsigned long>(i));
      if (diff < 0) diff = -diff;
      CHECK(diff <= Rat(1, 10000));
    }
  }
}

TEST_CASE("six by six build certifies the full chain", "[manifold]") {
  ZMat m = companion(kA * kB1);
  FactoredCharPoly f{kA, {kB1}};
  DirichletFamily fam = build_dirichlet_family(m, f, {});
  REQUIRE(fam.accepted);
  ManifoldData md = build_manifold(m, f, fam.polys, {});
  CHECK(md.s == 2);
  CHECK(md.n == 2);
  CHECK(md.complex_dimension == 4);
  REQUIRE(md.monodromies.size() == 2);
  CHECK(det_bareiss(md.monodromies[0]) == 1);
  CHECK(det_bareiss(md.monodromies[1]) == 1);
  CHECK(md.cross_section);
  CHECK(md.lattice_report.passed);
  CHECK(md.certificates.size() >= 5);

  // exact scale enclosures contain a floating evaluation at the numeric
  // eigenvalues
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CF av(md.eigen.numeric_u.at(j, j), Mpf(0, 256));
      CF v = horner(fam.polys[i], av, 256);
      Mpf lo = mpf_from_rat(md.scale_values[i][j].lo, 320);
      Mpf hi = mpf_from_rat(md.scale_values[i][j].hi, 320);
      CHECK(lo <= v.re);
      CHECK(v.re <= hi);
    }
}

TEST_CASE("repeated base factor produces a Jordan chain", "[manifold]") {
  IntPoly b0 = kA * kA;
  ZMat m = companion(b0 * kB1);
  FactoredCharPoly f{b0, {kB1}};
  DirichletFamily fam = build_dirichlet_family(m, f, {});
  REQUIRE(fam.accepted);
  ManifoldData md = build_manifold(m, f, fam.polys, {});
  CHECK(md.s == 2);
  CHECK(md.n == 3);
  REQUIRE(md.eigen.blocks.size() == 2);
  CHECK(md.eigen.blocks[0].size == 2);
  CHECK(md.eigen.blocks[0].from_b0);
  CHECK(md.eigen.blocks[1].size == 1);
  CHECK(md.lattice_report.passed);
  CHECK(md.cross_section);
}

TEST_CASE("plastic cubic gives the transposed monodromy", "[manifold]") {
  ZMat m = companion(kPlastic);
  FactoredCharPoly f{IntPoly::one(), {kPlastic}};
  std::vector<IntPoly> fam{IntPoly({0, 1})};
  ManifoldData md = build_manifold(m, f, fam, {});
  CHECK(md.s == 1);
  CHECK(md.n == 1);
  CHECK(md.monodromies[0] == m.transpose());
  CHECK(md.cross_section);
}

TEST_CASE("build refuses unverifiable input", "[manifold]") {
  ZMat m = companion(kB1);
  FactoredCharPoly f{IntPoly::one(), {kB1}};
  std::vector<IntPoly> ones{IntPoly({1}), IntPoly({1})};
  CHECK_THROWS_AS(build_manifold(m, f, ones, {}), CertificateError);
}

TEST_CASE("perturbed lattice basis fails invariance", "[manifold]") {
  ZMat m = companion(kB1);
  FactoredCharPoly f{IntPoly::one(), {kB1}};
  Eigenstructure e = eigenstructure(m, f, {});
  e.q.at(0, 0) += Mpf(1, 64) / 10;
  std::vector<IntPoly> fam{IntPoly({0, 1})};
  LatticeReport rep = verify_lattice_invariance(m, fam, e, Rat(1, 100000000));
  CHECK_FALSE(rep.passed);
}

TEST_CASE("nondegeneracy decision on synthetic scale rows", "[manifold]") {
  TwistedDiagonalAction same;
  same.s = 2;
  same.k = 4;
  same.scale_vectors = {{Interval(Rat(2), Rat(3)), Interval(Rat(2), Rat(3))},
                        {Interval(Rat(2), Rat(3)), Interval(Rat(2), Rat(3))}};
  CHECK(check_nondegenerate(same, 256) == NondegeneracyStatus::undetermined);

  TwistedDiagonalAction one;
  one.s = 1;
  one.k = 3;
  one.scale_vectors = {{Interval(Rat(2), Rat(201, 100))}};
  CHECK(check_nondegenerate(one, 256) == NondegeneracyStatus::certified);
}
