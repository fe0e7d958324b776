// SPDX-License-Identifier: Apache-2.0
//
// Acceptance harness. Each numbered criterion prints exactly one line,
// "pass" or "FAIL", with the elapsed wall time; the process exits nonzero
// if any criterion fails. Time budgets and tolerances are fixed here and
// are not negotiable at runtime.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <sys/wait.h>

#include "otforge/invariants.hpp"
#include "otforge/io.hpp"
#include "otforge/otbridge.hpp"

using namespace otforge;

namespace {

int failures = 0;

void criterion(int number, const char* label, double budget_seconds,
               const std::function<bool()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception& e) {
    ok = false;
    note = std::string(" [threw: ") + e.what() + "]";
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (budget_seconds > 0 && elapsed >= budget_seconds) {
    ok = false;
    note += " [over budget]";
  }
  std::printf("%s  criterion %2d: %s (%.2f s)%s\n", ok ? "pass" : "FAIL",
              number, label, elapsed, note.c_str());
  if (!ok) ++failures;
}

IntPoly P(std::initializer_list<long> cs) {
  std::vector<Int> v;
  for (long c : cs) v.emplace_back(c);
  return IntPoly(std::move(v));
}

const IntPoly kA = P({1, 0, 1});
const IntPoly kB1 = P({1, 3, 3, 3, 1});
const IntPoly kB2 = P({1, 4, 3, 4, 1});

int run_cli(const std::string& args) {
  std::string cmd = std::string(OTFORGE_CLI_PATH) + " " + args +
                    " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& name) {
  return std::string(OTFORGE_DATA_DIR) + "/" + name;
}

// ---- property suite bodies for criterion 10 ----

bool prop_resultant_multiplicative() {
  std::mt19937 rng(271828);
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> deg(1, 3);
  auto rand_poly = [&]() {
    std::vector<Int> cs(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& c : cs) c = coeff(rng);
    while (cs.back() == 0) cs.back() = coeff(rng);
    return IntPoly(std::move(cs));
  };
  for (int trial = 0; trial < 25; ++trial) {
    IntPoly a = rand_poly(), b = rand_poly(), c = rand_poly();
    if (resultant(a, b * c) != resultant(a, b) * resultant(a, c)) return false;
  }
  return true;
}

bool prop_bezout_expands() {
  std::mt19937 rng(161803);
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> deg(1, 4);
  auto rand_poly = [&]() {
    std::vector<Int> cs(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& c : cs) c = coeff(rng);
    while (cs.back() == 0) cs.back() = coeff(rng);
    return IntPoly(std::move(cs));
  };
  for (int trial = 0; trial < 40; ++trial) {
    IntPoly a = rand_poly(), b = rand_poly();
    auto cert = strongly_coprime(a, b);
    Int res = resultant(a, b);
    if (cert) {
      if (!cert->valid()) return false;
      if (res != 1 && res != -1) return false;
    } else if (res == 1 || res == -1) {
      return false;
    }
  }
  auto fixed = strongly_coprime(kB1, kA);
  return fixed && fixed->u * kB1 + fixed->v * kA == IntPoly::one();
}

bool prop_crt_remainders() {
  std::mt19937 rng(577215);
  std::uniform_int_distribution<int> coeff(-5, 5);
  for (int trial = 0; trial < 15; ++trial) {
    auto residue = [&](int deg) {
      std::vector<Int> cs(static_cast<std::size_t>(deg) + 1);
      for (auto& c : cs) c = coeff(rng);
      return IntPoly(std::move(cs));
    };
    IntPoly r1 = residue(1), r2 = residue(3), r3 = residue(3);
    IntPoly d = crt_lift({{kA, r1}, {kB1, r2}, {kB2, r3}});
    if (d.degree() >= 10) return false;
    if (mod_monic(d, kA) != mod_monic(r1, kA)) return false;
    if (mod_monic(d, kB1) != mod_monic(r2, kB1)) return false;
    if (mod_monic(d, kB2) != mod_monic(r3, kB2)) return false;
  }
  return true;
}

bool prop_sturm_vs_grid() {
  std::mt19937 rng(141421);
  std::uniform_int_distribution<int> pick(-20, 20);
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> deg(2, 6);
  for (int trial = 0; trial < 10; ++trial) {
    // planted roots: exact agreement
    std::vector<int> points;
    while (points.size() < 3) {
      int x = pick(rng);
      bool fresh = true;
      for (int y : points) fresh = fresh && y != x;
      if (fresh) points.push_back(x);
    }
    IntPoly p = kA;
    for (int x : points) p = p * P({-x, 1});
    if (count_real_roots(p) != 3) return false;
    // random polynomials: the grid count is a lower bound
    std::vector<Int> cs(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& c : cs) c = coeff(rng);
    while (cs.back() == 0) cs.back() = coeff(rng);
    IntPoly q(std::move(cs));
    int grid = 0, last = 0;
    for (int k = -200; k <= 200; ++k) {
      int s = sign_of(q.eval(Int(k)));
      if (s != 0 && last != 0 && s != last) ++grid;
      if (s != 0) last = s;
    }
    if (grid > count_real_roots(q)) return false;
  }
  return true;
}

bool prop_det_positivity() {
  std::mt19937 rng(662607);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::vector<IntPoly> corpus{kB1, kB2, P({-1, -1, 0, 1}),
                              P({1, -3, -7, -3, 1})};
  for (const IntPoly& f : corpus) {
    ZMat m = companion(f);
    auto roots = isolate_real_roots(f);
    int accepted = 0;
    for (int trial = 0; trial < 120 && accepted < 8; ++trial) {
      std::vector<Int> cs(4);
      for (auto& c : cs) c = coeff(rng);
      IntPoly p(std::move(cs));
      if (p.is_zero()) continue;
      bool nonneg = true;
      for (const auto& r : roots) nonneg = nonneg && sign_at(r, p) >= 0;
      if (!nonneg) continue;
      ++accepted;
      if (det_bareiss(poly_at(p, m)) < 0) return false;
    }
    if (accepted == 0) return false;
  }
  return true;
}

bool prop_jordan_ground_truth() {
  std::mt19937 rng(602214);
  ZMat ca = companion(kA);
  ZMat coupled(4, 4), plain(4, 4);
  auto place = [](ZMat& dst, const ZMat& src, std::size_t r, std::size_t c) {
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (std::size_t j = 0; j < src.cols(); ++j)
        dst.at(r + i, c + j) = src.at(i, j);
  };
  place(coupled, ca, 0, 0);
  coupled.at(0, 2) = 1;
  coupled.at(1, 3) = 1;
  place(coupled, ca, 2, 2);
  place(plain, ca, 0, 0);
  place(plain, ca, 2, 2);
  if (is_diagonalizable(coupled) || !is_diagonalizable(plain)) return false;

  std::uniform_int_distribution<int> entry(-2, 2);
  std::uniform_int_distribution<std::size_t> idx(0, 3);
  for (int trial = 0; trial < 8; ++trial) {
    ZMat u = ZMat::identity(4);
    for (int step = 0; step < 6; ++step) {
      std::size_t i = idx(rng), j = idx(rng);
      if (i == j) continue;
      ZMat e = ZMat::identity(4);
      e.at(i, j) = entry(rng);
      u = u * e;
    }
    ZMat uinv = adjugate(u);
    if (u * uinv != ZMat::identity(4)) return false;
    if (is_diagonalizable(u * coupled * uinv)) return false;
    if (!is_diagonalizable(u * plain * uinv)) return false;
  }
  return true;
}

bool prop_thread_determinism() {
  ZMat m = companion(kA * kB1);
  FactoredCharPoly f{kA, {kB1}};
  setenv("OTFORGE_THREADS", "1", 1);
  DirichletFamily f1 = build_dirichlet_family(m, f, {});
  auto w1 = find_specialness_witness(m, f1.polys, 2);
  setenv("OTFORGE_THREADS", "4", 1);
  DirichletFamily f4 = build_dirichlet_family(m, f, {});
  auto w4 = find_specialness_witness(m, f4.polys, 2);
  unsetenv("OTFORGE_THREADS");
  if (dump_json(dirichlet_family_to_json(f1)) !=
      dump_json(dirichlet_family_to_json(f4)))
    return false;
  if (!w1 || !w4) return false;
  return w1->exponents == w4->exponents && w1->det_minus_one == w4->det_minus_one;
}

}  // namespace

int main() {
  criterion(1, "resultant facts for the quartic pair", 1.0, [] {
    return resultant(kB1, kA) == 1 && resultant(kB2, kB1) == 1 &&
           resultant(kB2, kA) == 1;
  });

  criterion(2, "real root counts and negative isolating intervals", 1.0, [] {
    if (count_real_roots(kA) != 0) return false;
    for (const IntPoly& b : {kB1, kB2}) {
      auto roots = isolate_real_roots(b);
      if (roots.size() != 2) return false;
      for (const auto& r : roots)
        if (sign_at(r, P({0, 1})) != -1) return false;
    }
    return true;
  });

  criterion(3, "degree-12 evaluation, primality and witness", 1.0, [] {
    IntPoly b12 = P({1, 0, 0, 0, 8, 20, 19, 20, 8, 0, 0, 0, 1});
    if (b12.eval(Int(-1)) != -3) return false;
    if (b12.eval(Int(10)) != Int("1001021080001")) return false;
    if (!is_prime(b12.eval(Int(10)))) return false;
    auto w = irreducibility_witness(b12);
    return w && w->kind == WitnessKind::filaseta_gross;
  });

  criterion(4, "classification exit codes through the real binary", 5.0, [] {
    int six = run_cli("classify " + data("matrix6.json") + " " +
                      data("fact6.json"));
    int ten = run_cli("classify " + data("matrix10.json") + " " +
                      data("fact10.json"));
    if (six != 0 || ten != 0) return false;
    // the library agrees on the hierarchy split
    auto c6 = check_type_j(companion(kA * kB1), {kA, {kB1}});
    auto c10 = check_type_j(companion(kA * kB1 * kB2), {kA, {kB1, kB2}});
    return c6.j1 && c10.j && !c10.j1;
  });

  criterion(5, "primary family on the 6x6 companion", 60.0, [] {
    ZMat m = companion(kA * kB1);
    FamilyBuildOptions opt;
    opt.coeff_bound = 10;
    DirichletFamily fam = build_dirichlet_family(m, {kA, {kB1}}, opt);
    if (!fam.accepted || fam.polys.size() != 2) return false;
    for (const Int& d : fam.dets)
      if (d != 1) return false;
    if (fam.delta3 != Delta3Status::certified) return false;
    return !fam.log_det.contains_zero();
  });

  criterion(6, "invariance residual below 1e-8, shrinking with precision",
            0.0, [] {
    ZMat m = companion(kA * kB1);
    FactoredCharPoly f{kA, {kB1}};
    DirichletFamily fam = build_dirichlet_family(m, f, {});
    if (!fam.accepted) return false;
    EigenOptions dbl, quad;
    dbl.precision = 53;
    quad.precision = 113;
    Eigenstructure ed = eigenstructure(m, f, dbl);
    Eigenstructure eq = eigenstructure(m, f, quad);
    Rat tol(1, 100000000);
    LatticeReport rd = verify_lattice_invariance(m, fam.polys, ed, tol);
    LatticeReport rq = verify_lattice_invariance(m, fam.polys, eq, tol);
    if (!rd.passed || !rq.passed) return false;
    Mpf bound = mpf_from_rat(tol, 256);
    if (!(rd.worst_residual < bound)) return false;
    Mpf hundredth = rd.worst_residual;
    mpf_div_ui(hundredth.get_mpf_t(), hundredth.get_mpf_t(), 100);
    return rq.worst_residual < hundredth;
  });

  criterion(7, "specialness witness and first betti number", 0.0, [] {
    ZMat m = companion(kA * kB1);
    FactoredCharPoly f{kA, {kB1}};
    DirichletFamily fam = build_dirichlet_family(m, f, {});
    auto w = find_specialness_witness(m, fam.polys, 3);
    if (!w) return false;
    BettiResult br = betti1(m, fam.polys, w);
    return br.b1 && *br.b1 == 2;
  });

  criterion(8, "obstruction verdicts split on diagonalizability", 0.0, [] {
    // 8x8 block matrix: a coupled pair of t^2+1 companions and one B1 block
    ZMat m8(8, 8);
    auto place = [&](const ZMat& src, std::size_t r, std::size_t c) {
      for (std::size_t i = 0; i < src.rows(); ++i)
        for (std::size_t j = 0; j < src.cols(); ++j)
          m8.at(r + i, c + j) = src.at(i, j);
    };
    place(companion(kA), 0, 0);
    m8.at(0, 2) = 1;
    m8.at(1, 3) = 1;
    place(companion(kA), 2, 2);
    place(companion(kB1), 4, 4);
    FactoredCharPoly f8{kA * kA, {kB1}};
    DirichletFamily fam8 = build_dirichlet_family(m8, f8, {});
    if (!fam8.accepted) return false;
    ObstructionReport rep8 = obstruction_report(m8, f8, fam8.polys, {});
    if (rep8.verdict_lck != LckVerdict::no_lck) return false;
    if (rep8.verdict_ot != OtVerdict::not_ot_homeomorphic) return false;

    ZMat m6 = companion(kA * kB1);
    FactoredCharPoly f6{kA, {kB1}};
    DirichletFamily fam6 = build_dirichlet_family(m6, f6, {});
    ObstructionReport rep6 = obstruction_report(m6, f6, fam6.polys, {});
    return rep6.verdict_lck == LckVerdict::inconclusive &&
           rep6.verdict_ot == OtVerdict::inconclusive;
  });

  criterion(9, "bridge multiplication matrices match the monodromies", 10.0,
            [] {
    IntPoly p = char_poly(multiplication_matrix(kB1, IntPoly({0, 0, 1})));
    UnitSearchResult found = find_units(p, Int(8));
    LogBasisResult basis = select_log_basis(found.units, 2, 256);
    if (basis.status != LogBasisStatus::ok) return false;
    std::vector<IntPoly> reps;
    for (const auto& u : basis.basis) reps.push_back(u.elem.rep);

    // direct entry-for-entry equality on both sides of the bridge
    ZMat cp = companion(p);
    for (const IntPoly& d : reps)
      if (multiplication_matrix(p, d) != poly_at(d, cp)) return false;
    ManifoldData md = build_manifold(cp, {IntPoly::one(), {p}}, reps);
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (md.monodromies[i] != poly_at(reps[i], cp.transpose())) return false;
    IdentityCertificate cert = compare_with_tm(p, reps, {});
    return cert.matched && cert.checks.size() >= 8;
  });

  criterion(10, "seeded property suites", 0.0, [] {
    struct Suite {
      const char* name;
      bool (*body)();
    };
    const Suite suites[] = {
        {"resultant multiplicativity", prop_resultant_multiplicative},
        {"bezout expansion", prop_bezout_expands},
        {"crt remainders", prop_crt_remainders},
        {"sturm vs grid", prop_sturm_vs_grid},
        {"det positivity", prop_det_positivity},
        {"jordan ground truth", prop_jordan_ground_truth},
        {"thread determinism", prop_thread_determinism},
    };
    bool all = true;
    for (const Suite& s : suites) {
      bool ok = s.body();
      if (!ok) std::printf("      property suite failed: %s\n", s.name);
      all = all && ok;
    }
    return all;
  });

  if (failures != 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
