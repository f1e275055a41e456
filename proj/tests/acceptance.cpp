// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances and budgets are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "capt/abpe.hpp"
#include "capt/cauchy.hpp"
#include "capt/coloring.hpp"
#include "capt/harmonic.hpp"
#include "capt/scene.hpp"
#include "helpers.hpp"

using namespace capt;
using namespace testkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double now_seconds() {
  static auto t0 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fm(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ── 1. Cauchy-transform oracle suite ────────────────────────────────

Outcome criterion_cauchy_oracles() {
  double t0 = now_seconds();
  Outcome o;
  Rng rng(101);

  PlanarMeasure atom = atom_measure({0.2, -0.1}, {1.5, 0.5});
  PlanarMeasure circle = circle_measure(0, 1, 1);
  PlanarMeasure disk = disk_area_measure(0, 1);

  double worst_line = 0, worst_area = 0;
  int tested = 0;
  while (tested < 200) {
    cplx z{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    // keep 0.1 away from every support
    if (std::abs(z - cplx{0.2, -0.1}) < 0.1) continue;
    if (std::abs(std::abs(z) - 1.0) < 0.1) continue;
    if (std::abs(z) < 1.1) continue;  // outside the closed disk for the area case
    ++tested;
    cplx want_atom = cplx{1.5, 0.5} / (cplx{0.2, -0.1} - z);
    worst_line = std::max(worst_line, std::abs(cauchy_transform(atom, z) - want_atom));
    worst_line = std::max(
        worst_line, std::abs(cauchy_transform(circle, z) - circle_cauchy_oracle(0, 1, 1, z)));
    worst_area = std::max(worst_area,
                          std::abs(cauchy_transform(disk, z) - disk_cauchy_oracle(0, 1, 1, z)));
  }
  // circle measure also admits interior test points at distance >= 0.1
  for (int t = 0; t < 200; ++t) {
    cplx z = 0.9 * rng.unit_disk();
    worst_line = std::max(worst_line, std::abs(cauchy_transform(circle, z)));
  }
  double dt = now_seconds() - t0;
  o.pass = worst_line <= 1e-6 && worst_area <= 1e-4 && dt <= 10.0;
  o.detail = "line err " + fm(worst_line) + " <= 1e-6, area err " + fm(worst_area) +
             " <= 1e-4, " + fm(dt) + "s <= 10s";
  return o;
}

// ── 2. coefficient inequalities ──────────────────────────────────────

Outcome criterion_coefficient_inequalities() {
  Outcome o;
  Rng rng(20250401);
  int violations = 0;
  double worst_margin = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    cplx a{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    double delta = rng.uniform(0.05, 0.5);
    int npoles = 1 + static_cast<int>(rng.uniform(0, 3));
    std::vector<cplx> poles, coef;
    std::vector<int> order;
    for (int p = 0; p < npoles; ++p) {
      poles.push_back(a + 0.8 * delta * rng.unit_disk());
      coef.push_back(rng.unit_disk());
      order.push_back(rng.uniform(0, 1) < 0.3 ? 2 : 1);
    }
    auto f = [&](cplx z) {
      cplx acc = 0;
      for (int p = 0; p < npoles; ++p) {
        cplx d = z - poles[p];
        acc += order[p] == 1 ? coef[p] / d : coef[p] / (d * d);
      }
      return acc;
    };
    double sup = 0;
    for (int t = 0; t < 4096; ++t) {
      double th = kTwoPi * t / 4096;
      sup = std::max(sup, std::abs(f(a + delta * cplx{std::cos(th), std::sin(th)})));
    }
    auto co = coefficients_at_infinity(f, a, 4 * delta);
    double v1 = std::abs(co.a1) - delta * sup;
    double v2 = std::abs(co.a2) - delta * delta * sup;
    worst_margin = std::max({worst_margin, v1, v2});
    if (v1 > 1e-8) ++violations;
    if (v2 > 1e-8) ++violations;
  }
  o.pass = violations == 0;
  o.detail = "1000 functions, violations " + std::to_string(violations) +
             ", worst margin " + fm(worst_margin);
  return o;
}

// ── 3. localization suite ────────────────────────────────────────────

Outcome criterion_localization() {
  Outcome o;
  std::ostringstream note;
  bool pass = true;

  // (a) T_phi f = 0 when phi avoids supp dbar f
  {
    VitushkinCover cover(2, {-0.5, -0.5, 0.5, 0.5});
    auto f = [](cplx z) { return 1.0 / (z - 5.0); };
    LocalizedFunction Tf = localize(f, cover, 0);
    Rng rng(3);
    double worst = 0;
    for (int t = 0; t < 40; ++t) {
      cplx w{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      worst = std::max(worst, std::abs(Tf(w)));
    }
    pass = pass && worst <= 1e-6;
    note << "annihilation " << fm(worst) << " <= 1e-6";
  }

  // (b) sum of localized pieces reproduces f at 100 points
  {
    auto f = [](cplx z) { return disk_cauchy_oracle(0, 1, 1, z); };
    VitushkinCover cover(3, {-1.25, -1.25, 1.25, 1.25});
    std::vector<LocalizedFunction> pieces;
    for (std::size_t l = 0; l < cover.squares().size(); ++l) {
      Window fl = cover.enlarged(l);
      double dx = std::max({fl.x0, -fl.x1, 0.0});
      double dy = std::max({fl.y0, -fl.y1, 0.0});
      if (std::hypot(dx, dy) > 1.0) continue;  // analytic on F_l: piece is 0
      pieces.push_back(localize(f, cover, l, 64));
    }
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
      double th = kTwoPi * t / 100;
      cplx w = 2.0 * cplx{std::cos(th), std::sin(th)};
      cplx acc = 0;
      for (const auto& piece : pieces) acc += piece(w);
      worst = std::max(worst, std::abs(acc - f(w)));
    }
    pass = pass && worst <= 1e-4;
    note << ", decomposition " << fm(worst) << " <= 1e-4";
  }

  // (c) dbar residual off F_l below 10x the finite-difference truncation
  {
    auto f = [](cplx z) { return disk_cauchy_oracle(0, 1, 1, z); };
    VitushkinCover cover(2, {-1, -1, 1, 1});
    LocalizedFunction Tf = localize(f, cover, 5, 48);
    Window fl = cover.enlarged(5);
    double h = 1e-3;
    double worst_ratio = 0;
    for (cplx z : {cplx{fl.x1 + 0.5, fl.y1 + 0.5}, cplx{fl.x0 - 0.7, fl.y0 - 0.3},
                   cplx{fl.x1 + 0.8, fl.y0 - 0.6}}) {
      cplx resid = Tf.dbar_residual(z, h);
      // truncation estimate h^2 |T'''|/6 with T''' from a wide stencil
      double H = 8 * h;
      cplx d3 = (-Tf(z - 2 * H) + 2.0 * Tf(z - H) - 2.0 * Tf(z + H) + Tf(z + 2 * H)) /
                (2 * H * H * H);
      double trunc = h * h * std::abs(d3) / 6 + 1e-12;
      worst_ratio = std::max(worst_ratio, std::abs(resid) / trunc);
    }
    pass = pass && worst_ratio <= 10.0;
    note << ", dbar ratio " << fm(worst_ratio) << " <= 10";
  }

  // (d) covering-sum inequality with the measured constant
  {
    VitushkinCover cover(3, {-1, -1, 1, 1});
    Rng rng(5);
    double measured_c = 0;
    for (int t = 0; t < 1000; ++t) {
      cplx z{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      measured_c = std::max(measured_c, cover.covering_sum(z) / cover.covering_bound(z));
    }
    pass = pass && std::isfinite(measured_c);
    note << ", covering-sum C = " << fm(measured_c);
  }

  o.pass = pass;
  o.detail = note.str();
  return o;
}

// ── 4. coloring determinism and hand simulations ─────────────────────

std::string scheme_bytes(const ColoredScheme& s) {
  std::ostringstream os;
  os << s.terminated_with_unbounded_green;
  for (const auto& gen : s.generations) {
    os << "|g" << gen.g;
    for (const auto* set : {&gen.green, &gen.red, &gen.yellow})
      for (const auto& c : set->sorted()) os << ";" << c.i << "," << c.j;
  }
  return os.str();
}

Outcome criterion_coloring_fixtures() {
  Outcome o;
  std::ostringstream note;
  bool pass = true;

  SquareIntegrand zero = SquareIntegrand::constant(0);
  ColoredScheme s0 = run_scheme(zero, 0, 1, 4, {-4, -4, 4, 4});
  pass = pass && s0.terminated_with_unbounded_green && s0.generations.back().g == 2;
  note << "zero density " << (s0.terminated_with_unbounded_green ? "green-terminated" : "FAILED");

  SquareIntegrand heavy = SquareIntegrand::constant(1e6);
  ColoredScheme s1 = run_scheme(heavy, 0, 1, 1, {-4, -4, 4, 4});
  // independent enumeration of the generation-2 rings
  std::set<std::pair<std::int64_t, std::int64_t>> fill, red, yellow;
  for (std::int64_t i = 0; i < 2; ++i)
    for (std::int64_t j = 0; j < 2; ++j) fill.insert({i, j});
  for (auto [i, j] : fill) {
    const std::int64_t di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int t = 0; t < 4; ++t)
      if (!fill.count({i + di[t], j + dj[t]})) red.insert({i + di[t], j + dj[t]});
  }
  for (std::int64_t i = -24; i <= 24; ++i)
    for (std::int64_t j = -24; j <= 24; ++j) {
      if (fill.count({i, j}) || red.count({i, j})) continue;
      std::int64_t best = 1 << 20;
      for (auto [ri, rj] : red) {
        std::int64_t gi = std::max<std::int64_t>(std::abs(i - ri) - 1, 0);
        std::int64_t gj = std::max<std::int64_t>(std::abs(j - rj) - 1, 0);
        best = std::min(best, gi * gi + gj * gj);
      }
      if (best <= 16) yellow.insert({i, j});
    }
  auto to_set = [](const SquareSet& s) {
    std::set<std::pair<std::int64_t, std::int64_t>> out;
    for (const auto& c : s.sorted()) out.insert({c.i, c.j});
    return out;
  };
  bool exact = to_set(s1.generations.back().red) == red &&
               to_set(s1.generations.back().yellow) == yellow &&
               s1.generations.back().green.empty();
  pass = pass && exact;
  note << ", rings " << (exact ? "bit-exact" : "MISMATCH");

  ColoredScheme s2 = run_scheme(heavy, 0, 1, 1, {-4, -4, 4, 4});
  bool identical = scheme_bytes(s1) == scheme_bytes(s2);
  auto mu = std::make_shared<PlanarMeasure>(circle_measure(0, 1, 1, 4));
  SquareIntegrand phi = SquareIntegrand::abs_cauchy(mu);
  identical = identical &&
              scheme_bytes(run_scheme(phi, 0, 3, 2, {-4, -4, 4, 4})) ==
                  scheme_bytes(run_scheme(phi, 0, 3, 2, {-4, -4, 4, 4}));
  pass = pass && identical;
  note << ", repeats " << (identical ? "byte-identical" : "MISMATCH");

  o.pass = pass;
  o.detail = note.str();
  return o;
}

// ── 5. vanishing-consistency fixtures ────────────────────────────────

Outcome criterion_vanishing() {
  double t0 = now_seconds();
  Outcome o;
  std::ostringstream note;
  bool pass = true;

  // generation budget 6 = 4 coarse + 2 fine generations (default budget)
  ClassifyBudget budget;

  PlanarMeasure circle = circle_measure(0, 1, 1, 4);
  VanishingReport r1 = vanishing_consistency(circle, Disk{{0, 0}, 0.5}, 12, budget);
  pass = pass && !r1.inconsistent;
  note << "circle/disk light " << r1.light << "/" << r1.samples << " mass " << fm(r1.mass);

  PlanarMeasure disk = disk_area_measure(0, 1, 1, 4);
  VanishingReport r2 = vanishing_consistency(disk, Disk{{0.5, 0}, 0.2}, 12, budget);
  pass = pass && !r2.inconsistent;
  note << "; disk/disk light " << r2.light << "/" << r2.samples << " mass " << fm(r2.mass);

  PlanarMeasure a = atom_measure(0, 1, 4);
  VanishingReport r3 = vanishing_consistency(a, AnnulusShape{{0, 0}, 1, 2}, 12, budget);
  pass = pass && !r3.inconsistent;
  note << "; atom/annulus light " << r3.light << "/" << r3.samples << " mass " << fm(r3.mass);

  double dt = now_seconds() - t0;
  pass = pass && dt <= 60.0;
  note << "; " << fm(dt) << "s <= 60s";
  o.pass = pass;
  o.detail = note.str();
  return o;
}

// ── 6. Bergman / Hardy kernel values ─────────────────────────────────

Outcome criterion_kernels() {
  Outcome o;
  std::ostringstream note;
  bool pass = true;

  FunctionBasis basis = FunctionBasis::monomials(0, 1, 30);
  PlanarMeasure disk = disk_area_measure(0, 1);
  EvaluationEngine bergman(basis, gram_matrix(basis, disk));

  double b0 = bergman.profile(0).b_final();
  double want0 = 1.0 / std::sqrt(kPi);
  pass = pass && std::abs(b0 - want0) <= 0.02 * want0;
  note << "b(0) " << fm(b0) << " vs " << fm(want0);

  double b5 = bergman.profile(0.5).b_final();
  double want5 = std::sqrt(16.0 / (9 * kPi));
  pass = pass && std::abs(b5 - want5) <= 0.02 * want5;
  note << ", b(0.5) " << fm(b5) << " vs " << fm(want5);

  PlanarMeasure circle = circle_measure(0, 1, 1);
  EvaluationEngine szego(basis, gram_matrix(basis, circle));
  double c0 = szego.profile(0).b_final();
  pass = pass && std::abs(c0 - 1.0) <= 0.01;
  note << ", circle b(0) " << fm(c0);

  EvaluationProfile pdiv = szego.profile(1.5);
  pass = pass && pdiv.divergent;
  note << ", divergence at 1.5 " << (pdiv.divergent ? "flagged" : "MISSED");

  o.pass = pass;
  o.detail = note.str();
  return o;
}

// ── 7. scan geometry ─────────────────────────────────────────────────

Outcome criterion_scan_geometry() {
  Outcome o;
  std::ostringstream note;
  bool pass = true;

  {
    Scene scene = Scene::parse_file(fixture("unit_disk.scene"));
    PlanarMeasure mu = scene.measure();
    FunctionBasis basis = basis_for(mu, scene.K, 48);
    ScanResult scan = scan_abpe(mu, basis, *scene.window, 1.0 / 64);
    std::size_t inter = 0, uni = 0;
    for (int iy = 0; iy < scan.ny; ++iy)
      for (int ix = 0; ix < scan.nx; ++ix) {
        bool got = scan.detected_at(ix, iy);
        bool truth = std::abs(scan.grid_point(ix, iy)) < 1.0;
        inter += got && truth;
        uni += got || truth;
      }
    double jaccard = static_cast<double>(inter) / uni;
    pass = pass && jaccard >= 0.9 && scan.components.size() == 1;
    note << "disk jaccard " << fm(jaccard) << " >= 0.9";
  }
  {
    Scene scene = Scene::parse_file(fixture("two_disks.scene"));
    PlanarMeasure mu = scene.measure();
    FunctionBasis basis = basis_for(mu, scene.K, 40);
    ScanResult scan = scan_abpe(mu, basis, *scene.window, 1.0 / 32);
    pass = pass && scan.components.size() == 2;
    note << ", two-disk components " << scan.components.size();
  }
  {
    Scene scene = Scene::parse_file(fixture("segment.scene"));
    PlanarMeasure mu = scene.measure();
    FunctionBasis basis = basis_for(mu, scene.K, 40);
    ScanResult scan = scan_abpe(mu, basis, mu.support_bbox(0.4), 1.0 / 32);
    pass = pass && scan.components.empty();
    note << ", segment components " << scan.components.size();
  }

  o.pass = pass;
  o.detail = note.str();
  return o;
}

// ── 8. harmonic module ───────────────────────────────────────────────

Outcome criterion_harmonic() {
  Outcome o;
  std::ostringstream note;
  bool pass = true;

  auto diskdom = CircularDomain::disk(0, 1);
  auto anndom = CircularDomain::annulus(0, 0.25, 1);
  double mass_err = 0;
  Rng rng(77);
  for (int t = 0; t < 8; ++t) {
    cplx z = 0.8 * rng.unit_disk();
    mass_err = std::max(mass_err, std::abs(harmonic_measure(diskdom, z).total_mass() - 1));
  }
  pass = pass && mass_err <= 1e-8;
  note << "mass err " << fm(mass_err) << " <= 1e-8";

  double inner = harmonic_measure(anndom, 0.5).circles[1].mass;
  double want = std::log(1.0 / 0.5) / std::log(1.0 / 0.25);
  pass = pass && std::abs(inner - want) <= 1e-6;
  note << ", log-law err " << fm(std::abs(inner - want)) << " <= 1e-6";

  BoundaryMeasure swept = sweep(atom_measure(0.5, 1), diskdom, 1 << 12);
  double sup = 0;
  const auto& d = swept.circles.front().density;
  for (std::size_t t = 0; t < d.size(); ++t)
    sup = std::max(sup, std::abs(d[t] - poisson_density(0, 1, 0.5, kTwoPi * t / d.size())));
  pass = pass && sup <= 1e-4;
  note << ", sweep sup err " << fm(sup) << " <= 1e-4";

  BoundaryMeasure u1 = harmonic_measure(diskdom, 0);
  BoundaryMeasure u2 = harmonic_measure(CircularDomain::disk({3, 0}, 1), {3, 0});
  BoundaryMeasure u3 = harmonic_measure(CircularDomain::disk({2, 0}, 1), {2, 0});
  BoundaryMeasure p = harmonic_measure(diskdom, 0.5);
  bool verdicts = mutually_singular(u1, u2).singular && !mutually_singular(u1, p).singular &&
                  mutually_singular(u1, u3).singular &&
                  mutually_singular(u1, p).overlap >= 0.6;
  pass = pass && verdicts;
  note << ", singularity verdicts " << (verdicts ? "correct" : "WRONG");

  o.pass = pass;
  o.detail = note.str();
  return o;
}

// ── 9. decomposition pipeline ────────────────────────────────────────

Outcome criterion_decomposition() {
  double t0 = now_seconds();
  Outcome o;
  std::ostringstream note;
  bool pass = true;

  {
    Scene scene = Scene::parse_file(fixture("two_disks_segment.scene"));
    Decomposition dec = decompose(scene.measure(), scene.K, {});
    bool good = dec.ok() && dec.delta0 == std::vector<std::string>{"seg"} &&
                dec.parts.size() == 2;
    for (const auto& p : dec.parts) good = good && p.closure_contains_support;
    pass = pass && good;
    note << "two-disks+segment " << (good ? "ok" : "FAILED") << " (delta0 size "
         << dec.delta0.size() << ", parts " << dec.parts.size() << ")";
  }
  {
    Scene scene = Scene::parse_file(fixture("annulus.scene"));
    Decomposition dec = decompose(scene.measure(), scene.K, {});
    bool good = dec.ok() && dec.parts.size() == 1 &&
                dec.parts.front().region.connectivity == 2 &&
                dec.parts.front().k_connectivity == 2 && dec.parts.front().connectivity_ok;
    pass = pass && good;
    note << "; annulus connectivity "
         << (dec.parts.empty() ? -1 : dec.parts.front().region.connectivity) << " <= 2 "
         << (good ? "ok" : "FAILED");
  }
  double dt = now_seconds() - t0;
  pass = pass && dt <= 300.0;
  note << "; " << fm(dt) << "s <= 300s";
  o.pass = pass;
  o.detail = note.str();
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "cauchy transform oracle suite", criterion_cauchy_oracles},
      {2, "coefficient inequality suite", criterion_coefficient_inequalities},
      {3, "localization suite", criterion_localization},
      {4, "coloring determinism and hand-simulated fixtures", criterion_coloring_fixtures},
      {5, "vanishing consistency fixtures", criterion_vanishing},
      {6, "Bergman/Hardy kernel reproduction", criterion_kernels},
      {7, "abpe scan geometry", criterion_scan_geometry},
      {8, "harmonic measures and sweeps", criterion_harmonic},
      {9, "decomposition pipeline", criterion_decomposition},
  };

  int failures = 0;
  for (auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %d. %s — %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
