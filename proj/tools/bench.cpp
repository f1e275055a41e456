// Benchmark comparing the serial reference path against the OpenMP kernels:
// batch Cauchy transforms, Gram assembly, abpe grid scans and the light-square
// wave of the coloring scheme.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "capt/abpe.hpp"
#include "capt/cauchy.hpp"
#include "capt/coloring.hpp"
#include "capt/parallel.hpp"

using namespace capt;

namespace {

template <class F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

PlanarMeasure demo_measure() {
  MeasureComponent disk;
  disk.kind = MeasureComponent::Kind::area;
  disk.label = "disk";
  disk.area = Disk{{0, 0}, 1};
  MeasureComponent rim;
  rim.kind = MeasureComponent::Kind::arc;
  rim.label = "rim";
  rim.curve = CircleShape{{0, 0}, 1.5};
  rim.density_const = 1.0 / (2 * kPi * 1.5);
  return PlanarMeasure({disk, rim}, 8);
}

struct Row {
  const char* name;
  double serial, parallel;
};

}  // namespace

int main() {
  std::vector<Row> rows;
  PlanarMeasure mu = demo_measure();

  {
    std::vector<cplx> pts;
    for (int t = 0; t < 4000; ++t) {
      double th = kTwoPi * t / 4000.0;
      pts.push_back(2.5 * cplx{std::cos(th), std::sin(th)});
    }
    std::vector<cplx> out_s, out_p;
    par::set_enabled(false);
    double ts = time_best_of(3, [&] { out_s = cauchy_transform_many(mu, pts); });
    par::set_enabled(true);
    double tp = time_best_of(3, [&] { out_p = cauchy_transform_many(mu, pts); });
    bool same = out_s == out_p;
    rows.push_back({same ? "cauchy batch (4k pts)" : "cauchy batch (MISMATCH)", ts, tp});
  }

  {
    FunctionBasis basis = FunctionBasis::monomials(0, 1.5, 40);
    GramResult gs, gp;
    par::set_enabled(false);
    double ts = time_best_of(3, [&] { gs = gram_matrix(basis, mu); });
    par::set_enabled(true);
    double tp = time_best_of(3, [&] { gp = gram_matrix(basis, mu); });
    bool same = gs.G == gp.G;
    rows.push_back({same ? "gram assembly (41 terms)" : "gram assembly (MISMATCH)", ts, tp});
  }

  {
    FunctionBasis basis = FunctionBasis::monomials(0, 1.5, 40);
    Window w{-1.2, -1.2, 1.2, 1.2};
    ScanResult ss, sp;
    par::set_enabled(false);
    double ts = time_best_of(1, [&] { ss = scan_abpe(mu, basis, w, 1.0 / 24); });
    par::set_enabled(true);
    double tp = time_best_of(1, [&] { sp = scan_abpe(mu, basis, w, 1.0 / 24); });
    bool same = ss.detected == sp.detected && ss.b_final == sp.b_final;
    rows.push_back({same ? "abpe scan (58x58 grid)" : "abpe scan (MISMATCH)", ts, tp});
  }

  {
    auto shared = std::make_shared<PlanarMeasure>(mu);
    SquareIntegrand phi = SquareIntegrand::abs_cauchy(shared);
    Window w{-4, -4, 4, 4};
    auto run = [&] {
      LightCache cache;  // fresh cache each run so both paths do the same work
      return run_scheme(phi, cplx{0.25, 0.0}, 4, 3, w, &cache);
    };
    ColoredScheme cs, cp;
    par::set_enabled(false);
    double ts = time_best_of(1, [&] { cs = run(); });
    par::set_enabled(true);
    double tp = time_best_of(1, [&] { cp = run(); });
    bool same = cs.generations.back().green.sorted().size() ==
                    cp.generations.back().green.sorted().size() &&
                cs.terminated_with_unbounded_green == cp.terminated_with_unbounded_green;
    rows.push_back({same ? "coloring scheme (k=4)" : "coloring scheme (MISMATCH)", ts, tp});
  }

  std::printf("%-28s %12s %12s %9s   (threads: %d)\n", "kernel", "serial [s]", "openmp [s]",
              "speedup", par::thread_count());
  for (const auto& r : rows)
    std::printf("%-28s %12.4f %12.4f %8.2fx\n", r.name, r.serial, r.parallel,
                r.serial / r.parallel);
  return 0;
}
