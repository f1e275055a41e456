#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// The OpenMP kernels only split loops whose iterations own their outputs, so
// the parallel path must be bit-identical to the serial reference.

#include <cmath>
#include <memory>

#include "capt/abpe.hpp"
#include "capt/cauchy.hpp"
#include "capt/coloring.hpp"
#include "capt/parallel.hpp"
#include "helpers.hpp"

using namespace capt;
using namespace testkit;

namespace {

PlanarMeasure mixed_measure() {
  MeasureComponent disk, rim;
  disk.kind = MeasureComponent::Kind::area;
  disk.label = "disk";
  disk.area = Disk{{0, 0}, 1};
  rim.kind = MeasureComponent::Kind::arc;
  rim.label = "rim";
  rim.curve = CircleShape{{0.2, 0.1}, 1.4};
  rim.density_const = 0.5;
  return PlanarMeasure({disk, rim}, 6);
}

}  // namespace

TEST_CASE("batch Cauchy transforms are bit-identical serial vs parallel") {
  PlanarMeasure mu = mixed_measure();
  std::vector<cplx> pts;
  for (int t = 0; t < 500; ++t) {
    double th = kTwoPi * t / 500;
    pts.push_back(2.2 * cplx{std::cos(th), std::sin(th)});
    pts.push_back(0.4 * cplx{std::cos(th), std::sin(th)});
  }
  std::vector<cplx> serial, parallel;
  {
    par::serial_section guard;
    serial = cauchy_transform_many(mu, pts);
  }
  par::set_enabled(true);
  parallel = cauchy_transform_many(mu, pts);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t t = 0; t < serial.size(); ++t) CHECK(serial[t] == parallel[t]);
}

TEST_CASE("gram matrices are bit-identical serial vs parallel") {
  PlanarMeasure mu = mixed_measure();
  FunctionBasis basis = FunctionBasis::monomials(0, 1.5, 24);
  GramResult gs, gp;
  {
    par::serial_section guard;
    gs = gram_matrix(basis, mu);
  }
  par::set_enabled(true);
  gp = gram_matrix(basis, mu);
  CHECK(gs.G == gp.G);
}

TEST_CASE("scans are bit-identical serial vs parallel") {
  PlanarMeasure disk = disk_area_measure(0, 1, 1, 6);
  FunctionBasis basis = FunctionBasis::monomials(0, 1, 24);
  ScanResult ss, sp;
  {
    par::serial_section guard;
    ss = scan_abpe(disk, basis, {-1.25, -1.25, 1.25, 1.25}, 1.0 / 12);
  }
  par::set_enabled(true);
  sp = scan_abpe(disk, basis, {-1.25, -1.25, 1.25, 1.25}, 1.0 / 12);
  CHECK(ss.b_final == sp.b_final);
  CHECK(ss.convergent == sp.convergent);
  CHECK(ss.detected == sp.detected);
  REQUIRE(ss.components.size() == sp.components.size());
  for (std::size_t c = 0; c < ss.components.size(); ++c)
    CHECK(ss.components[c].cells == sp.components[c].cells);
}

TEST_CASE("coloring schemes are identical serial vs parallel") {
  auto mu = std::make_shared<PlanarMeasure>(circle_measure(0, 1, 1, 4));
  SquareIntegrand phi = SquareIntegrand::abs_cauchy(mu);
  auto snapshot = [](const ColoredScheme& s) {
    std::string out;
    for (const auto& gen : s.generations)
      for (const auto* set : {&gen.green, &gen.red, &gen.yellow})
        for (const auto& c : set->sorted())
          out += std::to_string(c.i) + "," + std::to_string(c.j) + ";";
    return out;
  };
  ColoredScheme cs, cp;
  {
    par::serial_section guard;
    LightCache cache;
    cs = run_scheme(phi, 0, 3, 2, {-4, -4, 4, 4}, &cache);
  }
  par::set_enabled(true);
  {
    LightCache cache;
    cp = run_scheme(phi, 0, 3, 2, {-4, -4, 4, 4}, &cache);
  }
  CHECK(snapshot(cs) == snapshot(cp));
  CHECK(cs.terminated_with_unbounded_green == cp.terminated_with_unbounded_green);
}

TEST_CASE("sweeps are bit-identical serial vs parallel") {
  auto disk_domain = CircularDomain::annulus(0, 0.5, 1.5);
  PlanarMeasure ring = circle_measure(0, 1.0, 1.0, 4);
  BoundaryMeasure bs, bp;
  {
    par::serial_section guard;
    bs = sweep(ring, disk_domain, 512);
  }
  par::set_enabled(true);
  bp = sweep(ring, disk_domain, 512);
  REQUIRE(bs.circles.size() == bp.circles.size());
  for (std::size_t c = 0; c < bs.circles.size(); ++c) {
    CHECK(bs.circles[c].density == bp.circles[c].density);
    CHECK(bs.circles[c].mass == bp.circles[c].mass);
  }
}
