#pragma once

// Shared fixtures and independent oracles for the test suites.  Everything
// here must stay independent of the implementation paths it checks: closed
// forms from residue calculus, brute-force quadrature, and hand enumerations.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "capt/measure.hpp"

namespace testkit {

using capt::cplx;
using capt::kPi;
using capt::kTwoPi;

inline std::string fixture(const std::string& name) {
  return std::string(CAPT_FIXTURE_DIR) + "/" + name;
}

// ── measure builders ─────────────────────────────────────────────────

inline capt::PlanarMeasure atom_measure(cplx at, cplx mass, int m = 8) {
  capt::MeasureComponent c;
  c.kind = capt::MeasureComponent::Kind::atom;
  c.label = "a";
  c.point = at;
  c.mass = mass;
  return capt::PlanarMeasure({c}, m);
}

inline capt::PlanarMeasure circle_measure(cplx center, double r, double total_mass, int m = 8) {
  capt::MeasureComponent c;
  c.kind = capt::MeasureComponent::Kind::arc;
  c.label = "rim";
  c.curve = capt::CircleShape{center, r};
  c.density_const = total_mass / (kTwoPi * r);
  return capt::PlanarMeasure({c}, m);
}

inline capt::PlanarMeasure disk_area_measure(cplx center, double r, double density = 1,
                                             int m = 8) {
  capt::MeasureComponent c;
  c.kind = capt::MeasureComponent::Kind::area;
  c.label = "disk";
  c.area = capt::Disk{center, r};
  c.density_const = density;
  return capt::PlanarMeasure({c}, m);
}

inline capt::PlanarMeasure segment_measure(cplx a, cplx b, double density = 1, int m = 8) {
  capt::MeasureComponent c;
  c.kind = capt::MeasureComponent::Kind::arc;
  c.label = "seg";
  c.curve = capt::SegmentShape{a, b};
  c.density_const = density;
  return capt::PlanarMeasure({c}, m);
}

// ── residue-calculus oracles ─────────────────────────────────────────

// Uniform arclength mass M on |w - c| = r: transform M/(c - z) outside,
// 0 inside.
inline cplx circle_cauchy_oracle(cplx center, double r, double mass, cplx z) {
  if (std::abs(z - center) > r) return mass / (center - z);
  return 0;
}

// Constant density rho on the disk |w - c| <= r: radially symmetric, so the
// outside transform is mass/(c - z); inside it is -pi rho conj(z - c).
inline cplx disk_cauchy_oracle(cplx center, double r, double rho, cplx z) {
  double d = std::abs(z - center);
  if (d >= r) return rho * kPi * r * r / (center - z);
  return -kPi * rho * std::conj(z - center);
}

// Poisson kernel density w.r.t. arclength on |w - c| = R viewed from z.
inline double poisson_density(cplx c, double R, cplx z, double theta) {
  cplx w = c + R * cplx{std::cos(theta), std::sin(theta)};
  double rho = std::abs(z - c);
  return (R * R - rho * rho) / (kTwoPi * R * std::norm(w - z));
}

// Bergman-kernel diagonal for the unit-disk area measure: the true limit of
// the evaluation bound is sqrt(K(z,z)) with K(z,z) = 1/(pi (1-|z|^2)^2).
inline double bergman_bound_oracle(cplx z) {
  double t = 1 - std::norm(z);
  return 1.0 / (std::sqrt(kPi) * t);
}

// ── deterministic rng ────────────────────────────────────────────────

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0, 1)(gen);
  }
  cplx unit_disk() {
    while (true) {
      double x = uniform(-1, 1), y = uniform(-1, 1);
      if (x * x + y * y <= 1) return {x, y};
    }
  }
};

}  // namespace testkit
