#pragma once

#include <vector>

#include "capt/measure.hpp"

namespace capt {

/// Domain bounded by finitely many disjoint circles.  Closed-form kernels
/// exist for connectivity 1 (disk) and 2 (annulus); anything higher is
/// rejected loudly.
struct CircularDomain {
  CircleShape outer;
  std::vector<CircleShape> inner;

  int connectivity() const { return 1 + static_cast<int>(inner.size()); }
  bool interior_contains(cplx z, double margin = 1e-12) const;
  bool on_boundary(cplx z, double tol = 1e-9) const;

  static CircularDomain disk(cplx c, double r) { return {{c, r}, {}}; }
  static CircularDomain annulus(cplx c, double r_in, double r_out) {
    return {{c, r_out}, {{c, r_in}}};
  }
};

/// Measure on the boundary circles of a domain: arclength density samples at
/// n equispaced angles per circle, plus atoms.  Per-circle masses are
/// tracked exactly alongside the samples.
struct BoundaryMeasure {
  struct CirclePart {
    CircleShape circle;
    std::vector<double> density;  // w.r.t. arclength, at angles 2*pi*t/n
    double mass = 0;
  };
  struct Atom {
    cplx point;
    double mass = 0;
  };
  std::vector<CirclePart> circles;
  std::vector<Atom> atoms;

  double total_mass() const;
  /// Integral of f against the measure (trapezoid over samples + atoms).
  double integrate(const std::function<double(cplx)>& f) const;
};

/// Harmonic measure of the domain at z: Poisson kernel for the disk, the
/// separation-of-variables solution for the annulus.  Masses are exact
/// (1 for the disk; log-law split for the annulus).
BoundaryMeasure harmonic_measure(const CircularDomain& domain, cplx z, int samples = 4096);

/// Harmonic extension of boundary data given as per-circle functions of the
/// boundary angle; used as the duality oracle for sweeps.
double harmonic_extension(const CircularDomain& domain, cplx z,
                          const std::vector<std::function<double(double)>>& data, int quad = 4096);

/// Sweep of a positive measure supported on the closure of the domain:
/// boundary parts pass through unchanged, interior parts push their mass to
/// the boundary through the harmonic-measure kernel.
BoundaryMeasure sweep(const PlanarMeasure& mu, const CircularDomain& domain, int samples = 4096);

struct SingularityReport {
  bool singular = false;
  double overlap = 0;  // min-density mass on shared circles + shared atoms
  double mass1 = 0, mass2 = 0;
};

/// Mutual singularity up to quadrature granularity: overlap mass at most
/// tol * min(total masses).
SingularityReport mutually_singular(const BoundaryMeasure& a, const BoundaryMeasure& b,
                                    double tol = 1e-3);

}  // namespace capt
