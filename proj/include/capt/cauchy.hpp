#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "capt/geometry.hpp"
#include "capt/measure.hpp"

namespace capt {

/// Cauchy transform mu^(z) = integral of dmu(w)/(w - z).
///
/// Line and atom components require z off the node set; area components
/// switch to a polar rule centered at z when z is within a few node
/// spacings of the support (the 1/r Jacobian cancels the kernel).
cplx cauchy_transform(const PlanarMeasure& mu, cplx z);

/// Batch evaluation, parallel over points with per-point fixed-order sums.
std::vector<cplx> cauchy_transform_many(const PlanarMeasure& mu, std::span<const cplx> pts);

// ── Expansion at infinity ────────────────────────────────────────────

/// Leading coefficients of f(z) = f(inf) + a1/(z-z0) + a2/(z-z0)^2 + ...
struct CoefficientsAtInfinity {
  cplx z0;
  double radius = 0;
  cplx value_at_infinity;
  cplx a1;  // derivative at infinity
  cplx a2;  // beta coefficient
  double residual = 0;  // relative tail + wrong-side mode energy
};

/// Recover the expansion from samples of f on |z - z0| = radius via the
/// discrete Fourier transform; f must be analytic outside the circle.
/// A non-decaying spectrum raises a diagnostic error.
CoefficientsAtInfinity coefficients_at_infinity(const std::function<cplx(cplx)>& f, cplx z0,
                                                double radius, int samples = 128);

// ── Vitushkin covering ───────────────────────────────────────────────

/// Squares S_kl of generation k enlarged 5/4 about their centers, carrying a
/// C^1 tensor partition of unity (cubic smoothstep ramps).  The ramps of
/// adjacent members sum to one exactly, so sum_l phi_l == 1 on the covered
/// window interior.
class VitushkinCover {
 public:
  VitushkinCover(int k, Window window);

  int generation() const { return k_; }
  double cell() const { return h_; }
  const std::vector<DyadicSquare>& squares() const { return squares_; }
  cplx center(std::size_t l) const { return squares_[l].center(); }
  /// Enlarged square F_l (side 5/4 * 2^-k).
  Window enlarged(std::size_t l) const;

  double phi(std::size_t l, cplx z) const;
  /// dbar phi_l = (d/dx + i d/dy)/2, in closed form.
  cplx dbar_phi(std::size_t l, cplx z) const;
  double partition_sum(cplx z) const;
  /// Max sampled gradient norm over member supports.
  double gradient_bound_sampled(int samples_per_side = 33) const;

  /// sum_l min(1, 2^{-3k}/|z-z_l|^3) vs min(1, 2^{-k}/dist(z, union F_l)).
  double covering_sum(cplx z) const;
  double covering_bound(cplx z) const;

 private:
  int k_;
  double h_;
  Window window_;
  std::vector<DyadicSquare> squares_;
};

// ── Localization operator ────────────────────────────────────────────

/// A smooth cutoff with ramp bands: tensor product of 1-D plateau/ramp
/// profiles.  VitushkinCover members and the standalone test cutoffs both
/// reduce to this form.
struct TensorBump {
  // plateau [p0, p1], support [p0 - ramp, p1 + ramp] per axis
  double x0, x1, y0, y1, ramp;

  double value(cplx z) const;
  cplx dbar(cplx z) const;
  Window support() const { return {x0 - ramp, y0 - ramp, x1 + ramp, y1 + ramp}; }
};

/// T_phi f = phi f + (1/pi) C[f dbar(phi)]; the second term is the Cauchy
/// transform of an area measure over the ramp bands of phi.
class LocalizedFunction {
 public:
  LocalizedFunction(std::function<cplx(cplx)> f, TensorBump phi, int band_nodes = 48);

  cplx operator()(cplx w) const;
  /// Sup of |T_phi f| sampled on a grid around the support.
  double sup_sampled(int n = 41) const;
  /// Finite-difference dbar residual at z (expected ~0 off the support).
  cplx dbar_residual(cplx z, double h = 1e-4) const;
  const TensorBump& bump() const { return phi_; }
  /// 2 * max|grad phi| * diam(supp phi) * osc(f on supp phi), the measured
  /// counterpart of the modulus-of-continuity bound.
  double c0_estimate() const { return c0_; }

 private:
  std::function<cplx(cplx)> f_;
  TensorBump phi_;
  PlanarMeasure band_measure_;  // density f * dbar(phi) over the ramp bands
  double c0_ = 0;
};

/// Localization against a cover member.
LocalizedFunction localize(const std::function<cplx(cplx)>& f, const VitushkinCover& cover,
                           std::size_t l, int band_nodes = 48);

}  // namespace capt
