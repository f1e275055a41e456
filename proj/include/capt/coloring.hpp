#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "capt/geometry.hpp"
#include "capt/measure.hpp"

namespace capt {

/// Nonnegative density whose only use is the per-square integral of the
/// light test.  Constants integrate exactly; everything else goes through a
/// 4x4 Gauss rule per square.
class SquareIntegrand {
 public:
  static SquareIntegrand constant(double v);
  static SquareIntegrand pointwise(std::function<double(cplx)> f);
  /// |mu^| evaluated on demand.
  static SquareIntegrand abs_cauchy(std::shared_ptr<const PlanarMeasure> mu);

  double integral(const DyadicSquare& s) const;
  double value(cplx z) const { return is_const_ ? cval_ : fn_(z); }
  bool is_constant() const { return is_const_; }

 private:
  bool is_const_ = true;
  double cval_ = 0;
  std::function<double(cplx)> fn_;
};

/// Light test: integral of phi over S is at most Area(S)^2.
bool is_light_square(const SquareIntegrand& phi, const DyadicSquare& s);

/// Memoized light tests keyed by (generation, cell); shared across scheme
/// runs over the same density.
class LightCache {
 public:
  std::optional<bool> lookup(int g, std::int64_t i, std::int64_t j) const;
  void store(int g, std::int64_t i, std::int64_t j, bool light);

 private:
  static std::uint64_t key(std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(i))) << 32) |
           static_cast<std::uint32_t>(static_cast<std::int32_t>(j));
  }
  std::unordered_map<int, std::unordered_map<std::uint64_t, bool>> gens_;
};

/// One generation of the coloring scheme.  `filled` is the polynomially
/// convex hull of everything colored so far (the region bounded by Gamma_g).
struct GenerationState {
  int g = 0;
  SquareSet green, red, yellow;
  SquareSet filled;
  BarrierCurve barrier;
  bool terminated_with_unbounded_green = false;
  bool flood_capped = false;
};

struct ColoredScheme {
  cplx seed_point;
  int k0 = 1;
  Window window;
  std::vector<GenerationState> generations;
  bool terminated_with_unbounded_green = false;
  bool flood_capped = false;

  const GenerationState& last() const { return generations.back(); }
  /// All non-green colored squares (seed and ring colors) across
  /// generations; the barrier material of the light/heavy criterion.
  std::vector<DyadicSquare> barrier_squares() const;
  std::vector<DyadicSquare> colored_squares() const;
};

/// Faithful transcription of the coloring steps: seed yellow square, then
/// per generation green wave + closure, termination on an unbounded green
/// path, red on the new hull boundary, yellow within (g^2)2^-g of red.
/// Barrier polylines only matter for rendering and the hull tests; callers
/// that just classify skip their extraction.
ColoredScheme run_scheme(const SquareIntegrand& phi, cplx a, int k, int max_generations,
                         Window window, LightCache* cache = nullptr,
                         std::size_t flood_cap = static_cast<std::size_t>(-1),
                         bool with_barriers = true);

// ── Point classification ─────────────────────────────────────────────

/// Generation budget 6 by default: four coarse generations for the barrier
/// witness plus one generation per fine-scale run for the verdict.
/// Fine-stage floods stop at the first green evidence.
struct ClassifyBudget {
  int k_coarse_lo = 2, k_coarse_hi = 3;
  int coarse_generations = 4;
  int k_fine_lo = 11, k_fine_hi = 12;
  int fine_generations = 1;
  std::size_t flood_cap = 20000;
  std::size_t fine_flood_cap = 64;
  double window_halfwidth = 8.0;
};

struct PointClass {
  enum class Verdict { Light, Heavy };
  enum class Confidence { proved_at_resolution, resolution_limited };
  Verdict verdict = Verdict::Light;
  Confidence confidence = Confidence::resolution_limited;
  double witness_delta = 0;  // covered barrier radius (heavy) or first gap (light)
  int decided_at_k = 0;
};

/// Heavy iff fine-scale runs stay pure barrier (no green appears) and the
/// coarse runs erect full barrier circles around the point.
PointClass classify_point(const SquareIntegrand& phi, cplx a, const ClassifyBudget& budget = {},
                          LightCache* cache = nullptr);

// ── Vanishing consistency (light region vs measure mass) ─────────────

struct VanishingReport {
  int samples = 0;
  int light = 0;
  double fraction_light = 0;
  double mass = 0;
  bool inconsistent = false;  // all sampled light but mass > tolerance
  std::vector<std::pair<cplx, PointClass>> points;
};

VanishingReport vanishing_consistency(const PlanarMeasure& mu, const AreaShape& region,
                                      int sample_count, const ClassifyBudget& budget = {},
                                      double mass_tol = 1e-9);

}  // namespace capt
