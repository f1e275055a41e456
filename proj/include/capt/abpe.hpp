#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "capt/harmonic.hpp"
#include "capt/measure.hpp"

namespace capt {

// ── Function basis ───────────────────────────────────────────────────

/// Finite stand-in for A(K): scaled monomials ((z-c)/s)^j plus, for
/// multiply connected K, scaled negative powers (s'/(z-p))^j.  A(K) splits
/// as a direct sum over the components of K, so terms may carry an
/// indicator shape: a carried term vanishes off its component, which keeps
/// the Gram block diagonal across disjoint supports (the cross terms vanish
/// exactly).  Terms are ordered by level so prefixes form the nested
/// degree-N families.
struct BasisTerm {
  enum class Type { monomial, pole };
  Type type = Type::monomial;
  cplx center{};
  int power = 0;
  double scale = 1;
  int level = 0;
  std::optional<AreaShape> carrier;

  cplx eval(cplx z) const;
};

class FunctionBasis {
 public:
  static FunctionBasis monomials(cplx center, double scale, int degree);
  /// Monomials plus negative powers about one pole center (Laurent family).
  static FunctionBasis laurent(cplx center, double outer_scale, double inner_scale, int degree);

  FunctionBasis& add_monomials(cplx center, double scale, int degree,
                               std::optional<AreaShape> carrier = std::nullopt);
  FunctionBasis& add_pole(cplx p, double scale, int max_power,
                          std::optional<AreaShape> carrier = std::nullopt);

  int max_level() const { return max_level_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<BasisTerm>& terms() const { return terms_; }
  /// Number of terms with level <= l (prefix length).
  std::size_t prefix(int level) const;

  Eigen::VectorXcd eval(cplx z) const;

 private:
  void sort_terms();
  std::vector<BasisTerm> terms_;
  int max_level_ = 0;
};

// ── Gram matrix ──────────────────────────────────────────────────────

struct GramResult {
  Eigen::MatrixXcd G;   // G_ij = <b_i, b_j> = int b_i conj(b_j) dmu
  double cond_estimate = 0;
  bool ill_conditioned = false;  // warning carried in the result
};

GramResult gram_matrix(const FunctionBasis& basis, const PlanarMeasure& mu);

// ── Evaluation bounds ────────────────────────────────────────────────

/// Per-level bound b_N = sup { |f(lambda)| : f in span(level <= N),
/// ||f||_{L2(mu)} <= 1 }, with the convergence/divergence analysis used by
/// the scans.
struct EvaluationProfile {
  cplx lambda{};
  std::vector<double> b;  // by level
  bool divergent = false;
  bool convergent = false;
  bool rank_limited = false;   // diagnostic: Gram rank below the block size
  double growth_ratio = 0;     // geometric fit over the top third
  double increment_ratio = 0;  // decay rate of successive increments
  double tail_rel = 0;         // relative change over the last third
  double range_residual = 0;   // distance of v(lambda) from range(G)
  double cutoff_stability = 0; // shift of b under a looser pinv cutoff
  double limit = 0;            // extrapolated limit when convergent

  double b_final() const { return b.empty() ? 0 : b.back(); }
};

/// Pinned analysis constants.
constexpr double kPinvCutoff = 1e-12;
constexpr double kLooseCutoff = 1e-9;
constexpr double kGrowthDivergent = 1.05;
constexpr double kIncrementDecay = 0.97;
constexpr double kTailRel = 0.02;
constexpr double kTailRelExtrapolated = 0.3;
constexpr double kRangeResidual = 1e-6;
constexpr double kCutoffStability = 0.02;
constexpr double kRankRatio = 0.85;

/// Pseudoinverse factors of every level prefix of an equilibrated Gram
/// matrix; profiles for many points share one engine.
class EvaluationEngine {
 public:
  EvaluationEngine(const FunctionBasis& basis, GramResult gram, double cutoff = kPinvCutoff);

  EvaluationProfile profile(cplx lambda) const;
  /// Coefficients of the reproducing kernel at lambda in the basis.
  Eigen::VectorXcd kernel_coefficients(cplx lambda) const;
  double norm_of_one() const { return norm_of_one_; }
  const GramResult& gram() const { return gram_; }
  const FunctionBasis& basis() const { return basis_; }

 private:
  struct LevelFactor {
    std::size_t n = 0;             // prefix length
    Eigen::VectorXd dscale;        // equilibration 1/sqrt(G_ii), 0 = excluded
    Eigen::MatrixXcd Q;            // eigenvectors of the equilibrated block
    Eigen::VectorXd lam;           // ascending eigenvalues
    int first_strict = 0;          // first index above cutoff * lam_max
    int first_loose = 0;           // first index above kLooseCutoff * lam_max
    int rank = 0;
  };
  FunctionBasis basis_;
  GramResult gram_;
  double cutoff_;
  std::vector<LevelFactor> levels_;
  double norm_of_one_ = 1;
};

EvaluationProfile evaluation_bound(cplx lambda, const FunctionBasis& basis,
                                   const PlanarMeasure& mu, int q = 2);

std::vector<cplx> kernel_function(cplx lambda, const FunctionBasis& basis,
                                  const PlanarMeasure& mu);

// ── Region scan ──────────────────────────────────────────────────────

struct ScanComponent {
  int id = 0;
  std::vector<std::pair<int, int>> cells;  // grid indices
  Window bbox{};
  cplx sample_point{};
  int connectivity = 1;  // complement components of the cell union
};

struct ScanResult {
  Window window{};
  double res = 0;
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> convergent;  // per grid point
  std::vector<std::uint8_t> detected;    // convergent with convergent 4-neighbors
  std::vector<double> b_final;
  std::vector<ScanComponent> components;

  cplx grid_point(int ix, int iy) const {
    return {window.x0 + (ix + 0.5) * res, window.y0 + (iy + 0.5) * res};
  }
  bool detected_at(int ix, int iy) const {
    return ix >= 0 && ix < nx && iy >= 0 && iy < ny &&
           detected[static_cast<std::size_t>(iy) * nx + ix] != 0;
  }
};

ScanResult scan_abpe(const PlanarMeasure& mu, const FunctionBasis& basis, Window window,
                     double res);

// ── Density test and decomposition ───────────────────────────────────

struct DensityVerdict {
  bool dense = false;  // resolution-qualified: no abpe region found
  ScanResult scan;
};

DensityVerdict density_test(const PlanarMeasure& mu, const FunctionBasis& basis, Window window,
                            double res);

struct DecompositionPart {
  int n = 0;  // 1-based part index
  std::vector<std::string> labels;
  ScanComponent region;                // U_n estimate
  int k_component = -1;                // index into the K shape list
  int k_connectivity = 1;
  bool connectivity_ok = true;         // conn(U_n) <= conn(K component)
  bool closure_contains_support = true;
  double closure_margin = 0;           // max dist from support samples to U_n
  bool boundary_ac = true;             // mu|dU_n << harmonic measure proxy
};

struct Decomposition {
  std::vector<std::string> delta0;
  std::vector<DecompositionPart> parts;
  std::vector<std::string> failures;   // delta0 members failing the density test
  std::vector<std::string> diagnostics;
  bool harmonic_measures_singular = true;
  ScanResult scan;
  bool ok() const { return failures.empty(); }
};

struct DecomposeBudget {
  Window window{};       // zero-size = derive from K and the measure
  double res = 1.0 / 32;
  int degree = 40;
  double join_tol = 0;   // zero = 3 * res
};

/// Structure pipeline: scan for abpe components, group scene components by
/// closure contact, density-test the leftovers, then check connectivity and
/// boundary absolute continuity against the declared K shapes.
Decomposition decompose(const PlanarMeasure& mu, const std::vector<Shape>& K,
                        const DecomposeBudget& budget = {});

/// Basis adapted to the declared K shapes: monomials about the centroid,
/// plus negative powers in every annulus hole.
FunctionBasis basis_for(const PlanarMeasure& mu, const std::vector<Shape>& K, int degree);

}  // namespace capt
