#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "capt/common.hpp"

namespace capt {

// ── Primitive shapes ─────────────────────────────────────────────────

struct Disk {
  cplx c;
  double r = 1;
};
struct AnnulusShape {
  cplx c;
  double r_in = 0.5, r_out = 1;
};
struct RectShape {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
};
struct CircleShape {
  cplx c;
  double r = 1;
  double theta0 = 0, theta1 = kTwoPi;  // arc window
};
struct SegmentShape {
  cplx a, b;
  double t0 = 0, t1 = 1;  // parameter window
};

using AreaShape = std::variant<Disk, AnnulusShape, RectShape>;
using CurveShape = std::variant<CircleShape, SegmentShape>;
using Shape = std::variant<Disk, AnnulusShape, RectShape, CircleShape, SegmentShape>;

double shape_dist(const AreaShape& s, cplx z);        // distance to closed set
bool shape_contains(const AreaShape& s, cplx z);
bool shape_contains(const Shape& s, cplx z);          // curves test proximity 1e-12
Window shape_bbox(const Shape& s);

/// Region for restrictions: union of primitive shapes, optionally complemented.
struct Region {
  std::vector<Shape> shapes;
  bool complement = false;
  bool contains(cplx z) const;
};

// ── Measure components ───────────────────────────────────────────────

using DensityFn = std::function<cplx(cplx)>;

struct MeasureComponent {
  enum class Kind { atom, arc, area };
  Kind kind = Kind::atom;
  std::string label;

  cplx point{};  // atom
  cplx mass{};   // atom

  CurveShape curve{CircleShape{}};  // arc
  AreaShape area{Disk{}};           // area

  cplx density_const{1.0, 0.0};
  DensityFn density;                     // overrides density_const when set
  std::function<bool(cplx)> mask;        // node-level indicator (restrictions)

  int nodes_hint = 0;   // 0 = derive node count from the measure resolution
  bool gauss = false;   // rect areas: composite 8-pt Gauss-Legendre panels

  cplx density_at(cplx w) const { return density ? density(w) : density_const; }
};

struct QuadNode {
  cplx w;
  cplx weight;  // includes density, Jacobian and mask
};

/// Finite measure with compact support, represented as typed components with
/// precomputed quadrature nodes.  Immutable after construction.
class PlanarMeasure {
 public:
  PlanarMeasure() = default;
  explicit PlanarMeasure(std::vector<MeasureComponent> comps, int resolution = 8,
                         bool positive = false);

  int resolution() const { return m_; }
  bool positive_flag() const { return positive_; }
  std::size_t component_count() const { return comps_.size(); }
  const MeasureComponent& component(std::size_t i) const { return comps_[i]; }
  const std::vector<QuadNode>& nodes(std::size_t i) const { return nodes_[i]; }

  /// Sum of all node weights and atom masses.
  cplx mass() const;
  double total_mass() const { return mass().real(); }

  /// Integral of f against the measure; fixed summation order.
  cplx integrate(const std::function<cplx(cplx)>& f) const;

  /// Component-label restriction.
  PlanarMeasure restrict_labels(const std::vector<std::string>& labels) const;
  /// Region restriction; exact for concentric radial clips, circle/segment
  /// arc windows and rect-rect intersections, node-masked otherwise.
  PlanarMeasure restrict_region(const Region& region) const;

  /// Measure with |density| and |mass| on the same supports.
  PlanarMeasure absolute() const;

  /// Distance from z to the support.
  double support_dist(cplx z) const;
  Window support_bbox(double pad = 0.0) const;

 private:
  void build();

  int m_ = 8;
  bool positive_ = false;
  std::vector<MeasureComponent> comps_;
  std::vector<std::vector<QuadNode>> nodes_;
};

/// Node-spacing scale used by the Cauchy-transform near-field switch.
double component_node_spacing(const MeasureComponent& c, int m);

}  // namespace capt
