#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "capt/common.hpp"

namespace capt {

/// Open square of generation k: side 2^-k, lower-left corner at
/// (i*2^-k, j*2^-k).  Coordinates are exact integers; floating point enters
/// only when rendering or integrating.
struct DyadicSquare {
  int k = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;

  double side() const { return std::ldexp(1.0, -k); }
  double area() const { return std::ldexp(1.0, -2 * k); }
  double x0() const { return static_cast<double>(i) * side(); }
  double y0() const { return static_cast<double>(j) * side(); }
  double x1() const { return static_cast<double>(i + 1) * side(); }
  double y1() const { return static_cast<double>(j + 1) * side(); }
  cplx center() const { return {x0() + 0.5 * side(), y0() + 0.5 * side()}; }
  bool closure_contains(cplx z) const {
    return z.real() >= x0() && z.real() <= x1() && z.imag() >= y0() && z.imag() <= y1();
  }
  /// Distance from a point to the closed square (0 inside).
  double dist(cplx z) const;
  /// Farthest distance from a point to the closed square (a corner).
  double dist_far(cplx z) const;

  friend bool operator==(const DyadicSquare&, const DyadicSquare&) = default;
};

/// Set of same-generation squares with O(1) membership.
class SquareSet {
 public:
  SquareSet() = default;
  explicit SquareSet(int k) : k_(k) {}

  int generation() const { return k_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  void insert(std::int64_t i, std::int64_t j) { cells_.insert(key(i, j)); }
  void insert(const DyadicSquare& s);
  void reserve(std::size_t n) { cells_.reserve(n); }
  bool contains(std::int64_t i, std::int64_t j) const { return cells_.count(key(i, j)) != 0; }
  bool contains(const DyadicSquare& s) const;

  /// Members in (j, i) lexicographic order; every consumer that affects
  /// output byte streams iterates through this.
  std::vector<DyadicSquare> sorted() const;

  /// Unordered traversal for order-independent work (set algebra, grid
  /// marking); anything user-visible goes through sorted().
  template <class F>
  void for_each(F&& fn) const {
    for (std::uint64_t c : cells_) {
      std::int64_t i, j;
      unkey(c, i, j);
      fn(i, j);
    }
  }

  /// Each square split into its four generation k+1 children.
  SquareSet subdivided() const;

  /// Integer bounding box [i0,i1] x [j0,j1]; undefined on empty sets.
  void bounds(std::int64_t& i0, std::int64_t& j0, std::int64_t& i1, std::int64_t& j1) const;

 private:
  static std::uint64_t key(std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(i))) << 32) |
           static_cast<std::uint32_t>(static_cast<std::int32_t>(j));
  }
  static void unkey(std::uint64_t k, std::int64_t& i, std::int64_t& j) {
    i = static_cast<std::int32_t>(k >> 32);
    j = static_cast<std::int32_t>(k & 0xffffffffu);
  }

  int k_ = 0;
  std::unordered_set<std::uint64_t> cells_;

  friend class SquareGrid;
};

/// Closed axis-parallel polygonal curve(s) on the generation-k lattice,
/// bounding a filled cell region.  `loops` hold lattice vertices scaled by
/// 2^-k; `filled` is the enclosed region (holes already filled).
struct BarrierCurve {
  int k = 0;
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> loops;
  SquareSet filled;

  std::size_t edge_count() const;
};

/// Square of generation k whose closure contains z.  Points on grid lines
/// resolve by floor(coord * 2^k), i.e. the square having the point on its
/// lower-left boundary wins.
DyadicSquare locate_square(cplx z, int k);

/// True iff the interior of the union of closures is connected, which for
/// same-generation dyadic squares is edge-adjacency connectivity of the set.
bool is_path_of_squares(std::span<const DyadicSquare> seq);
bool is_path_of_squares(const SquareSet& set);

/// Fill the bounded complement components of a connected square union.
/// The connectivity precondition check walks the whole set; callers whose
/// unions are connected by construction may skip it.
SquareSet fill_hull(const SquareSet& s, bool check_connected = true);

/// Boundary of (union of closures + bounded complement components).
BarrierCurve polynomial_hull_boundary(const SquareSet& s);

/// Boundary extraction for an already-filled region.
BarrierCurve boundary_of(const SquareSet& filled);

}  // namespace capt
