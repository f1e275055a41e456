#include "capt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace capt {

double DyadicSquare::dist(cplx z) const {
  double dx = std::max({x0() - z.real(), 0.0, z.real() - x1()});
  double dy = std::max({y0() - z.imag(), 0.0, z.imag() - y1()});
  return std::hypot(dx, dy);
}

double DyadicSquare::dist_far(cplx z) const {
  double dx = std::max(std::abs(z.real() - x0()), std::abs(z.real() - x1()));
  double dy = std::max(std::abs(z.imag() - y0()), std::abs(z.imag() - y1()));
  return std::hypot(dx, dy);
}

void SquareSet::insert(const DyadicSquare& s) {
  require(s.k == k_, errc::invalid_input, "SquareSet: generation mismatch");
  insert(s.i, s.j);
}

bool SquareSet::contains(const DyadicSquare& s) const {
  return s.k == k_ && contains(s.i, s.j);
}

std::vector<DyadicSquare> SquareSet::sorted() const {
  std::vector<DyadicSquare> out;
  out.reserve(cells_.size());
  for (std::uint64_t c : cells_) {
    std::int64_t i, j;
    unkey(c, i, j);
    out.push_back({k_, i, j});
  }
  std::sort(out.begin(), out.end(), [](const DyadicSquare& a, const DyadicSquare& b) {
    return a.j != b.j ? a.j < b.j : a.i < b.i;
  });
  return out;
}

SquareSet SquareSet::subdivided() const {
  SquareSet out(k_ + 1);
  out.cells_.reserve(4 * cells_.size());
  for (std::uint64_t c : cells_) {
    std::int64_t i, j;
    unkey(c, i, j);
    out.insert(2 * i, 2 * j);
    out.insert(2 * i + 1, 2 * j);
    out.insert(2 * i, 2 * j + 1);
    out.insert(2 * i + 1, 2 * j + 1);
  }
  return out;
}

void SquareSet::bounds(std::int64_t& i0, std::int64_t& j0, std::int64_t& i1, std::int64_t& j1) const {
  bool first = true;
  for (std::uint64_t c : cells_) {
    std::int64_t i, j;
    unkey(c, i, j);
    if (first) {
      i0 = i1 = i;
      j0 = j1 = j;
      first = false;
    } else {
      i0 = std::min(i0, i);
      i1 = std::max(i1, i);
      j0 = std::min(j0, j);
      j1 = std::max(j1, j);
    }
  }
}

std::size_t BarrierCurve::edge_count() const {
  std::size_t n = 0;
  for (const auto& loop : loops) n += loop.size();
  return n;
}

DyadicSquare locate_square(cplx z, int k) {
  require(k >= 0, errc::invalid_input, "locate_square: negative generation");
  double scale = std::ldexp(1.0, k);
  auto idx = [&](double x) { return static_cast<std::int64_t>(std::floor(x * scale)); };
  return {k, idx(z.real()), idx(z.imag())};
}

bool is_path_of_squares(const SquareSet& set) {
  if (set.empty()) return true;
  auto cells = set.sorted();
  SquareSet seen(set.generation());
  std::deque<DyadicSquare> queue{cells.front()};
  seen.insert(cells.front());
  std::size_t reached = 0;
  while (!queue.empty()) {
    DyadicSquare s = queue.front();
    queue.pop_front();
    ++reached;
    const std::int64_t di[4] = {1, -1, 0, 0};
    const std::int64_t dj[4] = {0, 0, 1, -1};
    for (int t = 0; t < 4; ++t) {
      std::int64_t ni = s.i + di[t], nj = s.j + dj[t];
      if (set.contains(ni, nj) && !seen.contains(ni, nj)) {
        seen.insert(ni, nj);
        queue.push_back({set.generation(), ni, nj});
      }
    }
  }
  return reached == set.size();
}

bool is_path_of_squares(std::span<const DyadicSquare> seq) {
  if (seq.empty()) return true;
  SquareSet set(seq.front().k);
  for (const auto& s : seq) {
    require(s.k == seq.front().k, errc::invalid_input,
            "is_path_of_squares: squares of mixed generations");
    set.insert(s.i, s.j);
  }
  return is_path_of_squares(set);
}

namespace {

// Dense working grid over the padded bounding box of a set.
class Grid {
 public:
  Grid(const SquareSet& s, std::int64_t pad) : k_(s.generation()) {
    s.bounds(i0_, j0_, i1_, j1_);
    i0_ -= pad;
    j0_ -= pad;
    i1_ += pad;
    j1_ += pad;
    nx_ = i1_ - i0_ + 1;
    ny_ = j1_ - j0_ + 1;
    cells_.assign(static_cast<std::size_t>(nx_ * ny_), 0);
  }
  std::uint8_t& at(std::int64_t i, std::int64_t j) {
    return cells_[static_cast<std::size_t>((j - j0_) * nx_ + (i - i0_))];
  }
  bool inside(std::int64_t i, std::int64_t j) const {
    return i >= i0_ && i <= i1_ && j >= j0_ && j <= j1_;
  }
  std::int64_t i0_ = 0, j0_ = 0, i1_ = 0, j1_ = 0, nx_ = 0, ny_ = 0;
  int k_;
  std::vector<std::uint8_t> cells_;
};

constexpr std::uint8_t kFilled = 1;
constexpr std::uint8_t kOutside = 2;

}  // namespace

namespace {

// Closure connectivity (8-adjacency): enough for a well-defined hull.
bool closures_connected(const SquareSet& s) {
  auto cells = s.sorted();
  SquareSet seen(s.generation());
  std::deque<DyadicSquare> queue{cells.front()};
  seen.insert(cells.front());
  std::size_t reached = 0;
  while (!queue.empty()) {
    DyadicSquare c = queue.front();
    queue.pop_front();
    ++reached;
    for (std::int64_t di = -1; di <= 1; ++di)
      for (std::int64_t dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        if (s.contains(c.i + di, c.j + dj) && !seen.contains(c.i + di, c.j + dj)) {
          seen.insert(c.i + di, c.j + dj);
          queue.push_back({s.generation(), c.i + di, c.j + dj});
        }
      }
  }
  return reached == s.size();
}

}  // namespace

SquareSet fill_hull(const SquareSet& s, bool check_connected) {
  require(!s.empty(), errc::invalid_input, "fill_hull: empty set");
  require(!check_connected || closures_connected(s), errc::invalid_input,
          "fill_hull: disconnected square union");

  Grid grid(s, 2);
  s.for_each([&](std::int64_t i, std::int64_t j) { grid.at(i, j) = kFilled; });

  // Flood the unbounded complement component from the padded border.
  std::deque<std::pair<std::int64_t, std::int64_t>> queue{{grid.i0_, grid.j0_}};
  grid.at(grid.i0_, grid.j0_) = kOutside;
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    const std::int64_t di[4] = {1, -1, 0, 0};
    const std::int64_t dj[4] = {0, 0, 1, -1};
    for (int t = 0; t < 4; ++t) {
      std::int64_t ni = i + di[t], nj = j + dj[t];
      if (grid.inside(ni, nj) && grid.at(ni, nj) == 0) {
        grid.at(ni, nj) = kOutside;
        queue.push_back({ni, nj});
      }
    }
  }

  SquareSet filled(s.generation());
  filled.reserve(s.size() * 2);
  for (std::int64_t j = grid.j0_; j <= grid.j1_; ++j)
    for (std::int64_t i = grid.i0_; i <= grid.i1_; ++i)
      if (grid.at(i, j) != kOutside) filled.insert(i, j);
  return filled;
}

BarrierCurve boundary_of(const SquareSet& filled) {
  BarrierCurve curve;
  curve.k = filled.generation();
  curve.filled = filled;
  if (filled.empty()) return curve;

  // Directed boundary edges, filled region kept on the left.
  // Vertex keyed as (i, j) lattice corner.
  using Vtx = std::pair<std::int64_t, std::int64_t>;
  std::map<Vtx, std::vector<Vtx>> next;
  for (const auto& c : filled.sorted()) {
    if (!filled.contains(c.i, c.j - 1))  // bottom edge, rightwards
      next[{c.i, c.j}].push_back({c.i + 1, c.j});
    if (!filled.contains(c.i + 1, c.j))  // right edge, upwards
      next[{c.i + 1, c.j}].push_back({c.i + 1, c.j + 1});
    if (!filled.contains(c.i, c.j + 1))  // top edge, leftwards
      next[{c.i + 1, c.j + 1}].push_back({c.i, c.j + 1});
    if (!filled.contains(c.i - 1, c.j))  // left edge, downwards
      next[{c.i, c.j + 1}].push_back({c.i, c.j});
  }
  for (auto& [v, outs] : next) std::sort(outs.begin(), outs.end());

  // Walk loops; at pinch vertices prefer the sharpest left turn so loops
  // stay simple.
  auto turn_rank = [](const Vtx& from, const Vtx& at, const Vtx& to) {
    std::int64_t ax = at.first - from.first, ay = at.second - from.second;
    std::int64_t bx = to.first - at.first, by = to.second - at.second;
    std::int64_t cross = ax * by - ay * bx;   // >0 left turn
    std::int64_t dot = ax * bx + ay * by;
    if (cross > 0) return 0;                  // left
    if (cross == 0 && dot > 0) return 1;      // straight
    return 2;                                 // right
  };

  while (!next.empty()) {
    auto start_it = next.begin();
    Vtx start = start_it->first;
    Vtx prev = start;
    Vtx cur = start_it->second.front();
    auto erase_edge = [&](const Vtx& a, const Vtx& b) {
      auto it = next.find(a);
      auto& outs = it->second;
      outs.erase(std::find(outs.begin(), outs.end(), b));
      if (outs.empty()) next.erase(it);
    };
    erase_edge(start, cur);
    std::vector<Vtx> loop{start};
    while (cur != start) {
      loop.push_back(cur);
      auto it = next.find(cur);
      auto& outs = it->second;
      Vtx best = outs.front();
      int best_rank = 3;
      for (const Vtx& cand : outs) {
        int r = turn_rank(prev, cur, cand);
        if (r < best_rank) {
          best_rank = r;
          best = cand;
        }
      }
      erase_edge(cur, best);
      prev = cur;
      cur = best;
    }
    curve.loops.push_back(std::move(loop));
  }
  return curve;
}

BarrierCurve polynomial_hull_boundary(const SquareSet& s) {
  return boundary_of(fill_hull(s));
}

}  // namespace capt
