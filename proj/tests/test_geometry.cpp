#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "capt/geometry.hpp"
#include "helpers.hpp"

using namespace capt;
using testkit::Rng;

TEST_CASE("locate_square examples") {
  DyadicSquare s = locate_square({0.3, 0.4}, 1);
  CHECK(s.k == 1);
  CHECK(s.i == 0);
  CHECK(s.j == 0);
  CHECK(s.side() == 0.5);

  s = locate_square({0, 0}, 0);
  CHECK(s.i == 0);
  CHECK(s.j == 0);

  s = locate_square({-0.25, -0.25}, 2);
  CHECK(s.i == -1);
  CHECK(s.j == -1);
  CHECK(s.x0() == -0.25);
  CHECK(s.y0() == -0.25);
}

TEST_CASE("locate_square containment and idempotency over random points") {
  Rng rng(20240801);
  for (int t = 0; t < 10000; ++t) {
    cplx z{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    int k = static_cast<int>(rng.uniform(0, 12));
    DyadicSquare s = locate_square(z, k);
    CHECK(s.closure_contains(z));
    DyadicSquare again = locate_square(s.center(), k);
    CHECK(again == s);
  }
}

TEST_CASE("locate_square rejects negative generations") {
  CHECK_THROWS_AS(locate_square({0, 0}, -1), error);
}

TEST_CASE("is_path_of_squares examples") {
  DyadicSquare a{3, 0, 0}, side{3, 1, 0}, corner{3, 1, 1};
  std::vector<DyadicSquare> two_side{a, side};
  CHECK(is_path_of_squares(two_side));

  std::vector<DyadicSquare> two_corner{a, corner};
  CHECK_FALSE(is_path_of_squares(two_corner));

  std::vector<DyadicSquare> one{a};
  CHECK(is_path_of_squares(one));
}

TEST_CASE("is_path_of_squares rejects mixed generations") {
  std::vector<DyadicSquare> mixed{{2, 0, 0}, {3, 1, 0}};
  CHECK_THROWS_AS(is_path_of_squares(mixed), error);
}

TEST_CASE("is_path_of_squares is permutation invariant") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DyadicSquare> seq;
    int n = 2 + static_cast<int>(rng.uniform(0, 8));
    for (int t = 0; t < n; ++t)
      seq.push_back({4, static_cast<std::int64_t>(rng.uniform(0, 4)),
                     static_cast<std::int64_t>(rng.uniform(0, 4))});
    bool base = is_path_of_squares(seq);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      std::shuffle(seq.begin(), seq.end(), rng.gen);
      CHECK(is_path_of_squares(seq) == base);
    }
  }
}

TEST_CASE("hull of a single square is its 4-edge boundary") {
  SquareSet s(2);
  s.insert(3, 5);
  BarrierCurve curve = polynomial_hull_boundary(s);
  CHECK(curve.loops.size() == 1);
  CHECK(curve.edge_count() == 4);
  CHECK(curve.filled.size() == 1);
}

TEST_CASE("hull of a ring fills the hole") {
  SquareSet ring(3);
  for (std::int64_t i = 0; i <= 2; ++i)
    for (std::int64_t j = 0; j <= 2; ++j)
      if (!(i == 1 && j == 1)) ring.insert(i, j);
  BarrierCurve curve = polynomial_hull_boundary(ring);
  CHECK(curve.filled.size() == 9);        // hole filled
  CHECK(curve.filled.contains(1, 1));
  CHECK(curve.loops.size() == 1);         // outer boundary only
  CHECK(curve.edge_count() == 12);
}

TEST_CASE("hull of a 2x2 block") {
  SquareSet block(4);
  for (std::int64_t i = 0; i < 2; ++i)
    for (std::int64_t j = 0; j < 2; ++j) block.insert(i, j);
  BarrierCurve curve = polynomial_hull_boundary(block);
  CHECK(curve.filled.size() == 4);
  CHECK(curve.loops.size() == 1);
  CHECK(curve.edge_count() == 8);
}

TEST_CASE("hull rejects disconnected input") {
  SquareSet gap(2);
  gap.insert(0, 0);
  gap.insert(5, 5);
  CHECK_THROWS_AS(polynomial_hull_boundary(gap), error);
}

// Flood-fill oracle: from far outside, 4-adjacent flood constrained to the
// complement of the filled set must never enter it, and the filled set must
// contain the input.
TEST_CASE("hull flood-fill properties on random blobs") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    SquareSet blob(5);
    std::int64_t ci = 0, cj = 0;
    blob.insert(ci, cj);
    int n = 4 + static_cast<int>(rng.uniform(0, 30));
    for (int t = 0; t < n; ++t) {
      // random walk keeps the union edge-connected
      int dir = static_cast<int>(rng.uniform(0, 4));
      ci += (dir == 0) - (dir == 1);
      cj += (dir == 2) - (dir == 3);
      blob.insert(ci, cj);
      if (std::abs(ci) > 6 || std::abs(cj) > 6) ci = cj = 0;
    }
    SquareSet filled = fill_hull(blob);
    for (const auto& c : blob.sorted()) CHECK(filled.contains(c.i, c.j));

    std::int64_t i0, j0, i1, j1;
    blob.bounds(i0, j0, i1, j1);
    // exterior flood over the complement stays outside the filled region
    SquareSet seen(5);
    std::vector<DyadicSquare> stack{{5, i0 - 3, j0 - 3}};
    seen.insert(i0 - 3, j0 - 3);
    while (!stack.empty()) {
      DyadicSquare c = stack.back();
      stack.pop_back();
      CHECK_FALSE(filled.contains(c.i, c.j));
      const std::int64_t di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        std::int64_t ni = c.i + di[d], nj = c.j + dj[d];
        if (ni < i0 - 3 || ni > i1 + 3 || nj < j0 - 3 || nj > j1 + 3) continue;
        if (filled.contains(ni, nj) || seen.contains(ni, nj)) continue;
        seen.insert(ni, nj);
        stack.push_back({5, ni, nj});
      }
    }
    // every non-filled cell in the box should have been reached (no spurious
    // pockets left unfilled)
    for (std::int64_t i = i0 - 2; i <= i1 + 2; ++i)
      for (std::int64_t j = j0 - 2; j <= j1 + 2; ++j)
        CHECK((filled.contains(i, j) || seen.contains(i, j)));
  }
}

TEST_CASE("barrier loops are closed and axis-parallel") {
  SquareSet blob(4);
  blob.insert(0, 0);
  blob.insert(1, 0);
  blob.insert(1, 1);
  BarrierCurve curve = polynomial_hull_boundary(blob);
  for (const auto& loop : curve.loops) {
    CHECK(loop.size() >= 4);
    for (std::size_t t = 0; t < loop.size(); ++t) {
      auto [x0, y0] = loop[t];
      auto [x1, y1] = loop[(t + 1) % loop.size()];
      bool axis = (x0 == x1 && std::abs(y1 - y0) == 1) || (y0 == y1 && std::abs(x1 - x0) == 1);
      CHECK(axis);
    }
  }
}
