#include "capt/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "capt/cauchy.hpp"
#include "capt/parallel.hpp"

namespace capt {

// ── SquareIntegrand ──────────────────────────────────────────────────

SquareIntegrand SquareIntegrand::constant(double v) {
  require(v >= 0, errc::invalid_input, "SquareIntegrand: density must be nonnegative");
  SquareIntegrand s;
  s.is_const_ = true;
  s.cval_ = v;
  return s;
}

SquareIntegrand SquareIntegrand::pointwise(std::function<double(cplx)> f) {
  SquareIntegrand s;
  s.is_const_ = false;
  s.fn_ = std::move(f);
  return s;
}

namespace {

// |mu^| evaluator with a per-component multipole far field.  The light test
// calls it millions of times along scheme fronts far from the support, where
// a truncated moment expansion (absolute error ~1e-5 mass) is
// indistinguishable from the node sum at light-test granularity.
class AbsCauchyDensity {
 public:
  explicit AbsCauchyDensity(std::shared_ptr<const PlanarMeasure> mu) : mu_(std::move(mu)) {
    for (std::size_t i = 0; i < mu_->component_count(); ++i) {
      const auto& c = mu_->component(i);
      Part part;
      if (c.kind == MeasureComponent::Kind::atom) {
        part.is_atom = true;
        part.center = c.point;
        part.atom_mass = c.mass;
      } else {
        const auto& nodes = mu_->nodes(i);
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        for (const auto& q : nodes) {
          x0 = std::min(x0, q.w.real());
          x1 = std::max(x1, q.w.real());
          y0 = std::min(y0, q.w.imag());
          y1 = std::max(y1, q.w.imag());
        }
        part.center = {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
        for (const auto& q : nodes) part.radius = std::max(part.radius, std::abs(q.w - part.center));
        part.moments.assign(kMoments, cplx{0, 0});
        for (const auto& q : nodes) {
          cplx pw{1, 0};
          for (int p = 0; p < kMoments; ++p) {
            part.moments[p] += q.weight * pw;
            pw *= q.w - part.center;
          }
        }
        // near-support fallback at reduced resolution: light-test margins
        // dwarf the quadrature error there
        part.direct = PlanarMeasure({c}, std::min(mu_->resolution(), 2));
      }
      parts_.push_back(std::move(part));
    }
  }

  double operator()(cplx z) const {
    cplx acc = 0;
    for (const auto& part : parts_) {
      if (part.is_atom) {
        acc += part.atom_mass / (part.center - z);
        continue;
      }
      double dist = std::abs(z - part.center);
      if (dist >= part.radius / 0.72) {
        cplx u = 1.0 / (z - part.center);
        cplx s = part.moments[kMoments - 1];
        for (int p = kMoments - 2; p >= 0; --p) s = part.moments[p] + u * s;
        acc -= u * s;
      } else {
        acc += cauchy_transform(part.direct, z);
      }
    }
    return std::abs(acc);
  }

 private:
  static constexpr int kMoments = 40;
  struct Part {
    bool is_atom = false;
    cplx center{}, atom_mass{};
    double radius = 0;
    std::vector<cplx> moments;
    PlanarMeasure direct;
  };
  std::shared_ptr<const PlanarMeasure> mu_;
  std::vector<Part> parts_;
};

}  // namespace

SquareIntegrand SquareIntegrand::abs_cauchy(std::shared_ptr<const PlanarMeasure> mu) {
  SquareIntegrand s;
  s.is_const_ = false;
  auto density = std::make_shared<AbsCauchyDensity>(std::move(mu));
  s.fn_ = [density](cplx z) { return (*density)(z); };
  return s;
}

double SquareIntegrand::integral(const DyadicSquare& s) const {
  if (is_const_) return cval_ * s.area();
  static const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                 0.8611363115940526};
  static const double gl_w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
  double h = s.side();
  double cx = s.x0() + 0.5 * h, cy = s.y0() + 0.5 * h;
  double acc = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      acc += gl_w[a] * gl_w[b] * fn_(cplx{cx + 0.5 * h * gl_x[a], cy + 0.5 * h * gl_x[b]});
  return acc * h * h / 4;
}

bool is_light_square(const SquareIntegrand& phi, const DyadicSquare& s) {
  return phi.integral(s) <= s.area() * s.area();
}

std::optional<bool> LightCache::lookup(int g, std::int64_t i, std::int64_t j) const {
  auto git = gens_.find(g);
  if (git == gens_.end()) return std::nullopt;
  auto it = git->second.find(key(i, j));
  if (it == git->second.end()) return std::nullopt;
  return it->second;
}

void LightCache::store(int g, std::int64_t i, std::int64_t j, bool light) {
  gens_[g][key(i, j)] = light;
}

// ── Scheme internals ─────────────────────────────────────────────────

namespace {

struct CellRange {
  std::int64_t i0, j0, i1, j1;  // inclusive cell index bounds of the window
  bool contains(std::int64_t i, std::int64_t j) const {
    return i >= i0 && i <= i1 && j >= j0 && j <= j1;
  }
  bool on_border(std::int64_t i, std::int64_t j) const {
    return i == i0 || i == i1 || j == j0 || j == j1;
  }
};

CellRange window_cells(const Window& w, int g) {
  double scale = std::ldexp(1.0, g);
  return {static_cast<std::int64_t>(std::floor(w.x0 * scale)),
          static_cast<std::int64_t>(std::floor(w.y0 * scale)),
          static_cast<std::int64_t>(std::floor(w.x1 * scale)) - 1,
          static_cast<std::int64_t>(std::floor(w.y1 * scale)) - 1};
}

// Batched light tests over candidates, parallel, cache-backed.
std::vector<std::uint8_t> light_batch(const SquareIntegrand& phi, int g,
                                      const std::vector<DyadicSquare>& cand, LightCache* cache) {
  std::vector<std::uint8_t> out(cand.size(), 0);
  std::vector<std::int64_t> todo;
  todo.reserve(cand.size());
  for (std::size_t t = 0; t < cand.size(); ++t) {
    if (cache) {
      if (auto hit = cache->lookup(g, cand[t].i, cand[t].j)) {
        out[t] = *hit ? 1 : 0;
        continue;
      }
    }
    todo.push_back(static_cast<std::int64_t>(t));
  }
  std::vector<std::uint8_t> fresh(todo.size(), 0);
  par::for_each(static_cast<std::int64_t>(todo.size()), [&](std::int64_t q) {
    fresh[q] = is_light_square(phi, cand[todo[q]]) ? 1 : 0;
  });
  for (std::size_t q = 0; q < todo.size(); ++q) {
    out[todo[q]] = fresh[q];
    if (cache) cache->store(g, cand[todo[q]].i, cand[todo[q]].j, fresh[q] != 0);
  }
  return out;
}

// Exact squared set-gap distance (in cells) from every cell of a bounding
// box to a source set, by a two-pass parabolic envelope transform on the
// one-cell-dilated sources.
class GapTransform {
 public:
  GapTransform(const SquareSet& sources, std::int64_t pad, const CellRange& clip) {
    sources.bounds(i0_, j0_, i1_, j1_);
    i0_ = std::max(i0_ - pad, clip.i0);
    j0_ = std::max(j0_ - pad, clip.j0);
    i1_ = std::min(i1_ + pad, clip.i1);
    j1_ = std::min(j1_ + pad, clip.j1);
    nx_ = i1_ - i0_ + 1;
    ny_ = j1_ - j0_ + 1;
    if (nx_ <= 0 || ny_ <= 0) {
      nx_ = ny_ = 0;
      return;
    }
    // Finite "far" value keeps the parabola envelope arithmetic well defined
    // on source-free rows; any gap2 beyond the box stays above thresholds.
    const double kFar = 1e15;
    dist_.assign(static_cast<std::size_t>(nx_ * ny_), kFar);
    for (const auto& c : sources.sorted())
      for (std::int64_t di = -1; di <= 1; ++di)
        for (std::int64_t dj = -1; dj <= 1; ++dj) {
          std::int64_t i = c.i + di, j = c.j + dj;
          if (i >= i0_ && i <= i1_ && j >= j0_ && j <= j1_) dist_[idx(i, j)] = 0;
        }
    std::int64_t nmax = std::max(nx_, ny_);
    std::vector<double> line(nmax), d(nmax), zz(nmax + 1);
    std::vector<int> v(nmax);
    auto transform_1d = [&](std::int64_t n) {
      int k = 0;
      v[0] = 0;
      zz[0] = -kFar;
      zz[1] = kFar;
      for (int q = 1; q < n; ++q) {
        double s = ((line[q] + q * q) - (line[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
        while (s <= zz[k]) {
          --k;
          s = ((line[q] + q * q) - (line[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
        }
        ++k;
        v[k] = q;
        zz[k] = s;
        zz[k + 1] = kFar;
      }
      k = 0;
      for (int q = 0; q < n; ++q) {
        while (zz[k + 1] < q) ++k;
        d[q] = (q - v[k]) * static_cast<double>(q - v[k]) + line[v[k]];
      }
    };
    for (std::int64_t i = 0; i < nx_; ++i) {
      for (std::int64_t j = 0; j < ny_; ++j) line[j] = dist_[static_cast<std::size_t>(j * nx_ + i)];
      transform_1d(ny_);
      for (std::int64_t j = 0; j < ny_; ++j) dist_[static_cast<std::size_t>(j * nx_ + i)] = d[j];
    }
    for (std::int64_t j = 0; j < ny_; ++j) {
      for (std::int64_t i = 0; i < nx_; ++i) line[i] = dist_[static_cast<std::size_t>(j * nx_ + i)];
      transform_1d(nx_);
      for (std::int64_t i = 0; i < nx_; ++i) dist_[static_cast<std::size_t>(j * nx_ + i)] = d[i];
    }
  }

  bool in_box(std::int64_t i, std::int64_t j) const {
    return nx_ > 0 && i >= i0_ && i <= i1_ && j >= j0_ && j <= j1_;
  }
  double gap2(std::int64_t i, std::int64_t j) const { return dist_[idx(i, j)]; }
  std::int64_t i0() const { return i0_; }
  std::int64_t j0() const { return j0_; }
  std::int64_t i1() const { return i1_; }
  std::int64_t j1() const { return j1_; }

 private:
  std::size_t idx(std::int64_t i, std::int64_t j) const {
    return static_cast<std::size_t>((j - j0_) * nx_ + (i - i0_));
  }
  std::int64_t i0_ = 0, j0_ = 0, i1_ = -1, j1_ = -1, nx_ = 0, ny_ = 0;
  std::vector<double> dist_;
};

}  // namespace

std::vector<DyadicSquare> ColoredScheme::barrier_squares() const {
  std::vector<DyadicSquare> out;
  for (const auto& gen : generations) {
    for (const auto& s : gen.yellow.sorted()) out.push_back(s);
    for (const auto& s : gen.red.sorted()) out.push_back(s);
  }
  return out;
}

std::vector<DyadicSquare> ColoredScheme::colored_squares() const {
  std::vector<DyadicSquare> out;
  for (const auto& gen : generations) {
    for (const auto& s : gen.yellow.sorted()) out.push_back(s);
    for (const auto& s : gen.red.sorted()) out.push_back(s);
    for (const auto& s : gen.green.sorted()) out.push_back(s);
  }
  return out;
}

ColoredScheme run_scheme(const SquareIntegrand& phi, cplx a, int k, int max_generations,
                         Window window, LightCache* cache, std::size_t flood_cap,
                         bool with_barriers) {
  require(k >= 0, errc::invalid_input, "run_scheme: negative start generation");
  require(max_generations >= 1, errc::invalid_input, "run_scheme: need at least one generation");
  require(window.contains(a), errc::invalid_input, "run_scheme: window must contain the seed");

  ColoredScheme scheme;
  scheme.seed_point = a;
  scheme.k0 = k;
  scheme.window = window;

  DyadicSquare seed = locate_square(a, k);
  {
    CellRange range = window_cells(window, k);
    require(range.contains(seed.i, seed.j) && !range.on_border(seed.i, seed.j),
            errc::window_infeasible, "run_scheme: seed square touches the window edge");
  }

  GenerationState g0;
  g0.g = k;
  g0.green = SquareSet(k);
  g0.red = SquareSet(k);
  g0.yellow = SquareSet(k);
  g0.yellow.insert(seed);
  g0.filled = SquareSet(k);
  g0.filled.insert(seed);
  if (with_barriers) g0.barrier = boundary_of(g0.filled);
  scheme.generations.push_back(std::move(g0));

  for (int g = k + 1; g <= k + max_generations; ++g) {
    const SquareSet filled_prev = scheme.generations.back().filled.subdivided();
    CellRange range = window_cells(window, g);

    GenerationState st;
    st.g = g;
    st.green = SquareSet(g);
    st.red = SquareSet(g);
    st.yellow = SquareSet(g);

    // (i) first green wave: light squares outside the hull with a side on it
    SquareSet wave_cand(g);
    filled_prev.for_each([&](std::int64_t ci, std::int64_t cj) {
      const std::int64_t di[4] = {1, -1, 0, 0};
      const std::int64_t dj[4] = {0, 0, 1, -1};
      for (int t = 0; t < 4; ++t) {
        std::int64_t ni = ci + di[t], nj = cj + dj[t];
        if (!filled_prev.contains(ni, nj) && range.contains(ni, nj)) wave_cand.insert(ni, nj);
      }
    });
    std::vector<DyadicSquare> cand = wave_cand.sorted();
    std::vector<std::uint8_t> lit = light_batch(phi, g, cand, cache);
    std::vector<DyadicSquare> frontier;
    for (std::size_t t = 0; t < cand.size(); ++t)
      if (lit[t]) {
        st.green.insert(cand[t]);
        frontier.push_back(cand[t]);
      }

    // (ii) green closure via paths of light squares outside the hull;
    // level-synchronous so each frontier's light tests run as one batch
    bool capped = false;
    SquareSet rejected(g);
    while (!frontier.empty()) {
      if (st.green.size() > flood_cap) {
        capped = true;
        break;
      }
      SquareSet next_cand(g);
      for (const auto& c : frontier) {
        const std::int64_t di[4] = {1, -1, 0, 0};
        const std::int64_t dj[4] = {0, 0, 1, -1};
        for (int t = 0; t < 4; ++t) {
          std::int64_t ni = c.i + di[t], nj = c.j + dj[t];
          if (!range.contains(ni, nj)) continue;
          if (filled_prev.contains(ni, nj) || st.green.contains(ni, nj) ||
              rejected.contains(ni, nj))
            continue;
          next_cand.insert(ni, nj);
        }
      }
      std::vector<DyadicSquare> batch = next_cand.sorted();
      std::vector<std::uint8_t> ok = light_batch(phi, g, batch, cache);
      frontier.clear();
      for (std::size_t t = 0; t < batch.size(); ++t) {
        if (ok[t]) {
          st.green.insert(batch[t]);
          frontier.push_back(batch[t]);
        } else {
          rejected.insert(batch[t]);
        }
      }
    }

    // (iii) unbounded green path: the flood reaches the window edge
    bool unbounded = capped;
    if (!unbounded) {
      st.green.for_each([&](std::int64_t ci, std::int64_t cj) {
        if (range.on_border(ci, cj)) unbounded = true;
      });
    }
    if (unbounded) {
      st.terminated_with_unbounded_green = true;
      st.flood_capped = capped;
      st.filled = filled_prev;
      if (with_barriers) st.barrier = boundary_of(filled_prev);
      scheme.terminated_with_unbounded_green = true;
      scheme.flood_capped = capped;
      scheme.generations.push_back(std::move(st));
      break;
    }

    // (iv) gamma_g = hull of the previous barrier and the green closure
    SquareSet gamma_fill = filled_prev;
    st.green.for_each([&](std::int64_t ci, std::int64_t cj) { gamma_fill.insert(ci, cj); });
    gamma_fill = fill_hull(gamma_fill, false);

    // (v) red: outside gamma_g with a side on it
    bool red_hit_border = false;
    gamma_fill.for_each([&](std::int64_t ci, std::int64_t cj) {
      const std::int64_t di[4] = {1, -1, 0, 0};
      const std::int64_t dj[4] = {0, 0, 1, -1};
      for (int t = 0; t < 4; ++t) {
        std::int64_t ni = ci + di[t], nj = cj + dj[t];
        if (!gamma_fill.contains(ni, nj)) {
          if (!range.contains(ni, nj)) {
            red_hit_border = true;
            continue;
          }
          st.red.insert(ni, nj);
        }
      }
    });
    require(!red_hit_border, errc::window_infeasible,
            "run_scheme: colored region reached the window edge");

    // (vi) yellow: outside, no side on gamma_g, within (g^2)2^-g of a red
    // square.  Integer test: squared set-gap in cells <= g^4.
    if (!st.red.empty()) {
      std::int64_t reach = static_cast<std::int64_t>(g) * g;
      GapTransform gap(st.red, reach + 1, range);
      double limit = static_cast<double>(reach) * static_cast<double>(reach);
      for (std::int64_t j = gap.j0(); j <= gap.j1(); ++j)
        for (std::int64_t i = gap.i0(); i <= gap.i1(); ++i) {
          if (gap.gap2(i, j) > limit) continue;
          if (gamma_fill.contains(i, j) || st.red.contains(i, j)) continue;
          require(!range.on_border(i, j), errc::window_infeasible,
                  "run_scheme: colored region reached the window edge");
          st.yellow.insert(i, j);
        }
    }

    // Gamma_g: hull of everything colored through this generation
    SquareSet all = std::move(gamma_fill);
    st.red.for_each([&](std::int64_t ci, std::int64_t cj) { all.insert(ci, cj); });
    st.yellow.for_each([&](std::int64_t ci, std::int64_t cj) { all.insert(ci, cj); });
    st.filled = fill_hull(all, false);
    if (with_barriers) st.barrier = boundary_of(st.filled);
    scheme.generations.push_back(std::move(st));
  }
  return scheme;
}

// ── Classification ───────────────────────────────────────────────────

namespace {

// Angular coverage of the circle |z - a| = delta by closed colored squares.
bool circle_covered(cplx a, double delta, const std::vector<DyadicSquare>& squares) {
  std::vector<std::pair<double, double>> arcs;
  for (const auto& s : squares) {
    if (s.dist(a) > delta || s.dist_far(a) < delta) continue;
    // crossing angles of the four edge lines
    std::vector<double> cuts;
    auto add_line = [&](double v, bool xline) {
      double rel = (v - (xline ? a.real() : a.imag())) / delta;
      if (std::abs(rel) <= 1) {
        double off = std::acos(rel);
        // x-lines: cos(t) = rel; y-lines: sin(t) = rel <=> cos(t - pi/2) = rel
        double base = xline ? 0.0 : kPi / 2;
        cuts.push_back(std::remainder(base + off, kTwoPi));
        cuts.push_back(std::remainder(base - off, kTwoPi));
      }
    };
    add_line(s.x0(), true);
    add_line(s.x1(), true);
    add_line(s.y0(), false);
    add_line(s.y1(), false);
    cuts.push_back(-kPi);
    cuts.push_back(kPi);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
      double lo = cuts[t], hi = cuts[t + 1];
      if (hi - lo < 1e-15) continue;
      double mid = 0.5 * (lo + hi);
      if (s.closure_contains(a + delta * cplx{std::cos(mid), std::sin(mid)}))
        arcs.emplace_back(lo, hi);
    }
  }
  if (arcs.empty()) return false;
  std::sort(arcs.begin(), arcs.end());
  const double eps = 1e-9;
  double cover_to = -kPi;
  for (const auto& [lo, hi] : arcs) {
    if (lo > cover_to + eps) return false;
    cover_to = std::max(cover_to, hi);
  }
  return cover_to >= kPi - eps;
}

}  // namespace

PointClass classify_point(const SquareIntegrand& phi, cplx a, const ClassifyBudget& budget,
                          LightCache* cache) {
  PointClass out;
  double W = budget.window_halfwidth;
  Window window{a.real() - W, a.imag() - W, a.real() + W, a.imag() + W};

  // Fine stage: at fine scales a heavy point keeps every nearby square
  // non-light, so the scheme stays pure barrier.  Any green is light
  // evidence, so the flood cap can be small.
  std::vector<bool> fine_light;
  for (int k = budget.k_fine_lo; k <= budget.k_fine_hi; ++k) {
    ColoredScheme s = run_scheme(phi, a, k, budget.fine_generations, window, cache,
                                 budget.fine_flood_cap, false);
    bool any_green = s.terminated_with_unbounded_green;
    for (const auto& gen : s.generations) any_green = any_green || !gen.green.empty();
    fine_light.push_back(any_green);
  }

  // Coarse stage: barrier-circle witness.  delta samples start above the
  // seed scale so tiny circles inside the seed square do not decide.
  std::vector<bool> coarse_heavy;
  double witness_delta = 0;
  int witness_k = budget.k_coarse_hi;
  for (int k = budget.k_coarse_lo; k <= budget.k_coarse_hi; ++k) {
    ColoredScheme s = run_scheme(phi, a, k, budget.coarse_generations, window, cache,
                                 budget.flood_cap, false);
    if (s.terminated_with_unbounded_green) {
      coarse_heavy.push_back(false);
      witness_delta = 0;
      continue;
    }
    double h = std::ldexp(1.0, -k);
    bool all_covered = true;
    double covered = 0, first_gap = 0;
    for (double delta : {2 * h, 4 * h, 8 * h}) {
      // barrier material near the circle only (coverage is order blind)
      std::vector<DyadicSquare> near;
      for (const auto& gen : s.generations)
        for (const auto* set : {&gen.yellow, &gen.red})
          set->for_each([&](std::int64_t ci, std::int64_t cj) {
            DyadicSquare sq{gen.g, ci, cj};
            if (sq.dist(a) <= delta && sq.dist_far(a) >= delta) near.push_back(sq);
          });
      if (circle_covered(a, delta, near)) {
        covered = delta;
      } else {
        all_covered = false;
        first_gap = delta;
        break;
      }
    }
    coarse_heavy.push_back(all_covered);
    witness_delta = all_covered ? covered : first_gap;
    witness_k = k;
  }

  bool heavy = !fine_light.back();
  out.verdict = heavy ? PointClass::Verdict::Heavy : PointClass::Verdict::Light;
  bool agree = true;
  for (bool l : fine_light) agree = agree && (l != heavy);
  for (bool hh : coarse_heavy) agree = agree && (hh == heavy);
  out.confidence = agree ? PointClass::Confidence::proved_at_resolution
                         : PointClass::Confidence::resolution_limited;
  out.witness_delta = witness_delta;
  out.decided_at_k = heavy ? witness_k : budget.k_fine_hi;
  return out;
}

VanishingReport vanishing_consistency(const PlanarMeasure& mu, const AreaShape& region,
                                      int sample_count, const ClassifyBudget& budget,
                                      double mass_tol) {
  require(sample_count >= 1, errc::invalid_input, "vanishing_consistency: need samples");
  auto shared = std::make_shared<PlanarMeasure>(mu);
  SquareIntegrand phi = SquareIntegrand::abs_cauchy(shared);
  LightCache cache;

  // Deterministic grid of interior sample points.
  Window b = shape_bbox(std::visit([](const auto& s) { return Shape{s}; }, region));
  std::vector<cplx> pts;
  for (int n = 3; static_cast<int>(pts.size()) < sample_count && n < 64; n += 2) {
    pts.clear();
    for (int sy = 0; sy < n && static_cast<int>(pts.size()) < sample_count; ++sy)
      for (int sx = 0; sx < n && static_cast<int>(pts.size()) < sample_count; ++sx) {
        cplx z{b.x0 + b.width() * (sx + 0.5) / n, b.y0 + b.height() * (sy + 0.5) / n};
        if (shape_dist(region, z) <= 0 && shape_contains(region, z)) pts.push_back(z);
      }
  }
  require(!pts.empty(), errc::invalid_input, "vanishing_consistency: region has no samples");

  VanishingReport rep;
  rep.samples = static_cast<int>(pts.size());
  for (cplx z : pts) {
    PointClass pc = classify_point(phi, z, budget, &cache);
    if (pc.verdict == PointClass::Verdict::Light) ++rep.light;
    rep.points.emplace_back(z, pc);
  }
  rep.fraction_light = static_cast<double>(rep.light) / rep.samples;

  Region reg;
  std::visit([&](const auto& s) { reg.shapes.push_back(Shape{s}); }, region);
  rep.mass = mu.absolute().restrict_region(reg).total_mass();
  rep.inconsistent = (rep.light == rep.samples) && (rep.mass > mass_tol);
  return rep;
}

}  // namespace capt
