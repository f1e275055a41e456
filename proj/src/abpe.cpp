#include "capt/abpe.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "capt/parallel.hpp"

namespace capt {

// ── Basis ────────────────────────────────────────────────────────────

cplx BasisTerm::eval(cplx z) const {
  if (carrier && !shape_contains(*carrier, z)) return 0;
  cplx base = type == Type::monomial ? (z - center) / scale : scale / (z - center);
  cplx v = 1;
  for (int t = 0; t < power; ++t) v *= base;
  return v;
}

FunctionBasis FunctionBasis::monomials(cplx center, double scale, int degree) {
  FunctionBasis b;
  b.add_monomials(center, scale, degree);
  return b;
}

FunctionBasis FunctionBasis::laurent(cplx center, double outer_scale, double inner_scale,
                                     int degree) {
  FunctionBasis b = monomials(center, outer_scale, degree);
  b.add_pole(center, inner_scale, degree);
  return b;
}

FunctionBasis& FunctionBasis::add_monomials(cplx center, double scale, int degree,
                                            std::optional<AreaShape> carrier) {
  require(scale > 0, errc::invalid_input, "FunctionBasis: scale must be positive");
  for (int j = 0; j <= degree; ++j)
    terms_.push_back({BasisTerm::Type::monomial, center, j, scale, j, carrier});
  sort_terms();
  return *this;
}

FunctionBasis& FunctionBasis::add_pole(cplx p, double scale, int max_power,
                                       std::optional<AreaShape> carrier) {
  require(scale > 0, errc::invalid_input, "FunctionBasis: scale must be positive");
  for (int j = 1; j <= max_power; ++j)
    terms_.push_back({BasisTerm::Type::pole, p, j, scale, j, carrier});
  sort_terms();
  return *this;
}

void FunctionBasis::sort_terms() {
  std::stable_sort(terms_.begin(), terms_.end(), [](const BasisTerm& a, const BasisTerm& b) {
    return a.level < b.level;
  });
  max_level_ = terms_.empty() ? 0 : terms_.back().level;
}

std::size_t FunctionBasis::prefix(int level) const {
  std::size_t n = 0;
  while (n < terms_.size() && terms_[n].level <= level) ++n;
  return n;
}

Eigen::VectorXcd FunctionBasis::eval(cplx z) const {
  Eigen::VectorXcd v(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) v[t] = terms_[t].eval(z);
  return v;
}

// ── Gram ─────────────────────────────────────────────────────────────

GramResult gram_matrix(const FunctionBasis& basis, const PlanarMeasure& mu) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  GramResult out;
  out.G = Eigen::MatrixXcd::Zero(n, n);

  // Chunked rank-k accumulation: basis values per node computed once.
  constexpr std::size_t kChunk = 2048;
  std::vector<cplx> pts;
  std::vector<cplx> wts;
  auto flush = [&] {
    if (pts.empty()) return;
    Eigen::MatrixXcd V(static_cast<Eigen::Index>(pts.size()), n);
    par::for_each(static_cast<std::int64_t>(pts.size()), [&](std::int64_t r) {
      V.row(r) = basis.eval(pts[r]).transpose();
    });
    Eigen::MatrixXcd Vw = V;
    for (Eigen::Index r = 0; r < Vw.rows(); ++r) Vw.row(r) *= wts[static_cast<std::size_t>(r)];
    out.G.noalias() += V.adjoint() * Vw;
    pts.clear();
    wts.clear();
  };
  for (std::size_t i = 0; i < mu.component_count(); ++i) {
    const auto& c = mu.component(i);
    if (c.kind == MeasureComponent::Kind::atom) {
      pts.push_back(c.point);
      wts.push_back(c.mass);
      if (pts.size() >= kChunk) flush();
      continue;
    }
    for (const auto& q : mu.nodes(i)) {
      if (q.weight == cplx{0.0, 0.0}) continue;
      pts.push_back(q.w);
      wts.push_back(q.weight);
      if (pts.size() >= kChunk) flush();
    }
  }
  flush();
  // G_ij = int b_i conj(b_j) dmu = (V^* W V)_{ji} conj … assemble directly:
  // we accumulated A = V^H (W V) so A_ij = sum conj(b_i) w b_j; the Gram is
  // its conjugate.
  out.G = out.G.conjugate().eval();
  // enforce Hermitian symmetry against roundoff
  out.G = (0.5 * (out.G + out.G.adjoint())).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.G, Eigen::EigenvaluesOnly);
  double lo = std::abs(es.eigenvalues().minCoeff());
  double hi = std::abs(es.eigenvalues().maxCoeff());
  out.cond_estimate = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  out.ill_conditioned = !(out.cond_estimate < 1.0 / kPinvCutoff);
  return out;
}

// ── Evaluation engine ────────────────────────────────────────────────

EvaluationEngine::EvaluationEngine(const FunctionBasis& basis, GramResult gram, double cutoff)
    : basis_(basis), gram_(std::move(gram)), cutoff_(cutoff) {
  const auto& G = gram_.G;
  require(G.rows() == static_cast<Eigen::Index>(basis.size()), errc::invalid_input,
          "EvaluationEngine: Gram size does not match the basis");
  for (int level = 0; level <= basis.max_level(); ++level) {
    LevelFactor lf;
    lf.n = basis.prefix(level);
    auto n = static_cast<Eigen::Index>(lf.n);
    lf.dscale = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = G(i, i).real();
      lf.dscale[i] = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
    }
    Eigen::MatrixXcd E(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) E(i, j) = G(i, j) * lf.dscale[i] * lf.dscale[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(E);
    lf.Q = es.eigenvectors();
    lf.lam = es.eigenvalues();
    double lmax = lf.lam.size() ? std::max(lf.lam.maxCoeff(), 0.0) : 0.0;
    lf.first_strict = static_cast<int>(n);
    lf.first_loose = static_cast<int>(n);
    for (Eigen::Index t = 0; t < lf.lam.size(); ++t) {
      if (lf.lam[t] > cutoff_ * lmax && lf.lam[t] > 0)
        lf.first_strict = std::min(lf.first_strict, static_cast<int>(t));
      if (lf.lam[t] > kLooseCutoff * lmax && lf.lam[t] > 0)
        lf.first_loose = std::min(lf.first_loose, static_cast<int>(t));
    }
    lf.rank = static_cast<int>(n) - lf.first_strict;
    levels_.push_back(std::move(lf));
  }
  if (G.rows() > 0 && G(0, 0).real() > 0) norm_of_one_ = std::sqrt(G(0, 0).real());
}

EvaluationProfile EvaluationEngine::profile(cplx lambda) const {
  EvaluationProfile p;
  p.lambda = lambda;
  Eigen::VectorXcd v = basis_.eval(lambda);
  if (v.squaredNorm() == 0.0) {
    // outside every carrier: the point is not in K, nothing to evaluate
    p.b.assign(levels_.size(), 0.0);
    return p;
  }

  double residual_final = 0, stability_final = 0;
  int rank_final = 0;
  std::size_t n_final = 0;
  for (const auto& lf : levels_) {
    auto n = static_cast<Eigen::Index>(lf.n);
    Eigen::VectorXcd u(n);
    double excluded = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      u[i] = v[i] * lf.dscale[i];
      if (lf.dscale[i] == 0.0) excluded += std::norm(v[i]);
    }
    Eigen::VectorXcd y = lf.Q.adjoint() * u;
    double b2 = 0, b2_loose = 0, kept2 = 0;
    for (Eigen::Index t = lf.first_strict; t < n; ++t) {
      double c = std::norm(y[t]) / lf.lam[t];
      b2 += c;
      if (t >= lf.first_loose) b2_loose += c;
      kept2 += std::norm(y[t]);
    }
    double unorm2 = u.squaredNorm();
    double resid2 = std::max(unorm2 - kept2, 0.0);
    double denom = unorm2 + excluded;
    double residual = denom > 0 ? std::sqrt((resid2 + excluded) / denom) : 0.0;
    p.b.push_back(std::sqrt(std::max(b2, 0.0)));
    residual_final = residual;
    stability_final = b2 > 0 ? (std::sqrt(b2) - std::sqrt(b2_loose)) / std::sqrt(b2) : 0.0;
    rank_final = lf.rank;
    n_final = lf.n;
  }
  p.range_residual = residual_final;
  p.cutoff_stability = stability_final;
  p.rank_limited = n_final > 0 && rank_final < kRankRatio * static_cast<double>(n_final);

  // Growth fit over the top third of levels.
  const int L = static_cast<int>(p.b.size()) - 1;
  if (L >= 3) {
    int lo = std::max(1, L - std::max(2, L / 3));
    double acc = 0;
    int cnt = 0;
    for (int t = lo; t < L; ++t) {
      double b0 = p.b[t], b1 = p.b[t + 1];
      if (b0 > 0 && b1 > 0) {
        acc += std::log(b1 / b0);
        ++cnt;
      }
    }
    p.growth_ratio = cnt ? std::exp(acc / cnt) : 1.0;
    p.divergent = p.growth_ratio >= kGrowthDivergent ||
                  !std::isfinite(p.b.back()) || p.b.back() > 1e12;

    int mid = std::max(0, L - std::max(1, L / 3));
    double bl = p.b[L], bm = p.b[mid];
    p.tail_rel = bl > 0 ? (bl - bm) / bl : 0.0;

    // Ratio of successive increments (median over the top two thirds).
    std::vector<double> ratios;
    for (int t = std::max(1, L / 3); t < L; ++t) {
      double d0 = p.b[t] - p.b[t - 1], d1 = p.b[t + 1] - p.b[t];
      if (d0 > 1e-14 * (1 + p.b[L]) && d1 >= 0) ratios.push_back(d1 / d0);
    }
    if (!ratios.empty()) {
      std::sort(ratios.begin(), ratios.end());
      p.increment_ratio = ratios[ratios.size() / 2];
    }
    // Convergent either because the profile is resolved (tiny tail) or
    // because the increments decay geometrically and the limit is reached by
    // extrapolation.  Both branches additionally require v(lambda) to lie in
    // the numerically resolved range of the Gram (residual) and the bound to
    // be insensitive to the pseudoinverse cutoff (stability); rank-truncated
    // plateaus fail one of those.
    bool resolved = std::abs(p.tail_rel) <= kTailRel;
    bool extrapolable = p.increment_ratio > 0 && p.increment_ratio <= kIncrementDecay &&
                        p.tail_rel >= 0 && p.tail_rel <= kTailRelExtrapolated;
    p.convergent = !p.divergent && p.range_residual <= kRangeResidual &&
                   std::abs(p.cutoff_stability) <= kCutoffStability &&
                   (resolved || extrapolable);
    if (p.convergent) {
      double rho = p.increment_ratio;
      double d_last = L >= 1 ? std::max(p.b[L] - p.b[L - 1], 0.0) : 0.0;
      p.limit = (rho > 0 && rho < 1) ? p.b[L] + d_last * rho / (1 - rho) : p.b[L];
    }
  }
  return p;
}

Eigen::VectorXcd EvaluationEngine::kernel_coefficients(cplx lambda) const {
  EvaluationProfile p = profile(lambda);
  require(p.convergent, errc::no_kernel, "kernel_function: no convergent profile at lambda");
  const auto& lf = levels_.back();
  auto n = static_cast<Eigen::Index>(lf.n);
  Eigen::VectorXcd v = basis_.eval(lambda);
  Eigen::VectorXcd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = v[i] * lf.dscale[i];
  Eigen::VectorXcd y = lf.Q.adjoint() * u;
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index t = lf.first_strict; t < n; ++t) w += (y[t] / lf.lam[t]) * lf.Q.col(t);
  Eigen::VectorXcd coeff(n);
  for (Eigen::Index i = 0; i < n; ++i) coeff[i] = std::conj(w[i] * lf.dscale[i]);
  return coeff;
}

EvaluationProfile evaluation_bound(cplx lambda, const FunctionBasis& basis,
                                   const PlanarMeasure& mu, int q) {
  require(q == 2, errc::unsupported, "evaluation_bound: only q = 2 is supported");
  EvaluationEngine engine(basis, gram_matrix(basis, mu));
  return engine.profile(lambda);
}

std::vector<cplx> kernel_function(cplx lambda, const FunctionBasis& basis,
                                  const PlanarMeasure& mu) {
  EvaluationEngine engine(basis, gram_matrix(basis, mu));
  Eigen::VectorXcd c = engine.kernel_coefficients(lambda);
  return {c.data(), c.data() + c.size()};
}

// ── Scan ─────────────────────────────────────────────────────────────

ScanResult scan_abpe(const PlanarMeasure& mu, const FunctionBasis& basis, Window window,
                     double res) {
  require(res > 0, errc::invalid_input, "scan_abpe: resolution must be positive");
  ScanResult scan;
  scan.window = window;
  scan.res = res;
  scan.nx = static_cast<int>(std::lround(window.width() / res));
  scan.ny = static_cast<int>(std::lround(window.height() / res));
  require(scan.nx >= 2 && scan.ny >= 2, errc::window_infeasible,
          "scan_abpe: window too small for the resolution");

  EvaluationEngine engine(basis, gram_matrix(basis, mu));
  const std::size_t total = static_cast<std::size_t>(scan.nx) * scan.ny;
  scan.convergent.assign(total, 0);
  scan.detected.assign(total, 0);
  scan.b_final.assign(total, 0.0);
  par::for_each(static_cast<std::int64_t>(total), [&](std::int64_t t) {
    int ix = static_cast<int>(t % scan.nx), iy = static_cast<int>(t / scan.nx);
    EvaluationProfile p = engine.profile(scan.grid_point(ix, iy));
    scan.convergent[t] = p.convergent ? 1 : 0;
    scan.b_final[t] = p.convergent ? p.limit : p.b_final();
  });

  // Detected = convergent with all 4-neighbors convergent (openness at grid
  // granularity; isolated convergent points are not regions).
  auto conv = [&](int ix, int iy) {
    return ix >= 0 && ix < scan.nx && iy >= 0 && iy < scan.ny &&
           scan.convergent[static_cast<std::size_t>(iy) * scan.nx + ix] != 0;
  };
  for (int iy = 0; iy < scan.ny; ++iy)
    for (int ix = 0; ix < scan.nx; ++ix)
      if (conv(ix, iy) && conv(ix - 1, iy) && conv(ix + 1, iy) && conv(ix, iy - 1) &&
          conv(ix, iy + 1))
        scan.detected[static_cast<std::size_t>(iy) * scan.nx + ix] = 1;

  // 4-adjacency components of the detected set.
  std::vector<int> comp(total, -1);
  int next_id = 0;
  for (int iy = 0; iy < scan.ny; ++iy)
    for (int ix = 0; ix < scan.nx; ++ix) {
      std::size_t t = static_cast<std::size_t>(iy) * scan.nx + ix;
      if (!scan.detected[t] || comp[t] >= 0) continue;
      ScanComponent sc;
      sc.id = next_id;
      std::deque<std::pair<int, int>> queue{{ix, iy}};
      comp[t] = next_id;
      while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop_front();
        sc.cells.push_back({cx, cy});
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          int nx2 = cx + dx[d], ny2 = cy + dy[d];
          if (nx2 < 0 || nx2 >= scan.nx || ny2 < 0 || ny2 >= scan.ny) continue;
          std::size_t u = static_cast<std::size_t>(ny2) * scan.nx + nx2;
          if (scan.detected[u] && comp[u] < 0) {
            comp[u] = next_id;
            queue.push_back({nx2, ny2});
          }
        }
      }
      std::sort(sc.cells.begin(), sc.cells.end(),
                [](auto& a, auto& b) { return a.second != b.second ? a.second < b.second : a.first < b.first; });
      ++next_id;
      scan.components.push_back(std::move(sc));
    }

  for (auto& sc : scan.components) {
    int ix0 = scan.nx, ix1 = -1, iy0 = scan.ny, iy1 = -1;
    for (auto [ix, iy] : sc.cells) {
      ix0 = std::min(ix0, ix);
      ix1 = std::max(ix1, ix);
      iy0 = std::min(iy0, iy);
      iy1 = std::max(iy1, iy);
    }
    sc.bbox = {window.x0 + ix0 * res, window.y0 + iy0 * res, window.x0 + (ix1 + 1) * res,
               window.y0 + (iy1 + 1) * res};
    // representative: cell closest to the bbox center
    cplx target{0.5 * (sc.bbox.x0 + sc.bbox.x1), 0.5 * (sc.bbox.y0 + sc.bbox.y1)};
    double best = std::numeric_limits<double>::infinity();
    for (auto [ix, iy] : sc.cells) {
      cplx p = scan.grid_point(ix, iy);
      if (std::abs(p - target) < best) {
        best = std::abs(p - target);
        sc.sample_point = p;
      }
    }

    // connectivity: complement components of the cell union in a padded box
    int bx0 = ix0 - 1, bx1 = ix1 + 1, by0 = iy0 - 1, by1 = iy1 + 1;
    int w = bx1 - bx0 + 1, h = by1 - by0 + 1;
    std::vector<std::uint8_t> inside(static_cast<std::size_t>(w) * h, 0);
    for (auto [ix, iy] : sc.cells)
      inside[static_cast<std::size_t>(iy - by0) * w + (ix - bx0)] = 1;
    std::vector<int> mark(static_cast<std::size_t>(w) * h, -1);
    int comps = 0;
    for (int sy = 0; sy < h; ++sy)
      for (int sx = 0; sx < w; ++sx) {
        std::size_t t = static_cast<std::size_t>(sy) * w + sx;
        if (inside[t] || mark[t] >= 0) continue;
        std::deque<std::pair<int, int>> queue{{sx, sy}};
        mark[t] = comps;
        while (!queue.empty()) {
          auto [cx, cy] = queue.front();
          queue.pop_front();
          const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
          for (int d = 0; d < 4; ++d) {
            int ux = cx + dx[d], uy = cy + dy[d];
            if (ux < 0 || ux >= w || uy < 0 || uy >= h) continue;
            std::size_t u = static_cast<std::size_t>(uy) * w + ux;
            if (!inside[u] && mark[u] < 0) {
              mark[u] = comps;
              queue.push_back({ux, uy});
            }
          }
        }
        ++comps;
      }
    sc.connectivity = comps;
  }
  return scan;
}

DensityVerdict density_test(const PlanarMeasure& mu, const FunctionBasis& basis, Window window,
                            double res) {
  DensityVerdict v;
  v.scan = scan_abpe(mu, basis, window, res);
  v.dense = v.scan.components.empty();
  return v;
}

// ── Decomposition ────────────────────────────────────────────────────

FunctionBasis basis_for(const PlanarMeasure& mu, const std::vector<Shape>& K, int degree) {
  // One carried family per K component with interior: A(K) is the direct
  // sum over components, so each family vanishes off its own shape.
  FunctionBasis basis;
  bool any_area = false;
  for (const auto& s : K) {
    if (const auto* d = std::get_if<Disk>(&s)) {
      basis.add_monomials(d->c, d->r, degree, AreaShape{*d});
      any_area = true;
    } else if (const auto* a = std::get_if<AnnulusShape>(&s)) {
      basis.add_monomials(a->c, a->r_out, degree, AreaShape{*a});
      basis.add_pole(a->c, a->r_in, degree, AreaShape{*a});
      any_area = true;
    } else if (const auto* r = std::get_if<RectShape>(&s)) {
      cplx c{0.5 * (r->x0 + r->x1), 0.5 * (r->y0 + r->y1)};
      basis.add_monomials(c, 0.5 * std::hypot(r->x1 - r->x0, r->y1 - r->y0), degree,
                          AreaShape{*r});
      any_area = true;
    }
  }
  if (!any_area) {
    Window b = mu.support_bbox();
    cplx centroid{0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)};
    double scale = 0.5 * std::hypot(b.width(), b.height());
    if (scale <= 0) scale = 1;
    basis.add_monomials(centroid, scale, degree);
  }
  return basis;
}

namespace {

double dist_to_component_cells(const ScanComponent& sc, const ScanResult& scan, cplx z) {
  double best = std::numeric_limits<double>::infinity();
  for (auto [ix, iy] : sc.cells) {
    cplx c = scan.grid_point(ix, iy);
    double dx = std::max(std::abs(z.real() - c.real()) - 0.5 * scan.res, 0.0);
    double dy = std::max(std::abs(z.imag() - c.imag()) - 0.5 * scan.res, 0.0);
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

std::vector<cplx> component_support_samples(const MeasureComponent& c, int n) {
  std::vector<cplx> pts;
  switch (c.kind) {
    case MeasureComponent::Kind::atom:
      pts.push_back(c.point);
      break;
    case MeasureComponent::Kind::arc:
      if (const auto* circ = std::get_if<CircleShape>(&c.curve)) {
        for (int t = 0; t < n; ++t) {
          double th = circ->theta0 + (circ->theta1 - circ->theta0) * (t + 0.5) / n;
          pts.push_back(circ->c + circ->r * cplx{std::cos(th), std::sin(th)});
        }
      } else {
        const auto& seg = std::get<SegmentShape>(c.curve);
        for (int t = 0; t < n; ++t)
          pts.push_back(seg.a + (seg.t0 + (seg.t1 - seg.t0) * (t + 0.5) / n) * (seg.b - seg.a));
      }
      break;
    case MeasureComponent::Kind::area: {
      Window b = shape_bbox(std::visit([](const auto& s) { return Shape{s}; }, c.area));
      int side = std::max(2, static_cast<int>(std::lround(std::sqrt(n))));
      for (int sy = 0; sy < side; ++sy)
        for (int sx = 0; sx < side; ++sx) {
          cplx z{b.x0 + b.width() * (sx + 0.5) / side, b.y0 + b.height() * (sy + 0.5) / side};
          if (shape_contains(c.area, z)) pts.push_back(z);
        }
      break;
    }
  }
  return pts;
}

int shape_connectivity(const Shape& s) {
  if (std::holds_alternative<AnnulusShape>(s)) return 2;
  return 1;
}

}  // namespace

Decomposition decompose(const PlanarMeasure& mu, const std::vector<Shape>& K,
                        const DecomposeBudget& budget) {
  Decomposition out;
  require(mu.component_count() > 0, errc::invalid_input, "decompose: empty scene");

  Window window = budget.window;
  if (window.width() <= 0 || window.height() <= 0) window = mu.support_bbox(0.25);
  double join_tol = budget.join_tol > 0 ? budget.join_tol : 3 * budget.res;

  // Pairwise harmonic-measure singularity across the K-interior components.
  std::vector<CircularDomain> domains;
  for (const auto& s : K) {
    if (const auto* d = std::get_if<Disk>(&s)) domains.push_back(CircularDomain::disk(d->c, d->r));
    if (const auto* a = std::get_if<AnnulusShape>(&s))
      domains.push_back(CircularDomain::annulus(a->c, a->r_in, a->r_out));
  }
  for (std::size_t i = 0; i < domains.size(); ++i)
    for (std::size_t j = i + 1; j < domains.size(); ++j) {
      cplx zi = domains[i].inner.empty()
                    ? domains[i].outer.c
                    : domains[i].outer.c +
                          0.5 * (domains[i].inner.front().r + domains[i].outer.r);
      cplx zj = domains[j].inner.empty()
                    ? domains[j].outer.c
                    : domains[j].outer.c +
                          0.5 * (domains[j].inner.front().r + domains[j].outer.r);
      auto rep = mutually_singular(harmonic_measure(domains[i], zi),
                                   harmonic_measure(domains[j], zj));
      if (!rep.singular) {
        out.harmonic_measures_singular = false;
        out.diagnostics.push_back("harmonic measures of K components " + std::to_string(i) +
                                  " and " + std::to_string(j) + " overlap: " +
                                  std::to_string(rep.overlap));
      }
    }

  // (i) scan the full measure
  FunctionBasis basis = basis_for(mu, K, budget.degree);
  out.scan = scan_abpe(mu, basis, window, budget.res);

  // (ii) group components by closure contact with the detected regions:
  // a component joins the part its support closure meets (at scan
  // granularity the nearest region within the join tolerance)
  std::vector<int> assignment(mu.component_count(), -1);
  for (std::size_t ci = 0; ci < mu.component_count(); ++ci) {
    auto samples = component_support_samples(mu.component(ci), 64);
    double best = std::numeric_limits<double>::infinity();
    int best_part = -1;
    for (const auto& sc : out.scan.components) {
      double nearest = std::numeric_limits<double>::infinity();
      for (cplx z : samples)
        nearest = std::min(nearest, dist_to_component_cells(sc, out.scan, z));
      if (nearest < best) {
        best = nearest;
        best_part = sc.id;
      }
    }
    if (best_part >= 0 && best <= join_tol) assignment[ci] = best_part;
  }

  for (const auto& sc : out.scan.components) {
    DecompositionPart part;
    part.n = sc.id + 1;
    part.region = sc;
    double margin = 0;
    for (std::size_t ci = 0; ci < mu.component_count(); ++ci)
      if (assignment[ci] == sc.id) {
        part.labels.push_back(mu.component(ci).label);
        for (cplx z : component_support_samples(mu.component(ci), 64))
          margin = std::max(margin, dist_to_component_cells(sc, out.scan, z));
      }
    part.closure_margin = margin;
    part.closure_contains_support = margin <= join_tol;

    // containing K-interior component
    for (std::size_t s = 0; s < K.size(); ++s) {
      if (std::holds_alternative<CircleShape>(K[s]) || std::holds_alternative<SegmentShape>(K[s]))
        continue;
      if (shape_contains(K[s], sc.sample_point)) {
        part.k_component = static_cast<int>(s);
        part.k_connectivity = shape_connectivity(K[s]);
        break;
      }
    }
    part.connectivity_ok = part.k_component < 0 || sc.connectivity <= part.k_connectivity;
    if (!part.connectivity_ok)
      out.diagnostics.push_back("part " + std::to_string(part.n) +
                                ": connectivity estimate exceeds its K component");

    // (v) boundary absolute continuity: circle components assigned to this
    // part must carry no atoms and coincide with boundary circles of the
    // containing K shape.
    for (std::size_t ci = 0; ci < mu.component_count(); ++ci) {
      if (assignment[ci] != sc.id) continue;
      const auto& c = mu.component(ci);
      if (c.kind == MeasureComponent::Kind::atom) {
        part.boundary_ac = false;
        out.diagnostics.push_back("part " + std::to_string(part.n) + ": atom at the boundary (" +
                                  c.label + ") is singular to harmonic measure");
      }
      if (c.kind == MeasureComponent::Kind::arc && part.k_component >= 0) {
        const auto* circ = std::get_if<CircleShape>(&c.curve);
        if (!circ) continue;
        bool on_k_boundary = false;
        const Shape& ks = K[static_cast<std::size_t>(part.k_component)];
        if (const auto* d = std::get_if<Disk>(&ks))
          on_k_boundary = std::abs(circ->c - d->c) < 1e-9 && std::abs(circ->r - d->r) < 1e-9;
        if (const auto* a = std::get_if<AnnulusShape>(&ks))
          on_k_boundary = std::abs(circ->c - a->c) < 1e-9 &&
                          (std::abs(circ->r - a->r_in) < 1e-9 || std::abs(circ->r - a->r_out) < 1e-9);
        if (!on_k_boundary) {
          part.boundary_ac = false;
          out.diagnostics.push_back("part " + std::to_string(part.n) + ": circle component " +
                                    c.label + " not on the K boundary");
        }
      }
    }
    out.parts.push_back(std::move(part));
  }

  // (iii) leftovers form Delta_0 and must individually pass the density test
  for (std::size_t ci = 0; ci < mu.component_count(); ++ci) {
    if (assignment[ci] >= 0) continue;
    const auto& c = mu.component(ci);
    out.delta0.push_back(c.label);
    PlanarMeasure alone = mu.restrict_labels({c.label});
    Window cw = alone.support_bbox(0.3);
    FunctionBasis cb = basis_for(alone, {}, std::max(24, budget.degree / 2));
    DensityVerdict dv = density_test(alone, cb, cw, std::max(budget.res, cw.width() / 64));
    if (!dv.dense)
      out.failures.push_back(c.label + ": leftover component has abpe points (" +
                             std::to_string(dv.scan.components.size()) + " component(s))");
  }
  return out;
}

}  // namespace capt
