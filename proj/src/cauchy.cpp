#include "capt/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capt/parallel.hpp"

namespace capt {

namespace {

// Intervals of {rho >= 0 : z + rho*e in shape} for a unit direction e.
using RaySpan = std::pair<double, double>;

void ray_circle(cplx z, cplx e, cplx c, double r, double& lo, double& hi) {
  // |z + rho e - c|^2 = r^2
  cplx d = z - c;
  double b = (d * std::conj(e)).real();
  double disc = b * b - (std::norm(d) - r * r);
  if (disc < 0) {
    lo = 1, hi = 0;  // empty
    return;
  }
  double sq = std::sqrt(disc);
  lo = -b - sq;
  hi = -b + sq;
}

void ray_spans(const AreaShape& shape, cplx z, cplx e, std::vector<RaySpan>& out) {
  out.clear();
  if (const auto* d = std::get_if<Disk>(&shape)) {
    double lo, hi;
    ray_circle(z, e, d->c, d->r, lo, hi);
    lo = std::max(lo, 0.0);
    if (hi > lo) out.push_back({lo, hi});
    return;
  }
  if (const auto* a = std::get_if<AnnulusShape>(&shape)) {
    double lo, hi;
    ray_circle(z, e, a->c, a->r_out, lo, hi);
    lo = std::max(lo, 0.0);
    if (hi <= lo) return;
    double ilo, ihi;
    ray_circle(z, e, a->c, a->r_in, ilo, ihi);
    ilo = std::max(ilo, 0.0);
    if (ihi <= ilo) {
      out.push_back({lo, hi});
    } else {
      if (ilo > lo) out.push_back({lo, std::min(ilo, hi)});
      if (ihi < hi) out.push_back({std::max(ihi, lo), hi});
    }
    return;
  }
  const auto& r = std::get<RectShape>(shape);
  double lo = 0, hi = std::numeric_limits<double>::infinity();
  auto slab = [&](double p, double dir, double w0, double w1) {
    if (std::abs(dir) < 1e-300) {
      if (p < w0 || p > w1) hi = -1;  // parallel and outside
      return;
    }
    double t0 = (w0 - p) / dir, t1 = (w1 - p) / dir;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  };
  slab(z.real(), e.real(), r.x0, r.x1);
  slab(z.imag(), e.imag(), r.y0, r.y1);
  if (hi > lo) out.push_back({lo, hi});
}

double shape_diameter(const AreaShape& s) {
  Window b = shape_bbox(std::visit([](const auto& v) { return Shape{v}; }, s));
  return std::hypot(b.width(), b.height());
}

// Weakly singular integral over an area component by a polar rule centered
// at z: dA/(w - z) = e^{-i theta} d rho d theta.
cplx near_field_area(const MeasureComponent& c, int m, cplx z) {
  int nray = std::max(64, 32 * m);
  double ds = shape_diameter(c.area) / std::max(64, 64 * m);
  double dth = kTwoPi / nray;
  cplx acc = 0;
  std::vector<RaySpan> spans;
  for (int t = 0; t < nray; ++t) {
    double th = (t + 0.5) * dth;
    cplx e{std::cos(th), std::sin(th)};
    ray_spans(c.area, z, e, spans);
    cplx ray_acc = 0;
    for (auto [lo, hi] : spans) {
      int nn = std::clamp(static_cast<int>(std::ceil((hi - lo) / ds)), 2, 8192);
      double dr = (hi - lo) / nn;
      for (int s = 0; s < nn; ++s) {
        cplx w = z + (lo + (s + 0.5) * dr) * e;
        if (c.mask && !c.mask(w)) continue;
        ray_acc += c.density_at(w) * dr;
      }
    }
    acc += ray_acc * cplx{std::cos(th), -std::sin(th)} * dth;
  }
  return acc;
}

}  // namespace

cplx cauchy_transform(const PlanarMeasure& mu, cplx z) {
  cplx total = 0;
  for (std::size_t i = 0; i < mu.component_count(); ++i) {
    const auto& c = mu.component(i);
    if (c.kind == MeasureComponent::Kind::atom) {
      require(c.point != z, errc::singularity, "cauchy_transform: z coincides with an atom");
      total += c.mass / (c.point - z);
      continue;
    }
    if (c.kind == MeasureComponent::Kind::area) {
      double spacing = component_node_spacing(c, mu.resolution());
      if (shape_dist(c.area, z) < 3 * spacing) {
        total += near_field_area(c, mu.resolution(), z);
        continue;
      }
    }
    cplx acc = 0;
    for (const auto& q : mu.nodes(i)) {
      require(q.w != z, errc::singularity, "cauchy_transform: z coincides with a quadrature node");
      acc += q.weight / (q.w - z);
    }
    total += acc;
  }
  return total;
}

std::vector<cplx> cauchy_transform_many(const PlanarMeasure& mu, std::span<const cplx> pts) {
  std::vector<cplx> out(pts.size());
  par::for_each(static_cast<std::int64_t>(pts.size()),
                [&](std::int64_t i) { out[i] = cauchy_transform(mu, pts[i]); });
  return out;
}

CoefficientsAtInfinity coefficients_at_infinity(const std::function<cplx(cplx)>& f, cplx z0,
                                                double radius, int samples) {
  require(samples >= 64, errc::invalid_input, "coefficients_at_infinity: need >= 64 samples");
  require(radius > 0, errc::invalid_input, "coefficients_at_infinity: radius must be positive");
  int n = samples;
  std::vector<cplx> vals(n);
  for (int t = 0; t < n; ++t) {
    double th = kTwoPi * t / n;
    vals[t] = f(z0 + radius * cplx{std::cos(th), std::sin(th)});
  }
  // C_m = (1/n) sum_t f_t e^{+2 pi i m t / n} picks the e^{-im theta} mode,
  // so C_m ~ a_m radius^{-m} for f analytic outside the circle.  Positive
  // powers of (z - z0) alias into the top modes, which is the
  // non-analyticity diagnostic.
  auto mode = [&](int m) {
    cplx acc = 0;
    for (int t = 0; t < n; ++t) {
      double ph = kTwoPi * m * t / n;
      acc += vals[t] * cplx{std::cos(ph), std::sin(ph)};
    }
    return acc / static_cast<double>(n);
  };
  double scale = 0;
  for (const auto& v : vals) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-300);
  double top_energy = 0;
  for (int m = n - n / 4; m < n; ++m) top_energy = std::max(top_energy, std::abs(mode(m)));
  require(top_energy <= 1e-7 * scale, errc::diagnostic,
          "coefficients_at_infinity: non-decaying spectrum (f not analytic outside the circle)");
  double tail = 0;
  for (int m = n / 4; m < n / 2; ++m) tail = std::max(tail, std::abs(mode(m)));

  CoefficientsAtInfinity out;
  out.z0 = z0;
  out.radius = radius;
  out.value_at_infinity = mode(0);
  out.a1 = mode(1) * radius;
  out.a2 = mode(2) * radius * radius;
  out.residual = tail / scale;
  return out;
}

// ── Vitushkin covering ───────────────────────────────────────────────

namespace {

double smoothstep(double t) { return t * t * (3 - 2 * t); }
double smoothstep_d(double t) { return 6 * t * (1 - t); }

// 1-D partition profile for cell [a, a+h]: ramps of width h/4 centered on
// the cell edges; adjacent profiles sum to one exactly.
double profile(double x, double a, double h) {
  double lo = a - h / 8, hi = a + h + h / 8, ramp = h / 4;
  if (x <= lo || x >= hi) return 0;
  if (x < lo + ramp) return smoothstep((x - lo) / ramp);
  if (x > hi - ramp) return smoothstep((hi - x) / ramp);
  return 1;
}

double profile_d(double x, double a, double h) {
  double lo = a - h / 8, hi = a + h + h / 8, ramp = h / 4;
  if (x <= lo || x >= hi) return 0;
  if (x < lo + ramp) return smoothstep_d((x - lo) / ramp) / ramp;
  if (x > hi - ramp) return -smoothstep_d((hi - x) / ramp) / ramp;
  return 0;
}

}  // namespace

VitushkinCover::VitushkinCover(int k, Window window) : k_(k), window_(window) {
  require(window.width() > 0 && window.height() > 0, errc::invalid_input,
          "VitushkinCover: empty window");
  h_ = std::ldexp(1.0, -k);
  auto lo = [&](double v) { return static_cast<std::int64_t>(std::floor(v / h_)); };
  auto hi = [&](double v) { return static_cast<std::int64_t>(std::ceil(v / h_)); };
  for (std::int64_t j = lo(window.y0); j < hi(window.y1); ++j)
    for (std::int64_t i = lo(window.x0); i < hi(window.x1); ++i)
      squares_.push_back({k, i, j});
}

Window VitushkinCover::enlarged(std::size_t l) const {
  const auto& s = squares_[l];
  return {s.x0() - h_ / 8, s.y0() - h_ / 8, s.x1() + h_ / 8, s.y1() + h_ / 8};
}

double VitushkinCover::phi(std::size_t l, cplx z) const {
  const auto& s = squares_[l];
  return profile(z.real(), s.x0(), h_) * profile(z.imag(), s.y0(), h_);
}

cplx VitushkinCover::dbar_phi(std::size_t l, cplx z) const {
  const auto& s = squares_[l];
  double px = profile(z.real(), s.x0(), h_), py = profile(z.imag(), s.y0(), h_);
  double dx = profile_d(z.real(), s.x0(), h_), dy = profile_d(z.imag(), s.y0(), h_);
  return 0.5 * cplx{dx * py, px * dy};
}

double VitushkinCover::partition_sum(cplx z) const {
  double acc = 0;
  for (std::size_t l = 0; l < squares_.size(); ++l) acc += phi(l, z);
  return acc;
}

double VitushkinCover::gradient_bound_sampled(int samples_per_side) const {
  double worst = 0;
  for (std::size_t l = 0; l < squares_.size(); ++l) {
    const auto& s = squares_[l];
    Window f = enlarged(l);
    for (int sy = 0; sy < samples_per_side; ++sy)
      for (int sx = 0; sx < samples_per_side; ++sx) {
        double x = f.x0 + f.width() * sx / (samples_per_side - 1);
        double y = f.y0 + f.height() * sy / (samples_per_side - 1);
        double gx = profile_d(x, s.x0(), h_) * profile(y, s.y0(), h_);
        double gy = profile(x, s.x0(), h_) * profile_d(y, s.y0(), h_);
        worst = std::max(worst, std::hypot(gx, gy));
      }
  }
  return worst;
}

double VitushkinCover::covering_sum(cplx z) const {
  double h3 = h_ * h_ * h_;
  double acc = 0;
  for (const auto& s : squares_) {
    double d = std::abs(z - s.center());
    acc += std::min(1.0, h3 / (d * d * d));
  }
  return acc;
}

double VitushkinCover::covering_bound(cplx z) const {
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < squares_.size(); ++l) {
    Window f = enlarged(l);
    double dx = std::max({f.x0 - z.real(), 0.0, z.real() - f.x1});
    double dy = std::max({f.y0 - z.imag(), 0.0, z.imag() - f.y1});
    dist = std::min(dist, std::hypot(dx, dy));
  }
  if (dist <= 0) return 1;
  return std::min(1.0, h_ / dist);
}

// ── Localization ─────────────────────────────────────────────────────

double TensorBump::value(cplx z) const {
  auto axis = [&](double v, double p0, double p1) {
    if (v <= p0 - ramp || v >= p1 + ramp) return 0.0;
    if (v < p0) return smoothstep((v - (p0 - ramp)) / ramp);
    if (v > p1) return smoothstep(((p1 + ramp) - v) / ramp);
    return 1.0;
  };
  return axis(z.real(), x0, x1) * axis(z.imag(), y0, y1);
}

cplx TensorBump::dbar(cplx z) const {
  auto axis = [&](double v, double p0, double p1) {
    if (v <= p0 - ramp || v >= p1 + ramp) return 0.0;
    if (v < p0) return smoothstep((v - (p0 - ramp)) / ramp);
    if (v > p1) return smoothstep(((p1 + ramp) - v) / ramp);
    return 1.0;
  };
  auto axis_d = [&](double v, double p0, double p1) {
    if (v <= p0 - ramp || v >= p1 + ramp) return 0.0;
    if (v < p0) return smoothstep_d((v - (p0 - ramp)) / ramp) / ramp;
    if (v > p1) return -smoothstep_d(((p1 + ramp) - v) / ramp) / ramp;
    return 0.0;
  };
  double px = axis(z.real(), x0, x1), py = axis(z.imag(), y0, y1);
  double dx = axis_d(z.real(), x0, x1), dy = axis_d(z.imag(), y0, y1);
  return 0.5 * cplx{dx * py, px * dy};
}

LocalizedFunction::LocalizedFunction(std::function<cplx(cplx)> f, TensorBump phi, int band_nodes)
    : f_(std::move(f)), phi_(phi) {
  // The ramp frame of phi carved into 8 rects so the integrand is smooth on
  // each piece (profile kinks lie on the rect seams).
  struct Band {
    double x0, y0, x1, y1;
  };
  double r = phi.ramp;
  std::vector<Band> bands = {
      {phi.x0 - r, phi.y0 - r, phi.x0, phi.y0},  // corners
      {phi.x1, phi.y0 - r, phi.x1 + r, phi.y0},
      {phi.x0 - r, phi.y1, phi.x0, phi.y1 + r},
      {phi.x1, phi.y1, phi.x1 + r, phi.y1 + r},
      {phi.x0, phi.y0 - r, phi.x1, phi.y0},      // edges
      {phi.x0, phi.y1, phi.x1, phi.y1 + r},
      {phi.x0 - r, phi.y0, phi.x0, phi.y1},
      {phi.x1, phi.y0, phi.x1 + r, phi.y1},
  };
  auto f_local = f_;
  auto bump = phi_;
  std::vector<MeasureComponent> comps;
  for (const auto& b : bands) {
    MeasureComponent c;
    c.kind = MeasureComponent::Kind::area;
    c.label = "band";
    c.area = RectShape{b.x0, b.y0, b.x1, b.y1};
    c.density = [f_local, bump](cplx w) { return f_local(w) * bump.dbar(w); };
    c.nodes_hint = band_nodes;
    c.gauss = true;
    comps.push_back(std::move(c));
  }
  band_measure_ = PlanarMeasure(std::move(comps), 8);

  // Measured counterpart of the modulus-of-continuity bound.
  Window s = phi.support();
  double re_lo = 1e300, re_hi = -1e300, im_lo = 1e300, im_hi = -1e300;
  const int n = 21;
  for (int sy = 0; sy < n; ++sy)
    for (int sx = 0; sx < n; ++sx) {
      cplx v = f_(cplx{s.x0 + s.width() * sx / (n - 1), s.y0 + s.height() * sy / (n - 1)});
      re_lo = std::min(re_lo, v.real());
      re_hi = std::max(re_hi, v.real());
      im_lo = std::min(im_lo, v.imag());
      im_hi = std::max(im_hi, v.imag());
    }
  double osc = std::hypot(re_hi - re_lo, im_hi - im_lo);
  double grad_max = 1.5 / phi.ramp;
  c0_ = 2 * grad_max * std::hypot(s.width(), s.height()) * osc;
}

cplx LocalizedFunction::operator()(cplx w) const {
  cplx direct = phi_.value(w) != 0.0 ? phi_.value(w) * f_(w) : cplx{0, 0};
  return direct + cauchy_transform(band_measure_, w) / kPi;
}

double LocalizedFunction::sup_sampled(int n) const {
  Window s = phi_.support().padded(2 * phi_.ramp);
  double worst = 0;
  for (int sy = 0; sy < n; ++sy)
    for (int sx = 0; sx < n; ++sx) {
      cplx w{s.x0 + s.width() * sx / (n - 1), s.y0 + s.height() * sy / (n - 1)};
      worst = std::max(worst, std::abs((*this)(w)));
    }
  return worst;
}

cplx LocalizedFunction::dbar_residual(cplx z, double h) const {
  cplx fx = (*this)(z + h) - (*this)(z - h);
  cplx fy = (*this)(z + cplx{0, h}) - (*this)(z - cplx{0, h});
  return 0.5 * (fx + cplx{0, 1} * fy) / (2 * h);
}

LocalizedFunction localize(const std::function<cplx(cplx)>& f, const VitushkinCover& cover,
                           std::size_t l, int band_nodes) {
  const auto& s = cover.squares()[l];
  double h = cover.cell();
  TensorBump bump{s.x0() + h / 8, s.x1() - h / 8, s.y0() + h / 8, s.y1() - h / 8, h / 4};
  return LocalizedFunction(f, bump, band_nodes);
}

}  // namespace capt
