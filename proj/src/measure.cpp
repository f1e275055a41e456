#include "capt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace capt {

namespace {

int curve_node_count(const MeasureComponent& c, int m) {
  if (c.nodes_hint > 0) return c.nodes_hint;
  if (std::holds_alternative<CircleShape>(c.curve)) return std::max(64, 32 * m);
  return std::max(64, 128 * m);
}

int area_node_count(int m) { return std::max(16, 32 * m); }

}  // namespace

double shape_dist(const AreaShape& s, cplx z) {
  if (const auto* d = std::get_if<Disk>(&s)) return std::max(0.0, std::abs(z - d->c) - d->r);
  if (const auto* a = std::get_if<AnnulusShape>(&s)) {
    double rho = std::abs(z - a->c);
    return std::max({0.0, a->r_in - rho, rho - a->r_out});
  }
  const auto& r = std::get<RectShape>(s);
  double dx = std::max({r.x0 - z.real(), 0.0, z.real() - r.x1});
  double dy = std::max({r.y0 - z.imag(), 0.0, z.imag() - r.y1});
  return std::hypot(dx, dy);
}

bool shape_contains(const AreaShape& s, cplx z) { return shape_dist(s, z) <= 0.0; }

bool shape_contains(const Shape& s, cplx z) {
  if (const auto* d = std::get_if<Disk>(&s)) return shape_contains(AreaShape{*d}, z);
  if (const auto* a = std::get_if<AnnulusShape>(&s)) return shape_contains(AreaShape{*a}, z);
  if (const auto* r = std::get_if<RectShape>(&s)) return shape_contains(AreaShape{*r}, z);
  if (const auto* c = std::get_if<CircleShape>(&s)) return std::abs(std::abs(z - c->c) - c->r) <= 1e-12;
  const auto& g = std::get<SegmentShape>(s);
  cplx d = g.b - g.a;
  double len2 = std::norm(d);
  double t = len2 > 0 ? std::clamp(((z - g.a) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
  return std::abs(z - (g.a + t * d)) <= 1e-12;
}

Window shape_bbox(const Shape& s) {
  if (const auto* d = std::get_if<Disk>(&s))
    return {d->c.real() - d->r, d->c.imag() - d->r, d->c.real() + d->r, d->c.imag() + d->r};
  if (const auto* a = std::get_if<AnnulusShape>(&s))
    return {a->c.real() - a->r_out, a->c.imag() - a->r_out, a->c.real() + a->r_out,
            a->c.imag() + a->r_out};
  if (const auto* r = std::get_if<RectShape>(&s)) return {r->x0, r->y0, r->x1, r->y1};
  if (const auto* c = std::get_if<CircleShape>(&s))
    return {c->c.real() - c->r, c->c.imag() - c->r, c->c.real() + c->r, c->c.imag() + c->r};
  const auto& g = std::get<SegmentShape>(s);
  return {std::min(g.a.real(), g.b.real()), std::min(g.a.imag(), g.b.imag()),
          std::max(g.a.real(), g.b.real()), std::max(g.a.imag(), g.b.imag())};
}

bool Region::contains(cplx z) const {
  bool in = false;
  for (const auto& s : shapes)
    if (shape_contains(s, z)) {
      in = true;
      break;
    }
  return complement ? !in : in;
}

PlanarMeasure::PlanarMeasure(std::vector<MeasureComponent> comps, int resolution, bool positive)
    : m_(resolution), positive_(positive), comps_(std::move(comps)) {
  require(m_ >= 1, errc::invalid_input, "PlanarMeasure: resolution must be >= 1");
  build();
  if (positive_) {
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      auto check = [&](cplx v) {
        require(std::abs(v.imag()) <= 1e-12 * (1 + std::abs(v)) && v.real() >= -1e-15,
                errc::invalid_input, "PlanarMeasure: negative or complex mass in a positive measure");
      };
      if (comps_[i].kind == MeasureComponent::Kind::atom)
        check(comps_[i].mass);
      else
        for (const auto& q : nodes_[i]) check(q.weight);
    }
  }
}

void PlanarMeasure::build() {
  nodes_.clear();
  nodes_.reserve(comps_.size());
  for (const auto& c : comps_) {
    std::vector<QuadNode> nodes;
    switch (c.kind) {
      case MeasureComponent::Kind::atom:
        break;  // handled exactly, no nodes
      case MeasureComponent::Kind::arc: {
        int n = curve_node_count(c, m_);
        if (const auto* circ = std::get_if<CircleShape>(&c.curve)) {
          double span = circ->theta1 - circ->theta0;
          double dtheta = span / n;
          nodes.reserve(n);
          for (int t = 0; t < n; ++t) {
            double th = circ->theta0 + (t + 0.5) * dtheta;
            cplx w = circ->c + circ->r * cplx{std::cos(th), std::sin(th)};
            cplx wt = c.density_at(w) * circ->r * dtheta;
            if (c.mask && !c.mask(w)) wt = 0;
            nodes.push_back({w, wt});
          }
        } else {
          const auto& seg = std::get<SegmentShape>(c.curve);
          double span = seg.t1 - seg.t0;
          double dt = span / n;
          double len = std::abs(seg.b - seg.a);
          nodes.reserve(n);
          for (int t = 0; t < n; ++t) {
            double u = seg.t0 + (t + 0.5) * dt;
            cplx w = seg.a + u * (seg.b - seg.a);
            cplx wt = c.density_at(w) * len * dt;
            if (c.mask && !c.mask(w)) wt = 0;
            nodes.push_back({w, wt});
          }
        }
        break;
      }
      case MeasureComponent::Kind::area: {
        int n = c.nodes_hint > 0 ? c.nodes_hint : area_node_count(m_);
        if (const auto* rect = std::get_if<RectShape>(&c.area)) {
          // Tensor rule with node counts proportional to side lengths:
          // midpoint cells, or composite 8-point Gauss-Legendre panels.
          double lx = rect->x1 - rect->x0, ly = rect->y1 - rect->y0;
          double lmax = std::max(lx, ly);
          int nx = std::clamp(static_cast<int>(std::ceil(n * lx / lmax)), 4, 8192);
          int ny = std::clamp(static_cast<int>(std::ceil(n * ly / lmax)), 4, 8192);
          std::vector<std::pair<double, double>> xs, ys;  // node, weight
          auto fill_axis = [&](std::vector<std::pair<double, double>>& out, double a, double len,
                               int count) {
            if (!c.gauss) {
              double h = len / count;
              for (int s = 0; s < count; ++s) out.push_back({a + (s + 0.5) * h, h});
              return;
            }
            static const double gl_x[4] = {0.1834346424956498, 0.5255324099163290,
                                           0.7966664774136267, 0.9602898564975363};
            static const double gl_w[4] = {0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};
            int panels = std::max(1, count / 8);
            double h = len / panels;
            for (int p = 0; p < panels; ++p) {
              double mid = a + (p + 0.5) * h;
              for (int s = 0; s < 4; ++s) {
                out.push_back({mid - 0.5 * h * gl_x[s], 0.5 * h * gl_w[s]});
                out.push_back({mid + 0.5 * h * gl_x[s], 0.5 * h * gl_w[s]});
              }
            }
          };
          fill_axis(xs, rect->x0, lx, nx);
          fill_axis(ys, rect->y0, ly, ny);
          nodes.reserve(xs.size() * ys.size());
          for (const auto& [y, wy] : ys)
            for (const auto& [x, wx] : xs) {
              cplx w{x, y};
              cplx wt = c.density_at(w) * wx * wy;
              if (c.mask && !c.mask(w)) wt = 0;
              nodes.push_back({w, wt});
            }
        } else {
          // Polar tensor rule: midpoint radially, uniform in angle.
          cplx ctr;
          double r0, r1;
          if (const auto* d = std::get_if<Disk>(&c.area)) {
            ctr = d->c;
            r0 = 0;
            r1 = d->r;
          } else {
            const auto& a = std::get<AnnulusShape>(c.area);
            ctr = a.c;
            r0 = a.r_in;
            r1 = a.r_out;
          }
          // Radial cells carry a two-point Gauss rule (the plain midpoint
          // rule stalls near 1e-5 relative at these node counts); the
          // angular direction stays uniform.
          int nr = std::max(2, n / 2), nth = n;
          double hr = (r1 - r0) / nr;
          double dth = kTwoPi / nth;
          const double gl_off = 0.5 / std::sqrt(3.0);
          nodes.reserve(2 * static_cast<std::size_t>(nr) * nth);
          for (int sr = 0; sr < nr; ++sr) {
            double mid = r0 + (sr + 0.5) * hr;
            for (double r : {mid - gl_off * hr, mid + gl_off * hr}) {
              for (int st = 0; st < nth; ++st) {
                double th = (st + 0.5) * dth;
                cplx w = ctr + r * cplx{std::cos(th), std::sin(th)};
                cplx wt = c.density_at(w) * r * (hr / 2) * dth;
                if (c.mask && !c.mask(w)) wt = 0;
                nodes.push_back({w, wt});
              }
            }
          }
        }
        break;
      }
    }
    nodes_.push_back(std::move(nodes));
  }
}

cplx PlanarMeasure::mass() const {
  cplx total = 0;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (comps_[i].kind == MeasureComponent::Kind::atom) {
      total += comps_[i].mass;
    } else {
      cplx acc = 0;
      for (const auto& q : nodes_[i]) acc += q.weight;
      total += acc;
    }
  }
  return total;
}

cplx PlanarMeasure::integrate(const std::function<cplx(cplx)>& f) const {
  cplx total = 0;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (comps_[i].kind == MeasureComponent::Kind::atom) {
      cplx v = f(comps_[i].point);
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), errc::numeric_domain,
              "integrate: non-finite integrand at an atom");
      total += v * comps_[i].mass;
    } else {
      cplx acc = 0;
      for (const auto& q : nodes_[i]) {
        if (q.weight == cplx{0.0, 0.0}) continue;
        cplx v = f(q.w);
        require(std::isfinite(v.real()) && std::isfinite(v.imag()), errc::numeric_domain,
                "integrate: non-finite integrand at a quadrature node");
        acc += v * q.weight;
      }
      total += acc;
    }
  }
  return total;
}

PlanarMeasure PlanarMeasure::restrict_labels(const std::vector<std::string>& labels) const {
  std::vector<MeasureComponent> kept;
  for (const auto& want : labels) {
    bool found = false;
    for (const auto& c : comps_)
      if (c.label == want) {
        kept.push_back(c);
        found = true;
      }
    require(found, errc::invalid_input, "restrict: unknown label '" + want + "'");
  }
  return PlanarMeasure(std::move(kept), m_, positive_);
}

namespace {

// Angular windows of a circle lying inside a region.  Crossing angles of all
// shape boundaries are collected, then each candidate sub-arc is tested at
// its midpoint.
std::vector<std::pair<double, double>> circle_region_windows(const CircleShape& circ,
                                                             const Region& region) {
  std::vector<double> cuts{circ.theta0, circ.theta1};
  auto add_cut = [&](double th) {
    // normalize into [theta0, theta1]
    while (th < circ.theta0) th += kTwoPi;
    while (th > circ.theta1) th -= kTwoPi;
    if (th >= circ.theta0 && th <= circ.theta1) cuts.push_back(th);
  };
  for (const auto& s : region.shapes) {
    if (const auto* d = std::get_if<Disk>(&s)) {
      double dist = std::abs(d->c - circ.c);
      if (dist < 1e-300) continue;  // concentric: no crossings
      // |circ.c + r e^{it} - d.c| = d.r  =>  cos(t - arg) = q
      double q = (d->r * d->r - dist * dist - circ.r * circ.r) / (2 * dist * circ.r);
      if (std::abs(q) <= 1) {
        double base = std::arg(d->c - circ.c);
        double off = std::acos(q);
        add_cut(base + off);
        add_cut(base - off);
        add_cut(base + off - kTwoPi);
        add_cut(base - off + kTwoPi);
      }
    } else if (const auto* a = std::get_if<AnnulusShape>(&s)) {
      for (double rr : {a->r_in, a->r_out}) {
        double dist = std::abs(a->c - circ.c);
        if (dist < 1e-300) continue;
        double q = (rr * rr - dist * dist - circ.r * circ.r) / (2 * dist * circ.r);
        if (std::abs(q) <= 1) {
          double base = std::arg(a->c - circ.c);
          double off = std::acos(q);
          add_cut(base + off);
          add_cut(base - off);
          add_cut(base + off - kTwoPi);
          add_cut(base - off + kTwoPi);
        }
      }
    } else if (const auto* r = std::get_if<RectShape>(&s)) {
      auto add_line = [&](double v, bool xline) {
        double rel = (v - (xline ? circ.c.real() : circ.c.imag())) / circ.r;
        if (std::abs(rel) <= 1) {
          double off = std::acos(rel);
          double b0 = xline ? 0.0 : kPi / 2;
          add_cut(b0 + off);
          add_cut(b0 - off);
          add_cut(b0 + off - kTwoPi);
          add_cut(b0 - off + kTwoPi);
        }
      };
      add_line(r->x0, true);
      add_line(r->x1, true);
      add_line(r->y0, false);
      add_line(r->y1, false);
    }
    // curve shapes in a region have zero area: ignored for clipping
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> windows;
  for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
    double lo = cuts[t], hi = cuts[t + 1];
    if (hi - lo < 1e-14) continue;
    double mid = 0.5 * (lo + hi);
    cplx w = circ.c + circ.r * cplx{std::cos(mid), std::sin(mid)};
    if (region.contains(w)) {
      if (!windows.empty() && std::abs(windows.back().second - lo) < 1e-14)
        windows.back().second = hi;
      else
        windows.emplace_back(lo, hi);
    }
  }
  return windows;
}

std::vector<std::pair<double, double>> segment_region_windows(const SegmentShape& seg,
                                                              const Region& region) {
  std::vector<double> cuts{seg.t0, seg.t1};
  cplx d = seg.b - seg.a;
  auto add_cut = [&](double t) {
    if (t >= seg.t0 && t <= seg.t1) cuts.push_back(t);
  };
  for (const auto& s : region.shapes) {
    auto add_circle = [&](cplx c, double r) {
      // |a + t d - c|^2 = r^2
      cplx e = seg.a - c;
      double A = std::norm(d), B = 2 * (e * std::conj(d)).real(), C = std::norm(e) - r * r;
      double disc = B * B - 4 * A * C;
      if (disc >= 0 && A > 0) {
        double sq = std::sqrt(disc);
        add_cut((-B - sq) / (2 * A));
        add_cut((-B + sq) / (2 * A));
      }
    };
    if (const auto* dk = std::get_if<Disk>(&s)) add_circle(dk->c, dk->r);
    if (const auto* an = std::get_if<AnnulusShape>(&s)) {
      add_circle(an->c, an->r_in);
      add_circle(an->c, an->r_out);
    }
    if (const auto* r = std::get_if<RectShape>(&s)) {
      if (std::abs(d.real()) > 1e-300) {
        add_cut((r->x0 - seg.a.real()) / d.real());
        add_cut((r->x1 - seg.a.real()) / d.real());
      }
      if (std::abs(d.imag()) > 1e-300) {
        add_cut((r->y0 - seg.a.imag()) / d.imag());
        add_cut((r->y1 - seg.a.imag()) / d.imag());
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> windows;
  for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
    double lo = cuts[t], hi = cuts[t + 1];
    if (hi - lo < 1e-14) continue;
    if (region.contains(seg.a + 0.5 * (lo + hi) * d)) {
      if (!windows.empty() && std::abs(windows.back().second - lo) < 1e-14)
        windows.back().second = hi;
      else
        windows.emplace_back(lo, hi);
    }
  }
  return windows;
}

// Radial windows for concentric disk/annulus clips; empty optional when the
// clip is not radial-exact.
std::optional<std::pair<double, double>> radial_window(const AreaShape& area, const Shape& s) {
  cplx c0;
  double r0, r1;
  if (const auto* d = std::get_if<Disk>(&area)) {
    c0 = d->c;
    r0 = 0;
    r1 = d->r;
  } else if (const auto* a = std::get_if<AnnulusShape>(&area)) {
    c0 = a->c;
    r0 = a->r_in;
    r1 = a->r_out;
  } else {
    return std::nullopt;
  }
  if (const auto* d = std::get_if<Disk>(&s)) {
    if (std::abs(d->c - c0) > 1e-12) return std::nullopt;
    return std::make_pair(r0, std::min(r1, d->r));
  }
  if (const auto* a = std::get_if<AnnulusShape>(&s)) {
    if (std::abs(a->c - c0) > 1e-12) return std::nullopt;
    return std::make_pair(std::max(r0, a->r_in), std::min(r1, a->r_out));
  }
  return std::nullopt;
}

}  // namespace

PlanarMeasure PlanarMeasure::restrict_region(const Region& region) const {
  std::vector<MeasureComponent> kept;
  for (const auto& c : comps_) {
    switch (c.kind) {
      case MeasureComponent::Kind::atom:
        if (region.contains(c.point)) kept.push_back(c);
        break;
      case MeasureComponent::Kind::arc: {
        if (const auto* circ = std::get_if<CircleShape>(&c.curve)) {
          auto windows = circle_region_windows(*circ, region);
          int idx = 0;
          for (auto [lo, hi] : windows) {
            MeasureComponent piece = c;
            auto w = *circ;
            w.theta0 = lo;
            w.theta1 = hi;
            piece.curve = w;
            if (windows.size() > 1) piece.label = c.label + "#" + std::to_string(idx++);
            kept.push_back(std::move(piece));
          }
        } else {
          const auto& seg = std::get<SegmentShape>(c.curve);
          auto windows = segment_region_windows(seg, region);
          int idx = 0;
          for (auto [lo, hi] : windows) {
            MeasureComponent piece = c;
            auto w = seg;
            w.t0 = lo;
            w.t1 = hi;
            piece.curve = w;
            if (windows.size() > 1) piece.label = c.label + "#" + std::to_string(idx++);
            kept.push_back(std::move(piece));
          }
        }
        break;
      }
      case MeasureComponent::Kind::area: {
        // Exact radial clip when the region is a single concentric disk or
        // annulus; node-mask fallback otherwise.
        if (!region.complement && region.shapes.size() == 1) {
          if (auto win = radial_window(c.area, region.shapes.front())) {
            auto [lo, hi] = *win;
            if (hi <= lo + 1e-15) break;  // empty clip
            MeasureComponent piece = c;
            if (lo <= 1e-15)
              piece.area = Disk{std::holds_alternative<Disk>(c.area)
                                    ? std::get<Disk>(c.area).c
                                    : std::get<AnnulusShape>(c.area).c,
                                hi};
            else
              piece.area = AnnulusShape{std::holds_alternative<Disk>(c.area)
                                            ? std::get<Disk>(c.area).c
                                            : std::get<AnnulusShape>(c.area).c,
                                        lo, hi};
            kept.push_back(std::move(piece));
            break;
          }
        }
        MeasureComponent piece = c;
        auto prev = c.mask;
        Region reg = region;
        piece.mask = [prev, reg](cplx w) { return (!prev || prev(w)) && reg.contains(w); };
        kept.push_back(std::move(piece));
        break;
      }
    }
  }
  return PlanarMeasure(std::move(kept), m_, positive_);
}

PlanarMeasure PlanarMeasure::absolute() const {
  std::vector<MeasureComponent> comps = comps_;
  for (auto& c : comps) {
    if (c.kind == MeasureComponent::Kind::atom) {
      c.mass = std::abs(c.mass);
    } else if (c.density) {
      auto fn = c.density;
      c.density = [fn](cplx w) { return cplx{std::abs(fn(w)), 0.0}; };
    } else {
      c.density_const = std::abs(c.density_const);
    }
  }
  return PlanarMeasure(std::move(comps), m_, true);
}

double PlanarMeasure::support_dist(cplx z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : comps_) {
    switch (c.kind) {
      case MeasureComponent::Kind::atom:
        best = std::min(best, std::abs(z - c.point));
        break;
      case MeasureComponent::Kind::arc:
        if (const auto* circ = std::get_if<CircleShape>(&c.curve)) {
          best = std::min(best, std::abs(std::abs(z - circ->c) - circ->r));
        } else {
          const auto& seg = std::get<SegmentShape>(c.curve);
          cplx d = seg.b - seg.a;
          double len2 = std::norm(d);
          double t = len2 > 0 ? std::clamp(((z - seg.a) * std::conj(d)).real() / len2, seg.t0, seg.t1)
                              : 0.0;
          best = std::min(best, std::abs(z - (seg.a + t * d)));
        }
        break;
      case MeasureComponent::Kind::area:
        best = std::min(best, shape_dist(c.area, z));
        break;
    }
  }
  return best;
}

Window PlanarMeasure::support_bbox(double pad) const {
  Window w{1e300, 1e300, -1e300, -1e300};
  auto grow = [&](const Window& b) {
    w.x0 = std::min(w.x0, b.x0);
    w.y0 = std::min(w.y0, b.y0);
    w.x1 = std::max(w.x1, b.x1);
    w.y1 = std::max(w.y1, b.y1);
  };
  for (const auto& c : comps_) {
    switch (c.kind) {
      case MeasureComponent::Kind::atom:
        grow({c.point.real(), c.point.imag(), c.point.real(), c.point.imag()});
        break;
      case MeasureComponent::Kind::arc:
        std::visit([&](const auto& s) { grow(shape_bbox(Shape{s})); }, c.curve);
        break;
      case MeasureComponent::Kind::area:
        std::visit([&](const auto& s) { grow(shape_bbox(Shape{s})); }, c.area);
        break;
    }
  }
  return w.padded(pad);
}

double component_node_spacing(const MeasureComponent& c, int m) {
  switch (c.kind) {
    case MeasureComponent::Kind::atom:
      return 0.0;
    case MeasureComponent::Kind::arc: {
      int n = curve_node_count(c, m);
      if (const auto* circ = std::get_if<CircleShape>(&c.curve))
        return circ->r * (circ->theta1 - circ->theta0) / n;
      const auto& seg = std::get<SegmentShape>(c.curve);
      return std::abs(seg.b - seg.a) * (seg.t1 - seg.t0) / n;
    }
    case MeasureComponent::Kind::area: {
      int n = c.nodes_hint > 0 ? c.nodes_hint : std::max(16, 32 * m);
      Window b = shape_bbox(std::visit([](const auto& s) { return Shape{s}; }, c.area));
      return std::max(b.width(), b.height()) / n;
    }
  }
  return 0.0;
}

}  // namespace capt
