#include "capt/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "capt/parallel.hpp"

namespace capt {

namespace {

void validate(const CircularDomain& d) {
  require(d.connectivity() <= 2, errc::unsupported,
          "harmonic: connectivity >= 3 not supported (disk and annulus only)");
  if (!d.inner.empty()) {
    const auto& in = d.inner.front();
    require(std::abs(in.c - d.outer.c) < 1e-12, errc::unsupported,
            "harmonic: annulus must be concentric");
    require(in.r > 0 && in.r < d.outer.r, errc::invalid_input,
            "harmonic: inner circle must sit inside the outer circle");
  }
}

}  // namespace

bool CircularDomain::interior_contains(cplx z, double margin) const {
  double rho = std::abs(z - outer.c);
  if (rho >= outer.r - margin) return false;
  for (const auto& in : inner)
    if (rho <= in.r + margin) return false;
  return true;
}

bool CircularDomain::on_boundary(cplx z, double tol) const {
  if (std::abs(std::abs(z - outer.c) - outer.r) <= tol) return true;
  for (const auto& in : inner)
    if (std::abs(std::abs(z - in.c) - in.r) <= tol) return true;
  return false;
}

double BoundaryMeasure::total_mass() const {
  double m = 0;
  for (const auto& c : circles) m += c.mass;
  for (const auto& a : atoms) m += a.mass;
  return m;
}

double BoundaryMeasure::integrate(const std::function<double(cplx)>& f) const {
  double acc = 0;
  for (const auto& part : circles) {
    int n = static_cast<int>(part.density.size());
    double ds = part.circle.r * kTwoPi / n;
    double s = 0;
    for (int t = 0; t < n; ++t) {
      double th = kTwoPi * t / n;
      s += part.density[t] * f(part.circle.c + part.circle.r * cplx{std::cos(th), std::sin(th)});
    }
    acc += s * ds;
  }
  for (const auto& a : atoms) acc += a.mass * f(a.point);
  return acc;
}

namespace {

// Annulus radial factors: solution of the Dirichlet problem with data
// e^{i n theta} on one boundary circle and 0 on the other.
double annulus_outer_mode(int n, double rho, double r, double R) {
  if (n == 0) return std::log(rho / r) / std::log(R / r);
  double p = std::pow(rho / R, n), q = std::pow(r / rho, n) * std::pow(r / R, n);
  double denom = 1.0 - std::pow(r / R, 2 * n);
  return (p - q) / denom;
}

double annulus_inner_mode(int n, double rho, double r, double R) {
  if (n == 0) return std::log(R / rho) / std::log(R / r);
  double p = std::pow(r / rho, n), q = std::pow(rho / R, n) * std::pow(r / R, n);
  double denom = 1.0 - std::pow(r / R, 2 * n);
  return (p - q) / denom;
}

int annulus_mode_count(double rho, double r, double R) {
  double q = std::max(rho / R, r / rho);
  if (q >= 1) return 2000;
  int n = static_cast<int>(std::ceil(std::log(1e-16) / std::log(q)));
  return std::clamp(n, 8, 1800);
}

}  // namespace

BoundaryMeasure harmonic_measure(const CircularDomain& domain, cplx z, int samples) {
  validate(domain);
  require(!domain.on_boundary(z), errc::invalid_input, "harmonic_measure: z on the boundary");
  require(domain.interior_contains(z), errc::invalid_input, "harmonic_measure: z not interior");
  require(samples >= 16, errc::invalid_input, "harmonic_measure: too few samples");

  BoundaryMeasure out;
  if (domain.inner.empty()) {
    const auto& circ = domain.outer;
    double rho = std::abs(z - circ.c);
    double R = circ.r;
    BoundaryMeasure::CirclePart part;
    part.circle = circ;
    part.density.resize(samples);
    for (int t = 0; t < samples; ++t) {
      double th = kTwoPi * t / samples;
      cplx w = circ.c + R * cplx{std::cos(th), std::sin(th)};
      part.density[t] = (R * R - rho * rho) / (kTwoPi * R * std::norm(w - z));
    }
    part.mass = 1.0;
    out.circles.push_back(std::move(part));
    return out;
  }

  const double R = domain.outer.r, r = domain.inner.front().r;
  cplx rel = z - domain.outer.c;
  double rho = std::abs(rel);
  double alpha = std::arg(rel);
  int modes = annulus_mode_count(rho, r, R);
  require(2 * modes < samples, errc::invalid_input,
          "harmonic_measure: z too close to the boundary for this sample count");

  BoundaryMeasure::CirclePart outer_part, inner_part;
  outer_part.circle = domain.outer;
  inner_part.circle = domain.inner.front();
  outer_part.density.resize(samples);
  inner_part.density.resize(samples);
  outer_part.mass = std::log(rho / r) / std::log(R / r);
  inner_part.mass = std::log(R / rho) / std::log(R / r);

  std::vector<double> oc(modes + 1), ic(modes + 1);
  for (int n = 0; n <= modes; ++n) {
    oc[n] = annulus_outer_mode(n, rho, r, R);
    ic[n] = annulus_inner_mode(n, rho, r, R);
  }
  par::for_each(samples, [&](std::int64_t t) {
    double th = kTwoPi * t / samples;
    double po = oc[0], pi_ = ic[0];
    for (int n = 1; n <= modes; ++n) {
      double c = std::cos(n * (th - alpha));
      po += 2 * oc[n] * c;
      pi_ += 2 * ic[n] * c;
    }
    outer_part.density[t] = po / (kTwoPi * R);
    inner_part.density[t] = pi_ / (kTwoPi * r);
  });
  out.circles.push_back(std::move(outer_part));
  out.circles.push_back(std::move(inner_part));
  return out;
}

double harmonic_extension(const CircularDomain& domain, cplx z,
                          const std::vector<std::function<double(double)>>& data, int quad) {
  validate(domain);
  require(data.size() == static_cast<std::size_t>(domain.connectivity()), errc::invalid_input,
          "harmonic_extension: one boundary function per circle");
  BoundaryMeasure om = harmonic_measure(domain, z, quad);
  double acc = 0;
  for (std::size_t ci = 0; ci < om.circles.size(); ++ci) {
    const auto& part = om.circles[ci];
    int n = static_cast<int>(part.density.size());
    double ds = part.circle.r * kTwoPi / n;
    double s = 0;
    for (int t = 0; t < n; ++t) s += part.density[t] * data[ci](kTwoPi * t / n);
    acc += s * ds;
  }
  return acc;
}

BoundaryMeasure sweep(const PlanarMeasure& mu, const CircularDomain& domain, int samples) {
  validate(domain);
  require(samples >= 16, errc::invalid_input, "sweep: too few samples");

  BoundaryMeasure out;
  out.circles.resize(domain.connectivity());
  out.circles[0].circle = domain.outer;
  out.circles[0].density.assign(samples, 0.0);
  if (!domain.inner.empty()) {
    out.circles[1].circle = domain.inner.front();
    out.circles[1].density.assign(samples, 0.0);
  }

  auto add_interior_mass = [&](cplx z, double mass) {
    BoundaryMeasure om = harmonic_measure(domain, z, samples);
    for (std::size_t ci = 0; ci < om.circles.size(); ++ci) {
      for (int t = 0; t < samples; ++t)
        out.circles[ci].density[t] += mass * om.circles[ci].density[t];
      out.circles[ci].mass += mass * om.circles[ci].mass;
    }
  };

  // A circle-arc component lying on a boundary circle passes through
  // unchanged; everything else must be strictly interior mass.
  auto matches_boundary = [&](const CircleShape& c, std::size_t& index) {
    if (std::abs(c.c - domain.outer.c) < 1e-12 && std::abs(c.r - domain.outer.r) < 1e-12) {
      index = 0;
      return true;
    }
    if (!domain.inner.empty() && std::abs(c.c - domain.inner.front().c) < 1e-12 &&
        std::abs(c.r - domain.inner.front().r) < 1e-12) {
      index = 1;
      return true;
    }
    return false;
  };

  for (std::size_t i = 0; i < mu.component_count(); ++i) {
    const auto& c = mu.component(i);
    switch (c.kind) {
      case MeasureComponent::Kind::atom: {
        require(std::abs(c.mass.imag()) <= 1e-12 * (1 + std::abs(c.mass)) && c.mass.real() >= 0,
                errc::invalid_input, "sweep: measure must be positive");
        if (domain.on_boundary(c.point)) {
          out.atoms.push_back({c.point, c.mass.real()});
        } else {
          require(domain.interior_contains(c.point), errc::invalid_input,
                  "sweep: support leaks outside the closed domain");
          add_interior_mass(c.point, c.mass.real());
        }
        break;
      }
      case MeasureComponent::Kind::arc: {
        std::size_t bi = 0;
        if (const auto* circ = std::get_if<CircleShape>(&c.curve); circ && !c.mask &&
                                                                   matches_boundary(*circ, bi)) {
          auto& part = out.circles[bi];
          double full0 = circ->theta0, full1 = circ->theta1;
          for (int t = 0; t < samples; ++t) {
            double th = kTwoPi * t / samples;
            double tt = th;
            while (tt < full0) tt += kTwoPi;
            if (tt <= full1) {
              cplx w = circ->c + circ->r * cplx{std::cos(th), std::sin(th)};
              cplx d = c.density_at(w);
              require(std::abs(d.imag()) <= 1e-12 * (1 + std::abs(d)) && d.real() >= -1e-15,
                      errc::invalid_input, "sweep: measure must be positive");
              part.density[t] += d.real();
            }
          }
          double mass_add = 0;
          for (const auto& q : mu.nodes(i)) mass_add += q.weight.real();
          part.mass += mass_add;
          break;
        }
        [[fallthrough]];
      }
      case MeasureComponent::Kind::area: {
        for (const auto& q : mu.nodes(i)) {
          if (q.weight == cplx{0.0, 0.0}) continue;
          require(std::abs(q.weight.imag()) <= 1e-12 * (1 + std::abs(q.weight)) &&
                      q.weight.real() >= 0,
                  errc::invalid_input, "sweep: measure must be positive");
          if (domain.on_boundary(q.w, 1e-9)) {
            out.atoms.push_back({q.w, q.weight.real()});
          } else {
            require(domain.interior_contains(q.w, -1e-9), errc::invalid_input,
                    "sweep: support leaks outside the closed domain");
            add_interior_mass(q.w, q.weight.real());
          }
        }
        break;
      }
    }
  }
  return out;
}

SingularityReport mutually_singular(const BoundaryMeasure& a, const BoundaryMeasure& b,
                                    double tol) {
  SingularityReport rep;
  rep.mass1 = a.total_mass();
  rep.mass2 = b.total_mass();
  for (const auto& pa : a.circles)
    for (const auto& pb : b.circles) {
      if (std::abs(pa.circle.c - pb.circle.c) > 1e-12 ||
          std::abs(pa.circle.r - pb.circle.r) > 1e-12)
        continue;
      require(pa.density.size() == pb.density.size(), errc::invalid_input,
              "mutually_singular: sample grids differ on a shared circle");
      int n = static_cast<int>(pa.density.size());
      double ds = pa.circle.r * kTwoPi / n;
      double acc = 0;
      for (int t = 0; t < n; ++t) acc += std::min(pa.density[t], pb.density[t]);
      rep.overlap += acc * ds;
    }
  for (const auto& aa : a.atoms)
    for (const auto& ab : b.atoms)
      if (std::abs(aa.point - ab.point) <= 1e-12) rep.overlap += std::min(aa.mass, ab.mass);
  rep.singular = rep.overlap <= tol * std::min(rep.mass1, rep.mass2);
  return rep;
}

}  // namespace capt
