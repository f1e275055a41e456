#include "capt/scene.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace capt {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string shape_text(const Shape& s) {
  if (const auto* d = std::get_if<Disk>(&s))
    return "disk " + fmt(d->c.real()) + " " + fmt(d->c.imag()) + " " + fmt(d->r);
  if (const auto* a = std::get_if<AnnulusShape>(&s))
    return "annulus " + fmt(a->c.real()) + " " + fmt(a->c.imag()) + " " + fmt(a->r_in) + " " +
           fmt(a->r_out);
  if (const auto* r = std::get_if<RectShape>(&s))
    return "rect " + fmt(r->x0) + " " + fmt(r->y0) + " " + fmt(r->x1) + " " + fmt(r->y1);
  if (const auto* c = std::get_if<CircleShape>(&s))
    return "circle " + fmt(c->c.real()) + " " + fmt(c->c.imag()) + " " + fmt(c->r);
  const auto& g = std::get<SegmentShape>(s);
  return "segment " + fmt(g.a.real()) + " " + fmt(g.a.imag()) + " " + fmt(g.b.real()) + " " +
         fmt(g.b.imag());
}

double component_geometry_size(const MeasureComponent& c) {
  // total arclength / area of the support, for uniform-mass densities
  if (c.kind == MeasureComponent::Kind::arc) {
    if (const auto* circ = std::get_if<CircleShape>(&c.curve))
      return circ->r * (circ->theta1 - circ->theta0);
    const auto& seg = std::get<SegmentShape>(c.curve);
    return std::abs(seg.b - seg.a) * (seg.t1 - seg.t0);
  }
  if (const auto* d = std::get_if<Disk>(&c.area)) return kPi * d->r * d->r;
  if (const auto* a = std::get_if<AnnulusShape>(&c.area))
    return kPi * (a->r_out * a->r_out - a->r_in * a->r_in);
  const auto& r = std::get<RectShape>(c.area);
  return (r.x1 - r.x0) * (r.y1 - r.y0);
}

class Parser {
 public:
  explicit Parser(const std::string& text) : in_(text) {}

  Scene run() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      std::string line = raw;
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      std::istringstream ls(line);
      std::string key;
      if (!(ls >> key)) continue;
      handle(key, ls);
    }
    finish_component();
    return std::move(scene_);
  }

 private:
  [[noreturn]] void err(const std::string& msg) {
    fail(errc::invalid_input, "line " + std::to_string(line_) + ": " + msg);
  }

  double num(std::istringstream& ls, const char* what) {
    std::string tok;
    if (!(ls >> tok)) err(std::string("missing number (") + what + ")");
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      err("malformed number '" + tok + "' (" + what + ")");
    }
  }

  std::optional<double> opt_num(std::istringstream& ls) {
    std::string tok;
    if (!(ls >> tok)) return std::nullopt;
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      err("malformed number '" + tok + "'");
    }
  }

  Shape parse_shape(std::istringstream& ls) {
    std::string kind;
    if (!(ls >> kind)) err("missing shape kind");
    if (kind == "disk") {
      double x = num(ls, "cx"), y = num(ls, "cy"), r = num(ls, "r");
      if (r <= 0) err("disk radius must be positive");
      return Disk{{x, y}, r};
    }
    if (kind == "annulus") {
      double x = num(ls, "cx"), y = num(ls, "cy"), ri = num(ls, "rin"), ro = num(ls, "rout");
      if (!(0 < ri && ri < ro)) err("annulus radii must satisfy 0 < rin < rout");
      return AnnulusShape{{x, y}, ri, ro};
    }
    if (kind == "rect") {
      double x0 = num(ls, "x0"), y0 = num(ls, "y0"), x1 = num(ls, "x1"), y1 = num(ls, "y1");
      if (!(x0 < x1 && y0 < y1)) err("rect corners must be ordered");
      return RectShape{x0, y0, x1, y1};
    }
    if (kind == "circle") {
      double x = num(ls, "cx"), y = num(ls, "cy"), r = num(ls, "r");
      if (r <= 0) err("circle radius must be positive");
      return CircleShape{{x, y}, r};
    }
    if (kind == "segment") {
      double x0 = num(ls, "x1"), y0 = num(ls, "y1"), x1 = num(ls, "x2"), y1 = num(ls, "y2");
      if (x0 == x1 && y0 == y1) err("segment endpoints coincide");
      return SegmentShape{{x0, y0}, {x1, y1}};
    }
    err("unknown shape kind '" + kind + "'");
  }

  void handle(const std::string& key, std::istringstream& ls) {
    if (key == "resolution") {
      scene_.resolution = static_cast<int>(num(ls, "resolution"));
      if (scene_.resolution < 1) err("resolution must be >= 1");
      return;
    }
    if (key == "degree") {
      scene_.degree = static_cast<int>(num(ls, "degree"));
      if (scene_.degree < 1) err("degree must be >= 1");
      return;
    }
    if (key == "window") {
      Window w;
      w.x0 = num(ls, "x0");
      w.y0 = num(ls, "y0");
      w.x1 = num(ls, "x1");
      w.y1 = num(ls, "y1");
      if (!(w.x0 < w.x1 && w.y0 < w.y1)) err("window corners must be ordered");
      scene_.window = w;
      return;
    }
    if (key == "component") {
      finish_component();
      std::string label;
      if (!(ls >> label)) err("component needs a label");
      for (const auto& c : scene_.components)
        if (c.label == label) err("duplicate component label '" + label + "'");
      cur_ = MeasureComponent{};
      cur_->label = label;
      have_kind_ = have_shape_ = have_mass_ = have_at_ = have_density_ = false;
      uniform_mass_.reset();
      return;
    }
    if (key == "K") {
      scene_.K.push_back(parse_shape(ls));
      return;
    }
    if (!cur_) err("'" + key + "' outside a component block");
    if (key == "kind") {
      std::string k;
      if (!(ls >> k)) err("missing kind");
      if (k == "atom")
        cur_->kind = MeasureComponent::Kind::atom;
      else if (k == "arc")
        cur_->kind = MeasureComponent::Kind::arc;
      else if (k == "area")
        cur_->kind = MeasureComponent::Kind::area;
      else
        err("unknown kind '" + k + "'");
      have_kind_ = true;
      return;
    }
    if (key == "at") {
      double x = num(ls, "x"), y = num(ls, "y");
      cur_->point = {x, y};
      have_at_ = true;
      return;
    }
    if (key == "mass") {
      double re = num(ls, "re");
      double im = opt_num(ls).value_or(0.0);
      cur_->mass = {re, im};
      have_mass_ = true;
      return;
    }
    if (key == "shape") {
      Shape s = parse_shape(ls);
      if (const auto* c = std::get_if<CircleShape>(&s))
        cur_->curve = *c;
      else if (const auto* g = std::get_if<SegmentShape>(&s))
        cur_->curve = *g;
      else if (const auto* d = std::get_if<Disk>(&s))
        cur_->area = *d;
      else if (const auto* a = std::get_if<AnnulusShape>(&s))
        cur_->area = *a;
      else
        cur_->area = std::get<RectShape>(s);
      shape_is_curve_ = std::holds_alternative<CircleShape>(s) ||
                        std::holds_alternative<SegmentShape>(s);
      have_shape_ = true;
      return;
    }
    if (key == "density") {
      std::string tok;
      if (!(ls >> tok)) err("missing density value");
      if (tok == "uniform-mass") {
        uniform_mass_ = num(ls, "total mass");
      } else {
        std::istringstream rs(tok);
        double re;
        if (!(rs >> re) || !rs.eof()) err("malformed number '" + tok + "' (density)");
        double im = opt_num(ls).value_or(0.0);
        cur_->density_const = {re, im};
      }
      have_density_ = true;
      return;
    }
    err("unknown key '" + key + "'");
  }

  void finish_component() {
    if (!cur_) return;
    if (!have_kind_) err("component '" + cur_->label + "' missing kind");
    if (cur_->kind == MeasureComponent::Kind::atom) {
      if (!have_at_) err("atom '" + cur_->label + "' missing position");
      if (!have_mass_) err("atom '" + cur_->label + "' missing mass");
    } else {
      if (!have_shape_) err("component '" + cur_->label + "' missing shape");
      if (!have_density_) err("component '" + cur_->label + "' missing density");
      bool need_curve = cur_->kind == MeasureComponent::Kind::arc;
      if (need_curve != shape_is_curve_)
        err("component '" + cur_->label + "': shape does not match kind");
      if (uniform_mass_) {
        double size = component_geometry_size(*cur_);
        cur_->density_const = {*uniform_mass_ / size, 0.0};
      }
    }
    scene_.components.push_back(std::move(*cur_));
    cur_.reset();
  }

  std::istringstream in_;
  int line_ = 0;
  Scene scene_;
  std::optional<MeasureComponent> cur_;
  std::optional<double> uniform_mass_;
  bool have_kind_ = false, have_shape_ = false, have_mass_ = false, have_at_ = false,
       have_density_ = false, shape_is_curve_ = false;
};

}  // namespace

Scene Scene::parse(const std::string& text) {
  require(text.size() <= (1u << 20), errc::invalid_input, "scene text exceeds 1 MB");
  return Parser(text).run();
}

Scene Scene::parse_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), errc::invalid_input, "cannot open scene file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Scene::serialize() const {
  std::ostringstream out;
  out << "resolution " << resolution << "\n";
  out << "degree " << degree << "\n";
  if (window)
    out << "window " << fmt(window->x0) << " " << fmt(window->y0) << " " << fmt(window->x1) << " "
        << fmt(window->y1) << "\n";
  for (const auto& c : components) {
    out << "component " << c.label << "\n";
    switch (c.kind) {
      case MeasureComponent::Kind::atom:
        out << "kind atom\n";
        out << "at " << fmt(c.point.real()) << " " << fmt(c.point.imag()) << "\n";
        out << "mass " << fmt(c.mass.real());
        if (c.mass.imag() != 0) out << " " << fmt(c.mass.imag());
        out << "\n";
        break;
      case MeasureComponent::Kind::arc:
        out << "kind arc\n";
        out << "shape "
            << std::visit([](const auto& s) { return shape_text(Shape{s}); }, c.curve) << "\n";
        out << "density " << fmt(c.density_const.real());
        if (c.density_const.imag() != 0) out << " " << fmt(c.density_const.imag());
        out << "\n";
        break;
      case MeasureComponent::Kind::area:
        out << "kind area\n";
        out << "shape " << std::visit([](const auto& s) { return shape_text(Shape{s}); }, c.area)
            << "\n";
        out << "density " << fmt(c.density_const.real());
        if (c.density_const.imag() != 0) out << " " << fmt(c.density_const.imag());
        out << "\n";
        break;
    }
  }
  for (const auto& s : K) out << "K " << shape_text(s) << "\n";
  return out.str();
}

}  // namespace capt
