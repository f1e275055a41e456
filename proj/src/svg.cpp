#include "capt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace capt {

SvgWriter::SvgWriter(Window view, double scale) : view_(view), scale_(scale) {}

std::string SvgWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void SvgWriter::rect(double x0, double y0, double x1, double y1, const std::string& fill,
                     const std::string& stroke, double stroke_width, double opacity) {
  body_ += "<rect x=\"" + num(tx(x0)) + "\" y=\"" + num(ty(y1)) + "\" width=\"" +
           num((x1 - x0) * scale_) + "\" height=\"" + num((y1 - y0) * scale_) + "\" fill=\"" +
           (fill.empty() ? "none" : fill) + "\"";
  if (!stroke.empty())
    body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width * scale_) + "\"";
  if (opacity != 1) body_ += " fill-opacity=\"" + num(opacity) + "\"";
  body_ += "/>\n";
}

void SvgWriter::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& stroke, double width, bool closed) {
  if (pts.empty()) return;
  body_ += closed ? "<polygon points=\"" : "<polyline points=\"";
  for (std::size_t t = 0; t < pts.size(); ++t) {
    if (t) body_ += " ";
    body_ += num(tx(pts[t].first)) + "," + num(ty(pts[t].second));
  }
  body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width * scale_) +
           "\"/>\n";
}

void SvgWriter::circle(double cx, double cy, double r, const std::string& stroke, double width) {
  body_ += "<circle cx=\"" + num(tx(cx)) + "\" cy=\"" + num(ty(cy)) + "\" r=\"" + num(r * scale_) +
           "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width * scale_) +
           "\"/>\n";
}

void SvgWriter::text(double x, double y, const std::string& s, int px, const std::string& fill) {
  body_ += "<text x=\"" + num(tx(x)) + "\" y=\"" + num(ty(y)) + "\" font-size=\"" +
           std::to_string(px) + "\" font-family=\"monospace\" fill=\"" + fill + "\">" + s +
           "</text>\n";
}

void SvgWriter::comment(const std::string& s) { body_ += "<!-- " + s + " -->\n"; }

std::string SvgWriter::str() const {
  double w = view_.width() * scale_, h = view_.height() * scale_;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"#ffffff\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  // dark blue -> cyan -> yellow -> red
  double r, g, b;
  if (t < 1.0 / 3) {
    double u = 3 * t;
    r = 0.05;
    g = 0.2 + 0.6 * u;
    b = 0.45 + 0.4 * u;
  } else if (t < 2.0 / 3) {
    double u = 3 * t - 1;
    r = 0.05 + 0.9 * u;
    g = 0.8;
    b = 0.85 - 0.75 * u;
  } else {
    double u = 3 * t - 2;
    r = 0.95;
    g = 0.8 - 0.7 * u;
    b = 0.1;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(r * 255)),
                static_cast<int>(std::lround(g * 255)), static_cast<int>(std::lround(b * 255)));
  return buf;
}

}  // namespace capt
