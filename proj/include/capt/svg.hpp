#pragma once

#include <string>
#include <vector>

#include "capt/common.hpp"

namespace capt {

/// Minimal deterministic SVG 1.1 writer.  World coordinates (y up) map to
/// page coordinates; all numbers print with fixed precision so identical
/// inputs give byte-identical files.
class SvgWriter {
 public:
  SvgWriter(Window view, double scale = 256);

  void rect(double x0, double y0, double x1, double y1, const std::string& fill,
            const std::string& stroke = "", double stroke_width = 0, double opacity = 1);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double width, bool closed = false);
  void circle(double cx, double cy, double r, const std::string& stroke, double width);
  void text(double x, double y, const std::string& s, int px = 12,
            const std::string& fill = "#333333");
  void comment(const std::string& s);

  std::string str() const;

 private:
  double tx(double x) const { return (x - view_.x0) * scale_; }
  double ty(double y) const { return (view_.y1 - y) * scale_; }
  static std::string num(double v);

  Window view_;
  double scale_;
  std::string body_;
};

/// Color ramp for heatmaps: t in [0,1] to a hex color.
std::string heat_color(double t);

}  // namespace capt
