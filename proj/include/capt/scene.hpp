#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capt/measure.hpp"

namespace capt {

/// Parsed scene file: measure components with labels, the K shapes, and
/// numeric defaults.  The text grammar is line oriented:
///
///   # comment
///   resolution 8
///   degree 30
///   window -2 -2 2 2
///   component disk1
///   kind area
///   shape disk 0 0 1
///   density 1
///   component rim
///   kind arc
///   shape circle 0 0 1
///   density uniform-mass 1
///   component a0
///   kind atom
///   at 0 0
///   mass 1
///   K disk 0 0 1
///
/// `density uniform-mass M` resolves to the constant density giving the
/// component total mass M.  Serialization is canonical; parse-serialize
/// round-trips are identical.
struct Scene {
  int resolution = 8;
  int degree = 30;
  std::optional<Window> window;
  std::vector<MeasureComponent> components;
  std::vector<Shape> K;

  PlanarMeasure measure() const { return PlanarMeasure(components, resolution); }
  std::string serialize() const;

  /// Position-annotated parse errors come back as capt::error with
  /// errc::invalid_input and "line N:" prefixes.
  static Scene parse(const std::string& text);
  static Scene parse_file(const std::string& path);
};

}  // namespace capt
