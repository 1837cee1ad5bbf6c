#pragma once

#include <string>
#include <vector>

#include "tpl/geometry.hpp"

namespace tpl {

/// A stitch record: the point on a wire's center line where the wire was cut
/// so its two sides may take different mask colors.
struct Stitch {
  std::string net;
  int layer = 0;
  Coord x = 0;
  Coord y = 0;

  auto operator<=>(const Stitch&) const = default;
};

/// A committed wire together with its color-class bookkeeping: `token` is the
/// color class the wire resolved to (-1 when unknown, e.g. freshly parsed
/// files) and `color` is the stamped mask color (0 = none, else 1..3) used by
/// serialization and rendering.
struct PlacedWire {
  WireSegment seg;
  int token = -1;
  int color = 0;

  auto operator<=>(const PlacedWire&) const = default;
};

/// Full routed-layout database: chip extent, spacing rules, blockages, the
/// committed wires and any stitch cuts made while resolving mask conflicts.
struct Layout {
  Coord width = 0;
  Coord height = 0;
  int layers = 1;
  SpacingRules rules;
  std::vector<Rect> obstacles;
  std::vector<PlacedWire> wires;
  std::vector<Stitch> stitches;
};

/// Serializes to the canonical line-oriented JSON form: one header line, then
/// obstacles, wires and stitches, each sorted.  parse(serialize(x)) is
/// byte-identical under re-serialization.
std::string serialize_layout(const Layout& layout);

/// Parses the line-oriented JSON form; throws std::invalid_argument on
/// malformed input (bad JSON, missing fields, unknown record kinds).
Layout parse_layout(const std::string& text);

}  // namespace tpl
