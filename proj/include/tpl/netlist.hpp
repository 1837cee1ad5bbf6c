#pragma once

#include <compare>
#include <string>
#include <vector>

#include "tpl/geometry.hpp"

namespace tpl {

/// A connection point on the routing grid.
struct Pin {
  Coord x = 0;
  Coord y = 0;
  int layer = 0;

  auto operator<=>(const Pin&) const = default;
};

struct Net {
  std::string name;
  std::vector<Pin> pins;

  bool operator==(const Net&) const = default;
};

/// A routing problem: grid extent, per-layer preferred directions, spacing
/// rules, blocked regions, and the nets to connect.
struct Netlist {
  Coord width = 0;
  Coord height = 0;
  std::vector<Axis> layer_dirs;  ///< index = layer
  SpacingRules rules;
  std::vector<Rect> obstacles;
  std::vector<Net> nets;
};

/// Canonical line-oriented form: one JSON object per line (header, rules,
/// obstacles sorted by position, nets sorted by name), fixed key order.
/// serialize(parse(text)) is byte-identical for canonical input.
std::string serialize_netlist(const Netlist& n);

/// Parses the line-oriented form; field order and whitespace are free.
/// Throws std::invalid_argument (with a line number) on malformed input,
/// out-of-grid coordinates, unknown layers, duplicate net names, empty nets,
/// or rules with sp_tp < sp_w.
Netlist parse_netlist(const std::string& text);

}  // namespace tpl
