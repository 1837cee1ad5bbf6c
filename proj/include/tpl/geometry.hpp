#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tpl {

using Coord = long long;

enum class Axis { horizontal, vertical };

// Closed axis-aligned rectangle in integer grid units.
struct Rect {
  Coord x_lo = 0;
  Coord y_lo = 0;
  Coord x_hi = 0;
  Coord y_hi = 0;
  int layer = 0;

  bool operator==(const Rect&) const = default;
};

struct SpacingRules {
  Coord sp_w = 2;   // minimum wire spacing
  Coord hw_w = 1;   // default half wire width
  Coord sp_tp = 6;  // coloring spacing, 3 * sp_w by default
};

// A wire segment given by its center line; the physical body extends hw on
// every side. Coordinates are kept normalized (x1 <= x2, y1 <= y2).
struct WireSegment {
  int id = -1;
  std::string net;
  int layer = 0;
  Axis axis = Axis::horizontal;
  Coord x1 = 0;
  Coord y1 = 0;
  Coord x2 = 0;
  Coord y2 = 0;
  Coord hw = 1;

  Rect centerline_bbox() const;
  Rect body() const;
  Coord span_lo() const;  // axial extent of the center line
  Coord span_hi() const;
  Coord cross() const;  // perpendicular coordinate of the center line
  Coord length() const;
};

WireSegment make_segment(int id, std::string net, int layer, Axis axis,
                         Coord x1, Coord y1, Coord x2, Coord y2, Coord hw);

struct Shadow {
  int owner = -1;
  Rect region;
};

Rect expand_rect(const Rect& r, Coord margin);

// Shadow region = center-line bbox grown by hw + sp_tp, i.e. the locus of
// center points whose wire body would sit closer than sp_tp to s.
Shadow shadow_of(const WireSegment& s, const SpacingRules& rules);

// Rectilinear clearance between two closed rects: the larger of the per-axis
// gaps, 0 when they touch or overlap. Chosen so that clearance(a,b) < d is
// exactly "b overlaps a grown by d with positive area".
Coord rect_clearance(const Rect& a, const Rect& b);

// Positive-area intersection (boundary contact does not count).
bool open_overlap(const Rect& a, const Rect& b);

// Body-to-body clearance. Throws std::invalid_argument on layer mismatch.
Coord min_spacing(const WireSegment& a, const WireSegment& b);

bool bodies_touch(const WireSegment& a, const WireSegment& b);

// Coloring conflict predicate: same layer, clearance below sp_tp, and not a
// physically connected (touching) pair of the same net.
bool segments_conflict(const WireSegment& a, const WireSegment& b,
                       const SpacingRules& rules);

// Maximal stretch of a wire's axial extent covered by a fixed set of shadow
// tokens. Zero-length intervals mark single points located exactly between
// abutting shadows.
struct ShadowyInterval {
  Coord lo = 0;
  Coord hi = 0;
  std::set<int> tokens;

  bool operator==(const ShadowyInterval&) const = default;
};

// Partition w's center-line extent by the given token-carrying shadows.
// A shadow participates only if it overlaps the wire body's perpendicular
// range with positive width and the wire's axial extent with positive
// length. Interval coverage is open: a shadow ending exactly at a point
// does not cover that point, so a point where shadows abut from both sides
// becomes a zero-length interval with an empty token set.
std::vector<ShadowyInterval> shadowy_intervals(
    const WireSegment& w, const std::vector<std::pair<Shadow, int>>& shadows);

// Double-patterning-style stitch rule: candidate positions are midpoints of
// positive-length fully uncovered intervals that do not touch the wire ends.
std::vector<Coord> dpl_stitch_positions(
    const WireSegment& w, const std::vector<std::pair<Shadow, int>>& shadows);

}  // namespace tpl
