#include "tpl/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tpl {

Rect WireSegment::centerline_bbox() const {
  return Rect{x1, y1, x2, y2, layer};
}

Rect WireSegment::body() const { return expand_rect(centerline_bbox(), hw); }

Coord WireSegment::span_lo() const {
  return axis == Axis::horizontal ? x1 : y1;
}

Coord WireSegment::span_hi() const {
  return axis == Axis::horizontal ? x2 : y2;
}

Coord WireSegment::cross() const {
  return axis == Axis::horizontal ? y1 : x1;
}

Coord WireSegment::length() const { return span_hi() - span_lo(); }

WireSegment make_segment(int id, std::string net, int layer, Axis axis,
                         Coord x1, Coord y1, Coord x2, Coord y2, Coord hw) {
  if (axis == Axis::horizontal && y1 != y2)
    throw std::invalid_argument("horizontal segment endpoints differ in y");
  if (axis == Axis::vertical && x1 != x2)
    throw std::invalid_argument("vertical segment endpoints differ in x");
  if (hw < 1) throw std::invalid_argument("half width must be >= 1");
  WireSegment s;
  s.id = id;
  s.net = std::move(net);
  s.layer = layer;
  s.axis = axis;
  s.x1 = std::min(x1, x2);
  s.x2 = std::max(x1, x2);
  s.y1 = std::min(y1, y2);
  s.y2 = std::max(y1, y2);
  s.hw = hw;
  return s;
}

Rect expand_rect(const Rect& r, Coord margin) {
  return Rect{r.x_lo - margin, r.y_lo - margin, r.x_hi + margin,
              r.y_hi + margin, r.layer};
}

Shadow shadow_of(const WireSegment& s, const SpacingRules& rules) {
  return Shadow{s.id, expand_rect(s.centerline_bbox(), s.hw + rules.sp_tp)};
}

Coord rect_clearance(const Rect& a, const Rect& b) {
  Coord gap_x = std::max<Coord>({0, b.x_lo - a.x_hi, a.x_lo - b.x_hi});
  Coord gap_y = std::max<Coord>({0, b.y_lo - a.y_hi, a.y_lo - b.y_hi});
  return std::max(gap_x, gap_y);
}

bool open_overlap(const Rect& a, const Rect& b) {
  return a.x_lo < b.x_hi && b.x_lo < a.x_hi && a.y_lo < b.y_hi &&
         b.y_lo < a.y_hi;
}

Coord min_spacing(const WireSegment& a, const WireSegment& b) {
  if (a.layer != b.layer)
    throw std::invalid_argument("min_spacing requires segments on one layer");
  return rect_clearance(a.body(), b.body());
}

bool bodies_touch(const WireSegment& a, const WireSegment& b) {
  return a.layer == b.layer && rect_clearance(a.body(), b.body()) == 0;
}

bool segments_conflict(const WireSegment& a, const WireSegment& b,
                       const SpacingRules& rules) {
  if (a.layer != b.layer) return false;
  if (min_spacing(a, b) >= rules.sp_tp) return false;
  if (a.net == b.net && bodies_touch(a, b)) return false;
  return true;
}

namespace {

struct AxialSpan {
  Coord lo = 0;
  Coord hi = 0;
  int token = 0;
};

// Project the shadows onto w's axis, keeping only those that reach the wire
// body sideways and overlap the wire extent lengthwise, clamped to the wire.
std::vector<AxialSpan> project_spans(
    const WireSegment& w, const std::vector<std::pair<Shadow, int>>& shadows) {
  Coord perp_lo = w.cross() - w.hw;
  Coord perp_hi = w.cross() + w.hw;
  Coord lo = w.span_lo();
  Coord hi = w.span_hi();
  std::vector<AxialSpan> spans;
  for (const auto& [shadow, token] : shadows) {
    const Rect& r = shadow.region;
    if (r.layer != w.layer) continue;
    Coord r_perp_lo = w.axis == Axis::horizontal ? r.y_lo : r.x_lo;
    Coord r_perp_hi = w.axis == Axis::horizontal ? r.y_hi : r.x_hi;
    if (!(r_perp_lo < perp_hi && perp_lo < r_perp_hi)) continue;
    Coord r_ax_lo = w.axis == Axis::horizontal ? r.x_lo : r.y_lo;
    Coord r_ax_hi = w.axis == Axis::horizontal ? r.x_hi : r.y_hi;
    if (!(r_ax_lo < hi && lo < r_ax_hi)) continue;
    spans.push_back({std::max(r_ax_lo, lo), std::min(r_ax_hi, hi), token});
  }
  return spans;
}

}  // namespace

std::vector<ShadowyInterval> shadowy_intervals(
    const WireSegment& w, const std::vector<std::pair<Shadow, int>>& shadows) {
  Coord lo = w.span_lo();
  Coord hi = w.span_hi();
  std::vector<AxialSpan> spans = project_spans(w, shadows);

  if (lo == hi) {
    ShadowyInterval only{lo, hi, {}};
    for (const AxialSpan& s : spans)
      if (s.lo <= lo && s.hi >= hi) only.tokens.insert(s.token);
    return {only};
  }

  std::set<Coord> bounds{lo, hi};
  for (const AxialSpan& s : spans) {
    if (s.lo > lo && s.lo < hi) bounds.insert(s.lo);
    if (s.hi > lo && s.hi < hi) bounds.insert(s.hi);
  }

  std::vector<ShadowyInterval> prim;
  for (auto it = bounds.begin(); std::next(it) != bounds.end(); ++it) {
    ShadowyInterval iv{*it, *std::next(it), {}};
    for (const AxialSpan& s : spans)
      if (s.lo <= iv.lo && s.hi >= iv.hi) iv.tokens.insert(s.token);
    prim.push_back(std::move(iv));
  }

  // A boundary where shadows abut without open overlap is a point free of
  // every shadow; keep it as a zero-length interval when covered intervals
  // flank it on both sides.
  std::vector<ShadowyInterval> with_points;
  for (size_t i = 0; i < prim.size(); ++i) {
    with_points.push_back(prim[i]);
    if (i + 1 == prim.size()) continue;
    Coord m = prim[i].hi;
    bool interior = false;
    for (const AxialSpan& s : spans)
      if (s.lo < m && m < s.hi) {
        interior = true;
        break;
      }
    if (!interior && !prim[i].tokens.empty() && !prim[i + 1].tokens.empty())
      with_points.push_back(ShadowyInterval{m, m, {}});
  }

  std::vector<ShadowyInterval> out;
  for (ShadowyInterval& iv : with_points) {
    if (!out.empty() && out.back().tokens == iv.tokens)
      out.back().hi = iv.hi;
    else
      out.push_back(std::move(iv));
  }
  return out;
}

std::vector<Coord> dpl_stitch_positions(
    const WireSegment& w, const std::vector<std::pair<Shadow, int>>& shadows) {
  std::vector<Coord> cuts;
  for (const ShadowyInterval& iv : shadowy_intervals(w, shadows)) {
    if (!iv.tokens.empty() || iv.lo >= iv.hi) continue;
    if (iv.lo == w.span_lo() || iv.hi == w.span_hi()) continue;
    cuts.push_back(std::midpoint(iv.lo, iv.hi));
  }
  return cuts;
}

}  // namespace tpl
