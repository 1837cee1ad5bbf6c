#include "tpl/stitcher.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "tpl/log.hpp"

namespace tpl {
namespace {

StitchPlan unsolvable_plan(VertexId v, const Penalties& penalties) {
  return {v, {}, 0, penalties.unsolvable, false};
}

bool scc_contains(const Scc& scc, TokenId t) {
  return std::find(scc.begin(), scc.end(), t) != scc.end();
}

void require_conflicting(VertexId v, const Tecg& t) {
  if (!t.cg().has_vertex(v)) {
    throw std::invalid_argument("no segment " + std::to_string(v));
  }
  const TokenId tc = t.cg().token_of(v);
  for (VertexId u : t.cg().neighbors(v)) {
    if (t.cg().token_of(u) == tc) {
      return;
    }
  }
  throw std::invalid_argument("segment " + std::to_string(v) +
                              " has no conflicting edge to plan around");
}

/// Interior cut position for an interval: its midpoint, nudged inside the
/// wire extent; nullopt when the interval admits no legal cut.
std::optional<Coord> cut_position(const ShadowyInterval& iv,
                                  const WireSegment& w) {
  if (iv.lo >= iv.hi) {
    return std::nullopt;
  }
  Coord mid = std::midpoint(iv.lo, iv.hi);
  mid = std::max(mid, w.span_lo() + 1);
  mid = std::min(mid, w.span_hi() - 1);
  if (mid <= w.span_lo() || mid >= w.span_hi() || mid < iv.lo ||
      mid > iv.hi) {
    return std::nullopt;
  }
  return mid;
}

}  // namespace

SplitContext compute_split_context(VertexId v, const Scc& scc, const Tecg& t,
                                   const SpacingRules& rules) {
  SplitContext ctx;
  ctx.scc = scc;
  const WireSegment& w = t.cg().segment(v);
  std::vector<std::pair<Shadow, int>> shadows;
  for (VertexId u : t.cg().neighbors(v)) {
    const WireSegment& su = t.cg().segment(u);
    if (su.net == w.net) {
      continue;
    }
    const TokenId tu = t.cg().token_of(u);
    if (!scc_contains(scc, tu)) {
      continue;
    }
    shadows.emplace_back(shadow_of(su, rules), static_cast<int>(tu));
  }
  ctx.intervals = shadowy_intervals(w, shadows);
  return ctx;
}

std::optional<std::vector<Coord>> sweep_stitch_cuts(
    const WireSegment& seg, const std::vector<ShadowyInterval>& intervals) {
  // A stretch covered by all three classes leaves no color for any piece
  // containing it.
  for (const ShadowyInterval& iv : intervals) {
    if (iv.tokens.size() > 2) {
      TPL_LOG(debug, "interval [" << iv.lo << "," << iv.hi
                                  << "] blocked by three classes");
      return std::nullopt;
    }
  }

  // Single sweep.  `passed` always holds the classes seen by the piece being
  // grown since the last cut — including the cut interval's own class, so a
  // plan is only emitted when every piece keeps a free color.
  std::vector<Coord> cuts;
  std::set<int> passed;
  std::optional<std::size_t> cand;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const ShadowyInterval& iv = intervals[i];
    passed.insert(iv.tokens.begin(), iv.tokens.end());
    if (passed.size() > 2) {
      if (!cand.has_value()) {
        return std::nullopt;
      }
      cuts.push_back(*cut_position(intervals[*cand], seg));
      passed.clear();
      for (std::size_t k = *cand; k <= i; ++k) {
        passed.insert(intervals[k].tokens.begin(), intervals[k].tokens.end());
      }
      cand.reset();
      if (passed.size() > 2) {
        // The stretch between the cut just placed and here is itself
        // three-class; no earlier candidate can exist inside it.
        return std::nullopt;
      }
    }
    if (iv.tokens.size() == 1 && cut_position(iv, seg).has_value()) {
      cand = i;
    }
  }
  return cuts;
}

StitchPlan plan_stitches(VertexId v, const Scc& scc, const Tecg& t,
                         const SpacingRules& rules,
                         const Penalties& penalties) {
  require_conflicting(v, t);
  if (!scc_contains(scc, t.cg().token_of(v))) {
    throw std::invalid_argument("clique does not cover the class of segment " +
                                std::to_string(v));
  }

  SplitContext ctx = compute_split_context(v, scc, t, rules);
  const WireSegment& w = t.cg().segment(v);

  std::optional<std::vector<Coord>> swept = sweep_stitch_cuts(w, ctx.intervals);
  if (!swept.has_value()) {
    TPL_LOG(debug, "segment " << v
                              << ": no cut set keeps every piece colorable");
    return unsolvable_plan(v, penalties);
  }
  std::vector<Coord> cuts = std::move(*swept);

  if (cuts.empty()) {
    // The sweep never exceeded two classes, but the conflict still needs the
    // wire split; cut at the first stretch covered by at most one class.
    for (const ShadowyInterval& iv : ctx.intervals) {
      if (iv.tokens.size() <= 1) {
        if (const auto pos = cut_position(iv, w)) {
          cuts.push_back(*pos);
          break;
        }
      }
    }
    if (cuts.empty()) {
      return unsolvable_plan(v, penalties);
    }
  }

  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const int n = static_cast<int>(cuts.size());
  return {v, std::move(cuts), n, n * penalties.st, true};
}

StitchPlan plan_for_all_sccs(VertexId v, const Tecg& t,
                             const SpacingRules& rules,
                             const Penalties& penalties) {
  require_conflicting(v, t);
  const TokenId tc = t.cg().token_of(v);

  std::vector<Scc> owning;
  for (const Scc& s : t.tg().sccs()) {
    if (scc_contains(s, tc)) {
      owning.push_back(s);
    }
  }
  if (owning.empty()) {
    TPL_LOG(info, "segment " << v << ": conflict without clique context, "
                             << "unsplittable by this scheme");
    return unsolvable_plan(v, penalties);
  }

  std::set<Coord> merged;
  for (const Scc& s : owning) {
    StitchPlan plan = plan_stitches(v, s, t, rules, penalties);
    if (!plan.solvable) {
      return unsolvable_plan(v, penalties);
    }
    merged.insert(plan.cuts.begin(), plan.cuts.end());
  }
  std::vector<Coord> cuts(merged.begin(), merged.end());
  const int n = static_cast<int>(cuts.size());
  return {v, std::move(cuts), n, n * penalties.st, true};
}

std::vector<VertexId> apply_stitches(const StitchPlan& plan, Tecg& t,
                                     const SpacingRules& rules) {
  if (!plan.solvable || plan.cuts.empty()) {
    throw std::invalid_argument("stitch plan has no cuts to apply");
  }
  if (!t.cg().has_vertex(plan.target)) {
    throw std::invalid_argument("no segment " + std::to_string(plan.target));
  }
  const WireSegment seg = t.cg().segment(plan.target);
  Coord prev = seg.span_lo();
  for (Coord c : plan.cuts) {
    if (c <= prev || c >= seg.span_hi()) {
      throw std::invalid_argument("cut positions must increase strictly "
                                  "inside the wire extent");
    }
    prev = c;
  }

  t.remove_vertex(plan.target);

  std::vector<VertexId> out;
  std::vector<Coord> bounds = plan.cuts;
  bounds.push_back(seg.span_hi());
  Coord lo = seg.span_lo();
  for (Coord hi : bounds) {
    WireSegment piece = seg;
    piece.id = t.allocate_segment_id();
    if (seg.axis == Axis::horizontal) {
      piece.x1 = lo;
      piece.x2 = hi;
    } else {
      piece.y1 = lo;
      piece.y2 = hi;
    }
    out.push_back(t.insert_segment_connected(piece, rules));
    lo = hi;
  }
  if (t.has_conflicts()) {
    TPL_LOG(info, "stitches on segment " << plan.target
                                         << " left conflicts in place");
  }
  return out;
}

std::vector<Stitch> stitch_records(const WireSegment& seg,
                                   const std::vector<Coord>& cuts) {
  std::vector<Stitch> out;
  for (Coord c : cuts) {
    if (seg.axis == Axis::horizontal) {
      out.push_back({seg.net, seg.layer, c, seg.cross()});
    } else {
      out.push_back({seg.net, seg.layer, seg.cross(), c});
    }
  }
  return out;
}

}  // namespace tpl
