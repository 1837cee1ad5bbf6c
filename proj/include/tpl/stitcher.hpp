#pragma once

#include <optional>
#include <set>
#include <vector>

#include "tpl/geometry.hpp"
#include "tpl/layout.hpp"
#include "tpl/tecg.hpp"

namespace tpl {

/// Cost knobs for conflict resolution, in routing-cost units (grid-edge
/// steps).
struct Penalties {
  long long st = 20;           ///< per generated stitch
  long long unsolvable = 10000;  ///< per conflict no stitch plan can solve
  long long conflict = 5000;   ///< per committed conflict (router surcharge)
};

/// Where to cut one wire segment so its pieces can take different colors.
/// solvable=false means the scheme found no cut set; then cuts is empty and
/// cost_delta carries the unsolvable penalty.
struct StitchPlan {
  VertexId target = -1;
  std::vector<Coord> cuts;  ///< ascending axial positions, strictly inside
  int num_st = 0;           ///< == cuts.size()
  long long cost_delta = 0;
  bool solvable = false;
};

/// Working state of one per-clique planning pass: the clique under analysis,
/// the wire's covering intervals, and the token accumulator the sweep drags
/// along.
struct SplitContext {
  Scc scc{};
  std::vector<ShadowyInterval> intervals;
  std::set<int> passed;
};

/// Intervals of v's wire as covered by the shadows of its conflict-graph
/// neighbours whose color class belongs to `scc` (same-net neighbours are
/// exempt, as their closeness never forces colors apart).
SplitContext compute_split_context(VertexId v, const Scc& scc, const Tecg& t,
                                   const SpacingRules& rules);

/// The raw interval sweep shared by the clique planner and the greedy
/// baseline's split fallback.  Walks the covering intervals of `seg`,
/// remembers the last single-class interval with a legal cut position as the
/// candidate, and cuts there whenever the classes accumulated since the last
/// cut exceed two.  Returns nullopt when no cut set can keep every piece
/// under three classes (an interval covered by three classes, or an overflow
/// with no usable candidate); an empty vector means the sweep never
/// overflowed and no cut is needed.
std::optional<std::vector<Coord>> sweep_stitch_cuts(
    const WireSegment& seg, const std::vector<ShadowyInterval>& intervals);

/// Plans stitches for one conflicting wire against one clique containing its
/// class.  Any interval covered by all three clique classes makes the
/// conflict unsolvable.  Otherwise a single sweep walks the intervals,
/// remembers the last single-class interval as the cut candidate, and cuts
/// there whenever the classes accumulated since the previous cut exceed two;
/// a sweep that needed no cut still forces one (a conflict is only resolved
/// by splitting), at the first interval covered by at most one class.
/// Throws std::invalid_argument when v has no conflicting edge or its class
/// is not in scc.
StitchPlan plan_stitches(VertexId v, const Scc& scc, const Tecg& t,
                         const SpacingRules& rules, const Penalties& penalties);

/// Runs plan_stitches for every clique containing v's class and merges the
/// cut sets.  No clique at all, or any unsolvable clique, yields a flat
/// unsolvable plan.
StitchPlan plan_for_all_sccs(VertexId v, const Tecg& t,
                             const SpacingRules& rules,
                             const Penalties& penalties);

/// Executes a solvable plan: removes the wire, re-inserts the pieces cut at
/// the planned positions (pieces touch, so same-net adjacency keeps them
/// exempt from conflicts), and returns the new vertex ids in axial order.
/// Re-insertion runs the full connection machinery, so a piece that still
/// crowds all three colors leaves a logged conflict in place.  Throws
/// std::invalid_argument on unsolvable or empty plans.
std::vector<VertexId> apply_stitches(const StitchPlan& plan, Tecg& t,
                                     const SpacingRules& rules);

/// Stitch file records (cut point on the center line) for a wire cut at the
/// given axial positions.
std::vector<Stitch> stitch_records(const WireSegment& seg,
                                   const std::vector<Coord>& cuts);

}  // namespace tpl
