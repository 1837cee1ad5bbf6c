#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tpl/coloring.hpp"
#include "tpl/layout.hpp"
#include "tpl/netlist.hpp"
#include "tpl/router.hpp"
#include "tpl/stitcher.hpp"
#include "tpl/tecg.hpp"

namespace tpl {

/// End-of-pass snapshot taken by run_flow.
struct IterationStats {
  int iteration = 0;  ///< 1-based pass number
  int routed = 0;     ///< pin pairs committed during the pass
  int ripped = 0;     ///< nets ripped up during the pass
  int conflicts = 0;  ///< standing conflict records after the pass
  long long wirelength = 0;
  int cg_vertices = 0;
  int cg_edges = 0;
  int tg_tokens = 0;
  int tg_edges = 0;
  int stitches = 0;  ///< cuts committed so far, in total
};

/// Everything a flow run produces.
struct FlowReport {
  RouteMode mode = RouteMode::triad;
  long long wirelength = 0;  ///< sum of committed wire lengths, unit coords
  int num_stitches = 0;
  int num_conflicts = 0;  ///< standing records plus uncolorable segments
  double runtime_seconds = 0.0;  ///< 0 unless timing was requested
  int routed_two_pin = 0;
  std::vector<std::pair<std::string, int>> unrouted;  ///< (net, pair id)
  std::vector<IterationStats> iterations;
  // Final tracked-state sizes (zero in greedy mode, which tracks nothing).
  int final_cg_vertices = 0;
  int final_cg_edges = 0;
  int final_tg_tokens = 0;
  int final_tg_edges = 0;
  int final_sccs = 0;
  int uncolorable = 0;
  // Input statistics, independent of the mode.
  int grid_width = 0;
  int grid_height = 0;
  int grid_layers = 0;
  int num_nets = 0;
  int num_pins = 0;
  int num_two_pin = 0;
  Layout layout;
  std::vector<std::string> warnings;
  /// Serialized final tracked state (empty in greedy mode), for audits such
  /// as rebuild-equivalence checks.
  std::string tecg_dump;
};

/// Outcome of committing one routed net's wires into the tracked state.
struct CommitResult {
  bool clean = false;  ///< conflicts back at (or below) the pre-commit count
  std::vector<VertexId> ids;  ///< final vertex ids, after any splits
  std::vector<Stitch> stitches;
  /// Nets owning segments in standing conflicts (filled when not clean).
  std::vector<std::string> conflict_nets;
};

/// Inserts wires into the tracked state, allocating ids for any segment
/// whose id is unset.  If insertion raises the conflict count and stitching
/// is enabled, repeatedly plans cuts on an inserted segment in conflict and
/// applies them until the count drops back or no plan is solvable.  On
/// failure the conflicting insertion is left in place; callers choose
/// between keeping it (with its conflicts) and restoring a saved copy.
CommitResult commit_with_stitches(Tecg& t, std::vector<WireSegment> segments,
                                  const SpacingRules& rules,
                                  const Penalties& penalties,
                                  bool enable_stitches = true);

/// Routes a netlist end to end and reports.
///
/// Pin pairs are queued by net bounding-box half-perimeter (small first) and
/// routed in passes.  In triad mode every routed pair is committed through
/// commit_with_stitches against a trial copy of the tracked state; a commit
/// that stays conflicted during the conflict-prohibited passes is rolled
/// back and the most recently committed conflicting net is ripped up and
/// re-queued (each net at most once per pass).  After the prohibited window
/// commits stand even when conflicted.  Greedy mode routes the same queue
/// without coloring pressure and colors each wire on commit, splitting a
/// wire when all three colors are blocked and counting it as uncolorable
/// when splitting cannot free a color.  `timing` stamps wall-clock runtime
/// into the report; leaving it off keeps reports byte-reproducible.
FlowReport run_flow(const Netlist& nl, const RouterConfig& cfg,
                    bool timing = false);

/// Canonical line-oriented JSON rendering of a report: one `report` line,
/// one `netlist_stats` line (identical across modes for the same input), one
/// `iteration` line per pass, one `final` line, then `warning` and
/// `unrouted` lines.  Byte-identical for identical reports.
std::string serialize_flow_report(const FlowReport& report);

/// Result of recoloring a fixed layout.
struct DecomposeReport {
  Layout layout;  ///< input wires (split where needed) with colors stamped
  int num_conflicts = 0;  ///< standing records plus uncolorable classes
  int num_stitches = 0;
  int uncolorable = 0;
  std::vector<Violation> violations;
  std::string tecg_dump;
};

/// Fixed-geometry replay: feeds the layout's wires (ascending id) through
/// the tracked state, splitting wires where conflicts arise, then assigns
/// mask colors and validates the result.
DecomposeReport decompose_layout(const Layout& in, const Penalties& penalties);

}  // namespace tpl
