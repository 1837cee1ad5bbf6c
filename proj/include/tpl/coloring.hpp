#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "tpl/layout.hpp"
#include "tpl/tecg.hpp"

namespace tpl {

inline constexpr int kNumMasks = 3;

/// Final token -> mask color map.  Colors are 1..3.  Tokens belonging to a
/// token-graph component that admits no proper 3-coloring are listed in
/// `uncolorable` instead of being assigned.
struct MaskAssignment {
  std::map<TokenId, int> color;
  std::set<TokenId> uncolorable;
  /// Token-graph edges inside uncolorable components (lo id first).
  std::vector<std::pair<TokenId, TokenId>> residual_token_edges;
  /// Conflict-graph edges left monochromatic under this assignment: edges
  /// whose endpoints share a token (and hence a color) plus every edge
  /// between members of an uncolorable component.  Filled only by the
  /// conflict-graph-aware overload of assign_colors.
  std::vector<std::pair<VertexId, VertexId>> residual_conflicts;

  bool fully_colored() const { return uncolorable.empty(); }
};

/// A decomposition defect found by validate_layout.
struct Violation {
  enum class Kind { same_color_spacing, uncolorable_component };

  Kind kind = Kind::same_color_spacing;
  /// Segment ids involved: two for spacing violations (lo id first), one for
  /// an uncolorable segment.
  std::vector<int> segments;
  /// Body-to-body clearance for spacing violations (always < sp_tp), 0
  /// otherwise.
  Coord distance = 0;

  auto operator<=>(const Violation&) const = default;
};

/// Exact per-component 3-coloring of the token graph.  Components are
/// processed in ascending token order; within a component the backtracking
/// tries colors lowest-first, so results are deterministic.  Components with
/// no proper coloring contribute their tokens to `uncolorable` and all their
/// edges to `residual_token_edges`; colorable components are always colored
/// (the search is exhaustive).
MaskAssignment assign_colors(const TokenGraph& tg);

/// As above, but additionally resolves `residual_conflicts` against the
/// conflict graph: edges whose endpoint colors collapse to one color and
/// edges inside uncolorable components.
MaskAssignment assign_colors(const Tecg& t);

/// Exhaustive backtracking 3-coloring of the conflict graph itself (tokens
/// ignored).  Returns a proper coloring (vertex -> 1..3) or nullopt when none
/// exists.  Throws std::invalid_argument when the graph has more than `bound`
/// vertices.
std::optional<std::map<VertexId, int>> brute_force_3color(
    const ConflictGraph& cg, std::size_t bound = 20);

/// Full-layout decomposition check.  Every wire's color is resolved through
/// its token; wires whose token has no color yield an uncolorable_component
/// violation.  Two wires on one layer violate when their bodies sit closer
/// than sp_tp, they resolved to the same color, and they are not touching
/// pieces of one net (which is what a stitch produces).  Pairs are found via
/// spatial buckets, checked exactly, and returned sorted.
std::vector<Violation> validate_layout(const Layout& layout,
                                       const MaskAssignment& assignment,
                                       const SpacingRules& rules);

}  // namespace tpl
