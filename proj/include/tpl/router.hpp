#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tpl/geometry.hpp"
#include "tpl/layout.hpp"
#include "tpl/netlist.hpp"
#include "tpl/stitcher.hpp"
#include "tpl/tecg.hpp"

namespace tpl {

/// Occupancy states for cells not owned by a net.
inline constexpr int kFreeCell = -1;
inline constexpr int kObstacleCell = -2;

/// One grid cell address: column, row, layer.
struct GridPoint {
  int x = 0;
  int y = 0;
  int layer = 0;

  auto operator<=>(const GridPoint&) const = default;
};

/// Uniform cell grid with one-net-per-cell occupancy.
///
/// Tracks sit at unit pitch 2*hw_w + sp_w, so wires in adjacent cells are
/// exactly sp_w apart: same-mask spacing legality is structural and needs no
/// checking during search.  Cell (cx, cy) maps to the unit-coordinate track
/// center (ux(cx), uy(cy)); a margin of hw_w + sp_w keeps the outermost
/// wires sp_w away from the chip edge.
struct RoutingGrid {
  int width = 0;   ///< cells per row
  int height = 0;  ///< cells per column
  int layers = 1;
  std::vector<Axis> layer_dirs;  ///< preferred directions, advisory only
  SpacingRules rules;
  long long unit_wire_cost = 1;
  long long bend_cost = 1;
  long long via_cost = 3;
  /// cell -> kFreeCell, kObstacleCell, or the owning net index.
  std::vector<int> occupancy;

  std::size_t index(int x, int y, int layer) const;
  bool in_bounds(int x, int y, int layer) const;
  int& at(int x, int y, int layer);
  int at(int x, int y, int layer) const;

  Coord pitch() const { return 2 * rules.hw_w + rules.sp_w; }
  Coord margin() const { return rules.hw_w + rules.sp_w; }
  Coord ux(int cx) const { return margin() + pitch() * cx; }
  Coord uy(int cy) const { return margin() + pitch() * cy; }
  Coord width_units() const;
  Coord height_units() const;
};

/// Grid sized from a netlist, obstacles stamped, nothing routed.
RoutingGrid make_grid(const Netlist& nl);

/// Routing request for one pin pair of a net.
struct TwoPinNet {
  int id = -1;         ///< unique across the decomposition
  int net_index = -1;  ///< position of the parent net in the netlist
  std::string net_name;
  Pin source;
  Pin target;
};

/// Flow selector: conflict-aware routing or the fixed-color baseline.
enum class RouteMode { triad, greedy };

/// Knobs for one flow run.
struct RouterConfig {
  SpacingRules rules;
  Penalties penalties;
  int max_iterations = 20;
  /// Passes during which committing a coloring conflict is forbidden; rip-up
  /// takes over instead.
  int conflict_prohibited_iterations = 15;
  RouteMode mode = RouteMode::triad;
  bool enable_stitches = true;  ///< plan cut points when a commit conflicts
  unsigned rng_seed = 1;        ///< reserved; the flow itself is deterministic
};

/// Spanning-tree decomposition of every net into pin pairs.  Per net, a
/// minimum spanning tree under the Manhattan cell metric connects the pins,
/// yielding (pins - 1) pairs.  Duplicate pins are dropped and nets left with
/// fewer than two pins are skipped; both append a note to `warnings` when a
/// sink is given.
std::vector<TwoPinNet> decompose_nets(
    const Netlist& nl, std::vector<std::string>* warnings = nullptr);

/// Per-cell sets of color classes that crowd the cell: class t is present
/// when some committed segment of class t sits within the coloring spacing
/// of a wire body centered there.
std::vector<std::set<TokenId>> build_shadow_map(const Tecg& t,
                                                const RoutingGrid& grid);

/// Outcome of one pin-pair search.
struct RouteResult {
  bool routed = false;
  std::vector<GridPoint> path;        ///< cell trace, source first
  std::vector<WireSegment> segments;  ///< path as unit-coordinate wires, ids unset
  long long cost = 0;                 ///< base_cost + tpl_cost
  long long base_cost = 0;            ///< wire steps + bends + vias
  long long tpl_cost = 0;             ///< coloring-pressure surcharges
  int stitch_risk = 0;    ///< steps crowded by two classes of one 3-clique
  int conflict_risk = 0;  ///< steps crowded by all three classes of one
};

/// Lowest-cost path between the pins of `net` over the committed state.
///
/// Base cost: unit_wire_cost per cell entered (waived on cells the net
/// already owns), bend_cost per direction change, via_cost per layer change.
/// Cells of other nets and obstacles are impassable.  In triad mode each
/// free cell also charges coloring pressure: a cell crowded by two classes
/// of a 3-clique adds penalties.st (a cut would likely be needed there), one
/// crowded by all three adds penalties.conflict per clique — or becomes
/// impassable while conflicts are prohibited.  Greedy mode charges no
/// pressure.  Deterministic: cost ties resolve by state index, neighbors
/// expand in a fixed order.
RouteResult route_two_pin(const TwoPinNet& net, const Tecg& t,
                          const RoutingGrid& grid, const RouterConfig& cfg,
                          bool conflicts_prohibited = true);

/// Recomputes the cost of a path under the same pricing as route_two_pin;
/// nullopt when the path is empty, discontinuous, out of bounds, or blocked.
/// Audit tool: route_two_pin's reported cost always matches.
std::optional<long long> path_cost(const std::vector<GridPoint>& path,
                                   const Tecg& t, const RoutingGrid& grid,
                                   const RouterConfig& cfg, int net_index,
                                   bool conflicts_prohibited = true);

/// Converts a cell path into maximal straight wires in unit coordinates
/// (ids unset).  Corner cells belong to both adjoining runs, so the pieces
/// of one net touch; a lone cell between two layer changes becomes a
/// zero-length point wire.
std::vector<WireSegment> path_to_segments(const std::vector<GridPoint>& path,
                                          const RoutingGrid& grid,
                                          const std::string& net);

/// Fixed-color baseline: the lowest of the three mask colors not used by any
/// committed wire in coloring range of `seg`; nullopt when all three are
/// taken.  Uncolored neighbors (color 0) block nothing.  Returned colors are
/// committed immediately and never revised.
std::optional<int> greedy_commit(const WireSegment& seg,
                                 const std::vector<PlacedWire>& committed,
                                 const SpacingRules& rules);

}  // namespace tpl
