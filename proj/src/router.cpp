#include "tpl/router.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <queue>
#include <utility>

#include "tpl/coloring.hpp"
#include "tpl/log.hpp"

namespace tpl {
namespace {

constexpr int kAxisNone = 0;
constexpr int kAxisH = 1;
constexpr int kAxisV = 2;
constexpr long long kInf = std::numeric_limits<long long>::max();
constexpr std::size_t kNoState = std::numeric_limits<std::size_t>::max();

/// Shared pricing for the search and the audit, so the two can never
/// disagree.  `shadow` and `sccs` stay empty when coloring pressure is off.
struct Pricer {
  const RoutingGrid& grid;
  Penalties penalties;
  int net_index = -1;
  bool tpl_aware = false;
  bool prohibited = true;
  std::vector<std::set<TokenId>> shadow;
  std::vector<Scc> sccs;

  /// Price of entering (x, y, l); false = impassable.  `via` marks a layer
  /// change, otherwise new_axis is the move direction.
  bool step(int x, int y, int l, bool via, int prev_axis, int new_axis,
            long long& base, long long& tpl, int* stitch,
            int* conflict) const {
    const int occ = grid.at(x, y, l);
    if (occ == kObstacleCell || (occ >= 0 && occ != net_index)) {
      return false;
    }
    if (via) {
      base += grid.via_cost;
    } else {
      if (occ != net_index) {
        base += grid.unit_wire_cost;
      }
      if (prev_axis != kAxisNone && prev_axis != new_axis) {
        base += grid.bend_cost;
      }
    }
    if (tpl_aware && occ == kFreeCell) {
      const std::set<TokenId>& crowd = shadow[grid.index(x, y, l)];
      if (crowd.size() >= 2) {
        for (const Scc& s : sccs) {
          int in = 0;
          for (TokenId tk : s) {
            if (crowd.count(tk)) {
              ++in;
            }
          }
          if (in == 3) {
            if (prohibited) {
              return false;
            }
            tpl += penalties.conflict;
            if (conflict) {
              ++*conflict;
            }
          } else if (in == 2) {
            tpl += penalties.st;
            if (stitch) {
              ++*stitch;
            }
          }
        }
      }
    }
    return true;
  }
};

Pricer make_pricer(const Tecg& t, const RoutingGrid& grid,
                   const RouterConfig& cfg, int net_index, bool prohibited) {
  Pricer p{grid, cfg.penalties, net_index, cfg.mode == RouteMode::triad,
           prohibited, {}, {}};
  if (p.tpl_aware) {
    p.shadow = build_shadow_map(t, grid);
    p.sccs.assign(t.tg().sccs().begin(), t.tg().sccs().end());
  }
  return p;
}

/// Re-prices a path cell by cell; nullopt when it is empty, discontinuous,
/// out of bounds, or enters an impassable cell.
std::optional<long long> audit_path(const Pricer& pricer,
                                    const std::vector<GridPoint>& path,
                                    long long* base_out, long long* tpl_out,
                                    int* stitch, int* conflict) {
  const RoutingGrid& grid = pricer.grid;
  if (path.empty() ||
      !grid.in_bounds(path[0].x, path[0].y, path[0].layer)) {
    return std::nullopt;
  }
  const int occ0 = grid.at(path[0].x, path[0].y, path[0].layer);
  if (occ0 == kObstacleCell || (occ0 >= 0 && occ0 != pricer.net_index)) {
    return std::nullopt;
  }
  long long base = 0;
  long long tpl = 0;
  int axis = kAxisNone;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const GridPoint& p = path[i];
    if (!grid.in_bounds(p.x, p.y, p.layer)) {
      return std::nullopt;
    }
    const int dx = p.x - path[i - 1].x;
    const int dy = p.y - path[i - 1].y;
    const int dl = p.layer - path[i - 1].layer;
    if (std::abs(dx) + std::abs(dy) + std::abs(dl) != 1) {
      return std::nullopt;
    }
    const bool via = dl != 0;
    const int naxis = via ? kAxisNone : (dx != 0 ? kAxisH : kAxisV);
    if (!pricer.step(p.x, p.y, p.layer, via, axis, naxis, base, tpl, stitch,
                     conflict)) {
      return std::nullopt;
    }
    axis = naxis;
  }
  if (base_out) {
    *base_out = base;
  }
  if (tpl_out) {
    *tpl_out = tpl;
  }
  return base + tpl;
}

}  // namespace

std::size_t RoutingGrid::index(int x, int y, int layer) const {
  return (static_cast<std::size_t>(layer) * height + y) * width + x;
}

bool RoutingGrid::in_bounds(int x, int y, int layer) const {
  return x >= 0 && x < width && y >= 0 && y < height && layer >= 0 &&
         layer < layers;
}

int& RoutingGrid::at(int x, int y, int layer) {
  return occupancy[index(x, y, layer)];
}

int RoutingGrid::at(int x, int y, int layer) const {
  return occupancy[index(x, y, layer)];
}

Coord RoutingGrid::width_units() const {
  return 2 * margin() + pitch() * (width - 1);
}

Coord RoutingGrid::height_units() const {
  return 2 * margin() + pitch() * (height - 1);
}

RoutingGrid make_grid(const Netlist& nl) {
  RoutingGrid g;
  g.width = static_cast<int>(nl.width);
  g.height = static_cast<int>(nl.height);
  g.layers = static_cast<int>(nl.layer_dirs.size());
  g.layer_dirs = nl.layer_dirs;
  g.rules = nl.rules;
  g.occupancy.assign(
      static_cast<std::size_t>(g.width) * g.height * g.layers, kFreeCell);
  for (const Rect& r : nl.obstacles) {
    for (Coord y = r.y_lo; y <= r.y_hi; ++y) {
      for (Coord x = r.x_lo; x <= r.x_hi; ++x) {
        g.at(static_cast<int>(x), static_cast<int>(y), r.layer) =
            kObstacleCell;
      }
    }
  }
  return g;
}

std::vector<TwoPinNet> decompose_nets(const Netlist& nl,
                                      std::vector<std::string>* warnings) {
  std::vector<TwoPinNet> out;
  const auto note = [&](const std::string& msg) {
    TPL_LOG(info, msg);
    if (warnings) {
      warnings->push_back(msg);
    }
  };
  int next_id = 0;
  for (std::size_t n = 0; n < nl.nets.size(); ++n) {
    const Net& net = nl.nets[n];
    std::vector<Pin> pins;
    for (const Pin& p : net.pins) {
      if (std::find(pins.begin(), pins.end(), p) != pins.end()) {
        note("net " + net.name + ": duplicate pin dropped");
        continue;
      }
      pins.push_back(p);
    }
    if (pins.size() < 2) {
      note("net " + net.name + ": fewer than two distinct pins, skipped");
      continue;
    }
    const auto dist = [](const Pin& a, const Pin& b) {
      return std::llabs(a.x - b.x) + std::llabs(a.y - b.y) +
             std::abs(a.layer - b.layer);
    };
    // Prim from the first pin; ties pick the lowest pin index, so the tree
    // is deterministic.
    std::vector<char> in_tree(pins.size(), 0);
    std::vector<long long> best(pins.size(), 0);
    std::vector<std::size_t> from(pins.size(), 0);
    in_tree[0] = 1;
    for (std::size_t i = 1; i < pins.size(); ++i) {
      best[i] = dist(pins[0], pins[i]);
    }
    for (std::size_t added = 1; added < pins.size(); ++added) {
      std::size_t pick = 0;
      long long bd = kInf;
      for (std::size_t i = 1; i < pins.size(); ++i) {
        if (!in_tree[i] && best[i] < bd) {
          bd = best[i];
          pick = i;
        }
      }
      in_tree[pick] = 1;
      out.push_back({next_id++, static_cast<int>(n), net.name,
                     pins[from[pick]], pins[pick]});
      for (std::size_t i = 1; i < pins.size(); ++i) {
        if (!in_tree[i]) {
          const long long d = dist(pins[pick], pins[i]);
          if (d < best[i]) {
            best[i] = d;
            from[i] = pick;
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::set<TokenId>> build_shadow_map(const Tecg& t,
                                                const RoutingGrid& grid) {
  std::vector<std::set<TokenId>> out(grid.occupancy.size());
  const Coord hw = grid.rules.hw_w;
  const Coord sp = grid.rules.sp_tp;
  const auto col_of = [&](Coord u) {
    return static_cast<int>((u - grid.margin()) / grid.pitch());
  };
  for (VertexId v : t.cg().vertex_ids()) {
    const WireSegment& seg = t.cg().segment(v);
    if (seg.layer < 0 || seg.layer >= grid.layers) {
      continue;
    }
    const TokenId tok = t.cg().token_of(v);
    const Rect b = seg.body();
    // Conservative candidate window; every cell is then tested exactly.
    const int cx_lo = std::max(0, col_of(b.x_lo - sp - hw) - 2);
    const int cx_hi = std::min(grid.width - 1, col_of(b.x_hi + sp + hw) + 2);
    const int cy_lo = std::max(0, col_of(b.y_lo - sp - hw) - 2);
    const int cy_hi = std::min(grid.height - 1, col_of(b.y_hi + sp + hw) + 2);
    for (int cy = cy_lo; cy <= cy_hi; ++cy) {
      for (int cx = cx_lo; cx <= cx_hi; ++cx) {
        const Rect probe{grid.ux(cx) - hw, grid.uy(cy) - hw,
                         grid.ux(cx) + hw, grid.uy(cy) + hw, seg.layer};
        if (rect_clearance(probe, b) < sp) {
          out[grid.index(cx, cy, seg.layer)].insert(tok);
        }
      }
    }
  }
  return out;
}

RouteResult route_two_pin(const TwoPinNet& net, const Tecg& t,
                          const RoutingGrid& grid, const RouterConfig& cfg,
                          bool conflicts_prohibited) {
  RouteResult res;
  const int sx = static_cast<int>(net.source.x);
  const int sy = static_cast<int>(net.source.y);
  const int sl = net.source.layer;
  const int tx = static_cast<int>(net.target.x);
  const int ty = static_cast<int>(net.target.y);
  const int tl = net.target.layer;
  if (!grid.in_bounds(sx, sy, sl) || !grid.in_bounds(tx, ty, tl)) {
    TPL_LOG(info, "net " << net.net_name << ": pin outside the grid");
    return res;
  }
  const int socc = grid.at(sx, sy, sl);
  if (socc == kObstacleCell || (socc >= 0 && socc != net.net_index)) {
    TPL_LOG(info, "net " << net.net_name << ": source pin cell is blocked");
    return res;
  }
  const Pricer pricer =
      make_pricer(t, grid, cfg, net.net_index, conflicts_prohibited);

  const std::size_t cells = grid.occupancy.size();
  std::vector<long long> dist(cells * 3, kInf);
  std::vector<std::size_t> parent(cells * 3, kNoState);
  using Item = std::pair<long long, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  const std::size_t start = grid.index(sx, sy, sl) * 3 + kAxisNone;
  const std::size_t goal_cell = grid.index(tx, ty, tl);
  dist[start] = 0;
  pq.push({0, start});

  const int plane = grid.width * grid.height;
  std::size_t goal_state = kNoState;
  while (!pq.empty()) {
    const auto [c, st] = pq.top();
    pq.pop();
    if (c > dist[st]) {
      continue;
    }
    const std::size_t cell = st / 3;
    if (cell == goal_cell) {
      goal_state = st;
      break;
    }
    const int axis = static_cast<int>(st % 3);
    const int l = static_cast<int>(cell / plane);
    const int rem = static_cast<int>(cell % plane);
    const int y = rem / grid.width;
    const int x = rem % grid.width;
    static constexpr int moves[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                        {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
    for (const auto& m : moves) {
      const int nx = x + m[0];
      const int ny = y + m[1];
      const int nl = l + m[2];
      if (!grid.in_bounds(nx, ny, nl)) {
        continue;
      }
      const bool via = m[2] != 0;
      const int naxis = via ? kAxisNone : (m[0] != 0 ? kAxisH : kAxisV);
      long long base = 0;
      long long tpl = 0;
      if (!pricer.step(nx, ny, nl, via, axis, naxis, base, tpl, nullptr,
                       nullptr)) {
        continue;
      }
      const long long nd = c + base + tpl;
      const std::size_t nst = grid.index(nx, ny, nl) * 3 + naxis;
      if (nd < dist[nst]) {
        dist[nst] = nd;
        parent[nst] = st;
        pq.push({nd, nst});
      }
    }
  }
  if (goal_state == kNoState) {
    TPL_LOG(info, "net " << net.net_name << ": no path between pins");
    return res;
  }

  std::vector<GridPoint> path;
  for (std::size_t st = goal_state;; st = parent[st]) {
    const std::size_t cell = st / 3;
    const int l = static_cast<int>(cell / plane);
    const int rem = static_cast<int>(cell % plane);
    path.push_back({rem % grid.width, rem / grid.width, l});
    if (st == start) {
      break;
    }
  }
  std::reverse(path.begin(), path.end());

  res.routed = true;
  res.path = std::move(path);
  res.segments = path_to_segments(res.path, grid, net.net_name);
  const std::optional<long long> total =
      audit_path(pricer, res.path, &res.base_cost, &res.tpl_cost,
                 &res.stitch_risk, &res.conflict_risk);
  res.cost = total.value();
  return res;
}

std::optional<long long> path_cost(const std::vector<GridPoint>& path,
                                   const Tecg& t, const RoutingGrid& grid,
                                   const RouterConfig& cfg, int net_index,
                                   bool conflicts_prohibited) {
  const Pricer pricer =
      make_pricer(t, grid, cfg, net_index, conflicts_prohibited);
  return audit_path(pricer, path, nullptr, nullptr, nullptr, nullptr);
}

std::vector<WireSegment> path_to_segments(const std::vector<GridPoint>& path,
                                          const RoutingGrid& grid,
                                          const std::string& net) {
  std::vector<WireSegment> out;
  std::size_t k = 0;
  while (k < path.size()) {
    // One same-layer stretch of the path.
    std::size_t e = k;
    while (e + 1 < path.size() && path[e + 1].layer == path[k].layer) {
      ++e;
    }
    const int layer = path[k].layer;
    if (e == k) {
      // Lone cell between layer changes: a point wire marking the landing.
      out.push_back(make_segment(-1, net, layer, Axis::horizontal,
                                 grid.ux(path[k].x), grid.uy(path[k].y),
                                 grid.ux(path[k].x), grid.uy(path[k].y),
                                 grid.rules.hw_w));
    } else {
      std::size_t i = k;
      while (i < e) {
        const bool horiz = path[i + 1].y == path[i].y;
        std::size_t j = i;
        while (j + 1 <= e && (horiz ? path[j + 1].y == path[j].y
                                    : path[j + 1].x == path[j].x)) {
          ++j;
        }
        out.push_back(make_segment(
            -1, net, layer, horiz ? Axis::horizontal : Axis::vertical,
            grid.ux(path[i].x), grid.uy(path[i].y), grid.ux(path[j].x),
            grid.uy(path[j].y), grid.rules.hw_w));
        i = j;  // the corner cell belongs to both runs, so the pieces touch
      }
    }
    k = e + 1;
  }
  return out;
}

std::optional<int> greedy_commit(const WireSegment& seg,
                                 const std::vector<PlacedWire>& committed,
                                 const SpacingRules& rules) {
  std::set<int> used;
  for (const PlacedWire& w : committed) {
    if (w.color > 0 && segments_conflict(seg, w.seg, rules)) {
      used.insert(w.color);
    }
  }
  for (int c = 1; c <= kNumMasks; ++c) {
    if (!used.count(c)) {
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace tpl
