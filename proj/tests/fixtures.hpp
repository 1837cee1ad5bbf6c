#pragma once

// Shared fixture builders for the unit and acceptance suites: tiny layouts
// with known conflict structure plus a seeded random-instance generator
// small enough for the exhaustive coloring oracle.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tpl/conflict_graph.hpp"
#include "tpl/geometry.hpp"
#include "tpl/tecg.hpp"

namespace fixtures {

inline tpl::WireSegment hseg(int id, const std::string& net, tpl::Coord y,
                             tpl::Coord x1, tpl::Coord x2, tpl::Coord hw = 1,
                             int layer = 0) {
  return tpl::make_segment(id, net, layer, tpl::Axis::horizontal, x1, y, x2, y,
                           hw);
}

inline tpl::WireSegment vseg(int id, const std::string& net, tpl::Coord x,
                             tpl::Coord y1, tpl::Coord y2, tpl::Coord hw = 1,
                             int layer = 0) {
  return tpl::make_segment(id, net, layer, tpl::Axis::vertical, x, y1, x, y2,
                           hw);
}

/// Eight features on one layer whose conflict graph is 3-colorable only when
/// the three mutually remote segments D, G, H (ids 4, 7, 8) take one shared
/// color; greedy lowest-free coloring in id order paints itself into a corner
/// and leaves G and H uncolorable.  Designed for rules {sp_w=2, hw_w=1,
/// sp_tp=6}.
inline std::vector<tpl::WireSegment> eight_feature_layout() {
  return {
      hseg(1, "nA", 0, 3, 17),    // A
      hseg(2, "nB", 4, 3, 17),    // B
      hseg(3, "nC", 9, 3, 17),    // C
      hseg(4, "nD", 16, 9, 11),   // D
      hseg(5, "nE", 13, 3, 17),   // E
      hseg(6, "nF", 22, 9, 11),   // F
      vseg(7, "nG", 0, 0, 13),    // G
      vseg(8, "nH", 20, 0, 13),   // H
  };
}

/// Seeded random pile of wires in a small window, dense enough at the
/// default rules (sp_tp = 6) to produce merges, cliques and the occasional
/// uncolorable cluster.  Roughly one wire in six shares a net with an
/// earlier wire.  Vertex ids are 1..n.
inline std::vector<tpl::WireSegment> random_instance(std::uint32_t seed,
                                                     int min_n = 3,
                                                     int max_n = 12) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> n_dist(min_n, max_n);
  std::uniform_int_distribution<tpl::Coord> pos(0, 26);
  std::uniform_int_distribution<tpl::Coord> len(4, 14);
  std::uniform_int_distribution<int> axis(0, 1);
  std::uniform_int_distribution<int> share(0, 5);

  const int n = n_dist(rng);
  std::vector<tpl::WireSegment> out;
  for (int i = 1; i <= n; ++i) {
    std::string net = "n" + std::to_string(i);
    if (i > 1 && share(rng) == 0) {
      net = out[static_cast<std::size_t>(
                    std::uniform_int_distribution<int>(0, i - 2)(rng))]
                .net;
    }
    const tpl::Coord a = pos(rng);
    const tpl::Coord b = pos(rng);
    const tpl::Coord l = len(rng);
    if (axis(rng) == 0) {
      out.push_back(hseg(i, net, a, b, b + l));
    } else {
      out.push_back(vseg(i, net, a, b, b + l));
    }
  }
  return out;
}

/// Conflict graph of the plain geometry: one singleton token per segment
/// (token id = vertex id), one edge per conflicting pair.  This is the
/// oracle-side view, built without any reduction machinery.
inline tpl::ConflictGraph plain_graph(const std::vector<tpl::WireSegment>& segs,
                                      const tpl::SpacingRules& rules) {
  tpl::ConflictGraph cg;
  for (const auto& s : segs) {
    cg.add_vertex(s, s.id);
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (tpl::segments_conflict(segs[i], segs[j], rules)) {
        cg.add_edge(segs[i].id, segs[j].id);
      }
    }
  }
  return cg;
}

/// Feeds the segments through the incremental pipeline in id order.
inline tpl::Tecg build_tecg(const std::vector<tpl::WireSegment>& segs,
                            const tpl::SpacingRules& rules) {
  tpl::Tecg t;
  for (const auto& s : segs) {
    t.insert_segment_connected(s, rules);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Serialized mid-flow states.  These model situations where earlier routing
// (abstracted away) has already constrained some wires against each other:
// declared conflict edges stand in for the neighbours that produced them.
// ---------------------------------------------------------------------------

/// Three parallel rails A, B, C in classes 1, 2, 3 forming a clique; a
/// vertical wire crossing their shadowed corridor must then conflict with
/// whichever rail's class it is forced into.
inline const char* corridor_base_state() {
  return R"json({
  "segments": [
    {"id": 1, "net": "nA", "layer": 0, "axis": "h", "x1": 10, "y1": 10, "x2": 44, "y2": 10, "hw": 1, "class": 1},
    {"id": 2, "net": "nB", "layer": 0, "axis": "h", "x1": 10, "y1": 20, "x2": 44, "y2": 20, "hw": 1, "class": 2},
    {"id": 3, "net": "nC", "layer": 0, "axis": "h", "x1": 10, "y1": 30, "x2": 44, "y2": 30, "hw": 1, "class": 3}
  ],
  "conflict_edges": [[1, 2], [1, 3], [2, 3]],
  "class_edges": [
    {"a": 1, "b": 2, "support": 1},
    {"a": 1, "b": 3, "support": 1},
    {"a": 2, "b": 3, "support": 1}
  ],
  "cliques": [[1, 2, 3]],
  "witnesses": [],
  "conflicts": []
})json";
}

/// The corridor squeezed until its rails triple-shadow part of the gap:
/// same three rails and declared clique, at y = 10 / 14 / 18.
inline const char* corridor_tight_state() {
  return R"json({
  "segments": [
    {"id": 1, "net": "nA", "layer": 0, "axis": "h", "x1": 10, "y1": 10, "x2": 44, "y2": 10, "hw": 1, "class": 1},
    {"id": 2, "net": "nB", "layer": 0, "axis": "h", "x1": 10, "y1": 14, "x2": 44, "y2": 14, "hw": 1, "class": 2},
    {"id": 3, "net": "nC", "layer": 0, "axis": "h", "x1": 10, "y1": 18, "x2": 44, "y2": 18, "hw": 1, "class": 3}
  ],
  "conflict_edges": [[1, 2], [1, 3], [2, 3]],
  "class_edges": [
    {"a": 1, "b": 2, "support": 1},
    {"a": 1, "b": 3, "support": 1},
    {"a": 2, "b": 3, "support": 1}
  ],
  "cliques": [[1, 2, 3]],
  "witnesses": [],
  "conflicts": []
})json";
}

/// A long wire U (class 3) running under a fence of four panels: A (class 1)
/// and B (class 2) above on the left, C (class 3, the conflict partner) and a
/// far panel D below on the right.  D's class is a parameter: class 2 keeps
/// the right side two-colored, class 1 crowds it.
inline std::string fence_state(int d_class) {
  std::string s = R"json({
  "segments": [
    {"id": 1, "net": "nA", "layer": 0, "axis": "h", "x1": 0, "y1": 54, "x2": 10, "y2": 54, "hw": 1, "class": 1},
    {"id": 2, "net": "nB", "layer": 0, "axis": "h", "x1": 20, "y1": 54, "x2": 24, "y2": 54, "hw": 1, "class": 2},
    {"id": 3, "net": "nC", "layer": 0, "axis": "h", "x1": 36, "y1": 46, "x2": 44, "y2": 46, "hw": 1, "class": 3},
    {"id": 4, "net": "nD", "layer": 0, "axis": "h", "x1": 58, "y1": 46, "x2": 70, "y2": 46, "hw": 1, "class": @D@},
    {"id": 5, "net": "nU", "layer": 0, "axis": "h", "x1": 0, "y1": 50, "x2": 70, "y2": 50, "hw": 1, "class": 3}
  ],
  "conflict_edges": [[1, 2], [1, 5], [2, 5], [3, 5], [4, 5]],
  "class_edges": [
    {"a": 1, "b": 2, "support": 1},
    {"a": 1, "b": 3, "support": @S13@},
    {"a": 2, "b": 3, "support": @S23@}
  ],
  "cliques": [[1, 2, 3]],
  "witnesses": [],
  "conflicts": [{"kind": "edge", "a": 3, "b": 5, "class": 3}]
})json";
  const auto replace = [&s](const std::string& what, const std::string& with) {
    s.replace(s.find(what), what.size(), with);
  };
  replace("@D@", std::to_string(d_class));
  replace("@S13@", d_class == 1 ? "2" : "1");
  replace("@S23@", d_class == 1 ? "1" : "2");
  return s;
}

/// A wire U (class 5) whose class sits in two cliques at once: panels A/B
/// (classes 1/2) fence the left end, P/Q (classes 3/4) the right end, and W
/// (class 5, the conflict partner) shadows the middle.
inline const char* double_fence_state() {
  return R"json({
  "segments": [
    {"id": 1, "net": "nA", "layer": 0, "axis": "h", "x1": 0, "y1": 54, "x2": 20, "y2": 54, "hw": 1, "class": 1},
    {"id": 2, "net": "nB", "layer": 0, "axis": "h", "x1": 10, "y1": 46, "x2": 30, "y2": 46, "hw": 1, "class": 2},
    {"id": 3, "net": "nP", "layer": 0, "axis": "h", "x1": 80, "y1": 54, "x2": 100, "y2": 54, "hw": 1, "class": 3},
    {"id": 4, "net": "nQ", "layer": 0, "axis": "h", "x1": 70, "y1": 46, "x2": 90, "y2": 46, "hw": 1, "class": 4},
    {"id": 5, "net": "nW", "layer": 0, "axis": "h", "x1": 40, "y1": 54, "x2": 60, "y2": 54, "hw": 1, "class": 5},
    {"id": 6, "net": "nU", "layer": 0, "axis": "h", "x1": 0, "y1": 50, "x2": 100, "y2": 50, "hw": 1, "class": 5}
  ],
  "conflict_edges": [[1, 2], [1, 6], [2, 6], [3, 4], [3, 6], [4, 6], [5, 6]],
  "class_edges": [
    {"a": 1, "b": 2, "support": 1},
    {"a": 1, "b": 5, "support": 1},
    {"a": 2, "b": 5, "support": 1},
    {"a": 3, "b": 4, "support": 1},
    {"a": 3, "b": 5, "support": 1},
    {"a": 4, "b": 5, "support": 1}
  ],
  "cliques": [[1, 2, 5], [3, 4, 5]],
  "witnesses": [],
  "conflicts": [{"kind": "edge", "a": 5, "b": 6, "class": 5}]
})json";
}

/// A randomized corridor family: three parallel rails with a declared
/// pairwise clique (classes permuted, heights shuffled, extents varied) plus
/// a vertical wire crossing all their shadows just beyond one end.  Inserting
/// the crossing wire always forces it into rail 3's class and a conflict,
/// and one stitch always heals it.
struct CorridorInstance {
  std::string state;
  tpl::WireSegment crossing;
};

inline CorridorInstance random_corridor(std::uint32_t seed) {
  std::mt19937 rng(seed);
  const auto pick = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  const tpl::Coord xa = pick(0, 10);
  const tpl::Coord xb = xa + pick(12, 40);
  const tpl::Coord y0 = pick(0, 12);
  const tpl::Coord y1 = y0 + pick(8, 16);
  const tpl::Coord y2 = y1 + pick(8, 16);
  std::array<tpl::Coord, 3> ys{y0, y1, y2};
  std::shuffle(ys.begin(), ys.end(), rng);
  std::array<int, 3> cls{1, 2, 3};
  std::shuffle(cls.begin(), cls.end(), rng);

  std::string segs;
  for (int i = 0; i < 3; ++i) {
    segs += "    {\"id\": " + std::to_string(i + 1) + ", \"net\": \"n" +
            std::to_string(i + 1) +
            "\", \"layer\": 0, \"axis\": \"h\", \"x1\": " + std::to_string(xa) +
            ", \"y1\": " + std::to_string(ys[i]) +
            ", \"x2\": " + std::to_string(xb) +
            ", \"y2\": " + std::to_string(ys[i]) +
            ", \"hw\": 1, \"class\": " + std::to_string(cls[i]) + "}";
    segs += i + 1 < 3 ? ",\n" : "\n";
  }
  const std::string state = "{\n  \"segments\": [\n" + segs +
                            R"json(  ],
  "conflict_edges": [[1, 2], [1, 3], [2, 3]],
  "class_edges": [
    {"a": 1, "b": 2, "support": 1},
    {"a": 1, "b": 3, "support": 1},
    {"a": 2, "b": 3, "support": 1}
  ],
  "cliques": [[1, 2, 3]],
  "witnesses": [],
  "conflicts": []
})json";

  const tpl::Coord d = pick(2, 7);
  const tpl::Coord xf = pick(0, 1) ? xb + d : xa - d;
  const tpl::Coord ymin = *std::min_element(ys.begin(), ys.end());
  const tpl::Coord ymax = *std::max_element(ys.begin(), ys.end());
  return {state, vseg(4, "nF", xf, ymin - 7, ymax + 7)};
}

/// Two same-class wires in conflict with no clique recorded anywhere: the
/// stitch scheme has no context to plan against.
inline const char* bare_conflict_state() {
  return R"json({
  "segments": [
    {"id": 1, "net": "nX", "layer": 0, "axis": "h", "x1": 0, "y1": 0, "x2": 10, "y2": 0, "hw": 1, "class": 1},
    {"id": 2, "net": "nY", "layer": 0, "axis": "h", "x1": 0, "y1": 4, "x2": 10, "y2": 4, "hw": 1, "class": 1}
  ],
  "conflict_edges": [[1, 2]],
  "class_edges": [],
  "cliques": [],
  "witnesses": [],
  "conflicts": [{"kind": "edge", "a": 1, "b": 2, "class": 1}]
})json";
}

/// A short wire U (class 3) completely covered by three stacked panels of
/// classes 1, 2 and 3: every point of U is crowded by all three classes.
inline const char* blanketed_state() {
  return R"json({
  "segments": [
    {"id": 1, "net": "nA", "layer": 0, "axis": "h", "x1": 0, "y1": 54, "x2": 20, "y2": 54, "hw": 1, "class": 1},
    {"id": 2, "net": "nB", "layer": 0, "axis": "h", "x1": 0, "y1": 46, "x2": 20, "y2": 46, "hw": 1, "class": 2},
    {"id": 3, "net": "nC", "layer": 0, "axis": "h", "x1": 0, "y1": 56, "x2": 20, "y2": 56, "hw": 1, "class": 3},
    {"id": 4, "net": "nU", "layer": 0, "axis": "h", "x1": 0, "y1": 50, "x2": 20, "y2": 50, "hw": 1, "class": 3}
  ],
  "conflict_edges": [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]],
  "class_edges": [
    {"a": 1, "b": 2, "support": 1},
    {"a": 1, "b": 3, "support": 2},
    {"a": 2, "b": 3, "support": 2}
  ],
  "cliques": [[1, 2, 3]],
  "witnesses": [],
  "conflicts": [{"kind": "edge", "a": 3, "b": 4, "class": 3}]
})json";
}

}  // namespace fixtures
