#include "tpl/coloring.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "tpl/geometry.hpp"
#include "tpl/layout.hpp"
#include "tpl/tecg.hpp"
#include "tpl/token_graph.hpp"

using namespace tpl;

namespace {

TokenGraph graph_with_edges(
    int n, const std::vector<std::pair<TokenId, TokenId>>& edges) {
  TokenGraph tg;
  for (int t = 1; t <= n; ++t) {
    tg.add_token(t);
  }
  for (const auto& [a, b] : edges) {
    tg.connect(a, b, 1);
  }
  return tg;
}

// Exhaustive reference check over all 3^n token colorings.
bool reference_colorable(const TokenGraph& tg) {
  const std::vector<TokenId> tokens = tg.tokens_sorted();
  std::vector<int> colors(tokens.size(), 1);
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < tokens.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < tokens.size() && ok; ++j) {
        if (colors[i] == colors[j] && tg.adjacent(tokens[i], tokens[j])) {
          ok = false;
        }
      }
    }
    if (ok) {
      return true;
    }
    std::size_t k = 0;
    while (k < colors.size() && colors[k] == kNumMasks) {
      colors[k] = 1;
      ++k;
    }
    if (k == colors.size()) {
      return false;
    }
    ++colors[k];
  }
}

bool proper(const TokenGraph& tg, const std::map<TokenId, int>& colors) {
  for (const auto& [a, ca] : colors) {
    for (const auto& [b, cb] : colors) {
      if (a < b && ca == cb && tg.adjacent(a, b)) {
        return false;
      }
    }
  }
  return true;
}

PlacedWire wire(const WireSegment& seg, int token) {
  return {seg, token, 0};
}

WireSegment scaled(WireSegment s, Coord k) {
  s.x1 *= k;
  s.y1 *= k;
  s.x2 *= k;
  s.y2 *= k;
  s.hw *= k;
  return s;
}

}  // namespace

TEST_CASE("single token takes the first color") {
  TokenGraph tg;
  const TokenId t = tg.fresh_token();
  const MaskAssignment ma = assign_colors(tg);
  CHECK(ma.color.at(t) == 1);
  CHECK(ma.uncolorable.empty());
  CHECK(ma.fully_colored());
}

TEST_CASE("a triangle with a pendant colors fully, hub anchored first") {
  const TokenGraph tg =
      graph_with_edges(4, {{1, 2}, {1, 3}, {2, 3}, {3, 4}});
  const MaskAssignment ma = assign_colors(tg);
  // The most connected token is colored first, so the hub of the triangle
  // anchors color 1 and the pendant reuses a non-hub color.
  CHECK(ma.color.at(3) == 1);
  CHECK(ma.color.at(1) == 2);
  CHECK(ma.color.at(2) == 3);
  CHECK(ma.color.at(4) == 2);
  CHECK(ma.fully_colored());
  CHECK(ma.residual_token_edges.empty());
}

TEST_CASE("complete four-token component is reported uncolorable") {
  const TokenGraph tg = graph_with_edges(
      4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
  const MaskAssignment ma = assign_colors(tg);
  CHECK(ma.color.empty());
  CHECK(ma.uncolorable == std::set<TokenId>{1, 2, 3, 4});
  CHECK(ma.residual_token_edges.size() == 6);
  CHECK(!ma.fully_colored());
}

TEST_CASE("components color independently") {
  // Triangle 1-2-3, complete quad 4..7, isolated 8.
  const TokenGraph tg = graph_with_edges(
      8, {{1, 2}, {1, 3}, {2, 3},
          {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7}});
  const MaskAssignment ma = assign_colors(tg);
  CHECK(ma.color.at(1) == 1);
  CHECK(ma.color.at(2) == 2);
  CHECK(ma.color.at(3) == 3);
  CHECK(ma.color.at(8) == 1);
  CHECK(ma.uncolorable == std::set<TokenId>{4, 5, 6, 7});
  // Every live token is either assigned or reported.
  for (TokenId t : tg.tokens_sorted()) {
    CHECK((ma.color.count(t) != 0 || ma.uncolorable.count(t) != 0));
  }
}

TEST_CASE("exhaustive segment coloring oracle") {
  const SpacingRules rules;

  SUBCASE("triangle of close wires gets three distinct colors") {
    // Three stacked wires, pairwise closer than sp_tp.
    const std::vector<WireSegment> segs = {
        fixtures::hseg(1, "a", 0, 0, 8),
        fixtures::hseg(2, "b", 3, 0, 8),
        fixtures::hseg(3, "c", 6, 0, 8),
    };
    const auto coloring = brute_force_3color(fixtures::plain_graph(segs, rules));
    REQUIRE(coloring.has_value());
    std::set<int> used;
    for (const auto& [v, c] : *coloring) {
      used.insert(c);
    }
    CHECK(used == std::set<int>{1, 2, 3});
  }

  SUBCASE("four mutually close wires are uncolorable") {
    const std::vector<WireSegment> segs = {
        fixtures::hseg(1, "a", 0, 0, 4),
        fixtures::hseg(2, "b", 2, 0, 4),
        fixtures::hseg(3, "c", 4, 0, 4),
        fixtures::hseg(4, "d", 6, 0, 4),
    };
    CHECK(!brute_force_3color(fixtures::plain_graph(segs, rules)).has_value());
  }

  SUBCASE("size bound is enforced") {
    ConflictGraph cg;
    for (int i = 1; i <= 21; ++i) {
      cg.add_vertex(fixtures::hseg(i, "n" + std::to_string(i), 100 * i, 0, 4),
                    i);
    }
    CHECK_THROWS_AS(brute_force_3color(cg), std::invalid_argument);
    const auto coloring = brute_force_3color(cg, 21);
    REQUIRE(coloring.has_value());
    CHECK(coloring->size() == 21);
  }
}

TEST_CASE("token coloring is exact and deterministic") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> n_dist(1, 8);
  std::uniform_int_distribution<int> edge_roll(0, 9);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = n_dist(rng);
    std::vector<std::pair<TokenId, TokenId>> edges;
    for (int a = 1; a <= n; ++a) {
      for (int b = a + 1; b <= n; ++b) {
        if (edge_roll(rng) < 4) {
          edges.emplace_back(a, b);
        }
      }
    }
    const TokenGraph tg = graph_with_edges(n, edges);
    const MaskAssignment ma = assign_colors(tg);
    const bool colorable = reference_colorable(tg);
    CAPTURE(trial);
    CHECK(ma.fully_colored() == colorable);
    if (colorable) {
      CHECK(ma.color.size() == static_cast<std::size_t>(n));
      CHECK(proper(tg, ma.color));
      const MaskAssignment again = assign_colors(tg);
      CHECK(again.color == ma.color);
    } else {
      CHECK(!ma.residual_token_edges.empty());
    }
  }
}

TEST_CASE("pipeline verdicts agree with the oracle on random geometry") {
  const SpacingRules rules;
  for (std::uint32_t seed = 1; seed <= 120; ++seed) {
    const std::vector<WireSegment> segs = fixtures::random_instance(seed);
    const auto oracle = brute_force_3color(fixtures::plain_graph(segs, rules));
    const Tecg t = fixtures::build_tecg(segs, rules);
    const MaskAssignment ma = assign_colors(t);
    CAPTURE(seed);
    if (oracle.has_value()) {
      // Sound: a colorable instance must produce neither conflicts nor
      // uncolorable components.
      CHECK(!t.has_conflicts());
      CHECK(ma.fully_colored());
      CHECK(ma.residual_conflicts.empty());
    } else {
      // Complete: an uncolorable instance must be flagged somewhere.
      CHECK((t.has_conflicts() || !ma.uncolorable.empty()));
    }
  }
}

TEST_CASE("class-aware residuals surface forced monochromes") {
  const SpacingRules rules;
  // Four mutually close wires: the reduction merges two of them into one
  // class, and the final edge between the merged members becomes a recorded
  // conflict that must also show up as a residual conflict edge.
  const std::vector<WireSegment> segs = {
      fixtures::hseg(1, "a", 0, 0, 4),
      fixtures::hseg(2, "b", 2, 0, 4),
      fixtures::hseg(3, "c", 4, 0, 4),
      fixtures::hseg(4, "d", 6, 0, 4),
  };
  const Tecg t = fixtures::build_tecg(segs, rules);
  REQUIRE(t.has_conflicts());
  const MaskAssignment ma = assign_colors(t);
  CHECK(ma.fully_colored());  // the reduced class graph is a triangle
  REQUIRE(ma.residual_conflicts.size() == 1);
  CHECK(ma.residual_conflicts[0] == std::pair<VertexId, VertexId>{3, 4});
}

TEST_CASE("validator flags same-color crowding and skips cut joints") {
  const SpacingRules rules;
  MaskAssignment ma;
  ma.color = {{1, 1}, {2, 1}, {3, 2}};

  SUBCASE("empty layout is clean") {
    CHECK(validate_layout(Layout{}, ma, rules).empty());
  }

  SUBCASE("same color one unit under the spacing rule") {
    Layout l;
    l.wires = {wire(fixtures::hseg(1, "a", 0, 0, 10), 1),
               wire(fixtures::hseg(2, "b", 7, 0, 10), 2)};
    const auto v = validate_layout(l, ma, rules);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::same_color_spacing);
    CHECK(v[0].segments == std::vector<int>{1, 2});
    CHECK(v[0].distance == 5);
  }

  SUBCASE("different colors at the same distance are fine") {
    Layout l;
    l.wires = {wire(fixtures::hseg(1, "a", 0, 0, 10), 1),
               wire(fixtures::hseg(2, "b", 7, 0, 10), 3)};
    CHECK(validate_layout(l, ma, rules).empty());
  }

  SUBCASE("touching pieces of one net share a color freely") {
    Layout l;
    l.wires = {wire(fixtures::hseg(1, "a", 0, 0, 10), 1),
               wire(fixtures::hseg(2, "a", 0, 10, 20), 2)};
    CHECK(validate_layout(l, ma, rules).empty());
  }

  SUBCASE("separated pieces of one net still violate") {
    Layout l;
    l.wires = {wire(fixtures::hseg(1, "a", 0, 0, 10), 1),
               wire(fixtures::hseg(2, "a", 0, 13, 20), 2)};
    const auto v = validate_layout(l, ma, rules);
    REQUIRE(v.size() == 1);
    CHECK(v[0].distance == 1);
  }

  SUBCASE("layers are independent") {
    Layout l;
    l.wires = {wire(fixtures::hseg(1, "a", 0, 0, 10), 1),
               wire(fixtures::hseg(2, "b", 2, 0, 10, 1, 1), 2)};
    CHECK(validate_layout(l, ma, rules).empty());
  }

  SUBCASE("unassigned class reports the segment") {
    Layout l;
    l.wires = {wire(fixtures::hseg(1, "a", 0, 0, 10), 99)};
    const auto v = validate_layout(l, ma, rules);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::uncolorable_component);
    CHECK(v[0].segments == std::vector<int>{1});
  }
}

TEST_CASE("validator verdicts are scale invariant") {
  MaskAssignment ma;
  ma.color = {{1, 1}, {2, 1}, {3, 2}};

  Layout base;
  base.wires = {wire(fixtures::hseg(1, "a", 0, 0, 10), 1),
                wire(fixtures::hseg(2, "b", 7, 0, 10), 2),
                wire(fixtures::hseg(3, "c", 30, 0, 10), 3)};
  const SpacingRules rules;
  const auto v0 = validate_layout(base, ma, rules);
  REQUIRE(v0.size() == 1);

  const Coord k = 7;
  Layout big;
  for (const auto& w : base.wires) {
    big.wires.push_back({scaled(w.seg, k), w.token, w.color});
  }
  const SpacingRules big_rules{rules.sp_w * k, rules.hw_w * k,
                               rules.sp_tp * k};
  const auto v1 = validate_layout(big, ma, big_rules);
  REQUIRE(v1.size() == v0.size());
  for (std::size_t i = 0; i < v0.size(); ++i) {
    CHECK(v1[i].kind == v0[i].kind);
    CHECK(v1[i].segments == v0[i].segments);
    CHECK(v1[i].distance == v0[i].distance * k);
  }
}
