#include "tpl/coloring.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpl/log.hpp"

namespace tpl {
namespace {

// Exact three-coloring of one token component.
//
// Saturation-guided backtracking: the next token colored is always one whose
// colored neighbourhood is most constrained (most distinct neighbour colors,
// then most neighbours, then lowest id), and a token may only open color c+1
// when colors 1..c are already in use, which removes color-permutation
// symmetry.  Both cuts keep the search exact and deterministic.  A node
// budget bounds the runtime on adversarial components; exhausting it reports
// the component uncolorable, with a log note (components from routed layouts
// resolve in a vanishing fraction of the budget).
class ComponentSolver {
 public:
  ComponentSolver(const TokenGraph& tg, const std::vector<TokenId>& comp)
      : comp_(comp), adj_(comp.size()), col_(comp.size(), 0) {
    std::map<TokenId, int> pos;
    for (std::size_t i = 0; i < comp_.size(); ++i) {
      pos[comp_[i]] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < comp_.size(); ++i) {
      for (TokenId n : tg.adj(comp_[i])) {
        adj_[i].push_back(pos.at(n));
      }
    }
  }

  /// 1 = colored (fills `colors`), 0 = proven uncolorable, -1 = budget out.
  int solve(std::map<TokenId, int>& colors) {
    const int r = recurse(0, 0);
    if (r == 1) {
      for (std::size_t i = 0; i < comp_.size(); ++i) {
        colors[comp_[i]] = col_[i];
      }
    }
    return r;
  }

 private:
  int recurse(int colored_count, int max_used) {
    if (--budget_ < 0) {
      return -1;
    }
    const int n = static_cast<int>(comp_.size());
    if (colored_count == n) {
      return 1;
    }
    int pick = -1;
    int best_sat = -1;
    int best_deg = -1;
    unsigned pick_blocked = 0;
    for (int i = 0; i < n; ++i) {
      if (col_[i] != 0) {
        continue;
      }
      unsigned blocked = 0;
      for (const int j : adj_[i]) {
        if (col_[j] != 0) {
          blocked |= 1u << col_[j];
        }
      }
      const int sat = std::popcount(blocked);
      const int deg = static_cast<int>(adj_[i].size());
      if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
        pick = i;
        best_sat = sat;
        best_deg = deg;
        pick_blocked = blocked;
      }
    }
    const int cap = std::min(kNumMasks, max_used + 1);
    for (int c = 1; c <= cap; ++c) {
      if ((pick_blocked & (1u << c)) != 0) {
        continue;
      }
      col_[pick] = c;
      const int r = recurse(colored_count + 1, std::max(max_used, c));
      if (r != 0) {
        return r;
      }
      col_[pick] = 0;
    }
    return 0;
  }

  std::vector<TokenId> comp_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> col_;
  long long budget_ = 4'000'000;
};

bool color_vertices(const ConflictGraph& cg, const std::vector<VertexId>& order,
                    std::size_t idx, std::map<VertexId, int>& colors) {
  if (idx == order.size()) {
    return true;
  }
  const VertexId v = order[idx];
  for (int c = 1; c <= kNumMasks; ++c) {
    bool blocked = false;
    for (VertexId n : cg.neighbors(v)) {
      auto it = colors.find(n);
      if (it != colors.end() && it->second == c) {
        blocked = true;
        break;
      }
    }
    if (blocked) {
      continue;
    }
    colors[v] = c;
    if (color_vertices(cg, order, idx + 1, colors)) {
      return true;
    }
    colors.erase(v);
  }
  return false;
}

}  // namespace

MaskAssignment assign_colors(const TokenGraph& tg) {
  MaskAssignment out;
  std::set<TokenId> seen;
  for (TokenId root : tg.tokens_sorted()) {
    if (seen.count(root) != 0) {
      continue;
    }
    // Collect the component (explicit and implicit edges both live in adj).
    std::vector<TokenId> comp;
    std::vector<TokenId> stack{root};
    seen.insert(root);
    while (!stack.empty()) {
      const TokenId t = stack.back();
      stack.pop_back();
      comp.push_back(t);
      for (TokenId n : tg.adj(t)) {
        if (seen.insert(n).second) {
          stack.push_back(n);
        }
      }
    }
    std::sort(comp.begin(), comp.end());

    std::map<TokenId, int> local;
    const int solved = ComponentSolver(tg, comp).solve(local);
    if (solved == 1) {
      out.color.insert(local.begin(), local.end());
    } else {
      if (solved < 0) {
        TPL_LOG(info, "component of token "
                          << root << " (" << comp.size()
                          << " tokens) defeated the color search budget; "
                             "reporting it uncolorable");
      } else {
        TPL_LOG(info, "component of token " << root << " (" << comp.size()
                                            << " tokens) is uncolorable");
      }
      out.uncolorable.insert(comp.begin(), comp.end());
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (std::size_t j = i + 1; j < comp.size(); ++j) {
          if (tg.adjacent(comp[i], comp[j])) {
            out.residual_token_edges.emplace_back(comp[i], comp[j]);
          }
        }
      }
    }
  }
  return out;
}

MaskAssignment assign_colors(const Tecg& t) {
  MaskAssignment out = assign_colors(t.tg());
  for (const auto& [a, b] : t.cg().edges()) {
    const TokenId ta = t.cg().token_of(a);
    const TokenId tb = t.cg().token_of(b);
    const auto ca = out.color.find(ta);
    const auto cb = out.color.find(tb);
    if (ca != out.color.end() && cb != out.color.end()) {
      if (ca->second == cb->second) {
        out.residual_conflicts.emplace_back(a, b);
      }
    } else if (out.uncolorable.count(ta) != 0 &&
               out.uncolorable.count(tb) != 0) {
      out.residual_conflicts.emplace_back(a, b);
    }
  }
  return out;
}

std::optional<std::map<VertexId, int>> brute_force_3color(
    const ConflictGraph& cg, std::size_t bound) {
  if (cg.vertex_count() > bound) {
    throw std::invalid_argument("graph of " + std::to_string(cg.vertex_count()) +
                                " vertices exceeds oracle bound " +
                                std::to_string(bound));
  }
  const std::vector<VertexId> order = cg.vertex_ids();
  std::map<VertexId, int> colors;
  if (color_vertices(cg, order, 0, colors)) {
    return colors;
  }
  return std::nullopt;
}

std::vector<Violation> validate_layout(const Layout& layout,
                                       const MaskAssignment& assignment,
                                       const SpacingRules& rules) {
  std::vector<Violation> out;

  // Resolve every wire's color through its token.
  std::map<int, int> wire_color;  // wire index -> color
  for (std::size_t i = 0; i < layout.wires.size(); ++i) {
    const PlacedWire& w = layout.wires[i];
    const auto it = assignment.color.find(w.token);
    if (w.token < 0 || it == assignment.color.end()) {
      out.push_back({Violation::Kind::uncolorable_component, {w.seg.id}, 0});
    } else {
      wire_color[static_cast<int>(i)] = it->second;
    }
  }

  // Spatial buckets: register each wire body grown by sp_tp; any pair whose
  // bodies sit closer than sp_tp shares at least one bucket.
  const Coord cell = std::max<Coord>(1, 2 * rules.sp_tp);
  std::map<std::array<Coord, 3>, std::vector<int>> buckets;
  for (const auto& [i, color] : wire_color) {
    (void)color;
    const Rect body = layout.wires[i].seg.body();
    const Rect grown = expand_rect(body, rules.sp_tp);
    for (Coord bx = grown.x_lo / cell - 1; bx <= grown.x_hi / cell + 1; ++bx) {
      for (Coord by = grown.y_lo / cell - 1; by <= grown.y_hi / cell + 1;
           ++by) {
        buckets[{static_cast<Coord>(body.layer), bx, by}].push_back(i);
      }
    }
  }

  std::set<std::pair<int, int>> reported;
  for (const auto& [key, ids] : buckets) {
    (void)key;
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        const int ia = std::min(ids[a], ids[b]);
        const int ib = std::max(ids[a], ids[b]);
        if (!reported.insert({ia, ib}).second) {
          continue;
        }
        if (wire_color.at(ia) != wire_color.at(ib)) {
          continue;
        }
        const WireSegment& sa = layout.wires[ia].seg;
        const WireSegment& sb = layout.wires[ib].seg;
        if (sa.layer != sb.layer) {
          continue;
        }
        const Coord gap = min_spacing(sa, sb);
        if (gap >= rules.sp_tp) {
          continue;
        }
        if (sa.net == sb.net && bodies_touch(sa, sb)) {
          continue;  // connected pieces of one net (stitch cut or plain joint)
        }
        out.push_back({Violation::Kind::same_color_spacing,
                       {std::min(sa.id, sb.id), std::max(sa.id, sb.id)},
                       gap});
      }
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tpl
