#include "tpl/flow.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include <json.hpp>

#include "tpl/log.hpp"

namespace tpl {
namespace {

using ojson = nlohmann::ordered_json;

long long total_wirelength(const std::vector<PlacedWire>& wires) {
  long long sum = 0;
  for (const PlacedWire& w : wires) {
    sum += w.seg.length();
  }
  return sum;
}

int count_uncolored(const std::vector<PlacedWire>& wires) {
  return static_cast<int>(std::count_if(
      wires.begin(), wires.end(),
      [](const PlacedWire& w) { return w.color == 0; }));
}

const char* mode_name(RouteMode m) {
  return m == RouteMode::triad ? "triad" : "greedy";
}

}  // namespace

CommitResult commit_with_stitches(Tecg& t, std::vector<WireSegment> segments,
                                  const SpacingRules& rules,
                                  const Penalties& penalties,
                                  bool enable_stitches) {
  CommitResult res;
  const std::size_t baseline = t.conflict_count();
  std::set<VertexId> ours;
  for (WireSegment& s : segments) {
    if (s.id < 0) {
      s.id = t.allocate_segment_id();
    }
    ours.insert(t.insert_segment_connected(s, rules));
  }
  // Each round picks one of our segments out of a standing conflict edge and
  // splits it; re-inserted pieces can conflict again, so a guard bounds the
  // chain.  Merge-kind records have no segment-level edge to plan around and
  // are left to the caller (rip-up or acceptance).
  int guard = 8;
  while (enable_stitches && t.conflict_count() > baseline && guard-- > 0) {
    std::optional<VertexId> target;
    for (const ConflictRecord& rec : t.conflicts()) {
      if (rec.kind != ConflictRecord::Kind::edge) {
        continue;
      }
      if (ours.count(rec.a)) {
        target = rec.a;
        break;
      }
      if (ours.count(rec.b)) {
        target = rec.b;
        break;
      }
    }
    if (!target) {
      break;
    }
    const StitchPlan plan = plan_for_all_sccs(*target, t, rules, penalties);
    if (!plan.solvable) {
      break;
    }
    const WireSegment before = t.cg().segment(*target);
    const std::vector<Stitch> recs = stitch_records(before, plan.cuts);
    const std::vector<VertexId> pieces = apply_stitches(plan, t, rules);
    ours.erase(*target);
    ours.insert(pieces.begin(), pieces.end());
    res.stitches.insert(res.stitches.end(), recs.begin(), recs.end());
  }
  res.clean = t.conflict_count() <= baseline;
  if (!res.clean) {
    std::set<std::string> nets;
    for (const ConflictRecord& rec : t.conflicts()) {
      for (VertexId v : {rec.a, rec.b}) {
        if (t.cg().has_vertex(v)) {
          nets.insert(t.cg().segment(v).net);
        }
      }
    }
    res.conflict_nets.assign(nets.begin(), nets.end());
  }
  res.ids.assign(ours.begin(), ours.end());
  return res;
}

FlowReport run_flow(const Netlist& nl, const RouterConfig& cfg_in,
                    bool timing) {
  const auto t_start = std::chrono::steady_clock::now();
  FlowReport rep;
  RouterConfig cfg = cfg_in;
  cfg.rules = nl.rules;  // the input file owns the geometry rules
  if (cfg.conflict_prohibited_iterations > cfg.max_iterations) {
    rep.warnings.push_back(
        "conflict-prohibited pass count clamped to max_iterations");
    cfg.conflict_prohibited_iterations = cfg.max_iterations;
  }
  rep.mode = cfg.mode;
  const bool triad = cfg.mode == RouteMode::triad;

  RoutingGrid grid = make_grid(nl);
  rep.grid_width = grid.width;
  rep.grid_height = grid.height;
  rep.grid_layers = grid.layers;
  rep.num_nets = static_cast<int>(nl.nets.size());
  for (const Net& net : nl.nets) {
    rep.num_pins += static_cast<int>(net.pins.size());
  }
  const std::vector<TwoPinNet> twopins = decompose_nets(nl, &rep.warnings);
  rep.num_two_pin = static_cast<int>(twopins.size());

  // Pins hold their cells for the whole run; a contested cell keeps its
  // first owner and the loser is reported.
  for (std::size_t n = 0; n < nl.nets.size(); ++n) {
    for (const Pin& p : nl.nets[n].pins) {
      int& cell = grid.at(static_cast<int>(p.x), static_cast<int>(p.y),
                          p.layer);
      if (cell == kFreeCell || cell == static_cast<int>(n)) {
        cell = static_cast<int>(n);
      } else {
        rep.warnings.push_back("net " + nl.nets[n].name +
                               ": pin cell already taken, pair may be "
                               "unroutable");
      }
    }
  }

  // Small nets first: ascending pin-bounding-box half-perimeter.
  std::vector<long long> half_perim(nl.nets.size(), 0);
  for (std::size_t n = 0; n < nl.nets.size(); ++n) {
    const std::vector<Pin>& pins = nl.nets[n].pins;
    if (pins.empty()) {
      continue;
    }
    Coord x_lo = pins[0].x, x_hi = pins[0].x;
    Coord y_lo = pins[0].y, y_hi = pins[0].y;
    for (const Pin& p : pins) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.y);
      y_hi = std::max(y_hi, p.y);
    }
    half_perim[n] = (x_hi - x_lo) + (y_hi - y_lo);
  }
  std::vector<int> order(twopins.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<int>(i);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const TwoPinNet& ta = twopins[a];
    const TwoPinNet& tb = twopins[b];
    return std::tuple(half_perim[ta.net_index], ta.net_index, ta.id) <
           std::tuple(half_perim[tb.net_index], tb.net_index, tb.id);
  });
  std::deque<int> queue(order.begin(), order.end());

  std::map<std::string, int> net_index_of;
  for (std::size_t n = 0; n < nl.nets.size(); ++n) {
    net_index_of[nl.nets[n].name] = static_cast<int>(n);
  }
  std::vector<char> committed(twopins.size(), 0);
  std::map<std::string, long long> commit_seq;
  long long tick = 0;
  Tecg tecg;
  std::vector<PlacedWire> wires;
  std::vector<Stitch> stitches;
  int next_wire_id = 1;

  const auto rip_net = [&](const std::string& name) {
    const int idx = net_index_of.at(name);
    tecg.remove_net_vertices(name);
    for (int& cell : grid.occupancy) {
      if (cell == idx) {
        cell = kFreeCell;
      }
    }
    for (const Pin& p : nl.nets[idx].pins) {
      int& cell = grid.at(static_cast<int>(p.x), static_cast<int>(p.y),
                          p.layer);
      if (cell == kFreeCell) {
        cell = idx;
      }
    }
    std::erase_if(wires,
                  [&](const PlacedWire& w) { return w.seg.net == name; });
    std::erase_if(stitches, [&](const Stitch& s) { return s.net == name; });
    commit_seq.erase(name);
    std::vector<int> requeue;
    for (std::size_t i = 0; i < twopins.size(); ++i) {
      if (twopins[i].net_index == idx && committed[i]) {
        committed[i] = 0;
        requeue.push_back(static_cast<int>(i));
      }
    }
    for (auto it = requeue.rbegin(); it != requeue.rend(); ++it) {
      queue.push_front(*it);
    }
  };

  int iter = 0;
  while (!queue.empty() && iter < cfg.max_iterations) {
    ++iter;
    const bool prohibited = iter <= cfg.conflict_prohibited_iterations;
    std::set<std::string> ripped_this_pass;
    int routed_this = 0;
    int ripped_this = 0;
    std::size_t budget = queue.size();
    while (budget-- > 0 && !queue.empty()) {
      const int tpi = queue.front();
      queue.pop_front();
      const TwoPinNet& tp = twopins[tpi];
      const RouteResult rr = route_two_pin(tp, tecg, grid, cfg, prohibited);
      if (!rr.routed) {
        queue.push_back(tpi);
        continue;
      }

      if (!triad) {
        // Fixed-color baseline: color every wire now, splitting when all
        // three colors are blocked, counting it uncolored when even a split
        // frees nothing.
        for (WireSegment seg : rr.segments) {
          seg.id = next_wire_id++;
          if (const std::optional<int> col =
                  greedy_commit(seg, wires, grid.rules)) {
            wires.push_back({seg, -1, *col});
            continue;
          }
          std::vector<std::pair<Shadow, int>> shads;
          for (const PlacedWire& w : wires) {
            if (w.color > 0 && segments_conflict(seg, w.seg, grid.rules)) {
              shads.emplace_back(shadow_of(w.seg, grid.rules), w.color);
            }
          }
          const std::optional<std::vector<Coord>> cuts =
              sweep_stitch_cuts(seg, shadowy_intervals(seg, shads));
          if (!cuts || cuts->empty()) {
            wires.push_back({seg, -1, 0});
            continue;
          }
          std::vector<Coord> bounds = *cuts;
          bounds.push_back(seg.span_hi());
          Coord lo = seg.span_lo();
          for (const Coord hi : bounds) {
            WireSegment piece = seg;
            piece.id = next_wire_id++;
            if (seg.axis == Axis::horizontal) {
              piece.x1 = lo;
              piece.x2 = hi;
            } else {
              piece.y1 = lo;
              piece.y2 = hi;
            }
            const std::optional<int> pc =
                greedy_commit(piece, wires, grid.rules);
            wires.push_back({piece, -1, pc ? *pc : 0});
            lo = hi;
          }
          const std::vector<Stitch> recs = stitch_records(seg, *cuts);
          stitches.insert(stitches.end(), recs.begin(), recs.end());
        }
        for (const GridPoint& p : rr.path) {
          grid.at(p.x, p.y, p.layer) = tp.net_index;
        }
        committed[tpi] = 1;
        ++routed_this;
        ++rep.routed_two_pin;
        continue;
      }

      Tecg trial = tecg;
      const CommitResult cr = commit_with_stitches(
          trial, rr.segments, grid.rules, cfg.penalties, cfg.enable_stitches);
      if (cr.clean || !prohibited) {
        tecg = std::move(trial);
        for (const GridPoint& p : rr.path) {
          grid.at(p.x, p.y, p.layer) = tp.net_index;
        }
        for (const VertexId id : cr.ids) {
          wires.push_back({tecg.cg().segment(id), -1, 0});
        }
        stitches.insert(stitches.end(), cr.stitches.begin(),
                        cr.stitches.end());
        commit_seq[tp.net_name] = ++tick;
        committed[tpi] = 1;
        ++routed_this;
        ++rep.routed_two_pin;
        continue;
      }
      // Conflicted inside the prohibited window: drop the trial state and
      // rip the most recently committed conflicting net (at most once per
      // net and pass, to stop two nets from trading places forever).
      std::optional<std::string> victim;
      long long best_tick = -1;
      for (const std::string& name : cr.conflict_nets) {
        if (name == tp.net_name || ripped_this_pass.count(name)) {
          continue;
        }
        const auto it = commit_seq.find(name);
        if (it != commit_seq.end() && it->second > best_tick) {
          best_tick = it->second;
          victim = name;
        }
      }
      if (!victim) {
        queue.push_back(tpi);
        continue;
      }
      TPL_LOG(info, "pass " << iter << ": ripping net " << *victim
                            << " to make room for " << tp.net_name);
      rip_net(*victim);
      ripped_this_pass.insert(*victim);
      ++ripped_this;
      queue.push_front(tpi);
    }

    IterationStats st;
    st.iteration = iter;
    st.routed = routed_this;
    st.ripped = ripped_this;
    st.conflicts = triad ? static_cast<int>(tecg.conflict_count())
                         : count_uncolored(wires);
    st.wirelength = total_wirelength(wires);
    if (triad) {
      st.cg_vertices = static_cast<int>(tecg.cg().vertex_count());
      st.cg_edges = static_cast<int>(tecg.cg().edge_count());
      st.tg_tokens = static_cast<int>(tecg.tg().token_count());
      st.tg_edges = static_cast<int>(tecg.tg().edge_count());
    }
    st.stitches = static_cast<int>(stitches.size());
    rep.iterations.push_back(st);
  }

  for (const int tpi : queue) {
    rep.unrouted.emplace_back(twopins[tpi].net_name, twopins[tpi].id);
    rep.warnings.push_back("net " + twopins[tpi].net_name + " pair " +
                           std::to_string(twopins[tpi].id) + ": unrouted");
  }

  if (triad) {
    const MaskAssignment ma = assign_colors(tecg);
    for (PlacedWire& w : wires) {
      w.token = tecg.cg().token_of(w.seg.id);
      const auto it = ma.color.find(w.token);
      w.color = it != ma.color.end() ? it->second : 0;
    }
    rep.uncolorable = static_cast<int>(ma.uncolorable.size());
    rep.num_conflicts =
        static_cast<int>(tecg.conflict_count()) + rep.uncolorable;
    rep.final_cg_vertices = static_cast<int>(tecg.cg().vertex_count());
    rep.final_cg_edges = static_cast<int>(tecg.cg().edge_count());
    rep.final_tg_tokens = static_cast<int>(tecg.tg().token_count());
    rep.final_tg_edges = static_cast<int>(tecg.tg().edge_count());
    rep.final_sccs = static_cast<int>(tecg.tg().sccs().size());
    rep.tecg_dump = tecg.dump();
  } else {
    rep.uncolorable = count_uncolored(wires);
    rep.num_conflicts = rep.uncolorable;
  }
  rep.num_stitches = static_cast<int>(stitches.size());
  rep.wirelength = total_wirelength(wires);

  Layout& lay = rep.layout;
  lay.width = grid.width_units();
  lay.height = grid.height_units();
  lay.layers = grid.layers;
  lay.rules = grid.rules;
  const Coord half = grid.pitch() / 2;
  for (const Rect& r : nl.obstacles) {
    lay.obstacles.push_back({grid.ux(static_cast<int>(r.x_lo)) - half,
                             grid.uy(static_cast<int>(r.y_lo)) - half,
                             grid.ux(static_cast<int>(r.x_hi)) + half,
                             grid.uy(static_cast<int>(r.y_hi)) + half,
                             r.layer});
  }
  lay.wires = wires;
  lay.stitches = stitches;

  if (timing) {
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
  }
  return rep;
}

std::string serialize_flow_report(const FlowReport& r) {
  std::string out;
  const auto emit = [&out](const ojson& j) {
    out += j.dump();
    out += '\n';
  };
  {
    ojson j;
    j["kind"] = "report";
    j["mode"] = mode_name(r.mode);
    j["wirelength"] = r.wirelength;
    j["stitches"] = r.num_stitches;
    j["conflicts"] = r.num_conflicts;
    j["routed"] = r.routed_two_pin;
    j["unrouted"] = static_cast<int>(r.unrouted.size());
    j["runtime_seconds"] = r.runtime_seconds;
    emit(j);
  }
  {
    ojson j;
    j["kind"] = "netlist_stats";
    j["width"] = r.grid_width;
    j["height"] = r.grid_height;
    j["layers"] = r.grid_layers;
    j["nets"] = r.num_nets;
    j["pins"] = r.num_pins;
    j["two_pin_nets"] = r.num_two_pin;
    emit(j);
  }
  for (const IterationStats& s : r.iterations) {
    ojson j;
    j["kind"] = "iteration";
    j["iteration"] = s.iteration;
    j["routed"] = s.routed;
    j["ripped"] = s.ripped;
    j["conflicts"] = s.conflicts;
    j["wirelength"] = s.wirelength;
    j["cg_vertices"] = s.cg_vertices;
    j["cg_edges"] = s.cg_edges;
    j["tg_tokens"] = s.tg_tokens;
    j["tg_edges"] = s.tg_edges;
    j["stitches"] = s.stitches;
    emit(j);
  }
  {
    ojson j;
    j["kind"] = "final";
    j["cg_vertices"] = r.final_cg_vertices;
    j["cg_edges"] = r.final_cg_edges;
    j["tg_tokens"] = r.final_tg_tokens;
    j["tg_edges"] = r.final_tg_edges;
    j["sccs"] = r.final_sccs;
    j["uncolorable"] = r.uncolorable;
    emit(j);
  }
  for (const std::string& w : r.warnings) {
    ojson j;
    j["kind"] = "warning";
    j["message"] = w;
    emit(j);
  }
  for (const auto& [net, pair] : r.unrouted) {
    ojson j;
    j["kind"] = "unrouted";
    j["net"] = net;
    j["pair"] = pair;
    emit(j);
  }
  return out;
}

DecomposeReport decompose_layout(const Layout& in,
                                 const Penalties& penalties) {
  DecomposeReport rep;
  Tecg t;
  std::vector<PlacedWire> sorted = in.wires;
  std::sort(sorted.begin(), sorted.end(),
            [](const PlacedWire& a, const PlacedWire& b) {
              return a.seg.id < b.seg.id;
            });
  std::vector<Stitch> new_stitches;
  for (const PlacedWire& w : sorted) {
    const CommitResult cr =
        commit_with_stitches(t, {w.seg}, in.rules, penalties, true);
    new_stitches.insert(new_stitches.end(), cr.stitches.begin(),
                        cr.stitches.end());
  }
  const MaskAssignment ma = assign_colors(t);
  Layout out = in;
  out.wires.clear();
  for (const VertexId v : t.cg().vertex_ids()) {
    const TokenId tok = t.cg().token_of(v);
    const auto it = ma.color.find(tok);
    out.wires.push_back(
        {t.cg().segment(v), tok, it != ma.color.end() ? it->second : 0});
  }
  out.stitches.insert(out.stitches.end(), new_stitches.begin(),
                      new_stitches.end());
  rep.num_stitches = static_cast<int>(new_stitches.size());
  rep.uncolorable = static_cast<int>(ma.uncolorable.size());
  rep.num_conflicts =
      static_cast<int>(t.conflict_count()) + rep.uncolorable;
  rep.violations = validate_layout(out, ma, in.rules);
  rep.tecg_dump = t.dump();
  rep.layout = std::move(out);
  return rep;
}

}  // namespace tpl
