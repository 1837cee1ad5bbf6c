#include "tpl/tecg.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "tpl/log.hpp"

namespace tpl {

namespace {

using ojson = nlohmann::ordered_json;

const char* kind_name(ConflictRecord::Kind k) {
  return k == ConflictRecord::Kind::edge ? "edge" : "merge";
}

}  // namespace

VertexId Tecg::insert_segment(const WireSegment& seg) {
  if (cg_.has_vertex(seg.id)) {
    throw std::invalid_argument("segment id " + std::to_string(seg.id) +
                                " already inserted");
  }
  const TokenId t = tg_.fresh_token();
  const VertexId v = cg_.add_vertex(seg, t);
  TPL_LOG(debug, "insert segment " << v << " as class " << t);
  return v;
}

VertexId Tecg::insert_segment_connected(const WireSegment& seg,
                                        const SpacingRules& rules) {
  const std::vector<VertexId> existing = cg_.vertex_ids();
  const VertexId v = insert_segment(seg);
  for (VertexId u : existing) {
    if (segments_conflict(cg_.segment(u), cg_.segment(v), rules)) {
      tecg_update(v, u);
    }
  }
  return v;
}

UpdateOutcome Tecg::tecg_update(VertexId vi, VertexId vj) {
  if (vi == vj) {
    throw std::invalid_argument("conflict edge needs two distinct segments");
  }
  if (!cg_.has_vertex(vi) || !cg_.has_vertex(vj)) {
    throw std::invalid_argument("conflict edge on unknown segment");
  }
  const bool fresh = cg_.add_edge(vi, vj);
  const TokenId ti = cg_.token_of(vi);
  const TokenId tj = cg_.token_of(vj);
  if (ti == tj) {
    record_conflict({ConflictRecord::Kind::edge, std::min(vi, vj),
                     std::max(vi, vj), ti});
    return {true, ti};
  }
  if (fresh) {
    if (tg_.adjacent(ti, tj)) {
      tg_.add_support(ti, tj, +1);
    } else {
      tg_.connect(ti, tj, 1);
      std::vector<MergeConflict> mcs;
      tg_.tg_update(ti, tj, cg_, mcs);
      log_merge_conflicts(mcs);
      settle();
    }
  }
  return {false, -1};
}

void Tecg::tecg_disconnect(VertexId vi, VertexId vj) {
  disconnect_core(vi, vj);
  settle();
}

void Tecg::remove_vertex(VertexId v) {
  if (!cg_.has_vertex(v)) {
    throw std::invalid_argument("removal of unknown segment " +
                                std::to_string(v));
  }
  remove_vertex_core(v);
  settle();
}

void Tecg::remove_net_vertices(const std::string& net) {
  std::vector<VertexId> victims;
  for (VertexId v : cg_.vertex_ids()) {
    if (cg_.segment(v).net == net) victims.push_back(v);
  }
  if (victims.empty()) {
    throw std::invalid_argument("no segments for net " + net);
  }
  TPL_LOG(debug, "rip net " << net << " (" << victims.size() << " segments)");
  for (VertexId v : victims) remove_vertex_core(v);
  settle();
}

std::vector<ConflictRecord> Tecg::conflicts() const {
  std::set<ConflictRecord> out;
  std::set<std::tuple<ConflictRecord::Kind, VertexId, VertexId>> seen;
  for (const ConflictRecord& r : log_) {
    if (!is_live(r)) continue;
    ConflictRecord cur = r;
    cur.token = r.kind == ConflictRecord::Kind::edge
                    ? cg_.token_of(r.a)
                    : std::min(cg_.token_of(r.a), cg_.token_of(r.b));
    if (seen.insert({cur.kind, cur.a, cur.b}).second) out.insert(cur);
  }
  return {out.begin(), out.end()};
}

bool Tecg::is_live(const ConflictRecord& r) const {
  if (!cg_.has_vertex(r.a) || !cg_.has_vertex(r.b)) return false;
  if (r.kind == ConflictRecord::Kind::edge) {
    return cg_.has_edge(r.a, r.b) && cg_.token_of(r.a) == cg_.token_of(r.b);
  }
  return true;
}

bool Tecg::record_conflict(const ConflictRecord& rec) {
  for (const ConflictRecord& r : log_) {
    if (r.kind == rec.kind && r.a == rec.a && r.b == rec.b && is_live(r)) {
      return false;
    }
  }
  log_.push_back(rec);
  TPL_LOG(info, "conflict (" << kind_name(rec.kind) << ") segments " << rec.a
                             << "/" << rec.b << " class " << rec.token);
  return true;
}

void Tecg::log_merge_conflicts(const std::vector<MergeConflict>& mcs) {
  for (const MergeConflict& mc : mcs) {
    if (mc.va < 0 || mc.vb < 0) continue;  // classes without members never
                                           // reach a merge in this facade
    record_conflict({ConflictRecord::Kind::merge, std::min(mc.va, mc.vb),
                     std::max(mc.va, mc.vb), std::min(mc.a, mc.b)});
  }
}

void Tecg::settle() {
  std::vector<MergeConflict> mcs;
  int guard = 0;
  bool changed = true;
  while (changed) {
    if (++guard > 1000) {
      throw std::logic_error("class reduction failed to reach a fixed point");
    }
    changed = false;
    for (const auto& [a, b] : tg_.edge_pairs_sorted()) {
      if (!tg_.has_token(a) || !tg_.has_token(b)) continue;
      if (!tg_.adjacent(a, b)) continue;
      const std::size_t tokens_before = tg_.token_count();
      const std::size_t cliques_before = tg_.sccs().size();
      tg_.tg_update(a, b, cg_, mcs);
      if (tg_.token_count() != tokens_before ||
          tg_.sccs().size() != cliques_before) {
        changed = true;
      }
    }
    for (const auto& [a, b] : tg_.detect_implicit_edges()) {
      if (!tg_.has_token(a) || !tg_.has_token(b)) continue;
      if (tg_.adjacent(a, b)) continue;
      TPL_LOG(debug, "deduced class adjacency " << a << "-" << b);
      tg_.connect(a, b, 0);
      tg_.tg_update(a, b, cg_, mcs);
      changed = true;
    }
  }
  log_merge_conflicts(mcs);
}

void Tecg::disconnect_core(VertexId vi, VertexId vj) {
  if (!cg_.has_vertex(vi) || !cg_.has_vertex(vj) || !cg_.has_edge(vi, vj)) {
    throw std::invalid_argument("disconnect of unknown conflict edge");
  }
  const TokenId ti = cg_.token_of(vi);
  const TokenId tj = cg_.token_of(vj);
  TPL_LOG(debug, "disconnect segments " << vi << "/" << vj);
  std::vector<MergingEdge> killed = cg_.remove_edge(vi, vj);
  std::vector<Scc> gone;
  if (ti != tj) {
    tg_.add_support(ti, tj, -1);
    if (tg_.support(ti, tj) == 0) {
      // Last direct backing gone.  Keep the adjacency as a deduced one when
      // the two-clique justification still holds (a fresh rebuild would
      // carry it); otherwise drop it with its cliques.
      if (tg_.deduced_pairs().count(
              {std::min(ti, tj), std::max(ti, tj)}) == 0) {
        gone = tg_.remove_edge(ti, tj);
      }
    }
  }
  process_kills(std::move(killed), std::move(gone));
  retract_unjustified();
}

void Tecg::process_kills(std::vector<MergingEdge> killed,
                         std::vector<Scc> gone) {
  std::set<TokenId> split_work;
  for (const MergingEdge& e : killed) split_work.insert(e.merged_token);
  while (!gone.empty() || !split_work.empty()) {
    while (!gone.empty()) {
      const Scc s = gone.back();
      gone.pop_back();
      for (const MergingEdge& e : cg_.kill_patterns_with_justifying_triple(s)) {
        split_work.insert(e.merged_token);
      }
    }
    if (!split_work.empty()) {
      const TokenId victim = *split_work.begin();
      split_work.erase(split_work.begin());
      if (!tg_.has_token(victim)) continue;
      std::vector<Scc> dropped;
      tg_.token_splitting(victim, cg_, dropped);
      for (const Scc& s : dropped) gone.push_back(s);
    }
  }
}

void Tecg::retract_unjustified() {
  int guard = 0;
  bool changed = true;
  while (changed) {
    if (++guard > 10000) {
      throw std::logic_error("deduced-adjacency retraction failed to settle");
    }
    changed = false;
    const auto justified = tg_.deduced_pairs();
    for (const auto& [a, b] : tg_.implicit_edges()) {
      if (justified.count({a, b}) != 0) continue;
      TPL_LOG(debug, "retract deduced class adjacency " << a << "-" << b);
      std::vector<Scc> gone = tg_.remove_edge(a, b);
      process_kills({}, std::move(gone));
      changed = true;
      break;  // splits may have reshaped everything; recompute
    }
  }
}

void Tecg::remove_vertex_core(VertexId v) {
  const std::set<VertexId> nbrs = cg_.neighbors(v);
  for (VertexId u : nbrs) disconnect_core(v, u);
  const TokenId t = cg_.token_of(v);
  cg_.remove_isolated_vertex(v);
  if (tg_.has_token(t) && cg_.members(t).empty()) {
    std::vector<Scc> gone = tg_.remove_token(t);
    process_kills({}, std::move(gone));
    retract_unjustified();
  }
}

std::string Tecg::dump() const {
  ojson j;
  j["segments"] = ojson::array();
  for (VertexId v : cg_.vertex_ids()) {
    const WireSegment& s = cg_.segment(v);
    ojson js;
    js["id"] = s.id;
    js["net"] = s.net;
    js["layer"] = s.layer;
    js["axis"] = s.axis == Axis::horizontal ? "h" : "v";
    js["x1"] = s.x1;
    js["y1"] = s.y1;
    js["x2"] = s.x2;
    js["y2"] = s.y2;
    js["hw"] = s.hw;
    js["class"] = cg_.token_of(v);
    j["segments"].push_back(std::move(js));
  }
  j["conflict_edges"] = ojson::array();
  for (const auto& [u, v] : cg_.edges()) {
    j["conflict_edges"].push_back(ojson::array({u, v}));
  }
  j["class_edges"] = ojson::array();
  for (const auto& [a, b] : tg_.edge_pairs_sorted()) {
    ojson je;
    je["a"] = a;
    je["b"] = b;
    je["support"] = tg_.support(a, b);
    j["class_edges"].push_back(std::move(je));
  }
  j["cliques"] = ojson::array();
  for (const Scc& s : tg_.sccs()) {
    j["cliques"].push_back(ojson::array({s[0], s[1], s[2]}));
  }
  j["witnesses"] = ojson::array();
  for (const MergingEdge& e : cg_.all_merging_edges()) {
    ojson je;
    je["cnt1"] = e.cnt1;
    je["cnt2"] = e.cnt2;
    je["brdg1"] = e.brdg1;
    je["brdg2"] = e.brdg2;
    je["class"] = e.merged_token;
    j["witnesses"].push_back(std::move(je));
  }
  j["conflicts"] = ojson::array();
  for (const ConflictRecord& r : conflicts()) {
    ojson jr;
    jr["kind"] = kind_name(r.kind);
    jr["a"] = r.a;
    jr["b"] = r.b;
    jr["class"] = r.token;
    j["conflicts"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

Tecg Tecg::load(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("state is not valid JSON: ") +
                                e.what());
  }
  if (!j.is_object() || !j.contains("segments")) {
    throw std::invalid_argument("state must be an object with segments");
  }
  Tecg t;
  try {
    for (const auto& js : j.at("segments")) {
      const std::string axis_s = js.at("axis").get<std::string>();
      if (axis_s != "h" && axis_s != "v") {
        throw std::invalid_argument("segment axis must be h or v");
      }
      const WireSegment seg = make_segment(
          js.at("id").get<VertexId>(), js.at("net").get<std::string>(),
          js.at("layer").get<int>(), axis_s == "h" ? Axis::horizontal : Axis::vertical,
          js.at("x1").get<Coord>(), js.at("y1").get<Coord>(),
          js.at("x2").get<Coord>(), js.at("y2").get<Coord>(),
          js.at("hw").get<Coord>());
      const TokenId tok = js.at("class").get<TokenId>();
      if (!t.tg_.has_token(tok)) t.tg_.add_token(tok);
      t.cg_.add_vertex(seg, tok);
    }
    for (const auto& je : j.value("conflict_edges", ojson::array())) {
      const VertexId u = je.at(0).get<VertexId>();
      const VertexId v = je.at(1).get<VertexId>();
      if (!t.cg_.add_edge(u, v)) {
        throw std::invalid_argument("duplicate conflict edge");
      }
    }
    for (const auto& je : j.value("class_edges", ojson::array())) {
      t.tg_.connect(je.at("a").get<TokenId>(), je.at("b").get<TokenId>(),
                    je.at("support").get<int>());
    }
    for (const auto& jc : j.value("cliques", ojson::array())) {
      const Scc s = make_scc(jc.at(0).get<TokenId>(), jc.at(1).get<TokenId>(),
                             jc.at(2).get<TokenId>());
      if (!t.tg_.add_scc(s)) {
        throw std::invalid_argument("duplicate clique");
      }
    }
    std::set<MedgeKey> witness_keys;
    for (const auto& je : j.value("witnesses", ojson::array())) {
      MergingEdge e;
      e.cnt1 = je.at("cnt1").get<VertexId>();
      e.cnt2 = je.at("cnt2").get<VertexId>();
      e.brdg1 = je.at("brdg1").get<VertexId>();
      e.brdg2 = je.at("brdg2").get<VertexId>();
      e.merged_token = je.at("class").get<TokenId>();
      for (VertexId v : {e.cnt1, e.cnt2, e.brdg1, e.brdg2}) {
        if (!t.cg_.has_vertex(v)) {
          throw std::invalid_argument("witness references unknown segment");
        }
      }
      if (t.cg_.token_of(e.cnt1) != e.merged_token ||
          t.cg_.token_of(e.cnt2) != e.merged_token) {
        throw std::invalid_argument("witness endpoints disagree with class");
      }
      if (!witness_keys.insert(e.key()).second) {
        throw std::invalid_argument("duplicate witness");
      }
      t.cg_.install_merging_edge(e);
    }
    for (const auto& jr : j.value("conflicts", ojson::array())) {
      const std::string kind_s = jr.at("kind").get<std::string>();
      if (kind_s != "edge" && kind_s != "merge") {
        throw std::invalid_argument("conflict kind must be edge or merge");
      }
      ConflictRecord r;
      r.kind = kind_s == "edge" ? ConflictRecord::Kind::edge
                                : ConflictRecord::Kind::merge;
      r.a = jr.at("a").get<VertexId>();
      r.b = jr.at("b").get<VertexId>();
      r.token = jr.at("class").get<TokenId>();
      if (!t.cg_.has_vertex(r.a) || !t.cg_.has_vertex(r.b)) {
        throw std::invalid_argument("conflict references unknown segment");
      }
      t.log_.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed state field: ") +
                                e.what());
  }
  try {
    t.check_invariants();
  } catch (const std::logic_error& e) {
    throw std::invalid_argument(std::string("inconsistent state: ") +
                                e.what());
  }
  return t;
}

void Tecg::check_invariants() const {
  cg_.check_invariants();
  tg_.check_invariants();
  std::set<TokenId> used;
  for (VertexId v : cg_.vertex_ids()) used.insert(cg_.token_of(v));
  for (TokenId tok : used) {
    if (!tg_.has_token(tok)) {
      throw std::logic_error("segment class missing from class graph");
    }
  }
  for (TokenId tok : tg_.tokens_sorted()) {
    if (used.count(tok) == 0) {
      throw std::logic_error("class " + std::to_string(tok) +
                             " has no member segments");
    }
  }
  for (const auto& [u, v] : cg_.edges()) {
    const TokenId a = cg_.token_of(u);
    const TokenId b = cg_.token_of(v);
    if (a != b && !tg_.adjacent(a, b)) {
      throw std::logic_error("conflict edge without class adjacency");
    }
  }
  for (const auto& [a, b] : tg_.edge_pairs_sorted()) {
    int count = 0;
    for (VertexId u : cg_.members(a)) {
      for (VertexId w : cg_.neighbors(u)) {
        if (cg_.token_of(w) == b) ++count;
      }
    }
    if (count != tg_.support(a, b)) {
      throw std::logic_error(
          "class adjacency " + std::to_string(a) + "-" + std::to_string(b) +
          " support " + std::to_string(tg_.support(a, b)) +
          " disagrees with conflict-edge count " + std::to_string(count));
    }
  }
}

}  // namespace tpl
