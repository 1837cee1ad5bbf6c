#include "tpl/conflict_graph.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace tpl {

namespace {

const std::set<VertexId> kEmptyVertexSet;

std::array<TokenId, 3> sorted_triple(TokenId a, TokenId b, TokenId c) {
  std::array<TokenId, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

MedgeKey MergingEdge::key() const {
  MedgeKey k;
  k.end_lo = std::min(cnt1, cnt2);
  k.end_hi = std::max(cnt1, cnt2);
  k.brdg_lo = std::min(brdg1, brdg2);
  k.brdg_hi = std::max(brdg1, brdg2);
  return k;
}

bool MergingEdge::involves(VertexId v) const {
  return v == cnt1 || v == cnt2 || v == brdg1 || v == brdg2;
}

VertexId ConflictGraph::add_vertex(const WireSegment& seg, TokenId token) {
  if (vertices_.count(seg.id) != 0) {
    throw std::invalid_argument("duplicate vertex id " + std::to_string(seg.id));
  }
  vertices_[seg.id] = CgVertex{seg, token};
  adj_[seg.id];
  members_[token].insert(seg.id);
  next_vertex_id_ = std::max(next_vertex_id_, seg.id + 1);
  return seg.id;
}

bool ConflictGraph::add_edge(VertexId vi, VertexId vj) {
  if (vi == vj) {
    throw std::invalid_argument("self edge on vertex " + std::to_string(vi));
  }
  if (!has_vertex(vi) || !has_vertex(vj)) {
    throw std::invalid_argument("add_edge on unknown vertex");
  }
  const bool inserted = adj_[vi].insert(vj).second;
  adj_[vj].insert(vi);
  if (inserted) ++edge_count_;
  return inserted;
}

std::vector<MergingEdge> ConflictGraph::remove_edge(VertexId vi, VertexId vj) {
  if (!has_edge(vi, vj)) {
    throw std::invalid_argument("remove_edge on unknown edge");
  }
  adj_[vi].erase(vj);
  adj_[vj].erase(vi);
  --edge_count_;

  std::vector<MergingEdge> killed;
  auto it_i = medges_by_vertex_.find(vi);
  auto it_j = medges_by_vertex_.find(vj);
  if (it_i != medges_by_vertex_.end() && it_j != medges_by_vertex_.end()) {
    std::vector<MedgeKey> shared;
    std::set_intersection(it_i->second.begin(), it_i->second.end(),
                          it_j->second.begin(), it_j->second.end(),
                          std::back_inserter(shared));
    for (const MedgeKey& k : shared) {
      killed.push_back(medges_.at(k));
      unlink_merging_edge(k);
    }
  }
  return killed;
}

void ConflictGraph::remove_isolated_vertex(VertexId v) {
  if (!has_vertex(v)) {
    throw std::invalid_argument("remove of unknown vertex " + std::to_string(v));
  }
  if (!adj_[v].empty()) {
    throw std::logic_error("vertex " + std::to_string(v) +
                           " still has conflict edges");
  }
  if (auto it = medges_by_vertex_.find(v); it != medges_by_vertex_.end()) {
    const std::set<MedgeKey> keys = it->second;
    for (const MedgeKey& k : keys) unlink_merging_edge(k);
  }
  const TokenId t = vertices_.at(v).token;
  members_[t].erase(v);
  if (members_[t].empty()) members_.erase(t);
  adj_.erase(v);
  medges_by_vertex_.erase(v);
  vertices_.erase(v);
}

std::vector<VertexId> ConflictGraph::split_vertex(
    VertexId v, const std::vector<Coord>& cuts, const SpacingRules& rules,
    const std::vector<TokenId>& fresh_tokens) {
  if (!has_vertex(v)) {
    throw std::invalid_argument("split of unknown vertex " + std::to_string(v));
  }
  if (cuts.empty()) {
    throw std::invalid_argument("split with no cut positions");
  }
  if (fresh_tokens.size() != cuts.size() + 1) {
    throw std::invalid_argument("split needs one token per piece");
  }
  const WireSegment original = vertices_.at(v).seg;
  Coord prev = original.span_lo();
  for (Coord c : cuts) {
    if (c <= prev || c >= original.span_hi()) {
      throw std::invalid_argument("cut position outside segment extent");
    }
    prev = c;
  }

  const std::set<VertexId> former = adj_.at(v);
  for (VertexId u : former) remove_edge(v, u);
  remove_isolated_vertex(v);

  std::vector<VertexId> pieces;
  Coord lo = original.span_lo();
  for (std::size_t k = 0; k <= cuts.size(); ++k) {
    const Coord hi = k < cuts.size() ? cuts[k] : original.span_hi();
    WireSegment piece;
    if (original.axis == Axis::horizontal) {
      piece = make_segment(allocate_vertex_id(), original.net, original.layer,
                           Axis::horizontal, lo, original.cross(), hi,
                           original.cross(), original.hw);
    } else {
      piece = make_segment(allocate_vertex_id(), original.net, original.layer,
                           Axis::vertical, original.cross(), lo,
                           original.cross(), hi, original.hw);
    }
    pieces.push_back(add_vertex(piece, fresh_tokens[k]));
    lo = hi;
  }

  for (VertexId u : former) {
    for (VertexId p : pieces) {
      if (segments_conflict(vertices_.at(u).seg, vertices_.at(p).seg, rules)) {
        add_edge(u, p);
      }
    }
  }
  for (std::size_t a = 0; a < pieces.size(); ++a) {
    for (std::size_t b = a + 1; b < pieces.size(); ++b) {
      if (segments_conflict(vertices_.at(pieces[a]).seg,
                            vertices_.at(pieces[b]).seg, rules)) {
        add_edge(pieces[a], pieces[b]);
      }
    }
  }
  return pieces;
}

bool ConflictGraph::has_vertex(VertexId v) const {
  return vertices_.count(v) != 0;
}

const WireSegment& ConflictGraph::segment(VertexId v) const {
  return vertices_.at(v).seg;
}

TokenId ConflictGraph::token_of(VertexId v) const {
  return vertices_.at(v).token;
}

bool ConflictGraph::has_edge(VertexId vi, VertexId vj) const {
  auto it = adj_.find(vi);
  return it != adj_.end() && it->second.count(vj) != 0;
}

const std::set<VertexId>& ConflictGraph::neighbors(VertexId v) const {
  return adj_.at(v);
}

const std::set<VertexId>& ConflictGraph::members(TokenId t) const {
  auto it = members_.find(t);
  return it == members_.end() ? kEmptyVertexSet : it->second;
}

std::vector<VertexId> ConflictGraph::vertex_ids() const {
  std::vector<VertexId> ids;
  ids.reserve(vertices_.size());
  for (const auto& [id, vtx] : vertices_) ids.push_back(id);
  return ids;
}

std::vector<std::pair<VertexId, VertexId>> ConflictGraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (const auto& [v, nbrs] : adj_) {
    for (VertexId u : nbrs) {
      if (v < u) out.emplace_back(v, u);
    }
  }
  return out;
}

void ConflictGraph::set_token(VertexId v, TokenId t) {
  CgVertex& vtx = vertices_.at(v);
  if (vtx.token == t) return;
  members_[vtx.token].erase(v);
  if (members_[vtx.token].empty()) members_.erase(vtx.token);
  vtx.token = t;
  members_[t].insert(v);
}

void ConflictGraph::install_merging_edge(const MergingEdge& e) {
  const MedgeKey k = e.key();
  if (medges_.count(k) != 0) return;
  medges_[k] = e;
  medges_by_vertex_[e.cnt1].insert(k);
  medges_by_vertex_[e.cnt2].insert(k);
  medges_by_vertex_[e.brdg1].insert(k);
  medges_by_vertex_[e.brdg2].insert(k);
  medges_by_token_[e.merged_token].insert(k);
}

std::vector<MergingEdge> ConflictGraph::merging_edges_of_token(TokenId t) const {
  std::vector<MergingEdge> out;
  auto it = medges_by_token_.find(t);
  if (it == medges_by_token_.end()) return out;
  for (const MedgeKey& k : it->second) out.push_back(medges_.at(k));
  return out;
}

std::vector<MergingEdge> ConflictGraph::all_merging_edges() const {
  std::vector<MergingEdge> out;
  out.reserve(medges_.size());
  for (const auto& [k, e] : medges_) out.push_back(e);
  return out;
}

std::vector<MergingEdge> ConflictGraph::bridged_by(VertexId v) const {
  std::vector<MergingEdge> out;
  auto it = medges_by_vertex_.find(v);
  if (it == medges_by_vertex_.end()) return out;
  for (const MedgeKey& k : it->second) {
    const MergingEdge& e = medges_.at(k);
    if (e.brdg1 == v || e.brdg2 == v) out.push_back(e);
  }
  return out;
}

std::vector<MergingEdge> ConflictGraph::kill_patterns_with_justifying_triple(
    const std::array<TokenId, 3>& triple) {
  std::vector<MedgeKey> doomed;
  for (const auto& [k, e] : medges_) {
    const auto current = sorted_triple(vertices_.at(e.cnt2).token,
                                       vertices_.at(e.brdg1).token,
                                       vertices_.at(e.brdg2).token);
    if (current == triple) doomed.push_back(k);
  }
  std::vector<MergingEdge> killed;
  for (const MedgeKey& k : doomed) {
    killed.push_back(medges_.at(k));
    unlink_merging_edge(k);
  }
  return killed;
}

void ConflictGraph::reindex_merging_edges() {
  medges_by_token_.clear();
  for (auto& [k, e] : medges_) {
    e.merged_token = vertices_.at(e.cnt1).token;
    medges_by_token_[e.merged_token].insert(k);
  }
}

void ConflictGraph::unlink_merging_edge(const MedgeKey& key) {
  auto it = medges_.find(key);
  if (it == medges_.end()) return;
  const MergingEdge e = it->second;
  for (VertexId v : {e.cnt1, e.cnt2, e.brdg1, e.brdg2}) {
    auto vit = medges_by_vertex_.find(v);
    if (vit != medges_by_vertex_.end()) {
      vit->second.erase(key);
      if (vit->second.empty()) medges_by_vertex_.erase(vit);
    }
  }
  auto tit = medges_by_token_.find(e.merged_token);
  if (tit != medges_by_token_.end()) {
    tit->second.erase(key);
    if (tit->second.empty()) medges_by_token_.erase(tit);
  }
  medges_.erase(it);
}

void ConflictGraph::check_invariants() const {
  std::size_t member_total = 0;
  for (const auto& [t, vs] : members_) {
    if (vs.empty()) throw std::logic_error("empty member set kept for token");
    member_total += vs.size();
    for (VertexId v : vs) {
      if (!has_vertex(v) || vertices_.at(v).token != t) {
        throw std::logic_error("member set disagrees with vertex token");
      }
    }
  }
  if (member_total != vertices_.size()) {
    throw std::logic_error("token member sets do not partition the vertices");
  }
  std::size_t degree_total = 0;
  for (const auto& [v, nbrs] : adj_) {
    degree_total += nbrs.size();
    for (VertexId u : nbrs) {
      if (!has_edge(u, v)) throw std::logic_error("asymmetric adjacency");
      if (u == v) throw std::logic_error("self loop");
    }
  }
  if (degree_total != 2 * edge_count_) {
    throw std::logic_error("edge count out of sync");
  }
  for (const auto& [k, e] : medges_) {
    if (!has_vertex(e.cnt1) || !has_vertex(e.cnt2) || !has_vertex(e.brdg1) ||
        !has_vertex(e.brdg2)) {
      throw std::logic_error("merging edge references missing vertex");
    }
    if (vertices_.at(e.cnt1).token != vertices_.at(e.cnt2).token ||
        vertices_.at(e.cnt1).token != e.merged_token) {
      throw std::logic_error("merging edge endpoints do not share its token");
    }
  }
}

}  // namespace tpl
