#pragma once

#include <map>
#include <set>
#include <vector>

#include "tpl/geometry.hpp"

namespace tpl {

using VertexId = int;
using TokenId = int;

/// A vertex of the conflict graph: one wire segment plus the token (color
/// class) it currently belongs to.
struct CgVertex {
  WireSegment seg;
  TokenId token = -1;
};

/// Canonical identity of a merging edge: endpoint pair and bridge pair,
/// each stored low-id-first so that set-equal patterns compare equal.
struct MedgeKey {
  VertexId end_lo = -1;
  VertexId end_hi = -1;
  VertexId brdg_lo = -1;
  VertexId brdg_hi = -1;

  auto operator<=>(const MedgeKey&) const = default;
};

/// Records why two vertices share a token: cnt1 and cnt2 are the merged
/// endpoints, brdg1/brdg2 the two bridge vertices whose adjacency forced the
/// merge.  brdg1 is always a bridge with a conflict edge to cnt2.  While the
/// edge lives, token(cnt1) == token(cnt2) == merged_token.
struct MergingEdge {
  VertexId cnt1 = -1;
  VertexId cnt2 = -1;
  VertexId brdg1 = -1;
  VertexId brdg2 = -1;
  TokenId merged_token = -1;

  MedgeKey key() const;
  bool involves(VertexId v) const;
};

/// Undirected graph over wire segments where an edge means "these two
/// segments are too close to share a mask color".  Also tracks, per token,
/// the member vertex set and the merging edges that justify members sharing
/// the token.
class ConflictGraph {
 public:
  /// Inserts a segment as a new vertex owned by `token`.  The vertex id is
  /// seg.id; duplicate ids are rejected.
  VertexId add_vertex(const WireSegment& seg, TokenId token);

  /// Adds an undirected edge.  Idempotent; returns true when the edge is new.
  bool add_edge(VertexId vi, VertexId vj);

  /// Removes an edge and kills every merging edge whose four-vertex pattern
  /// contains both endpoints.  Returns the killed merging edges so the caller
  /// can re-examine token connectivity.
  std::vector<MergingEdge> remove_edge(VertexId vi, VertexId vj);

  /// Removes a vertex that has no remaining conflict edges.  Any merging
  /// edge still referencing the vertex is dropped.
  void remove_isolated_vertex(VertexId v);

  /// Replaces `v` with |cuts|+1 pieces partitioning its segment at the cut
  /// positions (strictly increasing, strictly inside the extent).  Each piece
  /// receives the matching fresh token and inherits net/layer/width.  Edges
  /// are recomputed geometrically against v's former neighbours and between
  /// the pieces themselves.  Returns the new vertex ids in axial order.
  std::vector<VertexId> split_vertex(VertexId v, const std::vector<Coord>& cuts,
                                     const SpacingRules& rules,
                                     const std::vector<TokenId>& fresh_tokens);

  // --- queries ---------------------------------------------------------
  bool has_vertex(VertexId v) const;
  const WireSegment& segment(VertexId v) const;
  TokenId token_of(VertexId v) const;
  bool has_edge(VertexId vi, VertexId vj) const;
  const std::set<VertexId>& neighbors(VertexId v) const;
  /// Member vertices of a token (empty set for unknown tokens).
  const std::set<VertexId>& members(TokenId t) const;
  std::vector<VertexId> vertex_ids() const;
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  /// All edges as (lo, hi) pairs in ascending order.
  std::vector<std::pair<VertexId, VertexId>> edges() const;
  VertexId peek_next_vertex_id() const { return next_vertex_id_; }
  VertexId allocate_vertex_id() { return next_vertex_id_++; }

  /// Moves a vertex into another token, keeping member sets consistent.
  void set_token(VertexId v, TokenId t);

  // --- merging-edge bookkeeping ---------------------------------------
  /// Installs a merging edge (deduped by its canonical key).
  void install_merging_edge(const MergingEdge& e);
  /// Merging edges owned by a token, ascending by key.
  std::vector<MergingEdge> merging_edges_of_token(TokenId t) const;
  std::vector<MergingEdge> all_merging_edges() const;
  /// Merging edges where `v` acts as a bridge.
  std::vector<MergingEdge> bridged_by(VertexId v) const;
  /// Kills every merging edge whose current justification triple
  /// {token(cnt2), token(brdg1), token(brdg2)} equals `triple`.
  std::vector<MergingEdge> kill_patterns_with_justifying_triple(
      const std::array<TokenId, 3>& triple);
  /// Recomputes each merging edge's owning token from its endpoints after a
  /// bulk token reassignment.
  void reindex_merging_edges();

  /// Checks structural invariants (token partition, symmetric adjacency,
  /// merging-edge endpoint agreement); throws std::logic_error on violation.
  void check_invariants() const;

 private:
  void unlink_merging_edge(const MedgeKey& key);

  std::map<VertexId, CgVertex> vertices_;
  std::map<VertexId, std::set<VertexId>> adj_;
  std::map<TokenId, std::set<VertexId>> members_;
  std::map<MedgeKey, MergingEdge> medges_;
  std::map<VertexId, std::set<MedgeKey>> medges_by_vertex_;
  std::map<TokenId, std::set<MedgeKey>> medges_by_token_;
  std::size_t edge_count_ = 0;
  VertexId next_vertex_id_ = 1;
};

}  // namespace tpl
