#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "tpl/conflict_graph.hpp"

namespace tpl {

/// Three mutually adjacent tokens that must take all three mask colors.
using Scc = std::array<TokenId, 3>;

Scc make_scc(TokenId a, TokenId b, TokenId c);

/// Raised when a deduction forces two adjacent tokens to share a color; the
/// caller records it as a coloring conflict instead of merging.  va/vb are
/// representative member vertices of a/b captured at detection time (the
/// tokens themselves may be merged away by the time the caller looks).
struct MergeConflict {
  TokenId a = -1;
  TokenId b = -1;
  VertexId va = -1;
  VertexId vb = -1;

  auto operator<=>(const MergeConflict&) const = default;
};

/// Graph over tokens (color classes).  An edge means "these two classes must
/// receive different colors"; its support counts the conflict-graph edges
/// backing it (0 for edges deduced structurally).  Merging and splitting keep
/// the token ids fresh: an id is never reused once retired.
class TokenGraph {
 public:
  TokenId fresh_token();
  /// Registers an externally chosen id (state loading); bumps the allocator.
  void add_token(TokenId t);
  bool has_token(TokenId t) const;
  std::size_t token_count() const { return tokens_.size(); }
  std::vector<TokenId> tokens_sorted() const;

  bool adjacent(TokenId a, TokenId b) const;
  /// Support of an edge; -1 when the edge does not exist.
  int support(TokenId a, TokenId b) const;
  void connect(TokenId a, TokenId b, int support);
  void add_support(TokenId a, TokenId b, int delta);
  /// Removes an edge; returns the sccs dropped because the pair vanished.
  std::vector<Scc> remove_edge(TokenId a, TokenId b);
  /// Removes a token with all its edges; returns the sccs dropped.
  std::vector<Scc> remove_token(TokenId t);
  const std::set<TokenId>& adj(TokenId t) const;
  std::size_t edge_count() const;
  std::vector<std::pair<TokenId, TokenId>> edge_pairs_sorted() const;
  /// Edges with support 0 (deduced, not backed by a conflict-graph edge).
  std::set<std::pair<TokenId, TokenId>> implicit_edges() const;

  const std::set<Scc>& sccs() const { return sccs_; }
  bool add_scc(const Scc& s);
  std::vector<Scc> drop_sccs_with_pair(TokenId a, TokenId b);
  std::vector<Scc> drop_sccs_with_token(TokenId t);

  /// Reduction step for one adjacent token pair: merges tokens whose color is
  /// forced equal, or records the clique that forces a three-way split.
  /// Exactly one rule fires per invocation; merges recurse on the merged
  /// token's changed neighbourhood.  Conflicts found along the way are
  /// appended to `conflicts`.
  void tg_update(TokenId ti, TokenId tj, ConflictGraph& cg,
                 std::vector<MergeConflict>& conflicts);

  /// Merges two non-adjacent tokens into a fresh one, reassigning conflict
  /// graph members, generating merging edges beforehand, rewriting sccs and
  /// re-running tg_update on the changed neighbourhood.  Returns the merged
  /// id, or nullopt when the pair is adjacent (reported via `conflicts`) or
  /// no longer exists.
  std::optional<TokenId> token_merging(TokenId tw, TokenId tx,
                                       ConflictGraph& cg,
                                       std::vector<MergeConflict>& conflicts);

  /// Enumerates the merge-witness patterns one justifying clique yields for
  /// a merge of tw and tx: each tw-member adjacent to a bridge pair covering
  /// the clique's other two tokens, paired with each tx-member adjacent to a
  /// bridge.  brdg1 is always a bridge adjacent to cnt2.
  std::vector<MergingEdge> merging_pattern_generation(TokenId tw, TokenId tx,
                                                      const Scc& scc,
                                                      const ConflictGraph& cg) const;

  /// Non-adjacent token pairs whose colors are forced apart by two cliques
  /// joined by an edge: cliques (Tx,Ty,Tz), (Tp,Tq,Tr) with Tx adjacent to
  /// Tp, Ti adjacent to both Ty and Tq, Tj adjacent to both Tz and Tr.
  std::set<std::pair<TokenId, TokenId>> detect_implicit_edges() const;

  /// Same deduction as detect_implicit_edges but keeping already-adjacent
  /// pairs too; used to decide whether a support-0 edge is still justified
  /// after a retraction.
  std::set<std::pair<TokenId, TokenId>> deduced_pairs() const;

  /// Rebuilds a token whose merge witnesses were invalidated: members are
  /// grouped into components connected by surviving merging edges; with more
  /// than one component each gets a fresh token and the adjacencies are
  /// recomputed from the members' conflict edges.  Dropped sccs (any split
  /// retires the victim's cliques) are appended to `dropped`.  Returns the
  /// fresh ids (empty for an identity split).
  std::vector<TokenId> token_splitting(TokenId victim, ConflictGraph& cg,
                                       std::vector<Scc>& dropped);

  /// Structural self-check (symmetry, scc cliqueness, no self-adjacency);
  /// throws std::logic_error on violation.
  void check_invariants() const;

 private:
  static std::pair<TokenId, TokenId> norm(TokenId a, TokenId b);
  std::vector<TokenId> common_adjacent(TokenId a, TokenId b) const;
  void connect_raw(TokenId a, TokenId b, int support);
  void disconnect_raw(TokenId a, TokenId b);

  std::set<TokenId> tokens_;
  std::map<TokenId, std::set<TokenId>> adj_;
  std::map<std::pair<TokenId, TokenId>, int> support_;
  std::set<Scc> sccs_;
  TokenId next_token_ = 1;
  int update_depth_ = 0;
};

}  // namespace tpl
