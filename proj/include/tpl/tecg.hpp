#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tpl/conflict_graph.hpp"
#include "tpl/geometry.hpp"
#include "tpl/token_graph.hpp"

namespace tpl {

/// An unresolvable coloring requirement discovered while maintaining the
/// tracked state.
///
///  - kind::edge: two segments within the color spacing whose tokens are the
///    same.  The record stays live as long as the conflict edge exists and
///    the endpoints still share a token; a later stitch or rip-up that
///    separates them revives nothing.
///  - kind::merge: a deduction forced two directly-opposed color classes to
///    be equal.  a/b are representative member segments captured when the
///    contradiction fired; the record stays live while both still exist.
struct ConflictRecord {
  enum class Kind { edge, merge };

  Kind kind = Kind::edge;
  VertexId a = -1;
  VertexId b = -1;
  TokenId token = -1;

  auto operator<=>(const ConflictRecord&) const = default;
};

/// Result of connecting two segments in the tracked state.
struct UpdateOutcome {
  bool conflict = false;
  TokenId token = -1;  ///< shared token when conflict is true
};

/// Incrementally maintained pairing of the segment-level conflict graph with
/// its color-class abstraction.  Every public mutation leaves the state
/// closed: all forced merges applied, all three-cliques recorded, all
/// deduced (support-0) class adjacencies present, and stale deductions
/// retracted.  Value semantics; copying yields an independent state.
class Tecg {
 public:
  /// Adds a segment as its own fresh color class.  The segment id becomes
  /// the vertex id and must be unused.
  VertexId insert_segment(const WireSegment& seg);

  /// insert_segment plus tecg_update against every existing same-layer
  /// segment within the color spacing, in ascending vertex order.
  VertexId insert_segment_connected(const WireSegment& seg,
                                    const SpacingRules& rules);

  /// Connects two segments' vertices.  Same class: the edge is recorded as a
  /// coloring conflict and left in place.  Different classes: the class
  /// adjacency is created or reinforced and the reduction rules run to a
  /// fixed point.
  UpdateOutcome tecg_update(VertexId vi, VertexId vj);

  /// Removes a conflict edge and unwinds everything that depended on it:
  /// class-adjacency support, cliques over the pair, merge witnesses through
  /// the edge, splits of classes whose witnesses vanished, and deduced
  /// adjacencies that lost their justification.
  void tecg_disconnect(VertexId vi, VertexId vj);

  /// Disconnects all edges of v, removes it, and retires its class if empty.
  void remove_vertex(VertexId v);

  /// remove_vertex for every segment of a net, with a single closure pass at
  /// the end; used by rip-up.
  void remove_net_vertices(const std::string& net);

  const ConflictGraph& cg() const { return cg_; }
  const TokenGraph& tg() const { return tg_; }

  /// Conflicts that still hold in the current state, deduplicated.
  std::vector<ConflictRecord> conflicts() const;
  std::size_t conflict_count() const { return conflicts().size(); }
  bool has_conflicts() const { return conflict_count() > 0; }

  /// Reserves a vertex/segment id (used when splitting a routed segment).
  VertexId allocate_segment_id() { return cg_.allocate_vertex_id(); }

  /// Serializes the full tracked state (segments with classes, conflict
  /// edges, class adjacencies with support, cliques, merge witnesses,
  /// conflict log) as deterministic JSON.
  std::string dump() const;

  /// Rebuilds a state produced by dump(); validates structure and
  /// cross-consistency, throws std::invalid_argument on malformed input.
  /// No closure pass runs: the text is trusted to be a settled state.
  static Tecg load(const std::string& text);

  /// Structural and cross-layer self-check; throws std::logic_error.
  void check_invariants() const;

 private:
  bool record_conflict(const ConflictRecord& rec);
  void log_merge_conflicts(const std::vector<MergeConflict>& mcs);
  bool is_live(const ConflictRecord& rec) const;

  /// Runs reduction over all class adjacencies and deduced-pair detection
  /// until nothing changes.
  void settle();

  /// Edge removal steps shared by tecg_disconnect and remove_vertex; no
  /// closure pass.
  void disconnect_core(VertexId vi, VertexId vj);

  /// Kills witnesses of vanished cliques and splits classes whose witnesses
  /// died, cascading until quiet.
  void process_kills(std::vector<MergingEdge> killed, std::vector<Scc> gone);

  /// Drops support-0 class adjacencies whose two-clique justification no
  /// longer holds, to a fixed point.
  void retract_unjustified();

  void remove_vertex_core(VertexId v);

  ConflictGraph cg_;
  TokenGraph tg_;
  std::vector<ConflictRecord> log_;
};

}  // namespace tpl
