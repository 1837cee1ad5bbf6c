#include "tpl/token_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "tpl/log.hpp"

namespace tpl {

namespace {

const std::set<TokenId> kEmptyTokenSet;
constexpr int kMaxUpdateDepth = 64;

bool contains(const Scc& s, TokenId t) {
  return s[0] == t || s[1] == t || s[2] == t;
}

/// The two members other than `t`, in ascending order.
std::pair<TokenId, TokenId> others(const Scc& s, TokenId t) {
  std::array<TokenId, 2> rest{};
  int n = 0;
  for (TokenId x : s) {
    if (x != t) rest[n++] = x;
  }
  return {rest[0], rest[1]};
}

TokenId third(const Scc& s, TokenId a, TokenId b) {
  for (TokenId x : s) {
    if (x != a && x != b) return x;
  }
  return -1;
}

struct Dsu {
  std::map<VertexId, VertexId> parent;

  VertexId find(VertexId v) {
    auto it = parent.find(v);
    if (it == parent.end()) {
      parent[v] = v;
      return v;
    }
    if (it->second == v) return v;
    const VertexId root = find(it->second);
    parent[v] = root;
    return root;
  }

  void unite(VertexId a, VertexId b) {
    const VertexId ra = find(a);
    const VertexId rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
};

struct DepthGuard {
  int& depth;
  explicit DepthGuard(int& d) : depth(d) {
    if (++depth > kMaxUpdateDepth) {
      throw std::logic_error("token reduction recursion exceeded ceiling");
    }
  }
  ~DepthGuard() { --depth; }
};

}  // namespace

Scc make_scc(TokenId a, TokenId b, TokenId c) {
  Scc s{a, b, c};
  std::sort(s.begin(), s.end());
  if (s[0] == s[1] || s[1] == s[2]) {
    throw std::invalid_argument("clique needs three distinct tokens");
  }
  return s;
}

TokenId TokenGraph::fresh_token() {
  const TokenId t = next_token_++;
  tokens_.insert(t);
  adj_[t];
  return t;
}

void TokenGraph::add_token(TokenId t) {
  if (t <= 0) throw std::invalid_argument("token ids are positive");
  if (!tokens_.insert(t).second) {
    throw std::invalid_argument("token id already in use");
  }
  adj_[t];
  next_token_ = std::max(next_token_, t + 1);
}

bool TokenGraph::has_token(TokenId t) const { return tokens_.count(t) != 0; }

std::vector<TokenId> TokenGraph::tokens_sorted() const {
  return {tokens_.begin(), tokens_.end()};
}

std::pair<TokenId, TokenId> TokenGraph::norm(TokenId a, TokenId b) {
  return {std::min(a, b), std::max(a, b)};
}

bool TokenGraph::adjacent(TokenId a, TokenId b) const {
  auto it = adj_.find(a);
  return it != adj_.end() && it->second.count(b) != 0;
}

int TokenGraph::support(TokenId a, TokenId b) const {
  auto it = support_.find(norm(a, b));
  return it == support_.end() ? -1 : it->second;
}

void TokenGraph::connect_raw(TokenId a, TokenId b, int support) {
  adj_[a].insert(b);
  adj_[b].insert(a);
  support_[norm(a, b)] = support;
}

void TokenGraph::disconnect_raw(TokenId a, TokenId b) {
  adj_[a].erase(b);
  adj_[b].erase(a);
  support_.erase(norm(a, b));
}

void TokenGraph::connect(TokenId a, TokenId b, int support) {
  if (a == b) throw std::invalid_argument("token cannot oppose itself");
  if (!has_token(a) || !has_token(b)) {
    throw std::invalid_argument("connect on unknown token");
  }
  if (adjacent(a, b)) throw std::invalid_argument("token edge already exists");
  connect_raw(a, b, support);
}

void TokenGraph::add_support(TokenId a, TokenId b, int delta) {
  auto it = support_.find(norm(a, b));
  if (it == support_.end()) {
    throw std::invalid_argument("support change on unknown token edge");
  }
  it->second += delta;
}

std::vector<Scc> TokenGraph::remove_edge(TokenId a, TokenId b) {
  if (!adjacent(a, b)) {
    throw std::invalid_argument("remove of unknown token edge");
  }
  disconnect_raw(a, b);
  return drop_sccs_with_pair(a, b);
}

std::vector<Scc> TokenGraph::remove_token(TokenId t) {
  if (!has_token(t)) {
    throw std::invalid_argument("remove of unknown token " + std::to_string(t));
  }
  const std::set<TokenId> nbrs = adj_[t];
  for (TokenId u : nbrs) disconnect_raw(t, u);
  std::vector<Scc> dropped = drop_sccs_with_token(t);
  tokens_.erase(t);
  adj_.erase(t);
  return dropped;
}

const std::set<TokenId>& TokenGraph::adj(TokenId t) const {
  auto it = adj_.find(t);
  return it == adj_.end() ? kEmptyTokenSet : it->second;
}

std::size_t TokenGraph::edge_count() const { return support_.size(); }

std::vector<std::pair<TokenId, TokenId>> TokenGraph::edge_pairs_sorted() const {
  std::vector<std::pair<TokenId, TokenId>> out;
  out.reserve(support_.size());
  for (const auto& [pr, s] : support_) out.push_back(pr);
  return out;
}

std::set<std::pair<TokenId, TokenId>> TokenGraph::implicit_edges() const {
  std::set<std::pair<TokenId, TokenId>> out;
  for (const auto& [pr, s] : support_) {
    if (s == 0) out.insert(pr);
  }
  return out;
}

bool TokenGraph::add_scc(const Scc& s) {
  for (TokenId t : s) {
    if (!has_token(t)) throw std::invalid_argument("clique over unknown token");
  }
  if (!adjacent(s[0], s[1]) || !adjacent(s[0], s[2]) || !adjacent(s[1], s[2])) {
    throw std::invalid_argument("clique members must be pairwise adjacent");
  }
  return sccs_.insert(s).second;
}

std::vector<Scc> TokenGraph::drop_sccs_with_pair(TokenId a, TokenId b) {
  std::vector<Scc> dropped;
  for (auto it = sccs_.begin(); it != sccs_.end();) {
    if (contains(*it, a) && contains(*it, b)) {
      dropped.push_back(*it);
      it = sccs_.erase(it);
    } else {
      ++it;
    }
  }
  return dropped;
}

std::vector<Scc> TokenGraph::drop_sccs_with_token(TokenId t) {
  std::vector<Scc> dropped;
  for (auto it = sccs_.begin(); it != sccs_.end();) {
    if (contains(*it, t)) {
      dropped.push_back(*it);
      it = sccs_.erase(it);
    } else {
      ++it;
    }
  }
  return dropped;
}

std::vector<TokenId> TokenGraph::common_adjacent(TokenId a, TokenId b) const {
  std::vector<TokenId> out;
  const std::set<TokenId>& sa = adj(a);
  const std::set<TokenId>& sb = adj(b);
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(out));
  return out;
}

void TokenGraph::tg_update(TokenId ti, TokenId tj, ConflictGraph& cg,
                           std::vector<MergeConflict>& conflicts) {
  if (!adjacent(ti, tj)) {
    throw std::invalid_argument("tg_update needs an adjacent token pair");
  }
  DepthGuard guard(update_depth_);
  TPL_LOG(debug, "tg_update(" << ti << "," << tj << ")");

  // Rule (a): a clique through ti whose members tj half-touches forces tj to
  // share the color of the untouched member.
  for (const Scc& s : sccs_) {
    if (!contains(s, ti)) continue;
    const auto [o1, o2] = others(s, ti);
    for (const auto& [i1, i2] :
         {std::pair{o1, o2}, std::pair{o2, o1}}) {
      if (tj == i1 || tj == i2) continue;
      if (adjacent(tj, i1) && !adjacent(tj, i2)) {
        token_merging(tj, i2, cg, conflicts);
        return;
      }
    }
  }
  // Rule (b): the mirrored case through tj.
  for (const Scc& s : sccs_) {
    if (!contains(s, tj)) continue;
    const auto [o1, o2] = others(s, tj);
    for (const auto& [j1, j2] :
         {std::pair{o1, o2}, std::pair{o2, o1}}) {
      if (ti == j1 || ti == j2) continue;
      if (adjacent(ti, j1) && !adjacent(ti, j2)) {
        token_merging(ti, j2, cg, conflicts);
        return;
      }
    }
  }
  // Rule (c): a clique over (ti, tj, tk) pins down the third color, so any
  // further common neighbour of ti and tj must share it with tk.
  for (const Scc& s : sccs_) {
    if (!contains(s, ti) || !contains(s, tj)) continue;
    const TokenId tk = third(s, ti, tj);
    for (TokenId tcom : common_adjacent(ti, tj)) {
      if (tcom == tk) continue;
      token_merging(tk, tcom, cg, conflicts);
      return;
    }
  }
  // Rule (d): a new triangle becomes a clique; re-examine the pair with the
  // clique recorded.
  for (TokenId tcom : common_adjacent(ti, tj)) {
    const Scc s = make_scc(ti, tj, tcom);
    if (sccs_.count(s) != 0) continue;
    sccs_.insert(s);
    TPL_LOG(debug, "new clique (" << s[0] << "," << s[1] << ","
                                            << s[2] << ")");
    tg_update(ti, tj, cg, conflicts);
    return;
  }
}

std::vector<MergingEdge> TokenGraph::merging_pattern_generation(
    TokenId tw, TokenId tx, const Scc& scc, const ConflictGraph& cg) const {
  if (!contains(scc, tx)) return {};
  const auto [ty, tz] = others(scc, tx);
  std::vector<MergingEdge> out;
  std::set<MedgeKey> seen;
  for (VertexId vw : cg.members(tw)) {
    std::vector<VertexId> bridges_y, bridges_z;
    for (VertexId u : cg.neighbors(vw)) {
      const TokenId tu = cg.token_of(u);
      if (tu == ty) bridges_y.push_back(u);
      else if (tu == tz) bridges_z.push_back(u);
    }
    if (bridges_y.empty() || bridges_z.empty()) continue;
    for (VertexId by : bridges_y) {
      for (VertexId bz : bridges_z) {
        for (VertexId vx : cg.members(tx)) {
          const bool ay = cg.has_edge(vx, by);
          const bool az = cg.has_edge(vx, bz);
          if (!ay && !az) continue;
          MergingEdge e;
          e.cnt1 = vw;
          e.cnt2 = vx;
          if (ay && az) {
            e.brdg1 = std::min(by, bz);
            e.brdg2 = std::max(by, bz);
          } else if (ay) {
            e.brdg1 = by;
            e.brdg2 = bz;
          } else {
            e.brdg1 = bz;
            e.brdg2 = by;
          }
          if (seen.insert(e.key()).second) out.push_back(e);
        }
      }
    }
  }
  return out;
}

std::optional<TokenId> TokenGraph::token_merging(
    TokenId tw, TokenId tx, ConflictGraph& cg,
    std::vector<MergeConflict>& conflicts) {
  if (tw == tx || !has_token(tw) || !has_token(tx)) return std::nullopt;
  if (adjacent(tw, tx)) {
    MergeConflict mc{std::min(tw, tx), std::max(tw, tx)};
    const auto& ma = cg.members(mc.a);
    const auto& mb = cg.members(mc.b);
    if (!ma.empty()) mc.va = *ma.begin();
    if (!mb.empty()) mc.vb = *mb.begin();
    TPL_LOG(info, "conflict: tokens " << mc.a << " and " << mc.b
                                                << " forced equal yet opposed");
    conflicts.push_back(mc);
    return std::nullopt;
  }

  // Witness patterns are generated against the pre-merge state, from every
  // clique justifying the merge in either direction.
  std::vector<MergingEdge> patterns;
  std::set<MedgeKey> seen;
  for (const Scc& s : sccs_) {
    if (contains(s, tx)) {
      const auto [y, z] = others(s, tx);
      if (adjacent(tw, y) && adjacent(tw, z)) {
        for (const MergingEdge& e : merging_pattern_generation(tw, tx, s, cg)) {
          if (seen.insert(e.key()).second) patterns.push_back(e);
        }
      }
    }
    if (contains(s, tw)) {
      const auto [y, z] = others(s, tw);
      if (adjacent(tx, y) && adjacent(tx, z)) {
        for (const MergingEdge& e : merging_pattern_generation(tx, tw, s, cg)) {
          if (seen.insert(e.key()).second) patterns.push_back(e);
        }
      }
    }
  }

  const TokenId tmrg = fresh_token();
  TPL_LOG(debug, "merge tokens " << tw << "+" << tx << " -> " << tmrg);

  const std::vector<VertexId> mem_w(cg.members(tw).begin(),
                                    cg.members(tw).end());
  const std::vector<VertexId> mem_x(cg.members(tx).begin(),
                                    cg.members(tx).end());
  for (VertexId v : mem_w) cg.set_token(v, tmrg);
  for (VertexId v : mem_x) cg.set_token(v, tmrg);
  cg.reindex_merging_edges();
  for (MergingEdge e : patterns) {
    e.merged_token = tmrg;
    cg.install_merging_edge(e);
  }

  const std::set<TokenId> adj_w = adj(tw);
  const std::set<TokenId> adj_x = adj(tx);
  std::map<TokenId, int> merged_support;
  for (TokenId t : adj_w) merged_support[t] += support_.at(norm(tw, t));
  for (TokenId t : adj_x) merged_support[t] += support_.at(norm(tx, t));
  for (TokenId t : adj_w) disconnect_raw(tw, t);
  for (TokenId t : adj_x) disconnect_raw(tx, t);
  for (const auto& [t, s] : merged_support) connect_raw(tmrg, t, s);

  std::vector<Scc> rewritten;
  for (auto it = sccs_.begin(); it != sccs_.end();) {
    if (contains(*it, tw) || contains(*it, tx)) {
      Scc s = *it;
      for (TokenId& t : s) {
        if (t == tw || t == tx) t = tmrg;
      }
      std::sort(s.begin(), s.end());
      rewritten.push_back(s);
      it = sccs_.erase(it);
    } else {
      ++it;
    }
  }
  for (const Scc& s : rewritten) sccs_.insert(s);

  tokens_.erase(tw);
  tokens_.erase(tx);
  adj_.erase(tw);
  adj_.erase(tx);

  // Re-examine the merged token against the neighbours it did not already
  // share through both halves.
  std::vector<TokenId> changed;
  for (const auto& [t, s] : merged_support) {
    if (adj_w.count(t) == 0 || adj_x.count(t) == 0) changed.push_back(t);
  }
  for (TokenId t : changed) {
    if (!has_token(tmrg)) break;
    if (!has_token(t)) continue;
    if (!adjacent(tmrg, t)) continue;
    tg_update(tmrg, t, cg, conflicts);
  }
  return tmrg;
}

std::set<std::pair<TokenId, TokenId>> TokenGraph::detect_implicit_edges() const {
  std::set<std::pair<TokenId, TokenId>> out;
  for (const auto& p : deduced_pairs()) {
    if (!adjacent(p.first, p.second)) out.insert(p);
  }
  return out;
}

std::set<std::pair<TokenId, TokenId>> TokenGraph::deduced_pairs() const {
  std::set<std::pair<TokenId, TokenId>> out;
  const std::vector<Scc> ss(sccs_.begin(), sccs_.end());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    for (std::size_t j = i + 1; j < ss.size(); ++j) {
      for (TokenId tx : ss[i]) {
        for (TokenId tp : ss[j]) {
          if (tx == tp || !adjacent(tx, tp)) continue;
          const auto [a1, a2] = others(ss[i], tx);
          const auto [b1, b2] = others(ss[j], tp);
          for (const auto& [ty, tz] :
               {std::pair{a1, a2}, std::pair{a2, a1}}) {
            for (const auto& [tq, tr] :
                 {std::pair{b1, b2}, std::pair{b2, b1}}) {
              for (TokenId ti : adj(ty)) {
                if (!adjacent(ti, tq)) continue;
                for (TokenId tjc : adj(tz)) {
                  if (!adjacent(tjc, tr)) continue;
                  if (ti == tjc) continue;
                  out.insert(norm(ti, tjc));
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<TokenId> TokenGraph::token_splitting(TokenId victim,
                                                 ConflictGraph& cg,
                                                 std::vector<Scc>& dropped) {
  if (!has_token(victim)) {
    throw std::invalid_argument("split of unknown token " +
                                std::to_string(victim));
  }
  const std::vector<VertexId> mem(cg.members(victim).begin(),
                                  cg.members(victim).end());
  if (mem.empty()) {
    for (const Scc& s : remove_token(victim)) dropped.push_back(s);
    return {};
  }

  Dsu dsu;
  for (VertexId v : mem) dsu.find(v);
  for (const MergingEdge& e : cg.merging_edges_of_token(victim)) {
    dsu.unite(e.cnt1, e.cnt2);
  }
  std::map<VertexId, std::vector<VertexId>> groups;
  for (VertexId v : mem) groups[dsu.find(v)].push_back(v);
  if (groups.size() == 1) return {};

  TPL_LOG(debug, "token " << victim << " splits into "
                                    << groups.size() << " components");
  std::vector<TokenId> fresh;
  for (const auto& [root, vs] : groups) {
    const TokenId t = fresh_token();
    fresh.push_back(t);
    for (VertexId v : vs) cg.set_token(v, t);
  }
  cg.reindex_merging_edges();

  const std::set<TokenId> old_adj = adj(victim);
  for (TokenId t : old_adj) disconnect_raw(victim, t);
  for (const Scc& s : drop_sccs_with_token(victim)) dropped.push_back(s);
  tokens_.erase(victim);
  adj_.erase(victim);

  const std::set<VertexId> memset(mem.begin(), mem.end());
  std::map<std::pair<TokenId, TokenId>, int> cnt;
  for (VertexId v : mem) {
    for (VertexId u : cg.neighbors(v)) {
      if (memset.count(u) != 0 && u < v) continue;
      const TokenId a = cg.token_of(v);
      const TokenId b = cg.token_of(u);
      if (a == b) continue;
      cnt[norm(a, b)] += 1;
    }
  }
  for (const auto& [pr, c] : cnt) {
    if (adjacent(pr.first, pr.second)) {
      add_support(pr.first, pr.second, c);
    } else {
      connect_raw(pr.first, pr.second, c);
    }
  }
  return fresh;
}

void TokenGraph::check_invariants() const {
  for (const auto& [t, nbrs] : adj_) {
    if (tokens_.count(t) == 0) {
      throw std::logic_error("adjacency kept for retired token");
    }
    for (TokenId u : nbrs) {
      if (u == t) throw std::logic_error("token adjacent to itself");
      if (!adjacent(u, t)) throw std::logic_error("asymmetric token adjacency");
      if (support_.count(norm(t, u)) == 0) {
        throw std::logic_error("token edge without support entry");
      }
    }
  }
  for (const auto& [pr, s] : support_) {
    if (!adjacent(pr.first, pr.second)) {
      throw std::logic_error("support entry without adjacency");
    }
    if (s < 0) throw std::logic_error("negative support");
  }
  for (const Scc& s : sccs_) {
    for (TokenId t : s) {
      if (!has_token(t)) throw std::logic_error("clique over retired token");
    }
    if (!adjacent(s[0], s[1]) || !adjacent(s[0], s[2]) ||
        !adjacent(s[1], s[2])) {
      throw std::logic_error("clique members not pairwise adjacent");
    }
  }
}

}  // namespace tpl
