#include "vne/embedding.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "vne/refinement.hpp"

namespace vne {

namespace {

// Hop distances from src over links with residual >= min_bw, capped at
// max_hops. Frontier levels are expanded in ascending node id so the parent
// of any discovered node is its lowest-id predecessor.
std::map<int, int> bfs_distances(const SubstrateNetwork& sn, int src, Amount min_bw, int max_hops,
                                 std::map<int, int>* parent = nullptr) {
  std::map<int, int> dist;
  dist[src] = 0;
  std::vector<int> frontier{src};
  for (int d = 0; d < max_hops && !frontier.empty(); ++d) {
    std::sort(frontier.begin(), frontier.end());
    std::vector<int> next;
    for (int u : frontier) {
      for (int lid : sn.incident_links(u)) {
        const auto& l = sn.link(lid);
        if (l.residual_bw < min_bw) continue;
        const int v = l.other(u);
        if (dist.count(v)) continue;
        dist[v] = d + 1;
        if (parent) (*parent)[v] = u;
        next.push_back(v);
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

}  // namespace

std::optional<std::vector<int>> route_virtual_link(Amount bw, int from, int to,
                                                   const SubstrateNetwork& sn, int max_hops) {
  if (from == to) throw std::invalid_argument("route endpoints must differ");
  std::map<int, int> parent;
  const auto dist = bfs_distances(sn, from, bw, max_hops, &parent);
  if (!dist.count(to)) return std::nullopt;
  std::vector<int> path;
  for (int at = to; at != from; at = parent.at(at)) {
    path.push_back(*sn.link_between(parent.at(at), at));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

EmbedOrder build_embed_order(const CoarsenedGraph& cg) {
  const auto weight = [&](int id) {
    const auto& n = cg.node(id);
    return n.cpu + n.external_bw;
  };
  const auto heavier = [&](int a, int b) {
    if (weight(a) != weight(b)) return weight(a) > weight(b);
    return a < b;
  };

  EmbedOrder order;
  std::set<int> visited;
  while (visited.size() < cg.nodes().size()) {
    int root = -1;
    for (const auto& n : cg.nodes()) {
      if (visited.count(n.id)) continue;
      if (root < 0 || heavier(n.id, root)) root = n.id;
    }
    visited.insert(root);
    std::vector<int> level{root};
    while (!level.empty()) {
      std::sort(level.begin(), level.end(), heavier);
      for (int id : level) order.ids.push_back(id);
      std::vector<int> next;
      for (int id : level) {
        for (int lid : cg.incident_links(id)) {
          const int other = cg.link(lid).other(id);
          if (visited.insert(other).second) next.push_back(other);
        }
      }
      level = std::move(next);
    }
  }
  return order;
}

CandidateList build_candidates(const CoarsenedGraph& cg, int cn_id, const std::map<int, int>& hosts,
                               const SubstrateNetwork& sn, const EmbedParams& p) {
  const auto& cn = cg.node(cn_id);
  CandidateList out;
  out.coarsened_node_id = cn_id;

  std::set<int> used;
  for (const auto& [mapped_cn, host] : hosts) used.insert(host);

  // Coarsened links whose other endpoint is already mapped.
  std::vector<const CoarsenedLink*> anchors;
  for (int lid : cg.incident_links(cn_id)) {
    const auto& cl = cg.link(lid);
    if (hosts.count(cl.other(cn_id))) anchors.push_back(&cl);
  }

  if (anchors.empty()) {
    // Root case: every node with enough CPU, richest first.
    std::vector<int> ids;
    for (const auto& n : sn.nodes()) {
      if (used.count(n.id)) continue;
      if (n.residual_cpu < cn.cpu) continue;
      ids.push_back(n.id);
    }
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      const Amount ra = sn.node(a).residual_cpu + sn.incident_residual_bw(a);
      const Amount rb = sn.node(b).residual_cpu + sn.incident_residual_bw(b);
      if (ra != rb) return ra > rb;
      return a < b;
    });
    out.substrate_node_ids = std::move(ids);
    return out;
  }

  // One bandwidth-filtered BFS tree per mapped neighbor; a candidate must
  // appear in all of them. The filter threshold is the widest single member
  // of the bundle: each member link is routed on its own path later, so a
  // path that can carry the widest member is what reachability requires (the
  // bundled total routinely exceeds any single substrate link).
  std::vector<std::map<int, int>> dists;
  for (const auto* cl : anchors) {
    Amount widest;
    for (int vlid : cl->member_virtual_links)
      widest = std::max(widest, cg.source().link(vlid).bw);
    dists.push_back(bfs_distances(sn, hosts.at(cl->other(cn_id)), widest, p.max_hops));
  }

  struct Scored {
    int id;
    Amount connect_cost;
    Amount resources;
  };
  std::vector<Scored> scored;
  for (const auto& n : sn.nodes()) {
    if (used.count(n.id)) continue;
    if (n.residual_cpu < cn.cpu) continue;
    Amount cost;
    bool reachable = true;
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      auto it = dists[k].find(n.id);
      if (it == dists[k].end()) {
        reachable = false;
        break;
      }
      cost += anchors[k]->bw * it->second;
    }
    if (!reachable) continue;
    scored.push_back({n.id, cost, n.residual_cpu + sn.incident_residual_bw(n.id)});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.connect_cost != b.connect_cost) return a.connect_cost < b.connect_cost;
    if (a.resources != b.resources) return a.resources > b.resources;
    return a.id < b.id;
  });
  for (const auto& s : scored) out.substrate_node_ids.push_back(s.id);
  return out;
}

namespace {

// Backtracking search over a coarsened graph against a scratch copy of the
// substrate residuals. Add() reserves tentatively so later candidate lists
// and routes see the partial embedding; Delete() (rollback) restores the
// journaled deltas bit-exactly.
class Search {
 public:
  Search(const CoarsenedGraph& cg, const SubstrateNetwork& sn, const EmbedParams& p,
         std::int64_t limit)
      : cg_(cg), sn_(sn), p_(p), limit_(limit) {
    map_.max_hops = p.max_hops;
  }

  bool run(const EmbedOrder& order) {
    order_ = &order;
    return embed_from(0);
  }

  std::int64_t backtracks() const { return backtracks_; }
  const EmbeddingMap& map() const { return map_; }

 private:
  struct Journal {
    int cn_id;
    int host;
    std::vector<std::pair<int, Amount>> link_deltas;  // substrate link id -> reserved bw
    std::vector<int> mapped_vlinks;
  };

  bool embed_from(std::size_t k) {
    if (k == order_->ids.size()) return true;
    const int cn_id = order_->ids[k];
    const CandidateList cl = build_candidates(cg_, cn_id, hosts_, sn_, p_);
    for (int host : cl.substrate_node_ids) {
      if (add(cn_id, host)) {
        if (embed_from(k + 1)) return true;
        remove_last();
      }
      if (backtracks_ > limit_) return false;
    }
    ++backtracks_;
    return false;
  }

  // Maps the coarsened node onto `host` and routes every member virtual
  // link of every coarsened link toward already-mapped neighbors, links in
  // ascending coarsened-link id, members in ascending virtual-link id, each
  // route seeing its predecessors' reservations. Returns false (fully
  // rolled back) when any route is infeasible.
  bool add(int cn_id, int host) {
    const auto& cn = cg_.node(cn_id);
    Journal j{cn_id, host, {}, {}};
    sn_.node(host).residual_cpu -= cn.cpu;
    hosts_[cn_id] = host;
    for (int member : cn.members) map_.node_map[member] = host;
    for (int ilink : cn.internal_links) map_.link_map[ilink] = {};

    for (int lid : cg_.incident_links(cn_id)) {
      const auto& clink = cg_.link(lid);
      const int other = clink.other(cn_id);
      if (other == cn_id || !hosts_.count(other)) continue;
      for (int vlid : clink.member_virtual_links) {
        const auto& vl = cg_.source().link(vlid);
        const int from_host = map_.node_map.at(vl.from);
        const int to_host = map_.node_map.at(vl.to);
        auto path = route_virtual_link(vl.bw, from_host, to_host, sn_, p_.max_hops);
        if (!path) {
          rollback(j);
          return false;
        }
        for (int slid : *path) {
          sn_.link(slid).residual_bw -= vl.bw;
          j.link_deltas.emplace_back(slid, vl.bw);
        }
        map_.link_map[vlid] = std::move(*path);
        j.mapped_vlinks.push_back(vlid);
      }
    }
    journal_.push_back(std::move(j));
    return true;
  }

  void rollback(const Journal& j) {
    const auto& cn = cg_.node(j.cn_id);
    for (auto it = j.link_deltas.rbegin(); it != j.link_deltas.rend(); ++it)
      sn_.link(it->first).residual_bw += it->second;
    for (int vlid : j.mapped_vlinks) map_.link_map.erase(vlid);
    for (int ilink : cn.internal_links) map_.link_map.erase(ilink);
    for (int member : cn.members) map_.node_map.erase(member);
    hosts_.erase(j.cn_id);
    sn_.node(j.host).residual_cpu += cn.cpu;
  }

  void remove_last() {
    Journal j = std::move(journal_.back());
    journal_.pop_back();
    rollback(j);
  }

  const CoarsenedGraph& cg_;
  SubstrateNetwork sn_;
  EmbedParams p_;
  std::int64_t limit_;
  std::int64_t backtracks_ = 0;
  const EmbedOrder* order_ = nullptr;
  std::map<int, int> hosts_;
  EmbeddingMap map_;
  std::vector<Journal> journal_;
};

EmbedOutcome run_search(const CoarsenedGraph& cg, const SubstrateNetwork& sn, const EmbedParams& p) {
  // The per-node backtrack rule scales with the request's virtual node
  // count, not the coarsened count, so coarsening never shrinks the budget.
  const std::int64_t limit = p.resolve_backtrack_limit(cg.source().nodes().size());
  Search search(cg, sn, p, limit);
  const EmbedOrder order = build_embed_order(cg);
  EmbedOutcome out;
  if (search.run(order)) {
    out.success = true;
    out.map = search.map();
    out.reason = FailReason::None;
  } else {
    out.reason = search.backtracks() > limit ? FailReason::BacktrackLimit : FailReason::NoCandidates;
  }
  out.backtracks = search.backtracks();
  return out;
}

}  // namespace

EmbedOutcome hcm_embed(const VirtualNetwork& vn, const SubstrateNetwork& sn, const EmbedParams& p) {
  if (vn.nodes().empty()) {
    EmbedOutcome out;
    out.success = true;
    out.map.max_hops = p.max_hops;
    return out;
  }
  Amount cpu_max, bw_max;
  for (const auto& n : sn.nodes()) {
    cpu_max = std::max(cpu_max, n.residual_cpu);
    bw_max = std::max(bw_max, sn.incident_residual_bw(n.id));
  }
  // The caps come from residuals and can be zero on a saturated substrate;
  // coarsening needs positive caps and one centi-unit is at or below any
  // demand, so clamping preserves which merges are feasible.
  cpu_max = std::max(cpu_max, Amount::from_centi(1));
  bw_max = std::max(bw_max, Amount::from_centi(1));

  if (p.coarsening_enabled) {
    CoarsenedGraph cg = optimize(coarsen(vn, cpu_max, bw_max)).graph;
    return run_search(cg, sn, p);
  }
  CoarsenedGraph cg(vn, cpu_max, bw_max);
  return run_search(cg, sn, p);
}

EmbedOutcome baseline_no_coarsen(const VirtualNetwork& vn, const SubstrateNetwork& sn,
                                 const EmbedParams& p) {
  EmbedParams q = p;
  q.coarsening_enabled = false;
  return hcm_embed(vn, sn, q);
}

EmbedOutcome baseline_greedy(const VirtualNetwork& vn, const SubstrateNetwork& sn,
                             const EmbedParams& p) {
  EmbedOutcome out;
  SubstrateNetwork scratch = sn;
  out.map.max_hops = p.max_hops;

  std::vector<int> vnode_ids;
  for (const auto& n : vn.nodes()) vnode_ids.push_back(n.id);
  std::sort(vnode_ids.begin(), vnode_ids.end(), [&](int a, int b) {
    if (vn.node(a).cpu != vn.node(b).cpu) return vn.node(a).cpu > vn.node(b).cpu;
    return a < b;
  });

  std::set<int> used;
  for (int vid : vnode_ids) {
    int best = -1;
    for (const auto& s : scratch.nodes()) {
      if (used.count(s.id)) continue;
      if (s.residual_cpu < vn.node(vid).cpu) continue;
      if (best < 0 || s.residual_cpu > scratch.node(best).residual_cpu ||
          (s.residual_cpu == scratch.node(best).residual_cpu && s.id < best))
        best = s.id;
    }
    if (best < 0) {
      out.reason = FailReason::NoCandidates;
      return out;
    }
    used.insert(best);
    scratch.node(best).residual_cpu -= vn.node(vid).cpu;
    out.map.node_map[vid] = best;
  }

  std::vector<int> vlink_ids;
  for (const auto& l : vn.links()) vlink_ids.push_back(l.id);
  std::sort(vlink_ids.begin(), vlink_ids.end());
  for (int lid : vlink_ids) {
    const auto& vl = vn.link(lid);
    const int from_host = out.map.node_map.at(vl.from);
    const int to_host = out.map.node_map.at(vl.to);
    auto path = route_virtual_link(vl.bw, from_host, to_host, scratch, p.max_hops);
    if (!path) {
      out.reason = FailReason::NoCandidates;
      out.map = EmbeddingMap{};
      out.map.max_hops = p.max_hops;
      return out;
    }
    for (int slid : *path) scratch.link(slid).residual_bw -= vl.bw;
    out.map.link_map[lid] = std::move(*path);
  }
  out.success = true;
  return out;
}

}  // namespace vne
