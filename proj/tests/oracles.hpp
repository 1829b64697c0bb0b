// Test-only oracles, written independently of the library code paths they
// check: recounts work from the raw virtual network and membership lists,
// path logic from exhaustive enumeration over the substrate.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "vne/coarsening.hpp"
#include "vne/network.hpp"
#include "vne/rng.hpp"

namespace oracle {

using vne::Amount;
using vne::CoarsenedGraph;
using vne::SubstrateNetwork;
using vne::VirtualNetwork;

// ---------------------------------------------------------------------------
// Partition recount

struct GroupCount {
  std::set<int> members;
  std::set<int> internal_links;
  Amount cpu;
  Amount external_bw;
};

struct PartitionRecount {
  std::map<int, GroupCount> groups;       // keyed by coarsened node id
  Amount crossing_bw;
  std::size_t crossing_link_members = 0;  // virtual links between groups
  bool node_partition_ok = false;         // every vnode in exactly one group
  bool link_partition_ok = false;         // groups' claims match the recount
};

// Independent recount from the membership lists and the raw VN; compares the
// graph's claimed internal links against a from-scratch classification.
inline PartitionRecount recount(const CoarsenedGraph& cg) {
  PartitionRecount r;
  const VirtualNetwork& vn = cg.source();

  std::map<int, int> owner;  // vnode -> coarsened node id
  std::size_t member_total = 0;
  for (const auto& cn : cg.nodes()) {
    auto& g = r.groups[cn.id];
    for (int m : cn.members) {
      g.members.insert(m);
      owner[m] = cn.id;
      g.cpu += vn.node(m).cpu;
    }
    member_total += cn.members.size();
  }
  r.node_partition_ok = owner.size() == vn.nodes().size() && member_total == vn.nodes().size();
  if (!r.node_partition_ok) return r;

  std::map<int, std::set<int>> internal_by_group;
  for (const auto& vl : vn.links()) {
    const int ga = owner.at(vl.from), gb = owner.at(vl.to);
    if (ga == gb) {
      internal_by_group[ga].insert(vl.id);
    } else {
      r.crossing_bw += vl.bw;
      ++r.crossing_link_members;
      r.groups[ga].external_bw += vl.bw;
      r.groups[gb].external_bw += vl.bw;
    }
  }

  r.link_partition_ok = true;
  std::size_t claimed_internal = 0, claimed_crossing = 0;
  for (const auto& cn : cg.nodes()) {
    const std::set<int> claimed(cn.internal_links.begin(), cn.internal_links.end());
    if (claimed != internal_by_group[cn.id]) r.link_partition_ok = false;
    r.groups[cn.id].internal_links = claimed;
    claimed_internal += claimed.size();
  }
  std::set<int> seen_members;
  for (const auto& cl : cg.links()) {
    for (int m : cl.member_virtual_links) {
      if (!seen_members.insert(m).second) r.link_partition_ok = false;
      const auto& vl = vn.link(m);
      const int ga = owner.at(vl.from), gb = owner.at(vl.to);
      const auto key = std::minmax(ga, gb);
      if (std::minmax(cl.a, cl.b) != key || ga == gb) r.link_partition_ok = false;
    }
    claimed_crossing += cl.member_virtual_links.size();
  }
  if (claimed_internal + claimed_crossing != vn.links().size()) r.link_partition_ok = false;
  return r;
}

// Crossing bandwidth from a raw vnode->group map (for replaying refinement
// traces without the library's normalization).
inline Amount crossing_of(const VirtualNetwork& vn, const std::map<int, int>& group) {
  Amount sum;
  for (const auto& vl : vn.links()) {
    if (group.at(vl.from) != group.at(vl.to)) sum += vl.bw;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Exhaustive path logic

// Shortest feasible hop count from `from` to `to` using only links with
// residual >= bw, at most max_hops, by exhaustive depth-first enumeration of
// simple paths. Returns nullopt when no such path exists.
inline std::optional<int> shortest_feasible_hops(const SubstrateNetwork& sn, int from, int to,
                                                 Amount bw, int max_hops) {
  std::optional<int> best;
  std::vector<int> stack{from};
  std::set<int> on_path{from};
  struct Frame {
    int node;
    std::size_t next_link = 0;
  };
  std::vector<Frame> frames{{from, 0}};
  while (!frames.empty()) {
    Frame& f = frames.back();
    const auto& inc = sn.incident_links(f.node);
    if (f.next_link >= inc.size()) {
      on_path.erase(f.node);
      frames.pop_back();
      continue;
    }
    const auto& link = sn.link(inc[f.next_link++]);
    if (link.residual_bw < bw) continue;
    const int nxt = link.other(f.node);
    if (on_path.count(nxt)) continue;
    const int depth = static_cast<int>(frames.size());  // hops used so far + 1
    if (nxt == to) {
      if (!best || depth < *best) best = depth;
      continue;
    }
    if (depth >= max_hops) continue;
    if (best && depth >= *best) continue;
    on_path.insert(nxt);
    frames.push_back({nxt, 0});
  }
  return best;
}

// The deterministic route the engine commits to, derived independently:
// minimum feasible hop count, walking back from the target and picking at
// each step the lowest-id predecessor one level closer to the source.
inline std::optional<std::vector<int>> canonical_route(const SubstrateNetwork& sn, int from, int to,
                                                       Amount bw, int max_hops) {
  std::map<int, int> dist;
  dist[from] = 0;
  for (int d = 1; d <= max_hops; ++d) {
    for (const auto& n : sn.nodes()) {
      if (dist.count(n.id)) continue;
      bool reach = false;
      for (int lid : sn.incident_links(n.id)) {
        const auto& l = sn.link(lid);
        if (l.residual_bw < bw) continue;
        auto it = dist.find(l.other(n.id));
        if (it != dist.end() && it->second == d - 1) {
          reach = true;
          break;
        }
      }
      if (reach) dist[n.id] = d;
    }
  }
  if (!dist.count(to)) return std::nullopt;
  std::vector<int> path;
  int at = to;
  while (at != from) {
    int parent = -1;
    for (const auto& n : sn.nodes()) {
      auto it = dist.find(n.id);
      if (it == dist.end() || it->second != dist.at(at) - 1) continue;
      auto lid = sn.link_between(n.id, at);
      if (!lid || sn.link(*lid).residual_bw < bw) continue;
      if (parent < 0 || n.id < parent) parent = n.id;
    }
    path.push_back(*sn.link_between(parent, at));
    at = parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Exhaustive injection feasibility (completeness oracle)

// Embedding order recomputed from scratch: BFS tree from the heaviest
// (cpu + external bw) coarsened node, levels sorted by the same key.
inline std::vector<int> embed_order(const CoarsenedGraph& cg) {
  auto weight = [&](int id) {
    const auto& n = cg.node(id);
    return n.cpu + n.external_bw;
  };
  auto heavier = [&](int a, int b) {
    if (weight(a) != weight(b)) return weight(a) > weight(b);
    return a < b;
  };
  std::vector<int> order;
  std::set<int> visited;
  while (visited.size() < cg.nodes().size()) {
    int root = -1;
    for (const auto& n : cg.nodes())
      if (!visited.count(n.id) && (root < 0 || heavier(n.id, root))) root = n.id;
    std::vector<int> level{root};
    visited.insert(root);
    while (!level.empty()) {
      std::sort(level.begin(), level.end(), heavier);
      order.insert(order.end(), level.begin(), level.end());
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

// Recursive enumeration of all injective coarsened-node -> substrate-node
// assignments in embed order, applying the engine's per-step admission gates
// (CPU fit, unused host, per-neighbor aggregate-bandwidth path existence)
// and then the sequential routing above. True iff some assignment embeds.
struct InjectionOracle {
  const CoarsenedGraph& cg;
  int max_hops;
  std::vector<int> order;

  explicit InjectionOracle(const CoarsenedGraph& g, int hops)
      : cg(g), max_hops(hops), order(embed_order(g)) {}

  bool feasible(const SubstrateNetwork& sn) const {
    State st{sn, {}, {}};
    return search(0, st);
  }

 private:
  struct State {
    SubstrateNetwork sn;
    std::map<int, int> hosts;
    std::map<int, int> vnode_hosts;
  };

  bool admissible(int cn_id, int host, const State& st) const {
    const auto& cn = cg.node(cn_id);
    if (st.sn.node(host).residual_cpu < cn.cpu) return false;
    for (const auto& [placed, h] : st.hosts)
      if (h == host) return false;
    for (int lid : cg.incident_links(cn_id)) {
      const auto& cl = cg.link(lid);
      const int other = cl.other(cn_id);
      if (!st.hosts.count(other)) continue;
      // Reachability at the widest member of the bundle, matching the
      // engine's admission gate.
      Amount widest;
      for (int vlid : cl.member_virtual_links)
        widest = std::max(widest, cg.source().link(vlid).bw);
      if (!shortest_feasible_hops(st.sn, st.hosts.at(other), host, widest, max_hops)) return false;
    }
    return true;
  }

  bool apply(int cn_id, int host, State& st) const {
    const auto& cn = cg.node(cn_id);
    st.sn.node(host).residual_cpu -= cn.cpu;
    st.hosts[cn_id] = host;
    for (int m : cn.members) st.vnode_hosts[m] = host;
    for (int lid : cg.incident_links(cn_id)) {
      const auto& cl = cg.link(lid);
      if (!st.hosts.count(cl.other(cn_id)) || cl.other(cn_id) == cn_id) continue;
      for (int vlid : cl.member_virtual_links) {
        const auto& vl = cg.source().link(vlid);
        auto path = canonical_route(st.sn, st.vnode_hosts.at(vl.from), st.vnode_hosts.at(vl.to),
                                    vl.bw, max_hops);
        if (!path) return false;
        for (int slid : *path) st.sn.link(slid).residual_bw -= vl.bw;
      }
    }
    return true;
  }

  bool search(std::size_t k, State& st) const {
    if (k == order.size()) return true;
    const int cn_id = order[k];
    std::vector<int> host_ids;  // snapshot: st is reassigned inside the loop
    for (const auto& node : st.sn.nodes()) host_ids.push_back(node.id);
    for (int host : host_ids) {
      if (!admissible(cn_id, host, st)) continue;
      State saved = st;
      if (apply(cn_id, host, st)) {
        if (search(k + 1, st)) return true;
      }
      st = std::move(saved);
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Random instances

inline SubstrateNetwork random_substrate(vne::Rng& rng, int max_nodes, Amount cpu_lo, Amount cpu_hi,
                                         Amount bw_lo, Amount bw_hi, double edge_prob = 0.6) {
  const int n = static_cast<int>(rng.uniform_int(1, max_nodes));
  SubstrateNetwork sn;
  for (int i = 0; i < n; ++i) sn.add_node(i, rng.uniform_amount(cpu_lo, cpu_hi));
  int lid = 0;
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(rng.uniform_int(0, i - 1));
    sn.add_link(lid++, j, i, rng.uniform_amount(bw_lo, bw_hi));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (sn.link_between(i, j)) continue;
      if (rng.uniform01() < edge_prob) sn.add_link(lid++, i, j, rng.uniform_amount(bw_lo, bw_hi));
    }
  }
  return sn;
}

inline VirtualNetwork random_vn(vne::Rng& rng, int min_nodes, int max_nodes, Amount cpu_lo,
                                Amount cpu_hi, Amount bw_lo, Amount bw_hi, double edge_prob = 0.5) {
  const int n = static_cast<int>(rng.uniform_int(min_nodes, max_nodes));
  VirtualNetwork vn;
  for (int i = 0; i < n; ++i) vn.add_node(i, rng.uniform_amount(cpu_lo, cpu_hi));
  int lid = 0;
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(rng.uniform_int(0, i - 1));
    vn.add_link(lid++, j, i, rng.uniform_amount(bw_lo, bw_hi));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (i == j) continue;
      bool exists = false;
      for (int l : vn.incident_links(i))
        if (vn.link(l).other(i) == j) exists = true;
      if (exists) continue;
      if (rng.uniform01() < edge_prob) vn.add_link(lid++, i, j, rng.uniform_amount(bw_lo, bw_hi));
    }
  }
  return vn;
}

inline std::vector<Amount> residual_snapshot(const SubstrateNetwork& sn) {
  std::vector<Amount> out;
  for (const auto& n : sn.nodes()) out.push_back(n.residual_cpu);
  for (const auto& l : sn.links()) out.push_back(l.residual_bw);
  return out;
}

}  // namespace oracle
