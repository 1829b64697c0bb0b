#include "vne/refinement.hpp"

#include <algorithm>
#include <stdexcept>

namespace vne {

std::vector<int> boundary_nodes(const CoarsenedGraph& cg, int cn_id) {
  const auto& cn = cg.node(cn_id);
  const auto& vn = cg.source();
  std::vector<int> out;
  for (int member : cn.members) {
    for (int lid : vn.incident_links(member)) {
      if (cg.group_of(vn.link(lid).other(member)) != cn_id) {
        out.push_back(member);
        break;
      }
    }
  }
  return out;
}

Amount crossing_bandwidth(const CoarsenedGraph& cg) {
  Amount sum;
  for (const auto& l : cg.links()) sum += l.bw;
  return sum;
}

namespace {

// Bandwidth of v toward each group: [group id -> bw], plus the bandwidth
// kept inside v's own group.
struct NodePull {
  std::map<int, Amount> toward;
  Amount internal;
};

NodePull pull_of(const CoarsenedGraph& cg, int vnode) {
  const auto& vn = cg.source();
  const int own = cg.group_of(vnode);
  NodePull p;
  for (int lid : vn.incident_links(vnode)) {
    const auto& vl = vn.link(lid);
    const int g = cg.group_of(vl.other(vnode));
    if (g == own)
      p.internal += vl.bw;
    else
      p.toward[g] += vl.bw;
  }
  return p;
}

bool caps_ok(const CoarsenedGraph& cg, int vnode) {
  const auto& cn = cg.node(cg.group_of(vnode));
  return cn.cpu <= cg.cpu_max() && cn.external_bw <= cg.bw_max();
}

}  // namespace

RefineResult optimize(CoarsenedGraph cg) {
  RefineResult result{std::move(cg), {}, 0};
  auto& g = result.graph;

  bool changed = true;
  while (changed) {
    changed = false;
    ++result.sweeps;
    std::vector<int> group_ids;
    for (const auto& n : g.nodes()) group_ids.push_back(n.id);

    for (int gid : group_ids) {
      if (!g.has_node(gid)) continue;  // vanished or renamed earlier this sweep
      for (int v : boundary_nodes(g, gid)) {
        if (!g.has_node(gid)) break;
        if (g.group_of(v) != gid) continue;  // moved by an earlier action

        const NodePull pull = pull_of(g, v);
        int target = -1;
        Amount best_gain;
        for (const auto& [j, bw] : pull.toward) {
          if (bw <= pull.internal) continue;
          const Amount gain = bw - pull.internal;
          if (target < 0 || gain > best_gain) {
            target = j;
            best_gain = gain;
          }
        }
        if (target < 0) continue;

        const Amount before = crossing_bandwidth(g);
        const int anchor = g.node(target).members.front();

        // Move: gain > 0 already implies the crossing bandwidth drops; both
        // touched groups must stay within caps (removing a node can raise
        // the source's external bandwidth).
        CoarsenedGraph moved = g;
        moved.reassign({{v, target}});
        const bool source_survives = g.node(gid).members.size() > 1;
        bool move_ok = caps_ok(moved, v);
        if (move_ok && source_survives) {
          // Any remaining source member identifies the shrunken group.
          for (int m : g.node(gid).members) {
            if (m != v) {
              move_ok = caps_ok(moved, m);
              break;
            }
          }
        }
        if (move_ok) {
          const Amount after = crossing_bandwidth(moved);
          g = std::move(moved);
          result.actions.push_back({RefineAction::Kind::Move, v, gid, target, anchor, -1, before, after});
          changed = true;
          continue;
        }

        // Swap: single boundary node of the target whose exchange with v
        // strictly lowers the crossing bandwidth without breaking caps.
        int best_u = -1;
        Amount best_after;
        for (int u : boundary_nodes(g, target)) {
          CoarsenedGraph swapped = g;
          swapped.reassign({{v, target}, {u, gid}});
          const Amount after = crossing_bandwidth(swapped);
          if (after >= before) continue;
          if (!caps_ok(swapped, v) || !caps_ok(swapped, u)) continue;
          if (best_u < 0 || after < best_after || (after == best_after && u < best_u)) {
            best_u = u;
            best_after = after;
          }
        }
        if (best_u >= 0) {
          CoarsenedGraph swapped = g;
          swapped.reassign({{v, target}, {best_u, gid}});
          g = std::move(swapped);
          result.actions.push_back(
              {RefineAction::Kind::Swap, v, gid, target, anchor, best_u, before, best_after});
          changed = true;
        }
      }
    }
  }
  return result;
}

}  // namespace vne
