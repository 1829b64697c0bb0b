#include "vne/coarsening.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vne {

CoarsenedGraph::CoarsenedGraph(VirtualNetwork vn, Amount cpu_max, Amount bw_max)
    : vn_(std::move(vn)), cpu_max_(cpu_max), bw_max_(bw_max) {
  for (const auto& n : vn_.nodes()) group_of_[n.id] = n.id;
  rebuild();
}

CoarsenedGraph::CoarsenedGraph(VirtualNetwork vn, Amount cpu_max, Amount bw_max,
                               const std::map<int, int>& assignment)
    : vn_(std::move(vn)), cpu_max_(cpu_max), bw_max_(bw_max), group_of_(assignment) {
  for (const auto& n : vn_.nodes()) {
    if (!group_of_.count(n.id))
      throw std::invalid_argument("assignment misses virtual node " + std::to_string(n.id));
  }
  if (group_of_.size() != vn_.nodes().size())
    throw std::invalid_argument("assignment references unknown virtual nodes");
  rebuild();
}

const CoarsenedNode& CoarsenedGraph::node(int id) const {
  auto it = node_pos_.find(id);
  if (it == node_pos_.end()) throw std::invalid_argument("unknown coarsened node " + std::to_string(id));
  return nodes_[it->second];
}

const CoarsenedLink& CoarsenedGraph::link(int id) const {
  auto it = link_pos_.find(id);
  if (it == link_pos_.end()) throw std::invalid_argument("unknown coarsened link " + std::to_string(id));
  return links_[it->second];
}

int CoarsenedGraph::group_of(int vnode_id) const {
  auto it = group_of_.find(vnode_id);
  if (it == group_of_.end()) throw std::invalid_argument("unknown virtual node " + std::to_string(vnode_id));
  return it->second;
}

const std::vector<int>& CoarsenedGraph::incident_links(int cn_id) const {
  auto it = incident_.find(cn_id);
  if (it == incident_.end()) throw std::invalid_argument("unknown coarsened node " + std::to_string(cn_id));
  return it->second;
}

std::optional<int> CoarsenedGraph::link_between(int a, int b) const {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = pair_links_.find(key);
  if (it == pair_links_.end()) return std::nullopt;
  return it->second;
}

void CoarsenedGraph::reassign(const std::vector<std::pair<int, int>>& moves) {
  for (const auto& [vnode, target_label] : moves) {
    if (!group_of_.count(vnode)) throw std::invalid_argument("unknown virtual node " + std::to_string(vnode));
    group_of_[vnode] = target_label;
  }
  rebuild();
}

void CoarsenedGraph::rebuild() {
  // Normalize group labels to the smallest member virtual-node id.
  std::map<int, int> label_min;
  for (const auto& [vnode, label] : group_of_) {
    auto it = label_min.find(label);
    if (it == label_min.end() || vnode < it->second) label_min[label] = vnode;
  }
  for (auto& [vnode, label] : group_of_) label = label_min.at(label);

  nodes_.clear();
  links_.clear();
  node_pos_.clear();
  link_pos_.clear();
  incident_.clear();
  pair_links_.clear();

  std::map<int, CoarsenedNode> groups;
  for (const auto& [vnode, gid] : group_of_) {
    auto& g = groups[gid];
    g.id = gid;
    g.members.push_back(vnode);
    g.cpu += vn_.node(vnode).cpu;
  }

  std::map<std::pair<int, int>, CoarsenedLink> bundles;
  for (const auto& l : vn_.links()) {
    const int ga = group_of_.at(l.from), gb = group_of_.at(l.to);
    if (ga == gb) {
      groups.at(ga).internal_links.push_back(l.id);
    } else {
      auto key = ga < gb ? std::make_pair(ga, gb) : std::make_pair(gb, ga);
      auto& bundle = bundles[key];
      bundle.a = key.first;
      bundle.b = key.second;
      bundle.member_virtual_links.push_back(l.id);
      bundle.bw += l.bw;
      groups.at(ga).external_bw += l.bw;
      groups.at(gb).external_bw += l.bw;
    }
  }

  for (auto& [gid, g] : groups) {
    std::sort(g.members.begin(), g.members.end());
    std::sort(g.internal_links.begin(), g.internal_links.end());
    g.over_cpu_cap = g.members.size() == 1 && g.cpu > cpu_max_;
    node_pos_[gid] = nodes_.size();
    nodes_.push_back(std::move(g));
    incident_[gid];
  }
  for (auto& [key, bundle] : bundles) {
    std::sort(bundle.member_virtual_links.begin(), bundle.member_virtual_links.end());
    bundle.id = bundle.member_virtual_links.front();
    link_pos_[bundle.id] = links_.size();
    pair_links_[key] = bundle.id;
    incident_[bundle.a].push_back(bundle.id);
    incident_[bundle.b].push_back(bundle.id);
    links_.push_back(std::move(bundle));
  }
  for (auto& [gid, lids] : incident_) std::sort(lids.begin(), lids.end());
}

std::string CoarsenedGraph::dump() const {
  std::ostringstream os;
  os << "coarsened graph: " << nodes_.size() << " nodes, " << links_.size() << " links\n";
  for (const auto& n : nodes_) {
    os << "node " << n.id << " cpu=" << n.cpu.str() << " ext_bw=" << n.external_bw.str() << " members=[";
    for (std::size_t i = 0; i < n.members.size(); ++i) os << (i ? " " : "") << n.members[i];
    os << "] internal=[";
    for (std::size_t i = 0; i < n.internal_links.size(); ++i) os << (i ? " " : "") << n.internal_links[i];
    os << "]";
    if (n.over_cpu_cap) os << " over-cpu-cap";
    os << "\n";
  }
  for (const auto& l : links_) {
    os << "link " << l.id << " (" << l.a << "," << l.b << ") bw=" << l.bw.str() << " members=[";
    for (std::size_t i = 0; i < l.member_virtual_links.size(); ++i) os << (i ? " " : "") << l.member_virtual_links[i];
    os << "]\n";
  }
  return os.str();
}

double link_density(std::size_t node_count, std::size_t internal_link_count) {
  if (node_count == 0) throw std::invalid_argument("link density of an empty node set");
  if (node_count == 1) return 1.0;
  return 2.0 * static_cast<double>(internal_link_count) /
         (static_cast<double>(node_count) * static_cast<double>(node_count - 1));
}

CoarsenedGraph coarsen(const VirtualNetwork& vn, Amount cpu_max, Amount bw_max) {
  if (cpu_max <= Amount{} || bw_max <= Amount{})
    throw std::invalid_argument("coarsening caps must be positive");
  CoarsenedGraph cg(vn, cpu_max, bw_max);

  while (true) {
    // Visit order: heavier nodes first, ties by id.
    std::vector<int> order;
    for (const auto& n : cg.nodes()) order.push_back(n.id);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const auto& na = cg.node(a);
      const auto& nb = cg.node(b);
      const Amount ka = na.cpu + na.external_bw, kb = nb.cpu + nb.external_bw;
      if (ka != kb) return ka > kb;
      return a < b;
    });

    std::set<int> matched;
    std::vector<std::pair<int, int>> matches;
    for (int i : order) {
      if (matched.count(i)) continue;
      const auto& ni = cg.node(i);
      // Density compared as exact fractions L/(n(n-1)): cross-multiplied in
      // integers so ties are real ties, not rounding accidents.
      int best = -1;
      std::int64_t best_num = -1, best_den = 1;
      Amount best_absorbed;
      for (int lid : cg.incident_links(i)) {
        const auto& cl = cg.link(lid);
        const int j = cl.other(i);
        if (matched.count(j)) continue;
        const auto& nj = cg.node(j);
        if (ni.cpu + nj.cpu > cpu_max) continue;
        // Crossing links between i and j become internal; everything else
        // stays external to the union.
        const Amount union_ext = ni.external_bw + nj.external_bw - cl.bw - cl.bw;
        if (union_ext > bw_max) continue;
        const auto union_members =
            static_cast<std::int64_t>(ni.members.size() + nj.members.size());
        const auto union_internal = static_cast<std::int64_t>(
            ni.internal_links.size() + nj.internal_links.size() + cl.member_virtual_links.size());
        const std::int64_t num = union_internal;
        const std::int64_t den = union_members * (union_members - 1);
        const std::int64_t lhs = num * best_den, rhs = best_num * den;
        if (lhs > rhs ||
            (lhs == rhs && (cl.bw > best_absorbed || (cl.bw == best_absorbed && j < best)))) {
          best = j;
          best_num = num;
          best_den = den;
          best_absorbed = cl.bw;
        }
      }
      if (best >= 0) {
        matched.insert(i);
        matched.insert(best);
        matches.emplace_back(i, best);
      }
    }
    if (matches.empty()) break;
    std::vector<std::pair<int, int>> moves;
    for (const auto& [i, j] : matches) {
      for (int member : cg.node(j).members) moves.emplace_back(member, i);
    }
    cg.reassign(moves);
  }
  return cg;
}

EmbeddingMap uncoarsen_map(const CoarsenedGraph& cg, const EmbeddingMap& coarse_map) {
  for (const auto& n : cg.nodes()) {
    if (!coarse_map.node_map.count(n.id))
      throw std::invalid_argument("coarse map misses coarsened node " + std::to_string(n.id));
  }
  for (const auto& l : cg.links()) {
    if (!coarse_map.link_map.count(l.id))
      throw std::invalid_argument("coarse map misses coarsened link " + std::to_string(l.id));
  }
  EmbeddingMap out;
  out.max_hops = coarse_map.max_hops;
  for (const auto& n : cg.nodes()) {
    const int host = coarse_map.node_map.at(n.id);
    for (int member : n.members) out.node_map[member] = host;
    for (int ilink : n.internal_links) out.link_map[ilink] = {};
  }
  for (const auto& l : cg.links()) {
    const auto& path = coarse_map.link_map.at(l.id);
    for (int vlink : l.member_virtual_links) out.link_map[vlink] = path;
  }
  return out;
}

}  // namespace vne
