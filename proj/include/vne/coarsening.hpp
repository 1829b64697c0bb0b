#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vne/network.hpp"

namespace vne {

// A sub-VN: a set of virtual nodes collapsed onto one prospective host.
// Links with both endpoints inside are internal and consume no substrate
// bandwidth; the id equals the smallest member virtual-node id.
struct CoarsenedNode {
  int id = 0;
  std::vector<int> members;         // virtual node ids, ascending
  std::vector<int> internal_links;  // virtual link ids, ascending
  Amount cpu;                       // sum of member demands
  Amount external_bw;               // sum of demands of crossing links
  bool over_cpu_cap = false;        // singleton whose demand alone exceeds the cap

  friend bool operator==(const CoarsenedNode&, const CoarsenedNode&) = default;
};

// Bundle of virtual links crossing between two coarsened nodes. The id
// equals the smallest member virtual-link id.
struct CoarsenedLink {
  int id = 0;
  int a = 0, b = 0;                       // coarsened node ids, a < b
  std::vector<int> member_virtual_links;  // ascending, non-empty
  Amount bw;                              // sum of member demands

  int other(int cn_id) const { return cn_id == a ? b : a; }
  friend bool operator==(const CoarsenedLink&, const CoarsenedLink&) = default;
};

// Partition of a virtual network into coarsened nodes and crossing-link
// bundles under per-node CPU and external-bandwidth caps. The canonical
// state is the member assignment; nodes/links are derived from it, so the
// partition invariants hold by construction.
class CoarsenedGraph {
 public:
  // Identity partition: one coarsened node per virtual node.
  CoarsenedGraph(VirtualNetwork vn, Amount cpu_max, Amount bw_max);
  // Explicit partition; `assignment` maps every virtual node to a group
  // label (labels are normalized to smallest-member ids internally).
  CoarsenedGraph(VirtualNetwork vn, Amount cpu_max, Amount bw_max, const std::map<int, int>& assignment);

  const VirtualNetwork& source() const { return vn_; }
  Amount cpu_max() const { return cpu_max_; }
  Amount bw_max() const { return bw_max_; }

  const std::vector<CoarsenedNode>& nodes() const { return nodes_; }
  const std::vector<CoarsenedLink>& links() const { return links_; }
  bool has_node(int id) const { return node_pos_.count(id) != 0; }
  const CoarsenedNode& node(int id) const;
  const CoarsenedLink& link(int id) const;
  int group_of(int vnode_id) const;
  // Coarsened link ids incident to a coarsened node, ascending.
  const std::vector<int>& incident_links(int cn_id) const;
  std::optional<int> link_between(int a, int b) const;

  // Applies a batch of membership changes (virtual node -> current group
  // label) and rebuilds the derived state once. Group labels are the ids as
  // of the call.
  void reassign(const std::vector<std::pair<int, int>>& moves);

  // Multi-line structural dump used for test goldens and debugging.
  std::string dump() const;

 private:
  void rebuild();

  VirtualNetwork vn_;
  Amount cpu_max_, bw_max_;
  std::map<int, int> group_of_;
  std::vector<CoarsenedNode> nodes_;
  std::vector<CoarsenedLink> links_;
  std::map<int, std::size_t> node_pos_, link_pos_;
  std::map<int, std::vector<int>> incident_;
  std::map<std::pair<int, int>, int> pair_links_;
};

// 2*|links| / (|nodes| * (|nodes|-1)); 1.0 for a singleton (a single node is
// vacuously a clique). Throws std::invalid_argument when node_count is 0.
double link_density(std::size_t node_count, std::size_t internal_link_count);

// Heavy-clique matching: rounds of pairwise merges, each node pairing with
// the unmatched neighbor that maximizes the merged link density subject to
// CPU(union) <= cpu_max and external BW(union) <= bw_max, until a round
// produces no match. Deterministic: nodes are visited in descending
// (cpu + external_bw), ties by ascending id; density ties prefer the larger
// absorbed bandwidth, then the lower id.
CoarsenedGraph coarsen(const VirtualNetwork& vn, Amount cpu_max, Amount bw_max);

// Expands a map over the coarsened graph (node_map keyed by coarsened node
// id, link_map keyed by coarsened link id) to a map over the source virtual
// network: members inherit their group's host, internal links become empty
// paths, members of a coarsened link inherit its path. Throws
// std::invalid_argument on an incomplete coarse map.
EmbeddingMap uncoarsen_map(const CoarsenedGraph& cg, const EmbeddingMap& coarse_map);

}  // namespace vne
