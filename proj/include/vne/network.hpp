#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vne/amount.hpp"

namespace vne {

using SimTime = std::int64_t;

struct SubstrateNode {
  int id = 0;
  Amount total_cpu;
  Amount residual_cpu;
  Amount x, y;

  friend bool operator==(const SubstrateNode&, const SubstrateNode&) = default;
};

struct SubstrateLink {
  int id = 0;
  int from = 0;
  int to = 0;
  Amount total_bw;
  Amount residual_bw;

  int other(int node_id) const { return node_id == from ? to : from; }
  friend bool operator==(const SubstrateLink&, const SubstrateLink&) = default;
};

// Undirected simple graph with CPU capacity on nodes and bandwidth capacity
// on links. add_node/add_link enforce the structural invariants (unique ids,
// no self-loops, at most one link per node pair) and throw
// std::invalid_argument on violations.
class SubstrateNetwork {
 public:
  void add_node(int id, Amount total_cpu, Amount x = {}, Amount y = {});
  void add_link(int id, int from, int to, Amount total_bw);

  const std::vector<SubstrateNode>& nodes() const { return nodes_; }
  const std::vector<SubstrateLink>& links() const { return links_; }

  bool has_node(int id) const { return node_pos_.count(id) != 0; }
  bool has_link(int id) const { return link_pos_.count(id) != 0; }
  SubstrateNode& node(int id);
  const SubstrateNode& node(int id) const;
  SubstrateLink& link(int id);
  const SubstrateLink& link(int id) const;

  // Link ids incident to a node, in insertion order.
  const std::vector<int>& incident_links(int node_id) const;
  std::optional<int> link_between(int a, int b) const;
  Amount incident_residual_bw(int node_id) const;

  bool connected() const;

  friend bool operator==(const SubstrateNetwork& a, const SubstrateNetwork& b) {
    return a.nodes_ == b.nodes_ && a.links_ == b.links_;
  }

 private:
  std::vector<SubstrateNode> nodes_;
  std::vector<SubstrateLink> links_;
  std::map<int, std::size_t> node_pos_, link_pos_;
  std::map<int, std::vector<int>> incident_;
  std::map<std::pair<int, int>, int> pair_links_;
};

struct VirtualNode {
  int id = 0;
  Amount cpu;  // demand, > 0
  Amount x, y;

  friend bool operator==(const VirtualNode&, const VirtualNode&) = default;
};

struct VirtualLink {
  int id = 0;
  int from = 0;
  int to = 0;
  Amount bw;  // demand, > 0

  int other(int node_id) const { return node_id == from ? to : from; }
  friend bool operator==(const VirtualLink&, const VirtualLink&) = default;
};

// Demand graph of a request. Same structural rules as the substrate, plus
// strictly positive demands.
class VirtualNetwork {
 public:
  void add_node(int id, Amount cpu, Amount x = {}, Amount y = {});
  void add_link(int id, int from, int to, Amount bw);

  const std::vector<VirtualNode>& nodes() const { return nodes_; }
  const std::vector<VirtualLink>& links() const { return links_; }

  bool has_node(int id) const { return node_pos_.count(id) != 0; }
  bool has_link(int id) const { return link_pos_.count(id) != 0; }
  const VirtualNode& node(int id) const;
  const VirtualLink& link(int id) const;

  const std::vector<int>& incident_links(int node_id) const;

  Amount total_cpu_demand() const;
  bool connected() const;

  friend bool operator==(const VirtualNetwork& a, const VirtualNetwork& b) {
    return a.nodes_ == b.nodes_ && a.links_ == b.links_;
  }

 private:
  std::vector<VirtualNode> nodes_;
  std::vector<VirtualLink> links_;
  std::map<int, std::size_t> node_pos_, link_pos_;
  std::map<int, std::vector<int>> incident_;
  std::map<std::pair<int, int>, int> pair_links_;
};

struct VnRequest {
  int id = 0;
  VirtualNetwork graph;
  SimTime arrival = 0;   // >= 0
  SimTime lifetime = 0;  // > 0

  // Alive over the half-open interval [arrival, arrival + lifetime).
  bool alive_at(SimTime t) const { return t >= arrival && t < arrival + lifetime; }
};

// Virtual node -> substrate node plus virtual link -> ordered substrate link
// path. A path is stored oriented from the link's `from` endpoint host and
// is empty exactly when both endpoints share a substrate node.
struct EmbeddingMap {
  std::map<int, int> node_map;
  std::map<int, std::vector<int>> link_map;
  int max_hops = 0;  // hop limit the map was built under

  friend bool operator==(const EmbeddingMap&, const EmbeddingMap&) = default;
};

struct EmbedParams {
  static constexpr std::int64_t kUnlimitedBacktrack = INT64_MAX;

  int max_hops = 2;
  std::int64_t max_backtrack = 0;  // used when backtrack_per_node == 0
  int backtrack_per_node = 0;      // > 0: limit = backtrack_per_node * request node count
  bool coarsening_enabled = true;

  std::int64_t resolve_backtrack_limit(std::size_t node_count) const {
    if (backtrack_per_node > 0)
      return static_cast<std::int64_t>(backtrack_per_node) * static_cast<std::int64_t>(node_count);
    return max_backtrack;
  }
};

enum class ViolationKind {
  // structural
  UnknownVirtualNode,
  UnknownVirtualLink,
  UnknownSubstrateNode,
  UnknownSubstrateLink,
  MissingNodeMapping,
  MissingLinkMapping,
  PathEndpointMismatch,
  PathNotLoopFree,
  PathTooLong,
  EmptyPathForDistinctHosts,
  NonEmptyPathForSameHost,
  // capacity
  NodeCpuExceeded,
  LinkBwExceeded,
  OverRelease,
};

bool is_capacity_violation(ViolationKind kind);
std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Checks the full embedding-map contract: structural consistency of ids and
// paths (loop-free, hop limit, endpoint connectivity, empty iff co-located)
// and that aggregate demands fit the substrate residuals as they stand.
ValidationResult validate_embedding(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                    const EmbeddingMap& m, const EmbedParams& p);

// Reserves the mapped resources. Validates first (against m.max_hops) and
// leaves the substrate untouched when validation fails.
ValidationResult allocate(SubstrateNetwork& sn, const VirtualNetwork& vn, const EmbeddingMap& m);

// Exact inverse of allocate. Rejects (atomically) any release that would
// push a residual above its total, which catches double releases.
ValidationResult release(SubstrateNetwork& sn, const VirtualNetwork& vn, const EmbeddingMap& m);

// Sum of all CPU and bandwidth demands; independent of any map.
Amount revenue(const VnRequest& vnr);

// Sum of CPU demands plus each link's bandwidth weighted by its substrate
// path length. Empty (nullopt) when the map does not cover the whole graph.
std::optional<Amount> cost(const VnRequest& vnr, const EmbeddingMap& m);

}  // namespace vne
