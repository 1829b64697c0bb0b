#include "vne/network.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <set>
#include <stdexcept>

namespace vne {

namespace {

std::pair<int, int> ordered_pair(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

}  // namespace

void SubstrateNetwork::add_node(int id, Amount total_cpu, Amount x, Amount y) {
  if (node_pos_.count(id)) throw std::invalid_argument("duplicate substrate node id " + std::to_string(id));
  if (total_cpu.is_negative()) throw std::invalid_argument("negative cpu capacity");
  node_pos_[id] = nodes_.size();
  nodes_.push_back({id, total_cpu, total_cpu, x, y});
  incident_[id];
}

void SubstrateNetwork::add_link(int id, int from, int to, Amount total_bw) {
  if (link_pos_.count(id)) throw std::invalid_argument("duplicate substrate link id " + std::to_string(id));
  if (from == to) throw std::invalid_argument("self-loop on substrate node " + std::to_string(from));
  if (!has_node(from) || !has_node(to)) throw std::invalid_argument("link endpoint not a known node");
  if (total_bw.is_negative()) throw std::invalid_argument("negative bandwidth capacity");
  const auto key = ordered_pair(from, to);
  if (pair_links_.count(key)) throw std::invalid_argument("duplicate substrate link between nodes");
  link_pos_[id] = links_.size();
  links_.push_back({id, from, to, total_bw, total_bw});
  pair_links_[key] = id;
  incident_[from].push_back(id);
  incident_[to].push_back(id);
}

SubstrateNode& SubstrateNetwork::node(int id) {
  auto it = node_pos_.find(id);
  if (it == node_pos_.end()) throw std::invalid_argument("unknown substrate node " + std::to_string(id));
  return nodes_[it->second];
}

const SubstrateNode& SubstrateNetwork::node(int id) const {
  return const_cast<SubstrateNetwork*>(this)->node(id);
}

SubstrateLink& SubstrateNetwork::link(int id) {
  auto it = link_pos_.find(id);
  if (it == link_pos_.end()) throw std::invalid_argument("unknown substrate link " + std::to_string(id));
  return links_[it->second];
}

const SubstrateLink& SubstrateNetwork::link(int id) const {
  return const_cast<SubstrateNetwork*>(this)->link(id);
}

const std::vector<int>& SubstrateNetwork::incident_links(int node_id) const {
  auto it = incident_.find(node_id);
  if (it == incident_.end()) throw std::invalid_argument("unknown substrate node " + std::to_string(node_id));
  return it->second;
}

std::optional<int> SubstrateNetwork::link_between(int a, int b) const {
  auto it = pair_links_.find(ordered_pair(a, b));
  if (it == pair_links_.end()) return std::nullopt;
  return it->second;
}

Amount SubstrateNetwork::incident_residual_bw(int node_id) const {
  Amount sum;
  for (int lid : incident_links(node_id)) sum += link(lid).residual_bw;
  return sum;
}

bool SubstrateNetwork::connected() const {
  if (nodes_.empty()) return true;
  std::set<int> seen{nodes_.front().id};
  std::deque<int> queue{nodes_.front().id};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int lid : incident_links(u)) {
      int v = link(lid).other(u);
      if (seen.insert(v).second) queue.push_back(v);
    }
  }
  return seen.size() == nodes_.size();
}

void VirtualNetwork::add_node(int id, Amount cpu, Amount x, Amount y) {
  if (node_pos_.count(id)) throw std::invalid_argument("duplicate virtual node id " + std::to_string(id));
  if (cpu <= Amount{}) throw std::invalid_argument("virtual node demand must be positive");
  node_pos_[id] = nodes_.size();
  nodes_.push_back({id, cpu, x, y});
  incident_[id];
}

void VirtualNetwork::add_link(int id, int from, int to, Amount bw) {
  if (link_pos_.count(id)) throw std::invalid_argument("duplicate virtual link id " + std::to_string(id));
  if (from == to) throw std::invalid_argument("self-loop on virtual node " + std::to_string(from));
  if (!has_node(from) || !has_node(to)) throw std::invalid_argument("link endpoint not a known node");
  if (bw <= Amount{}) throw std::invalid_argument("virtual link demand must be positive");
  const auto key = ordered_pair(from, to);
  if (pair_links_.count(key)) throw std::invalid_argument("duplicate virtual link between nodes");
  link_pos_[id] = links_.size();
  links_.push_back({id, from, to, bw});
  pair_links_[key] = id;
  incident_[from].push_back(id);
  incident_[to].push_back(id);
}

const VirtualNode& VirtualNetwork::node(int id) const {
  auto it = node_pos_.find(id);
  if (it == node_pos_.end()) throw std::invalid_argument("unknown virtual node " + std::to_string(id));
  return nodes_[it->second];
}

const VirtualLink& VirtualNetwork::link(int id) const {
  auto it = link_pos_.find(id);
  if (it == link_pos_.end()) throw std::invalid_argument("unknown virtual link " + std::to_string(id));
  return links_[it->second];
}

const std::vector<int>& VirtualNetwork::incident_links(int node_id) const {
  auto it = incident_.find(node_id);
  if (it == incident_.end()) throw std::invalid_argument("unknown virtual node " + std::to_string(node_id));
  return it->second;
}

Amount VirtualNetwork::total_cpu_demand() const {
  Amount sum;
  for (const auto& n : nodes_) sum += n.cpu;
  return sum;
}

bool VirtualNetwork::connected() const {
  if (nodes_.empty()) return true;
  std::set<int> seen{nodes_.front().id};
  std::deque<int> queue{nodes_.front().id};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int lid : incident_links(u)) {
      int v = link(lid).other(u);
      if (seen.insert(v).second) queue.push_back(v);
    }
  }
  return seen.size() == nodes_.size();
}

bool is_capacity_violation(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NodeCpuExceeded:
    case ViolationKind::LinkBwExceeded:
    case ViolationKind::OverRelease:
      return true;
    default:
      return false;
  }
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnknownVirtualNode: return "unknown-virtual-node";
    case ViolationKind::UnknownVirtualLink: return "unknown-virtual-link";
    case ViolationKind::UnknownSubstrateNode: return "unknown-substrate-node";
    case ViolationKind::UnknownSubstrateLink: return "unknown-substrate-link";
    case ViolationKind::MissingNodeMapping: return "missing-node-mapping";
    case ViolationKind::MissingLinkMapping: return "missing-link-mapping";
    case ViolationKind::PathEndpointMismatch: return "path-endpoint-mismatch";
    case ViolationKind::PathNotLoopFree: return "path-not-loop-free";
    case ViolationKind::PathTooLong: return "path-too-long";
    case ViolationKind::EmptyPathForDistinctHosts: return "empty-path-for-distinct-hosts";
    case ViolationKind::NonEmptyPathForSameHost: return "non-empty-path-for-same-host";
    case ViolationKind::NodeCpuExceeded: return "node-cpu-exceeded";
    case ViolationKind::LinkBwExceeded: return "link-bw-exceeded";
    case ViolationKind::OverRelease: return "over-release";
  }
  return "unknown";
}

std::string ValidationResult::summary() const {
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += to_string(v.kind) + ": " + v.detail;
  }
  return s;
}

namespace {

// Structural pass shared by validate/allocate/release: checks id coverage
// and path shape, and accumulates per-node CPU and per-link bandwidth
// demand. Capacity checks are left to the caller.
struct UsageTotals {
  std::map<int, Amount> node_cpu;  // substrate node id -> demand
  std::map<int, Amount> link_bw;   // substrate link id -> demand
};

void check_structure(const SubstrateNetwork& sn, const VirtualNetwork& vn, const EmbeddingMap& m,
                     int max_hops, ValidationResult& out, UsageTotals& use) {
  for (const auto& [vn_id, sn_id] : m.node_map) {
    if (!vn.has_node(vn_id)) {
      out.violations.push_back({ViolationKind::UnknownVirtualNode, "virtual node " + std::to_string(vn_id)});
      continue;
    }
    if (!sn.has_node(sn_id)) {
      out.violations.push_back({ViolationKind::UnknownSubstrateNode, "substrate node " + std::to_string(sn_id)});
      continue;
    }
    use.node_cpu[sn_id] += vn.node(vn_id).cpu;
  }
  for (const auto& n : vn.nodes()) {
    if (!m.node_map.count(n.id))
      out.violations.push_back({ViolationKind::MissingNodeMapping, "virtual node " + std::to_string(n.id)});
  }
  for (const auto& [vl_id, path] : m.link_map) {
    if (!vn.has_link(vl_id)) {
      out.violations.push_back({ViolationKind::UnknownVirtualLink, "virtual link " + std::to_string(vl_id)});
      continue;
    }
    const auto& vl = vn.link(vl_id);
    auto u_it = m.node_map.find(vl.from);
    auto v_it = m.node_map.find(vl.to);
    if (u_it == m.node_map.end() || v_it == m.node_map.end()) continue;  // reported above
    if (!sn.has_node(u_it->second) || !sn.has_node(v_it->second)) continue;
    const int host_u = u_it->second, host_v = v_it->second;

    if (path.empty()) {
      if (host_u != host_v)
        out.violations.push_back({ViolationKind::EmptyPathForDistinctHosts, "virtual link " + std::to_string(vl_id)});
      continue;
    }
    if (host_u == host_v) {
      out.violations.push_back({ViolationKind::NonEmptyPathForSameHost, "virtual link " + std::to_string(vl_id)});
      continue;
    }
    if (static_cast<int>(path.size()) > max_hops) {
      out.violations.push_back({ViolationKind::PathTooLong,
                                "virtual link " + std::to_string(vl_id) + " path length " + std::to_string(path.size())});
    }
    bool ids_ok = true;
    for (int lid : path) {
      if (!sn.has_link(lid)) {
        out.violations.push_back({ViolationKind::UnknownSubstrateLink, "substrate link " + std::to_string(lid)});
        ids_ok = false;
      }
    }
    if (!ids_ok) continue;

    // Walk the path from host_u, requiring consecutive adjacency and no
    // repeated substrate node; it must end at host_v.
    int at = host_u;
    std::set<int> visited{at};
    bool shape_ok = true;
    for (int lid : path) {
      const auto& sl = sn.link(lid);
      if (sl.from != at && sl.to != at) {
        out.violations.push_back({ViolationKind::PathEndpointMismatch,
                                  "virtual link " + std::to_string(vl_id) + " breaks at substrate link " + std::to_string(lid)});
        shape_ok = false;
        break;
      }
      at = sl.other(at);
      if (!visited.insert(at).second) {
        out.violations.push_back({ViolationKind::PathNotLoopFree,
                                  "virtual link " + std::to_string(vl_id) + " revisits substrate node " + std::to_string(at)});
        shape_ok = false;
        break;
      }
    }
    if (shape_ok && at != host_v) {
      out.violations.push_back({ViolationKind::PathEndpointMismatch,
                                "virtual link " + std::to_string(vl_id) + " ends at " + std::to_string(at)});
      shape_ok = false;
    }
    if (shape_ok) {
      for (int lid : path) use.link_bw[lid] += vl.bw;
    }
  }
  for (const auto& l : vn.links()) {
    if (!m.link_map.count(l.id))
      out.violations.push_back({ViolationKind::MissingLinkMapping, "virtual link " + std::to_string(l.id)});
  }
}

}  // namespace

ValidationResult validate_embedding(const SubstrateNetwork& sn, const VirtualNetwork& vn,
                                    const EmbeddingMap& m, const EmbedParams& p) {
  ValidationResult out;
  UsageTotals use;
  check_structure(sn, vn, m, p.max_hops, out, use);
  for (const auto& [sn_id, cpu] : use.node_cpu) {
    if (cpu > sn.node(sn_id).residual_cpu)
      out.violations.push_back({ViolationKind::NodeCpuExceeded,
                                "substrate node " + std::to_string(sn_id) + " needs " + cpu.str() + " has " +
                                    sn.node(sn_id).residual_cpu.str()});
  }
  for (const auto& [lid, bw] : use.link_bw) {
    if (bw > sn.link(lid).residual_bw)
      out.violations.push_back({ViolationKind::LinkBwExceeded,
                                "substrate link " + std::to_string(lid) + " needs " + bw.str() + " has " +
                                    sn.link(lid).residual_bw.str()});
  }
  return out;
}

ValidationResult allocate(SubstrateNetwork& sn, const VirtualNetwork& vn, const EmbeddingMap& m) {
  EmbedParams p;
  p.max_hops = m.max_hops;
  ValidationResult res = validate_embedding(sn, vn, m, p);
  if (!res.ok()) return res;
  UsageTotals use;
  ValidationResult ignored;
  check_structure(sn, vn, m, m.max_hops, ignored, use);
  for (const auto& [sn_id, cpu] : use.node_cpu) sn.node(sn_id).residual_cpu -= cpu;
  for (const auto& [lid, bw] : use.link_bw) sn.link(lid).residual_bw -= bw;
  return res;
}

ValidationResult release(SubstrateNetwork& sn, const VirtualNetwork& vn, const EmbeddingMap& m) {
  ValidationResult out;
  UsageTotals use;
  // Path-length limits do not apply on release; the map was validated when
  // allocated.
  check_structure(sn, vn, m, INT_MAX, out, use);
  if (!out.ok()) return out;
  for (const auto& [sn_id, cpu] : use.node_cpu) {
    const auto& n = sn.node(sn_id);
    if (n.residual_cpu + cpu > n.total_cpu)
      out.violations.push_back({ViolationKind::OverRelease, "substrate node " + std::to_string(sn_id)});
  }
  for (const auto& [lid, bw] : use.link_bw) {
    const auto& l = sn.link(lid);
    if (l.residual_bw + bw > l.total_bw)
      out.violations.push_back({ViolationKind::OverRelease, "substrate link " + std::to_string(lid)});
  }
  if (!out.ok()) return out;
  for (const auto& [sn_id, cpu] : use.node_cpu) sn.node(sn_id).residual_cpu += cpu;
  for (const auto& [lid, bw] : use.link_bw) sn.link(lid).residual_bw += bw;
  return out;
}

Amount revenue(const VnRequest& vnr) {
  Amount sum;
  for (const auto& n : vnr.graph.nodes()) sum += n.cpu;
  for (const auto& l : vnr.graph.links()) sum += l.bw;
  return sum;
}

std::optional<Amount> cost(const VnRequest& vnr, const EmbeddingMap& m) {
  Amount sum;
  for (const auto& n : vnr.graph.nodes()) {
    if (!m.node_map.count(n.id)) return std::nullopt;
    sum += n.cpu;
  }
  for (const auto& l : vnr.graph.links()) {
    auto it = m.link_map.find(l.id);
    if (it == m.link_map.end()) return std::nullopt;
    sum += l.bw * static_cast<std::int64_t>(it->second.size());
  }
  return sum;
}

}  // namespace vne
