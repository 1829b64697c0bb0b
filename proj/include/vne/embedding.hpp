#pragma once

#include <map>
#include <optional>
#include <vector>

#include "vne/coarsening.hpp"
#include "vne/network.hpp"

namespace vne {

enum class FailReason { None, NoCandidates, BacktrackLimit };

struct EmbedOutcome {
  bool success = false;
  EmbeddingMap map;  // over the original virtual network, set on success
  std::int64_t backtracks = 0;
  FailReason reason = FailReason::None;
};

// Coarsened node ids in embedding order: BFS tree from the node with the
// largest (cpu + external_bw), each level sorted descending by the same key,
// ties by ascending id. Disconnected remainders restart at the next largest.
struct EmbedOrder {
  std::vector<int> ids;
};

struct CandidateList {
  int coarsened_node_id = 0;
  std::vector<int> substrate_node_ids;
};

EmbedOrder build_embed_order(const CoarsenedGraph& cg);

// Candidate hosts for one coarsened node given the hosts of the already
// mapped ones (`hosts`: coarsened node id -> substrate node id). Root case
// (no mapped neighbor): every substrate node with enough residual CPU,
// sorted descending by residual CPU + incident residual bandwidth. Otherwise
// only nodes reachable from every mapped neighbor's host within max_hops
// over links that can carry the widest member of the connecting bundle
// (members are routed individually, so this is the necessary reachability
// condition), sorted ascending by the total cost of connecting (sum of
// bundle bandwidth x hop distance). Hosts already used by this request are
// excluded.
CandidateList build_candidates(const CoarsenedGraph& cg, int cn_id, const std::map<int, int>& hosts,
                               const SubstrateNetwork& sn, const EmbedParams& p);

// Minimum-hop path from `from` to `to` using only links with residual >= bw,
// at most max_hops links, found by BFS; among equal-hop predecessors the
// lowest node id wins. Returns the ordered link ids, or nullopt.
std::optional<std::vector<int>> route_virtual_link(Amount bw, int from, int to,
                                                   const SubstrateNetwork& sn, int max_hops);

// The full pipeline: cap computation from current residuals, coarsening and
// refinement (when enabled), BFS ordering, and recursive backtracking
// embedding with tentative reservations. Pure: `sn` is not mutated; the
// caller allocates the returned map.
EmbedOutcome hcm_embed(const VirtualNetwork& vn, const SubstrateNetwork& sn, const EmbedParams& p);

// hcm_embed with coarsening and refinement skipped (every virtual node its
// own coarsened node).
EmbedOutcome baseline_no_coarsen(const VirtualNetwork& vn, const SubstrateNetwork& sn,
                                 const EmbedParams& p);

// Two-stage greedy: virtual nodes in descending CPU order each take the
// unused substrate node with the most residual CPU, then links are routed in
// ascending id order; any routing failure fails the request.
EmbedOutcome baseline_greedy(const VirtualNetwork& vn, const SubstrateNetwork& sn,
                             const EmbedParams& p);

}  // namespace vne
