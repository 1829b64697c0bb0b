#pragma once

#include <vector>

#include "vne/coarsening.hpp"

namespace vne {

// One accepted refinement action. Group ids and anchors refer to the state
// immediately before the action; `to_anchor` is the smallest member of the
// target group at that point, so a trace can be replayed independently of
// the library's id normalization.
struct RefineAction {
  enum class Kind { Move, Swap };
  Kind kind = Kind::Move;
  int vnode = 0;
  int from_group = 0;
  int to_group = 0;
  int to_anchor = 0;
  int swapped_vnode = -1;  // Swap only
  Amount crossing_before;
  Amount crossing_after;
};

struct RefineResult {
  CoarsenedGraph graph;
  std::vector<RefineAction> actions;
  int sweeps = 0;
};

// Member virtual nodes of `cn_id` with at least one link leaving the group,
// ascending. Throws std::invalid_argument on an unknown id.
std::vector<int> boundary_nodes(const CoarsenedGraph& cg, int cn_id);

// Total bandwidth of all coarsened (crossing) links.
Amount crossing_bandwidth(const CoarsenedGraph& cg);

// Refined Kernighan-Lin pass: sweeps all coarsened nodes and their boundary
// virtual nodes; a boundary node whose bandwidth toward some other group
// strictly exceeds its bandwidth inside its own group is moved there when
// caps permit, otherwise a single-node swap with a boundary node of the
// target is tried. Only strictly improving, cap-respecting actions are
// accepted; sweeps repeat until one performs no action.
RefineResult optimize(CoarsenedGraph cg);

}  // namespace vne
