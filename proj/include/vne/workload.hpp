#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/network.hpp"

namespace vne {

struct WaxmanParams {
  int node_count = 0;
  int target_link_count = 0;   // substrate mode: exact link count
  double target_density = 0.0; // virtual mode: expected link density
  double alpha = 0.5;          // (0, 1]
  double beta = 0.2;           // (0, 1]
  double plane_size = 100.0;   // coordinate extent of the unit square
};

struct WorkloadParams {
  int vnr_count = 0;
  int vn_nodes_min = 2;
  int vn_nodes_max = 20;
  std::vector<Amount> cpu_choices;
  Amount bw_min, bw_max;
  double arrival_rate = 0.1;  // requests per time unit
  SimTime lifetime_min = 300;
  SimTime lifetime_max = 700;
  std::uint64_t seed = 0;
  double vn_density = 0.5;
  double waxman_alpha = 0.5;
  double waxman_beta = 0.2;
  double plane_size = 100.0;
};

// Parse failure with file position; what() carries "<file>:<line>: <msg>".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path& file, int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

// Connected Waxman graph with exactly p.target_link_count links. Node CPUs
// are drawn from cpu_profiles, link bandwidths uniformly (two decimals) from
// [bw_min, bw_max]. Pure function of its arguments.
SubstrateNetwork generate_substrate(const WaxmanParams& p, const std::vector<Amount>& cpu_profiles,
                                    Amount bw_min, Amount bw_max, std::uint64_t seed);

// Connected Waxman demand graph whose expected link density is
// p.target_density (a spanning tree is forced first, so tiny graphs can sit
// above the target).
VirtualNetwork generate_vn(const WaxmanParams& p, const std::vector<Amount>& cpu_choices,
                           Amount bw_min, Amount bw_max, std::uint64_t seed);

// Poisson arrivals (rounded to integer time units), uniform integer
// lifetimes, one Waxman VN per request; sorted by arrival.
std::vector<VnRequest> generate_workload(const WorkloadParams& p);

// BRITE-subset serialization. ASCII, tab-separated, two-decimal reals:
//   Topology: ( <N> Nodes, <M> Edges )
//   Nodes: ( <N> )
//   id x y indeg outdeg as type cpu        (degree written, ignored on read)
//   Edges: ( <M> )
//   id from to length delay bw as_from as_to type   (zeros except id/from/to/bw)
void write_brite(const SubstrateNetwork& n, const std::filesystem::path& file);
void write_brite(const VirtualNetwork& n, const std::filesystem::path& file);
SubstrateNetwork read_brite_substrate(const std::filesystem::path& file);
VirtualNetwork read_brite_virtual(const std::filesystem::path& file);

// CSV manifest `vnr_id,brite_file,arrival,lifetime` plus one BRITE file per
// request (vnr_<id, 5 digits>.brite) next to it.
void write_manifest(const std::vector<VnRequest>& workload, const std::filesystem::path& manifest);
// Reads the manifest and every referenced BRITE file. Errors name the
// offending row (decreasing arrivals, missing or malformed files).
std::vector<VnRequest> read_manifest(const std::filesystem::path& manifest);

}  // namespace vne
