#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <vector>

#include "vne/embedding.hpp"
#include "vne/network.hpp"

namespace vne {

enum class Algorithm { Hcm, NoCoarsen, Greedy };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

struct SimEvent {
  SimTime time = 0;
  enum class Kind { Departure = 0, Arrival = 1 } kind = Kind::Arrival;
  int vnr_id = 0;

  // Total order: time, then departures before arrivals, then id.
  friend bool operator<(const SimEvent& a, const SimEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.vnr_id < b.vnr_id;
  }
  friend bool operator>(const SimEvent& a, const SimEvent& b) { return b < a; }
};

struct RequestRecord {
  int vnr_id = 0;
  SimTime arrival = 0;
  SimTime lifetime = 0;
  bool accepted = false;
  Amount revenue;  // nominal (map-independent)
  Amount cost;     // of the accepted map; zero when rejected
  std::int64_t backtracks = 0;
};

struct Sample {
  SimTime time = 0;
  std::int64_t accepted_count = 0;
  std::int64_t offered_count = 0;
  Amount cumulative_revenue;  // revenue-time accrued per whole alive time unit
  Amount cumulative_cost;
};

struct SimReport {
  std::vector<Sample> samples;
  std::vector<RequestRecord> log;
  std::map<int, EmbeddingMap> accepted_maps;  // retained for audits/release
  bool truncated = false;                     // arrivals past the horizon were dropped
};

struct SimParams {
  Algorithm algorithm = Algorithm::Hcm;
  EmbedParams embed;
  SimTime horizon = 0;
  SimTime sample_interval = 1000;
};

// Called after all events at each sample time have been processed.
using SampleObserver = std::function<void(SimTime, const SubstrateNetwork&)>;

// Discrete-event replay: arrivals embed against current residuals and
// allocate on success, departures release; departures at a timestamp are
// processed before arrivals at the same timestamp. Samples are taken at
// every multiple of sample_interval up to and including the horizon.
// Deterministic for fixed inputs. Throws std::invalid_argument when the
// workload is not sorted by arrival.
SimReport run_simulation(SubstrateNetwork sn, const std::vector<VnRequest>& workload,
                         const SimParams& p, const SampleObserver& observer = {});

// Metrics evaluated at any time t from the per-request log (exact; the
// sampled rows use the same definitions at the sample times).
Amount cumulative_revenue(const SimReport& r, SimTime t);
Amount cumulative_cost(const SimReport& r, SimTime t);
double acceptance_ratio(const SimReport& r, SimTime t);  // 1.0 when nothing offered
double average_revenue(const SimReport& r, SimTime t);   // 0 at t = 0
double average_cost(const SimReport& r, SimTime t);
double revenue_cost_ratio(const SimReport& r, SimTime t);  // 1.0 when both sums are 0

// CSV `time,offered,accepted,acceptance_ratio,avg_revenue,avg_cost,rc_ratio`,
// one row per sample. Written to a temp file and renamed into place.
void write_report_csv(const SimReport& r, const std::filesystem::path& file);
// CSV `vnr_id,arrival,lifetime,accepted,revenue,cost,backtracks`.
void write_request_log_csv(const SimReport& r, const std::filesystem::path& file);

}  // namespace vne
