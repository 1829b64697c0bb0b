#include "vne/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace vne {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Hcm: return "hcm";
    case Algorithm::NoCoarsen: return "no-coarsen";
    case Algorithm::Greedy: return "greedy";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  if (name == "hcm") return Algorithm::Hcm;
  if (name == "no-coarsen") return Algorithm::NoCoarsen;
  if (name == "greedy") return Algorithm::Greedy;
  return std::nullopt;
}

namespace {

EmbedOutcome run_algorithm(Algorithm a, const VirtualNetwork& vn, const SubstrateNetwork& sn,
                           const EmbedParams& p) {
  switch (a) {
    case Algorithm::Hcm: return hcm_embed(vn, sn, p);
    case Algorithm::NoCoarsen: return baseline_no_coarsen(vn, sn, p);
    case Algorithm::Greedy: return baseline_greedy(vn, sn, p);
  }
  throw std::logic_error("unknown algorithm");
}

// Whole time units request i is alive within [0, t].
std::int64_t alive_units(const RequestRecord& r, SimTime t) {
  if (t <= r.arrival) return 0;
  return std::min<std::int64_t>(r.lifetime, t - r.arrival);
}

}  // namespace

SimReport run_simulation(SubstrateNetwork sn, const std::vector<VnRequest>& workload,
                         const SimParams& p, const SampleObserver& observer) {
  for (std::size_t i = 1; i < workload.size(); ++i) {
    if (workload[i].arrival < workload[i - 1].arrival)
      throw std::invalid_argument("workload not sorted by arrival");
  }
  if (p.sample_interval <= 0) throw std::invalid_argument("sample interval must be positive");

  SimReport report;
  std::map<int, const VnRequest*> by_id;
  std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> events;
  for (const auto& req : workload) {
    if (req.arrival > p.horizon) {
      report.truncated = true;
      continue;
    }
    by_id[req.id] = &req;
    events.push({req.arrival, SimEvent::Kind::Arrival, req.id});
  }

  std::int64_t offered = 0, accepted = 0;
  SimTime next_sample = 0;

  auto emit_samples_below = [&](SimTime bound) {
    while (next_sample <= p.horizon && next_sample < bound) {
      Sample s;
      s.time = next_sample;
      s.accepted_count = accepted;
      s.offered_count = offered;
      for (const auto& r : report.log) {
        if (!r.accepted) continue;
        const std::int64_t units = alive_units(r, next_sample);
        s.cumulative_revenue += r.revenue * units;
        s.cumulative_cost += r.cost * units;
      }
      report.samples.push_back(s);
      if (observer) observer(next_sample, sn);
      next_sample += p.sample_interval;
    }
  };

  while (!events.empty() && events.top().time <= p.horizon) {
    const SimEvent ev = events.top();
    events.pop();
    emit_samples_below(ev.time);
    const VnRequest& req = *by_id.at(ev.vnr_id);
    if (ev.kind == SimEvent::Kind::Arrival) {
      ++offered;
      RequestRecord rec;
      rec.vnr_id = req.id;
      rec.arrival = req.arrival;
      rec.lifetime = req.lifetime;
      rec.revenue = revenue(req);
      EmbedOutcome outcome = run_algorithm(p.algorithm, req.graph, sn, p.embed);
      rec.backtracks = outcome.backtracks;
      if (outcome.success) {
        const auto res = allocate(sn, req.graph, outcome.map);
        if (!res.ok())
          throw std::logic_error("embedding reported success but allocation failed: " + res.summary());
        rec.accepted = true;
        rec.cost = cost(req, outcome.map).value();
        ++accepted;
        report.accepted_maps[req.id] = std::move(outcome.map);
        events.push({req.arrival + req.lifetime, SimEvent::Kind::Departure, req.id});
      }
      report.log.push_back(std::move(rec));
    } else {
      const auto res = release(sn, req.graph, report.accepted_maps.at(req.id));
      if (!res.ok()) throw std::logic_error("release failed: " + res.summary());
    }
  }
  emit_samples_below(p.horizon + 1);
  return report;
}

Amount cumulative_revenue(const SimReport& r, SimTime t) {
  Amount sum;
  for (const auto& rec : r.log) {
    if (rec.accepted) sum += rec.revenue * alive_units(rec, t);
  }
  return sum;
}

Amount cumulative_cost(const SimReport& r, SimTime t) {
  Amount sum;
  for (const auto& rec : r.log) {
    if (rec.accepted) sum += rec.cost * alive_units(rec, t);
  }
  return sum;
}

double acceptance_ratio(const SimReport& r, SimTime t) {
  std::int64_t offered = 0, accepted = 0;
  for (const auto& rec : r.log) {
    if (rec.arrival > t) continue;
    ++offered;
    if (rec.accepted) ++accepted;
  }
  if (offered == 0) return 1.0;
  return static_cast<double>(accepted) / static_cast<double>(offered);
}

double average_revenue(const SimReport& r, SimTime t) {
  if (t <= 0) return 0.0;
  return cumulative_revenue(r, t).value() / static_cast<double>(t);
}

double average_cost(const SimReport& r, SimTime t) {
  if (t <= 0) return 0.0;
  return cumulative_cost(r, t).value() / static_cast<double>(t);
}

double revenue_cost_ratio(const SimReport& r, SimTime t) {
  const Amount rev = cumulative_revenue(r, t);
  const Amount c = cumulative_cost(r, t);
  if (rev.is_zero() && c.is_zero()) return 1.0;
  return rev.value() / c.value();
}

namespace {

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_atomically(const std::string& content, const std::filesystem::path& file) {
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << content;
    if (!f) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace

void write_report_csv(const SimReport& r, const std::filesystem::path& file) {
  std::ostringstream os;
  os << "time,offered,accepted,acceptance_ratio,avg_revenue,avg_cost,rc_ratio\n";
  for (const auto& s : r.samples) {
    const double ratio =
        s.offered_count == 0 ? 1.0
                             : static_cast<double>(s.accepted_count) / static_cast<double>(s.offered_count);
    const double avg_rev = s.time > 0 ? s.cumulative_revenue.value() / static_cast<double>(s.time) : 0.0;
    const double avg_cost = s.time > 0 ? s.cumulative_cost.value() / static_cast<double>(s.time) : 0.0;
    const double rc = (s.cumulative_revenue.is_zero() && s.cumulative_cost.is_zero())
                          ? 1.0
                          : s.cumulative_revenue.value() / s.cumulative_cost.value();
    os << s.time << ',' << s.offered_count << ',' << s.accepted_count << ',' << fmt6(ratio) << ','
       << fmt6(avg_rev) << ',' << fmt6(avg_cost) << ',' << fmt6(rc) << '\n';
  }
  write_atomically(os.str(), file);
}

void write_request_log_csv(const SimReport& r, const std::filesystem::path& file) {
  std::ostringstream os;
  os << "vnr_id,arrival,lifetime,accepted,revenue,cost,backtracks\n";
  for (const auto& rec : r.log) {
    os << rec.vnr_id << ',' << rec.arrival << ',' << rec.lifetime << ',' << (rec.accepted ? 1 : 0)
       << ',' << rec.revenue.str() << ',' << rec.cost.str() << ',' << rec.backtracks << '\n';
  }
  write_atomically(os.str(), file);
}

}  // namespace vne
