#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vne/config.hpp"
#include "vne/embedding.hpp"
#include "vne/simulation.hpp"
#include "vne/workload.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOverrides {
  std::string config_file;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
  std::string algorithm;
  int max_hops = -1;
  std::string max_backtrack;
  std::int64_t horizon = -1;
};

vne::RunConfig load_with_overrides(const CommonOverrides& o) {
  vne::RunConfig cfg = vne::RunConfig::load(o.config_file);
  if (!o.out_dir.empty()) cfg.set("out", o.out_dir);
  if (!o.seeds.empty()) {
    std::string joined;
    for (auto s : o.seeds) {
      if (!joined.empty()) joined += ",";
      joined += std::to_string(s);
    }
    cfg.set("seeds", joined);
  }
  if (!o.algorithm.empty()) cfg.set("sim.algorithms", o.algorithm);
  if (o.max_hops >= 0) cfg.set("embed.max_hops", std::to_string(o.max_hops));
  if (!o.max_backtrack.empty()) {
    vne::BacktrackSpec::parse(o.max_backtrack);  // validate early
    cfg.set("embed.max_backtrack", o.max_backtrack);
  }
  if (o.horizon >= 0) cfg.set("sim.horizon", std::to_string(o.horizon));
  return cfg;
}

void write_lock(const vne::RunConfig& cfg, const fs::path& dir) {
  const auto tmp = dir / "config.lock.tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << cfg.render_lock();
  }
  fs::rename(tmp, dir / "config.lock");
}

int cmd_generate(const CommonOverrides& o) {
  vne::RunConfig cfg = load_with_overrides(o);
  const fs::path out = cfg.get_string("out");
  fs::create_directories(out);
  const auto seeds = cfg.seeds();
  const auto run_seeds = vne::derive_run_seeds(seeds.front());

  const auto sn = vne::generate_substrate(cfg.substrate_waxman(), cfg.substrate_cpu_profiles(),
                                          cfg.substrate_bw_min(), cfg.substrate_bw_max(),
                                          run_seeds.substrate);
  vne::write_brite(sn, out / "substrate.brite");
  const auto workload = vne::generate_workload(cfg.workload(run_seeds.workload));
  vne::write_manifest(workload, out / "manifest.csv");
  write_lock(cfg, out);
  std::cout << "generated substrate (" << sn.nodes().size() << " nodes, " << sn.links().size()
            << " links) and " << workload.size() << " requests in " << out.string() << "\n";
  return kExitOk;
}

void print_map(const vne::EmbeddingMap& m) {
  std::cout << "node map:\n";
  for (const auto& [vnode, host] : m.node_map)
    std::cout << "  virtual node " << vnode << " -> substrate node " << host << "\n";
  std::cout << "link map:\n";
  for (const auto& [vlink, path] : m.link_map) {
    std::cout << "  virtual link " << vlink << " -> ";
    if (path.empty()) {
      std::cout << "(intra-node)\n";
      continue;
    }
    std::cout << "[";
    for (std::size_t i = 0; i < path.size(); ++i) std::cout << (i ? " " : "") << path[i];
    std::cout << "] (" << path.size() << " hops)\n";
  }
}

int cmd_embed(const std::string& substrate_file, const std::string& vn_file,
              const std::string& algorithm, bool no_coarsen, int max_hops,
              const std::string& max_backtrack, const std::string& json_file) {
  const auto sn = vne::read_brite_substrate(substrate_file);
  const auto vn = vne::read_brite_virtual(vn_file);

  vne::EmbedParams params;
  params.max_hops = max_hops;
  vne::BacktrackSpec::parse(max_backtrack).apply(params);

  auto algo = vne::parse_algorithm(algorithm);
  if (!algo) throw vne::ConfigError("unknown algorithm '" + algorithm + "'");
  if (no_coarsen) algo = vne::Algorithm::NoCoarsen;

  vne::EmbedOutcome outcome;
  switch (*algo) {
    case vne::Algorithm::Hcm: outcome = vne::hcm_embed(vn, sn, params); break;
    case vne::Algorithm::NoCoarsen: outcome = vne::baseline_no_coarsen(vn, sn, params); break;
    case vne::Algorithm::Greedy: outcome = vne::baseline_greedy(vn, sn, params); break;
  }

  json j;
  j["algorithm"] = vne::algorithm_name(*algo);
  j["success"] = outcome.success;
  j["backtracks"] = outcome.backtracks;
  if (outcome.success) {
    json nodes = json::object(), links = json::object();
    for (const auto& [vnode, host] : outcome.map.node_map) nodes[std::to_string(vnode)] = host;
    for (const auto& [vlink, path] : outcome.map.link_map) links[std::to_string(vlink)] = path;
    j["node_map"] = nodes;
    j["link_map"] = links;
    vne::VnRequest req{0, vn, 0, 1};
    j["revenue"] = vne::revenue(req).str();
    j["cost"] = vne::cost(req, outcome.map)->str();
  } else {
    j["reason"] = outcome.reason == vne::FailReason::BacktrackLimit ? "backtrack-limit" : "no-candidates";
  }
  if (!json_file.empty()) {
    std::ofstream f(json_file, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + json_file);
    f << j.dump(2) << "\n";
  }

  if (!outcome.success) {
    std::cout << "embedding failed: " << j["reason"].get<std::string>()
              << " (backtracks " << outcome.backtracks << ")\n";
    return kExitRunFailure;
  }
  std::cout << "embedding succeeded (backtracks " << outcome.backtracks << ", cost "
            << j["cost"].get<std::string>() << ", revenue " << j["revenue"].get<std::string>()
            << ")\n";
  print_map(outcome.map);
  return kExitOk;
}

std::string seed_suffix(bool from_files, std::uint64_t seed) {
  return from_files ? std::string{} : "_s" + std::to_string(seed);
}

int cmd_simulate(const CommonOverrides& o, const std::string& workload_dir, int jobs) {
  vne::RunConfig cfg = load_with_overrides(o);
  const fs::path out = cfg.get_string("out");
  fs::create_directories(out);
  const auto algorithms = cfg.algorithms();
  const auto horizon = cfg.horizon();
  const auto interval = cfg.sample_interval();
  const auto embed = cfg.embed_params();

  struct Task {
    vne::Algorithm algorithm;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  const bool from_files = !workload_dir.empty();
  std::vector<std::uint64_t> seeds = from_files ? std::vector<std::uint64_t>{0} : cfg.seeds();
  for (auto seed : seeds)
    for (auto a : algorithms) tasks.push_back({a, seed});

  vne::SubstrateNetwork file_sn;
  std::vector<vne::VnRequest> file_workload;
  if (from_files) {
    file_sn = vne::read_brite_substrate(fs::path(workload_dir) / "substrate.brite");
    file_workload = vne::read_manifest(fs::path(workload_dir) / "manifest.csv");
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> any_truncated{false};
  std::mutex failure_mutex;
  std::vector<std::string> failures;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      try {
        vne::SubstrateNetwork sn;
        std::vector<vne::VnRequest> workload;
        if (from_files) {
          sn = file_sn;
          workload = file_workload;
        } else {
          const auto rs = vne::derive_run_seeds(task.seed);
          sn = vne::generate_substrate(cfg.substrate_waxman(), cfg.substrate_cpu_profiles(),
                                       cfg.substrate_bw_min(), cfg.substrate_bw_max(), rs.substrate);
          workload = vne::generate_workload(cfg.workload(rs.workload));
        }
        vne::SimParams sp{task.algorithm, embed, horizon, interval};
        const auto report = vne::run_simulation(std::move(sn), workload, sp);
        if (report.truncated) any_truncated = true;
        const std::string base =
            std::string(vne::algorithm_name(task.algorithm)) + seed_suffix(from_files, task.seed);
        vne::write_report_csv(report, out / ("report_" + base + ".csv"));
        vne::write_request_log_csv(report, out / ("requests_" + base + ".csv"));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failures.push_back(e.what());
      }
    }
  };

  const int thread_count = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  write_lock(cfg, out);
  if (any_truncated)
    std::cerr << "warning: arrivals beyond the horizon were dropped (simulation truncated)\n";
  if (!failures.empty()) {
    for (const auto& f : failures) std::cerr << "error: " << f << "\n";
    return kExitRunFailure;
  }
  std::cout << "wrote " << tasks.size() << " report(s) to " << out.string() << "\n";
  return kExitOk;
}

struct Endpoint {
  std::string file;
  std::map<std::string, double> values;
};

Endpoint read_endpoint(const fs::path& file) {
  std::ifstream f(file);
  if (!f) throw std::runtime_error("cannot open " + file.string());
  std::string header;
  if (!std::getline(f, header)) throw std::runtime_error(file.string() + ": empty file");
  std::vector<std::string> cols;
  std::stringstream hs(header);
  std::string col;
  while (std::getline(hs, col, ',')) cols.push_back(col);
  for (const char* required : {"time", "offered", "accepted", "acceptance_ratio", "avg_revenue",
                               "avg_cost", "rc_ratio"}) {
    if (std::find(cols.begin(), cols.end(), required) == cols.end())
      throw std::runtime_error(file.string() + ": missing column '" + std::string(required) + "'");
  }
  std::string line, last;
  while (std::getline(f, line)) {
    if (!line.empty()) last = line;
  }
  if (last.empty()) throw std::runtime_error(file.string() + ": no data rows");
  Endpoint ep;
  ep.file = file.filename().string();
  std::stringstream ls(last);
  std::string cell;
  std::size_t idx = 0;
  while (std::getline(ls, cell, ',')) {
    if (idx >= cols.size()) throw std::runtime_error(file.string() + ": row wider than header");
    ep.values[cols[idx]] = std::stod(cell);
    ++idx;
  }
  if (idx != cols.size()) throw std::runtime_error(file.string() + ": row narrower than header");
  return ep;
}

int cmd_report(std::vector<std::string> files, const std::string& plot_file) {
  std::sort(files.begin(), files.end());
  std::vector<Endpoint> endpoints;
  for (const auto& f : files) {
    try {
      endpoints.push_back(read_endpoint(f));
    } catch (const std::runtime_error& e) {
      throw vne::ConfigError(e.what());  // bad inputs are usage errors
    }
  }

  std::cout << "file,time,offered,accepted,acceptance_ratio,avg_revenue,rc_ratio\n";
  for (const auto& ep : endpoints) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%.0f,%.0f,%.0f,%.6f,%.6f,%.6f", ep.file.c_str(),
                  ep.values.at("time"), ep.values.at("offered"), ep.values.at("accepted"),
                  ep.values.at("acceptance_ratio"), ep.values.at("avg_revenue"),
                  ep.values.at("rc_ratio"));
    std::cout << buf << "\n";
  }

  if (!plot_file.empty()) {
    std::ofstream f(plot_file, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + plot_file);
    f << "set datafile separator ','\n";
    f << "set key left top\n";
    f << "set xlabel 'time'\n";
    const struct {
      const char* title;
      int column;
    } panels[] = {{"acceptance ratio", 4}, {"average revenue", 5}, {"revenue/cost ratio", 7}};
    for (const auto& p : panels) {
      f << "set title '" << p.title << "'\n";
      f << "plot ";
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (i) f << ", ";
        f << "'" << files[i] << "' using 1:" << p.column << " with lines title '"
          << fs::path(files[i]).filename().string() << "'";
      }
      f << "\npause -1\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual network embedding engine: workload generation, embedding, simulation"};
  app.require_subcommand(1);

  CommonOverrides common;
  std::string workload_dir, json_file, plot_file;
  std::string substrate_file, vn_file;
  std::string algorithm = "hcm";
  bool no_coarsen = false;
  int max_hops = 2;
  std::string max_backtrack = "3n";
  int jobs = 1;
  std::vector<std::string> report_files;

  auto* gen = app.add_subcommand("generate", "generate substrate and workload files");
  gen->add_option("--config", common.config_file, "config file")->required();
  gen->add_option("--seed", common.seeds, "override seed list");
  gen->add_option("--out", common.out_dir, "output directory");

  auto* emb = app.add_subcommand("embed", "embed one virtual network on a substrate");
  emb->add_option("--substrate", substrate_file, "substrate BRITE file")->required();
  emb->add_option("--vn", vn_file, "virtual network BRITE file")->required();
  emb->add_option("--algorithm", algorithm, "hcm | no-coarsen | greedy");
  emb->add_flag("--no-coarsen", no_coarsen, "shorthand for --algorithm no-coarsen");
  emb->add_option("--max-hops", max_hops, "maximum substrate path length");
  emb->add_option("--max-backtrack", max_backtrack, "backtrack limit (integer or '<k>n')");
  emb->add_option("--json", json_file, "write machine-readable map to this file");

  auto* sim = app.add_subcommand("simulate", "run the discrete-event simulation");
  sim->add_option("--config", common.config_file, "config file")->required();
  sim->add_option("--seed", common.seeds, "override seed list");
  sim->add_option("--algorithm", common.algorithm, "override algorithm list");
  sim->add_option("--max-hops", common.max_hops, "override hop limit");
  sim->add_option("--max-backtrack", common.max_backtrack, "override backtrack limit");
  sim->add_option("--horizon", common.horizon, "override simulation horizon");
  sim->add_option("--out", common.out_dir, "output directory");
  sim->add_option("--workload", workload_dir, "run on generated files instead of in-memory inputs");
  sim->add_option("--jobs", jobs, "parallel runs");

  auto* rep = app.add_subcommand("report", "summarize report CSVs");
  rep->add_option("files", report_files, "report CSV files")->required();
  rep->add_option("--plot", plot_file, "write a gnuplot script");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(common);
    if (emb->parsed())
      return cmd_embed(substrate_file, vn_file, algorithm, no_coarsen, max_hops, max_backtrack,
                       json_file);
    if (sim->parsed()) return cmd_simulate(common, workload_dir, jobs);
    if (rep->parsed()) return cmd_report(report_files, plot_file);
  } catch (const vne::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const vne::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunFailure;
  }
  return kExitUsage;
}
