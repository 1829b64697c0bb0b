#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/amount.hpp"
#include "vne/network.hpp"
#include "vne/simulation.hpp"
#include "vne/workload.hpp"

namespace vne {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Backtrack limit, either a constant or "<k>n" (k times the node count of
// the graph being embedded).
struct BacktrackSpec {
  bool per_node = false;
  std::int64_t value = 0;

  static BacktrackSpec parse(const std::string& text);  // throws ConfigError
  std::string str() const;
  void apply(EmbedParams& p) const;
};

// Flat key=value configuration ('#' comments). Unknown keys are rejected so
// typos surface as config errors.
class RunConfig {
 public:
  static RunConfig load(const std::filesystem::path& file);        // throws ConfigError
  static RunConfig from_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;  // throws when missing
  std::int64_t get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  Amount get_amount(const std::string& key) const;
  std::vector<Amount> get_amount_list(const std::string& key) const;
  std::vector<std::uint64_t> get_seed_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

  // Typed views over the common key groups; each throws ConfigError naming
  // any missing key.
  WaxmanParams substrate_waxman() const;
  std::vector<Amount> substrate_cpu_profiles() const;
  Amount substrate_bw_min() const;
  Amount substrate_bw_max() const;
  WorkloadParams workload(std::uint64_t seed) const;
  EmbedParams embed_params() const;
  SimTime horizon() const;
  SimTime sample_interval() const;
  std::vector<Algorithm> algorithms() const;
  std::vector<std::uint64_t> seeds() const;

  // Sorted key=value lines; loadable as a config again.
  std::string render_lock() const;

 private:
  std::map<std::string, std::string> values_;
};

// Sub-seeds for one simulation run, shared by the CLI and the test suites so
// a run is reproducible from its seed alone.
struct RunSeeds {
  std::uint64_t substrate;
  std::uint64_t workload;
};
RunSeeds derive_run_seeds(std::uint64_t seed);

}  // namespace vne
