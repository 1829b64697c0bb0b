#include "vne/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vne/rng.hpp"

namespace vne {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "substrate.nodes",      "substrate.links",      "substrate.cpu_profiles",
      "substrate.bw_min",     "substrate.bw_max",     "waxman.alpha",
      "waxman.beta",          "waxman.plane",         "workload.count",
      "workload.vn_nodes_min", "workload.vn_nodes_max", "workload.vn_density",
      "workload.cpu_choices", "workload.bw_min",      "workload.bw_max",
      "workload.arrival_rate", "workload.lifetime_min", "workload.lifetime_max",
      "embed.max_hops",       "embed.max_backtrack",  "sim.horizon",
      "sim.sample_interval",  "sim.algorithms",       "seeds",
      "out",
  };
  return keys;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    if (comma == std::string::npos) {
      const auto piece = trim(s.substr(start));
      if (!piece.empty()) out.push_back(piece);
      break;
    }
    const auto piece = trim(s.substr(start, comma - start));
    if (!piece.empty()) out.push_back(piece);
    start = comma + 1;
  }
  return out;
}

}  // namespace

BacktrackSpec BacktrackSpec::parse(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty backtrack limit");
  BacktrackSpec spec;
  std::string digits = t;
  if (t.back() == 'n') {
    spec.per_node = true;
    digits = t.substr(0, t.size() - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("bad backtrack limit '" + text + "' (expected an integer or '<k>n')");
  spec.value = std::stoll(digits);
  return spec;
}

std::string BacktrackSpec::str() const {
  return std::to_string(value) + (per_node ? "n" : "");
}

void BacktrackSpec::apply(EmbedParams& p) const {
  if (per_node) {
    p.backtrack_per_node = static_cast<int>(value);
    p.max_backtrack = 0;
  } else {
    p.backtrack_per_node = 0;
    p.max_backtrack = value;
  }
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw ConfigError("cannot open config " + file.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return from_string(buf.str(), file.string());
}

RunConfig RunConfig::from_string(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key))
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string RunConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  const auto s = get_string(key);
  try {
    std::size_t pos = 0;
    const auto v = std::stoll(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + s + "'");
  }
}

double RunConfig::get_double(const std::string& key) const {
  const auto s = get_string(key);
  try {
    std::size_t pos = 0;
    const auto v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not a number: '" + s + "'");
  }
}

Amount RunConfig::get_amount(const std::string& key) const {
  try {
    return Amount::parse(get_string(key));
  } catch (const std::invalid_argument&) {
    throw ConfigError("config key '" + key + "' is not a non-negative decimal");
  }
}

std::vector<Amount> RunConfig::get_amount_list(const std::string& key) const {
  std::vector<Amount> out;
  for (const auto& piece : split_commas(get_string(key))) {
    try {
      out.push_back(Amount::parse(piece));
    } catch (const std::invalid_argument&) {
      throw ConfigError("config key '" + key + "' has a bad entry '" + piece + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' is empty");
  return out;
}

std::vector<std::uint64_t> RunConfig::get_seed_list(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& piece : split_commas(get_string(key))) {
    try {
      out.push_back(std::stoull(piece));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' has a bad seed '" + piece + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' is empty");
  return out;
}

std::vector<std::string> RunConfig::get_string_list(const std::string& key) const {
  auto out = split_commas(get_string(key));
  if (out.empty()) throw ConfigError("config key '" + key + "' is empty");
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = value;
}

WaxmanParams RunConfig::substrate_waxman() const {
  WaxmanParams p;
  p.node_count = static_cast<int>(get_int("substrate.nodes"));
  p.target_link_count = static_cast<int>(get_int("substrate.links"));
  p.alpha = get_double("waxman.alpha");
  p.beta = get_double("waxman.beta");
  p.plane_size = get_double("waxman.plane");
  return p;
}

std::vector<Amount> RunConfig::substrate_cpu_profiles() const {
  return get_amount_list("substrate.cpu_profiles");
}

Amount RunConfig::substrate_bw_min() const { return get_amount("substrate.bw_min"); }
Amount RunConfig::substrate_bw_max() const { return get_amount("substrate.bw_max"); }

WorkloadParams RunConfig::workload(std::uint64_t seed) const {
  WorkloadParams p;
  p.vnr_count = static_cast<int>(get_int("workload.count"));
  p.vn_nodes_min = static_cast<int>(get_int("workload.vn_nodes_min"));
  p.vn_nodes_max = static_cast<int>(get_int("workload.vn_nodes_max"));
  p.vn_density = get_double("workload.vn_density");
  p.cpu_choices = get_amount_list("workload.cpu_choices");
  p.bw_min = get_amount("workload.bw_min");
  p.bw_max = get_amount("workload.bw_max");
  p.arrival_rate = get_double("workload.arrival_rate");
  p.lifetime_min = get_int("workload.lifetime_min");
  p.lifetime_max = get_int("workload.lifetime_max");
  p.waxman_alpha = get_double("waxman.alpha");
  p.waxman_beta = get_double("waxman.beta");
  p.plane_size = get_double("waxman.plane");
  p.seed = seed;
  return p;
}

EmbedParams RunConfig::embed_params() const {
  EmbedParams p;
  p.max_hops = static_cast<int>(get_int("embed.max_hops"));
  BacktrackSpec::parse(get_string("embed.max_backtrack")).apply(p);
  return p;
}

SimTime RunConfig::horizon() const { return get_int("sim.horizon"); }
SimTime RunConfig::sample_interval() const { return get_int("sim.sample_interval"); }

std::vector<Algorithm> RunConfig::algorithms() const {
  std::vector<Algorithm> out;
  for (const auto& name : get_string_list("sim.algorithms")) {
    const auto a = parse_algorithm(name);
    if (!a) throw ConfigError("unknown algorithm '" + name + "'");
    out.push_back(*a);
  }
  return out;
}

std::vector<std::uint64_t> RunConfig::seeds() const { return get_seed_list("seeds"); }

std::string RunConfig::render_lock() const {
  std::ostringstream os;
  os << "# resolved configuration\n";
  for (const auto& [key, value] : values_) os << key << " = " << value << "\n";
  return os.str();
}

RunSeeds derive_run_seeds(std::uint64_t seed) {
  Rng rng(seed);
  RunSeeds s;
  s.substrate = rng.next_u64();
  s.workload = rng.next_u64();
  return s;
}

}  // namespace vne
