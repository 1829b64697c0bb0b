#include "vne/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "vne/rng.hpp"

namespace vne {

namespace {

struct Point {
  double x, y;
};

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Waxman connection probability with the plane diagonal as the length scale.
double waxman_prob(const WaxmanParams& p, const Point& a, const Point& b) {
  const double scale = p.beta * p.plane_size * std::sqrt(2.0);
  return p.alpha * std::exp(-dist(a, b) / scale);
}

std::vector<Point> place_nodes(const WaxmanParams& p, Rng& rng, std::vector<Amount>& xs,
                               std::vector<Amount>& ys) {
  std::vector<Point> pts;
  for (int i = 0; i < p.node_count; ++i) {
    const Amount x = rng.uniform_amount(Amount{}, Amount::from_units(static_cast<std::int64_t>(p.plane_size)));
    const Amount y = rng.uniform_amount(Amount{}, Amount::from_units(static_cast<std::int64_t>(p.plane_size)));
    xs.push_back(x);
    ys.push_back(y);
    pts.push_back({x.value(), y.value()});
  }
  return pts;
}

// Random spanning tree: node i attaches to an earlier node drawn with
// probability proportional to the Waxman probabilities, so tree edges look
// like the rest of the graph.
std::vector<std::pair<int, int>> spanning_tree(const WaxmanParams& p, const std::vector<Point>& pts,
                                               Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < p.node_count; ++i) {
    double total = 0;
    for (int j = 0; j < i; ++j) total += waxman_prob(p, pts[i], pts[j]);
    double r = rng.uniform01() * total;
    int chosen = i - 1;
    for (int j = 0; j < i; ++j) {
      r -= waxman_prob(p, pts[i], pts[j]);
      if (r <= 0) {
        chosen = j;
        break;
      }
    }
    edges.emplace_back(std::min(chosen, i), std::max(chosen, i));
  }
  return edges;
}

}  // namespace

SubstrateNetwork generate_substrate(const WaxmanParams& p, const std::vector<Amount>& cpu_profiles,
                                    Amount bw_min, Amount bw_max, std::uint64_t seed) {
  if (p.node_count < 1) throw std::invalid_argument("substrate needs at least one node");
  const std::int64_t max_links =
      static_cast<std::int64_t>(p.node_count) * (p.node_count - 1) / 2;
  if (p.target_link_count > max_links)
    throw std::invalid_argument("target link count exceeds simple-graph maximum");
  if (p.node_count > 1 && p.target_link_count < p.node_count - 1)
    throw std::invalid_argument("target link count too small for a connected graph");
  if (cpu_profiles.empty()) throw std::invalid_argument("no cpu profiles");

  Rng rng(seed);
  std::vector<Amount> xs, ys;
  const auto pts = place_nodes(p, rng, xs, ys);
  std::vector<Amount> cpus;
  for (int i = 0; i < p.node_count; ++i) cpus.push_back(rng.choice(cpu_profiles));

  std::set<std::pair<int, int>> edges;
  if (p.node_count > 1) {
    for (const auto& e : spanning_tree(p, pts, rng)) edges.insert(e);
  }

  // Sampling rounds over shuffled absent pairs until the target is hit, then
  // deterministic densification by descending probability.
  const int kMaxRounds = 64;
  for (int round = 0; round < kMaxRounds && static_cast<int>(edges.size()) < p.target_link_count;
       ++round) {
    std::vector<std::pair<int, int>> absent;
    for (int i = 0; i < p.node_count; ++i)
      for (int j = i + 1; j < p.node_count; ++j)
        if (!edges.count({i, j})) absent.emplace_back(i, j);
    rng.shuffle(absent);
    for (const auto& e : absent) {
      if (static_cast<int>(edges.size()) >= p.target_link_count) break;
      if (rng.uniform01() < waxman_prob(p, pts[e.first], pts[e.second])) edges.insert(e);
    }
  }
  if (static_cast<int>(edges.size()) < p.target_link_count) {
    std::vector<std::pair<int, int>> absent;
    for (int i = 0; i < p.node_count; ++i)
      for (int j = i + 1; j < p.node_count; ++j)
        if (!edges.count({i, j})) absent.emplace_back(i, j);
    std::stable_sort(absent.begin(), absent.end(),
                     [&](const std::pair<int, int>& a, const std::pair<int, int>& b) {
                       const double pa = waxman_prob(p, pts[a.first], pts[a.second]);
                       const double pb = waxman_prob(p, pts[b.first], pts[b.second]);
                       if (pa != pb) return pa > pb;
                       return a < b;
                     });
    for (const auto& e : absent) {
      if (static_cast<int>(edges.size()) >= p.target_link_count) break;
      edges.insert(e);
    }
  }

  SubstrateNetwork sn;
  for (int i = 0; i < p.node_count; ++i) sn.add_node(i, cpus[static_cast<std::size_t>(i)], xs[i], ys[i]);
  int lid = 0;
  for (const auto& e : edges) {
    sn.add_link(lid++, e.first, e.second, rng.uniform_amount(bw_min, bw_max));
  }
  return sn;
}

VirtualNetwork generate_vn(const WaxmanParams& p, const std::vector<Amount>& cpu_choices,
                           Amount bw_min, Amount bw_max, std::uint64_t seed) {
  if (p.node_count < 1) throw std::invalid_argument("virtual network needs at least one node");
  if (cpu_choices.empty()) throw std::invalid_argument("no cpu choices");

  Rng rng(seed);
  std::vector<Amount> xs, ys;
  const auto pts = place_nodes(p, rng, xs, ys);
  std::vector<Amount> cpus;
  for (int i = 0; i < p.node_count; ++i) cpus.push_back(rng.choice(cpu_choices));

  std::set<std::pair<int, int>> edges;
  if (p.node_count > 1) {
    for (const auto& e : spanning_tree(p, pts, rng)) edges.insert(e);
  }

  // Remaining pairs accepted with min(1, s * waxman_prob), s waterfilled so
  // the expected total link count equals the density target (where the tree
  // does not already exceed it).
  std::vector<std::pair<int, int>> absent;
  for (int i = 0; i < p.node_count; ++i)
    for (int j = i + 1; j < p.node_count; ++j)
      if (!edges.count({i, j})) absent.emplace_back(i, j);

  const double target_total =
      p.target_density * static_cast<double>(p.node_count) * (p.node_count - 1) / 2.0;
  double want = target_total - static_cast<double>(edges.size());
  if (want > 0 && !absent.empty()) {
    std::vector<double> probs;
    for (const auto& e : absent) probs.push_back(waxman_prob(p, pts[e.first], pts[e.second]));
    double s = 0;
    for (int iter = 0; iter < 64; ++iter) {
      double clamped = 0, open = 0;
      for (double q : probs) {
        if (s * q >= 1.0)
          clamped += 1.0;
        else
          open += q;
      }
      if (open <= 0) break;
      const double next = (want - clamped) / open;
      if (std::abs(next - s) < 1e-12) {
        s = next;
        break;
      }
      s = next;
    }
    for (std::size_t k = 0; k < absent.size(); ++k) {
      const double accept = std::min(1.0, std::max(0.0, s * probs[k]));
      if (rng.uniform01() < accept) edges.insert(absent[k]);
    }
  }

  VirtualNetwork vn;
  for (int i = 0; i < p.node_count; ++i) vn.add_node(i, cpus[static_cast<std::size_t>(i)], xs[i], ys[i]);
  int lid = 0;
  for (const auto& e : edges) {
    vn.add_link(lid++, e.first, e.second, rng.uniform_amount(bw_min, bw_max));
  }
  return vn;
}

std::vector<VnRequest> generate_workload(const WorkloadParams& p) {
  if (p.vn_nodes_min > p.vn_nodes_max || p.lifetime_min > p.lifetime_max || p.bw_min > p.bw_max)
    throw std::invalid_argument("workload range bounds inverted");
  if (p.arrival_rate <= 0) throw std::invalid_argument("arrival rate must be positive");

  Rng rng(p.seed);
  std::vector<VnRequest> out;
  double clock = 0;
  for (int i = 0; i < p.vnr_count; ++i) {
    WaxmanParams wp;
    wp.node_count = static_cast<int>(rng.uniform_int(p.vn_nodes_min, p.vn_nodes_max));
    wp.target_density = p.vn_density;
    wp.alpha = p.waxman_alpha;
    wp.beta = p.waxman_beta;
    wp.plane_size = p.plane_size;
    const std::uint64_t vn_seed = rng.next_u64();
    clock += rng.exponential(p.arrival_rate);
    VnRequest req;
    req.id = i;
    req.graph = generate_vn(wp, p.cpu_choices, p.bw_min, p.bw_max, vn_seed);
    req.arrival = static_cast<SimTime>(std::llround(clock));
    req.lifetime = rng.uniform_int(p.lifetime_min, p.lifetime_max);
    out.push_back(std::move(req));
  }
  return out;
}

ParseError::ParseError(const std::filesystem::path& file, int line, const std::string& msg)
    : std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

// Shared BRITE-subset writer; `weights` carries the node cpu column values.
struct BriteNodeRow {
  int id;
  Amount x, y;
  int degree;
  Amount cpu;
};
struct BriteEdgeRow {
  int id;
  int from, to;
  Amount bw;
};

void write_brite_rows(const std::vector<BriteNodeRow>& nodes, const std::vector<BriteEdgeRow>& edges,
                      const std::filesystem::path& file) {
  std::ostringstream os;
  os << "Topology: ( " << nodes.size() << " Nodes, " << edges.size() << " Edges )\n";
  os << "Nodes: ( " << nodes.size() << " )\n";
  for (const auto& n : nodes) {
    os << n.id << '\t' << n.x.str() << '\t' << n.y.str() << '\t' << n.degree << '\t' << n.degree
       << '\t' << 0 << '\t' << 0 << '\t' << n.cpu.str() << '\n';
  }
  os << "Edges: ( " << edges.size() << " )\n";
  for (const auto& e : edges) {
    os << e.id << '\t' << e.from << '\t' << e.to << '\t' << 0 << '\t' << 0 << '\t' << e.bw.str()
       << '\t' << 0 << '\t' << 0 << '\t' << 0 << '\n';
  }
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << os.str();
  }
  std::filesystem::rename(tmp, file);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

int parse_int(const std::filesystem::path& file, int line_no, const std::string& s) {
  std::size_t pos = 0;
  int v;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(file, line_no, "expected integer, got '" + s + "'");
  }
  if (pos != s.size()) throw ParseError(file, line_no, "expected integer, got '" + s + "'");
  return v;
}

Amount parse_amount_field(const std::filesystem::path& file, int line_no, const std::string& s) {
  try {
    return Amount::parse(s);
  } catch (const std::exception&) {
    throw ParseError(file, line_no, "expected decimal, got '" + s + "'");
  }
}

struct BriteDoc {
  std::vector<BriteNodeRow> nodes;
  std::vector<BriteEdgeRow> edges;
};

BriteDoc read_brite_doc(const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw ParseError(file, 0, "cannot open file");
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(f, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line()) throw ParseError(file, 1, "missing Topology header");
  int n = 0, m = 0;
  if (std::sscanf(line.c_str(), "Topology: ( %d Nodes, %d Edges )", &n, &m) != 2)
    throw ParseError(file, line_no, "malformed Topology header");
  if (!next_line()) throw ParseError(file, line_no + 1, "missing Nodes header");
  int n2 = 0;
  if (std::sscanf(line.c_str(), "Nodes: ( %d )", &n2) != 1 || n2 != n)
    throw ParseError(file, line_no, "malformed Nodes header");

  BriteDoc doc;
  for (int i = 0; i < n; ++i) {
    if (!next_line()) throw ParseError(file, line_no + 1, "missing node line");
    const auto cols = split_tabs(line);
    if (cols.size() != 8)
      throw ParseError(file, line_no, "node line needs 8 columns, got " + std::to_string(cols.size()));
    BriteNodeRow row;
    row.id = parse_int(file, line_no, cols[0]);
    row.x = parse_amount_field(file, line_no, cols[1]);
    row.y = parse_amount_field(file, line_no, cols[2]);
    row.degree = 0;  // indeg/outdeg/as/type ignored
    row.cpu = parse_amount_field(file, line_no, cols[7]);
    doc.nodes.push_back(row);
  }
  if (!next_line()) throw ParseError(file, line_no + 1, "missing Edges header");
  int m2 = 0;
  if (std::sscanf(line.c_str(), "Edges: ( %d )", &m2) != 1 || m2 != m)
    throw ParseError(file, line_no, "malformed Edges header");
  for (int i = 0; i < m; ++i) {
    if (!next_line()) throw ParseError(file, line_no + 1, "missing edge line");
    const auto cols = split_tabs(line);
    if (cols.size() != 9)
      throw ParseError(file, line_no, "edge line needs 9 columns, got " + std::to_string(cols.size()));
    BriteEdgeRow row;
    row.id = parse_int(file, line_no, cols[0]);
    row.from = parse_int(file, line_no, cols[1]);
    row.to = parse_int(file, line_no, cols[2]);
    row.bw = parse_amount_field(file, line_no, cols[5]);
    doc.edges.push_back(row);
  }
  return doc;
}

}  // namespace

void write_brite(const SubstrateNetwork& n, const std::filesystem::path& file) {
  std::vector<BriteNodeRow> nodes;
  for (const auto& node : n.nodes())
    nodes.push_back({node.id, node.x, node.y, static_cast<int>(n.incident_links(node.id).size()),
                     node.total_cpu});
  std::vector<BriteEdgeRow> edges;
  for (const auto& l : n.links()) edges.push_back({l.id, l.from, l.to, l.total_bw});
  write_brite_rows(nodes, edges, file);
}

void write_brite(const VirtualNetwork& n, const std::filesystem::path& file) {
  std::vector<BriteNodeRow> nodes;
  for (const auto& node : n.nodes())
    nodes.push_back({node.id, node.x, node.y, static_cast<int>(n.incident_links(node.id).size()),
                     node.cpu});
  std::vector<BriteEdgeRow> edges;
  for (const auto& l : n.links()) edges.push_back({l.id, l.from, l.to, l.bw});
  write_brite_rows(nodes, edges, file);
}

SubstrateNetwork read_brite_substrate(const std::filesystem::path& file) {
  const auto doc = read_brite_doc(file);
  SubstrateNetwork sn;
  try {
    for (const auto& n : doc.nodes) sn.add_node(n.id, n.cpu, n.x, n.y);
    for (const auto& e : doc.edges) sn.add_link(e.id, e.from, e.to, e.bw);
  } catch (const std::invalid_argument& err) {
    throw ParseError(file, 0, err.what());
  }
  return sn;
}

VirtualNetwork read_brite_virtual(const std::filesystem::path& file) {
  const auto doc = read_brite_doc(file);
  VirtualNetwork vn;
  try {
    for (const auto& n : doc.nodes) vn.add_node(n.id, n.cpu, n.x, n.y);
    for (const auto& e : doc.edges) vn.add_link(e.id, e.from, e.to, e.bw);
  } catch (const std::invalid_argument& err) {
    throw ParseError(file, 0, err.what());
  }
  return vn;
}

namespace {

std::string vnr_file_name(int id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "vnr_%05d.brite", id);
  return buf;
}

}  // namespace

void write_manifest(const std::vector<VnRequest>& workload, const std::filesystem::path& manifest) {
  const auto dir = manifest.parent_path();
  std::ostringstream os;
  os << "vnr_id,brite_file,arrival,lifetime\n";
  for (const auto& req : workload) {
    const auto name = vnr_file_name(req.id);
    write_brite(req.graph, dir / name);
    os << req.id << ',' << name << ',' << req.arrival << ',' << req.lifetime << '\n';
  }
  const auto tmp = manifest.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << os.str();
  }
  std::filesystem::rename(tmp, manifest);
}

std::vector<VnRequest> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream f(manifest);
  if (!f) throw ParseError(manifest, 0, "cannot open file");
  const auto dir = manifest.parent_path();
  std::string line;
  if (!std::getline(f, line) || line != "vnr_id,brite_file,arrival,lifetime")
    throw ParseError(manifest, 1, "bad manifest header");
  std::vector<VnRequest> out;
  SimTime prev_arrival = -1;
  int row = 0;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      if (comma == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (cols.size() != 4) throw ParseError(manifest, row + 1, "row " + std::to_string(row) + ": needs 4 columns");
    VnRequest req;
    try {
      req.id = std::stoi(cols[0]);
      req.arrival = std::stoll(cols[2]);
      req.lifetime = std::stoll(cols[3]);
    } catch (const std::exception&) {
      throw ParseError(manifest, row + 1, "row " + std::to_string(row) + ": non-numeric field");
    }
    if (req.arrival < prev_arrival)
      throw ParseError(manifest, row + 1, "row " + std::to_string(row) + ": decreasing arrival");
    if (req.lifetime <= 0)
      throw ParseError(manifest, row + 1, "row " + std::to_string(row) + ": non-positive lifetime");
    prev_arrival = req.arrival;
    const auto brite = dir / cols[1];
    if (!std::filesystem::exists(brite))
      throw ParseError(manifest, row + 1,
                       "row " + std::to_string(row) + ": missing file " + cols[1]);
    req.graph = read_brite_virtual(brite);
    out.push_back(std::move(req));
  }
  return out;
}

}  // namespace vne
