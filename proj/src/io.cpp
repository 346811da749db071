#include "gossipsim/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace gossipsim {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

LoadedSignedNetwork parse_signed_network(std::istream& in, const std::string& source) {
  struct RawEdge {
    AgentId a;
    AgentId b;
    TieSign sign;
    std::size_t line;
  };

  LoadedSignedNetwork out;
  std::unordered_map<std::string, AgentId> ids;
  auto id_of = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, out.labels.size());
    if (inserted) out.labels.push_back(label);
    return it->second;
  };

  std::vector<RawEdge> edges;
  std::map<std::pair<AgentId, AgentId>, std::size_t> seen;  // pair -> index into edges
  bool header_seen = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("#node,", 0) == 0) {
      const std::string label = trim(t.substr(6));
      if (label.empty()) throw ParseError(source, lineno, "empty node label");
      id_of(label);
      continue;
    }
    if (t.front() == '#') continue;
    const auto cells = split_csv(t);
    if (!header_seen) {
      if (cells.size() != 3 || cells[0] != "a" || cells[1] != "b" || cells[2] != "sign") {
        throw ParseError(source, lineno, "expected header a,b,sign");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 3) throw ParseError(source, lineno, "expected 3 columns, got " + std::to_string(cells.size()));
    if (cells[0].empty() || cells[1].empty()) throw ParseError(source, lineno, "empty node label");
    TieSign sign;
    if (cells[2] == "1" || cells[2] == "+1" || cells[2] == "+") {
      sign = TieSign::Positive;
    } else if (cells[2] == "-1" || cells[2] == "-") {
      sign = TieSign::Negative;
    } else {
      throw ParseError(source, lineno, "sign must be +1 or -1, got '" + cells[2] + "'");
    }
    if (cells[0] == cells[1]) throw ParseError(source, lineno, "self-loop on '" + cells[0] + "'");
    const AgentId a = id_of(cells[0]);
    const AgentId b = id_of(cells[1]);
    const auto key = std::minmax(a, b);
    auto it = seen.find({key.first, key.second});
    if (it != seen.end()) {
      const RawEdge& prev = edges[it->second];
      if (prev.sign != sign) {
        throw ValidationError(source + ":" + std::to_string(lineno) + ": conflicting signs for pair " + cells[0] + "-" +
                              cells[1] + " (first given on line " + std::to_string(prev.line) + ")");
      }
      out.warnings.push_back(source + ":" + std::to_string(lineno) + ": repeated pair " + cells[0] + "-" + cells[1] +
                             " ignored");
      continue;
    }
    seen.emplace(std::pair{key.first, key.second}, edges.size());
    edges.push_back({a, b, sign, lineno});
  }
  if (!header_seen) throw ParseError(source, lineno, "missing header a,b,sign");

  out.network = SignedNetwork(out.labels.size());
  for (const auto& e : edges) out.network.add_edge(e.a, e.b, e.sign);
  for (AgentId id = 0; id < out.network.size(); ++id) {
    if (out.network.degree(id) == 0) out.warnings.push_back(source + ": node '" + out.labels[id] + "' is isolated");
  }
  return out;
}

LoadedSignedNetwork load_signed_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open signed network");
  return parse_signed_network(in, path);
}

void write_signed_network(std::ostream& out, const SignedNetwork& net, const std::vector<std::string>& labels) {
  auto label = [&](AgentId id) { return labels.empty() ? std::to_string(id) : labels[id]; };
  // Node declarations keep ids stable under first-appearance mapping on reload.
  for (AgentId id = 0; id < net.size(); ++id) out << "#node," << label(id) << '\n';
  out << "a,b,sign\n";
  for (const auto& e : net.edges()) {
    out << label(e.a) << ',' << label(e.b) << ',' << (e.sign == TieSign::Positive ? "+1" : "-1") << '\n';
  }
}

std::string id_mapping_path(const std::string& network_path) { return network_path + ".ids.csv"; }

void save_signed_network(const std::string& path, const SignedNetwork& net, const std::vector<std::string>& labels) {
  std::ostringstream body;
  write_signed_network(body, net, labels);
  atomic_write(path, body.str());
  std::ostringstream ids;
  ids << "id,label\n";
  for (AgentId id = 0; id < net.size(); ++id) ids << id << ',' << (labels.empty() ? std::to_string(id) : labels[id]) << '\n';
  atomic_write(id_mapping_path(path), ids.str());
}

SignedNetwork generate_signed_network(std::size_t n, double pos_density, double neg_density, RngStream& rng) {
  if (!(pos_density >= 0.0) || !(neg_density >= 0.0)) throw ConfigError("signed_pos_density", "densities must be non-negative");
  if (pos_density + neg_density > 1.0) {
    throw ConfigError("signed_neg_density", "pos_density + neg_density must not exceed 1");
  }
  SignedNetwork net(n);
  for (AgentId a = 0; a < n; ++a) {
    for (AgentId b = a + 1; b < n; ++b) {
      const double u = rng.uniform01();
      if (u < pos_density) {
        net.add_edge(a, b, TieSign::Positive);
      } else if (u < pos_density + neg_density) {
        net.add_edge(a, b, TieSign::Negative);
      }
    }
  }
  return net;
}

bool is_connected(const SignedNetwork& net) {
  const std::size_t n = net.size();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<AgentId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const AgentId a = stack.back();
    stack.pop_back();
    for (const auto& [b, sign] : net.neighbors(a)) {
      if (!seen[b]) {
        seen[b] = 1;
        ++reached;
        stack.push_back(b);
      }
    }
  }
  return reached == n;
}

void write_game_network(std::ostream& out, const GameNetwork& net) {
  out << "a,b\n";
  for (const auto& [a, b] : net.edges()) out << a << ',' << b << '\n';
}

void atomic_write(const std::string& path, const std::string& content) {
  AtomicFile file(path);
  file.write(content);
  file.commit();
}

AtomicFile::AtomicFile(std::string path) : path_(std::move(path)), tmp_(path_ + ".tmp") {
  namespace fs = std::filesystem;
  const fs::path target(path_);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw std::runtime_error(path_ + ": cannot create parent directory: " + ec.message());
  }
  out_.open(tmp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error(tmp_ + ": cannot open for writing");
}

AtomicFile::~AtomicFile() {
  if (committed_) return;
  out_.close();
  std::error_code ec;
  std::filesystem::remove(tmp_, ec);
}

void AtomicFile::write(std::string_view chunk) {
  out_.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  if (!out_) throw std::runtime_error(tmp_ + ": write failed");
}

void AtomicFile::commit() {
  out_.flush();
  if (!out_) throw std::runtime_error(tmp_ + ": write failed");
  out_.close();
  std::error_code ec;
  std::filesystem::rename(tmp_, path_, ec);
  if (ec) {
    std::filesystem::remove(tmp_, ec);
    throw std::runtime_error(path_ + ": cannot move temporary file into place");
  }
  committed_ = true;
}

std::string run_records_jsonl(const std::vector<RunRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

void write_results(const std::string& runs_path, const std::vector<RunRecord>& records) {
  atomic_write(runs_path, run_records_jsonl(records));
}

void write_aggregate(const std::string& csv_path, const AggregateResult& aggregate) {
  std::ostringstream out;
  write_aggregate_csv(out, aggregate);
  atomic_write(csv_path, out.str());
}

std::string describe_formats() {
  return R"(File formats

config (JSON)
  One flat object; every key is optional and unknown keys are rejected.
  Run `gossipsim run --print-config` for the full key list with defaults.

sweep grid (JSON)
  {"base": {<config keys>}, "grid": {"<config key>": [v1, v2, ...], ...},
   "master_seed": <uint>, "replicates": <uint>, "group_by": ["<config key>", ...]}
  Conditions are the Cartesian product of the grid lists in key order (last
  key varies fastest). The seed of each run is hash(master_seed, condition
  values, replicate). A sweep writes runs.jsonl, aggregate.csv and, when any
  run failed, failures.jsonl into its output directory.

signed network (CSV)
  a,b,sign
  alice,bob,+1
  bob,carol,-1
  Node labels are arbitrary strings mapped to ids 0..N-1 in order of first
  appearance; optional "#node,<label>" lines declare nodes (including
  isolates) ahead of the edges. Other '#' lines are comments. A mapping file
  <network>.ids.csv (id,label) is written next to generated networks.

triadic table (CSV)
  sr_sign,st_rel,rt_rel,valence,transmit
  sr_sign in {+,-}: sender-receiver tie
  st_rel, rt_rel in {+,-,0}: sender-target and receiver-target relation (0 = no tie)
  valence in {pos,neg}; transmit in {1,0}
  All 36 configurations exactly once.

game network snapshot (CSV)
  a,b   (one undirected edge per line, a < b)

run records (JSON lines, runs.jsonl)
  One object per run: config, agent_types, final_resources, mean_all, sd_all,
  total_resources, degenerate, mean_c, mean_d, relative_difference,
  absolute_difference, c_win (group fields null for single-type runs),
  trustor_cooperations, gossip_transmissions, gossip_declines, rounds[].

round snapshots (JSON lines)
  {"round", "phase", "resources": [...], "tie_changes", "gossip_transmissions", ...}

aggregate (CSV, aggregate.csv)
  <group_by...>,runs,comparable_runs,degenerate_runs,c_win_rate,
  mean_relative_difference,sd_relative_difference,mean_total_resources,
  mean_absolute_difference,n_agents_min,n_agents_max
)";
}

}  // namespace gossipsim
