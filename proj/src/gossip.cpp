#include "gossipsim/gossip.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace gossipsim {

namespace {

char relation_char(TargetRelation r) {
  switch (r) {
    case TargetRelation::Positive: return '+';
    case TargetRelation::Negative: return '-';
    case TargetRelation::Absent: return '0';
  }
  return '?';
}

TargetRelation to_relation(std::optional<TieSign> s) {
  if (!s) return TargetRelation::Absent;
  return *s == TieSign::Positive ? TargetRelation::Positive : TargetRelation::Negative;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <class Decide>
StepResult gossip_step(GossipPiece& piece, const SignedNetwork& net, ReputationMatrix& reputation, double omega,
                       RngStream& rng, Decide&& decide) {
  if (piece.steps_remaining == 0) throw ContractViolation("gossip piece has no steps remaining");

  // Frontier members lose eligibility permanently once all their neighbors are
  // informed (or the target), so they are pruned here.
  std::vector<std::vector<AgentId>> receivers;
  std::vector<AgentId> senders;
  std::vector<AgentId> kept;
  for (AgentId s : piece.frontier) {
    std::vector<AgentId> options;
    for (const auto& [r, sign] : net.neighbors(s)) {
      if (r != piece.target && !piece.is_informed(r)) options.push_back(r);
    }
    if (options.empty()) continue;
    kept.push_back(s);
    senders.push_back(s);
    receivers.push_back(std::move(options));
  }
  piece.frontier = std::move(kept);

  StepResult result;
  if (senders.empty()) {
    piece.steps_remaining = 0;
    return result;
  }

  const std::size_t si = rng.uniform_index(senders.size());
  const AgentId sender = senders[si];
  const AgentId receiver = receivers[si][rng.uniform_index(receivers[si].size())];
  const auto sr = net.relation(sender, receiver);
  if (!sr) throw ContractViolation("gossip receiver is not a neighbor of the sender");

  TriadConfig triad{*sr, to_relation(net.relation(sender, piece.target)),
                    to_relation(net.relation(receiver, piece.target)), piece.valence};
  result.interacted = true;
  result.triad = triad;
  if (decide(triad)) {
    const double prior = reputation(receiver, piece.target);
    reputation.set(receiver, piece.target, prior * (1.0 - omega) + piece.payload * omega);
    piece.informed.push_back(receiver);
    piece.frontier.push_back(receiver);
    result.transmitted = true;
  }
  --piece.steps_remaining;
  return result;
}

}  // namespace

std::string describe(const TriadConfig& c) {
  std::string out = "sr=";
  out += c.sender_receiver == TieSign::Positive ? '+' : '-';
  out += " st=";
  out += relation_char(c.sender_target);
  out += " rt=";
  out += relation_char(c.receiver_target);
  out += c.valence == Valence::Negative ? " valence=neg" : " valence=pos";
  return out;
}

std::size_t TriadicTable::index(const TriadConfig& c) {
  const std::size_t sr = c.sender_receiver == TieSign::Positive ? 0 : 1;
  const std::size_t st = static_cast<std::size_t>(c.sender_target);
  const std::size_t rt = static_cast<std::size_t>(c.receiver_target);
  const std::size_t v = c.valence == Valence::Negative ? 1 : 0;
  return ((sr * 3 + st) * 3 + rt) * 2 + v;
}

TriadConfig TriadicTable::config_at(std::size_t i) {
  TriadConfig c;
  c.valence = (i % 2) ? Valence::Negative : Valence::PositiveOrNeutral;
  i /= 2;
  c.receiver_target = static_cast<TargetRelation>(i % 3);
  i /= 3;
  c.sender_target = static_cast<TargetRelation>(i % 3);
  i /= 3;
  c.sender_receiver = i == 0 ? TieSign::Positive : TieSign::Negative;
  return c;
}

TriadicTable TriadicTable::default_table() {
  TriadicTable t;
  for (std::size_t i = 0; i < kEntries; ++i) {
    const TriadConfig c = config_at(i);
    const bool friends = c.sender_receiver == TieSign::Positive;
    bool transmit = false;
    if (c.valence == Valence::PositiveOrNeutral) {
      transmit = friends && c.sender_target != TargetRelation::Negative && c.receiver_target != TargetRelation::Negative;
    } else {
      const bool common_enemy = c.sender_target == TargetRelation::Negative && c.receiver_target == TargetRelation::Negative;
      transmit = (friends && c.receiver_target != TargetRelation::Positive) || common_enemy;
    }
    t.entries_[i] = transmit;
  }
  return t;
}

TriadicTable TriadicTable::all_yes() {
  TriadicTable t;
  t.entries_.fill(true);
  return t;
}

std::string TriadicTable::checksum() const {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < kEntries; ++i) {
    if (entries_[i]) bits |= (std::uint64_t{1} << i);
  }
  const std::uint64_t h = hash_combine(hash_string("triadic-table"), bits);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> TriadicTable::lint() const {
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < kEntries; ++i) {
    const TriadConfig c = config_at(i);
    if (entries_[i] && c.valence == Valence::Negative && c.receiver_target == TargetRelation::Positive) {
      warnings.push_back(describe(c) +
                         ": negative gossip is passed to a friend of the target; such triads usually inhibit gossiping");
    }
  }
  return warnings;
}

TriadicTable parse_triadic_table(std::istream& in, const std::string& source) {
  TriadicTable table;
  std::array<std::size_t, TriadicTable::kEntries> seen_at{};
  std::vector<std::string> duplicates;
  bool header_seen = false;
  std::string line;
  std::size_t lineno = 0;

  auto parse_relation = [&](const std::string& v) {
    if (v == "+" || v == "+1") return TargetRelation::Positive;
    if (v == "-" || v == "-1") return TargetRelation::Negative;
    if (v == "0" || v == "absent") return TargetRelation::Absent;
    throw ParseError(source, lineno, "expected +, - or 0, got '" + v + "'");
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split_csv(t);
    if (!header_seen) {
      const std::vector<std::string> expected{"sr_sign", "st_rel", "rt_rel", "valence", "transmit"};
      if (cells != expected) throw ParseError(source, lineno, "expected header sr_sign,st_rel,rt_rel,valence,transmit");
      header_seen = true;
      continue;
    }
    if (cells.size() != 5) throw ParseError(source, lineno, "expected 5 columns, got " + std::to_string(cells.size()));

    TriadConfig c;
    if (cells[0] == "+" || cells[0] == "+1") {
      c.sender_receiver = TieSign::Positive;
    } else if (cells[0] == "-" || cells[0] == "-1") {
      c.sender_receiver = TieSign::Negative;
    } else {
      throw ParseError(source, lineno, "sr_sign must be + or -, got '" + cells[0] + "'");
    }
    c.sender_target = parse_relation(cells[1]);
    c.receiver_target = parse_relation(cells[2]);
    if (cells[3] == "pos" || cells[3] == "positive") {
      c.valence = Valence::PositiveOrNeutral;
    } else if (cells[3] == "neg" || cells[3] == "negative") {
      c.valence = Valence::Negative;
    } else {
      throw ParseError(source, lineno, "valence must be pos or neg, got '" + cells[3] + "'");
    }
    bool transmit = false;
    if (cells[4] == "1" || cells[4] == "yes" || cells[4] == "true") {
      transmit = true;
    } else if (cells[4] != "0" && cells[4] != "no" && cells[4] != "false") {
      throw ParseError(source, lineno, "transmit must be 1/0, yes/no or true/false, got '" + cells[4] + "'");
    }

    const std::size_t idx = TriadicTable::index(c);
    if (seen_at[idx] != 0) {
      duplicates.push_back(describe(c) + " (lines " + std::to_string(seen_at[idx]) + " and " + std::to_string(lineno) + ")");
      continue;
    }
    seen_at[idx] = lineno;
    table.set(c, transmit);
  }
  if (!header_seen) throw ParseError(source, lineno, "missing header");

  std::vector<std::string> missing;
  for (std::size_t i = 0; i < TriadicTable::kEntries; ++i) {
    if (seen_at[i] == 0) missing.push_back(describe(TriadicTable::config_at(i)));
  }
  if (!duplicates.empty() || !missing.empty()) {
    std::string msg = source + ": invalid triadic table";
    for (const auto& d : duplicates) msg += "\n  duplicate configuration: " + d;
    for (const auto& m : missing) msg += "\n  missing configuration: " + m;
    throw ValidationError(msg);
  }
  return table;
}

TriadicTable load_triadic_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open triadic table");
  return parse_triadic_table(in, path);
}

void write_triadic_table(std::ostream& out, const TriadicTable& table) {
  out << "sr_sign,st_rel,rt_rel,valence,transmit\n";
  for (std::size_t i = 0; i < TriadicTable::kEntries; ++i) {
    const TriadConfig c = TriadicTable::config_at(i);
    out << (c.sender_receiver == TieSign::Positive ? '+' : '-') << ',' << relation_char(c.sender_target) << ','
        << relation_char(c.receiver_target) << ',' << (c.valence == Valence::Negative ? "neg" : "pos") << ','
        << (table.transmits(c) ? 1 : 0) << '\n';
  }
}

bool GossipPiece::is_informed(AgentId a) const { return std::find(informed.begin(), informed.end(), a) != informed.end(); }

ReputationMatrix parallel_update(const ImageMatrix& image, ParallelAverage mode) {
  const std::size_t n = image.size();
  ReputationMatrix out(n);
  if (n < 2) return out;
  for (AgentId j = 0; j < n; ++j) {
    double sum = 0.0;
    std::size_t count = 0;
    for (AgentId k = 0; k < n; ++k) {
      if (k == j) continue;
      if (mode == ParallelAverage::Informed && image(k, j) == 0.0) continue;
      sum += image(k, j);
      ++count;
    }
    const double mean = count == 0 ? 0.0 : sum / static_cast<double>(count);
    for (AgentId i = 0; i < n; ++i) out.set(i, j, mean);
  }
  return out;
}

std::vector<GossipPiece> emit_pieces(const ImageMatrix& image, const SignedNetwork& net, std::size_t budget,
                                     std::size_t lifespan, RngStream& rng) {
  const std::size_t n = image.size();
  std::vector<AgentId> originators;
  for (AgentId a = 0; a < n; ++a) {
    if (net.degree(a) == 0) continue;
    const auto row = image.row(a);
    for (AgentId j = 0; j < n; ++j) {
      if (j != a && row[j] != 0.0) {
        originators.push_back(a);
        break;
      }
    }
  }

  std::vector<GossipPiece> pieces;
  if (originators.empty()) return pieces;
  pieces.reserve(budget);
  std::vector<AgentId> targets;
  for (std::size_t p = 0; p < budget; ++p) {
    const AgentId origin = originators[rng.uniform_index(originators.size())];
    targets.clear();
    const auto row = image.row(origin);
    for (AgentId j = 0; j < n; ++j) {
      if (j != origin && row[j] != 0.0) targets.push_back(j);
    }
    GossipPiece piece;
    piece.originator = origin;
    piece.target = targets[rng.uniform_index(targets.size())];
    piece.payload = row[piece.target];
    piece.valence = piece.payload < 0.0 ? Valence::Negative : Valence::PositiveOrNeutral;
    piece.steps_remaining = lifespan;
    piece.frontier = {origin};
    piece.informed = {origin};
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

StepResult triadic_step(GossipPiece& piece, const SignedNetwork& net, const TriadicTable& table,
                        ReputationMatrix& reputation, double omega, RngStream& rng) {
  return gossip_step(piece, net, reputation, omega, rng, [&](const TriadConfig& c) { return table.transmits(c); });
}

StepResult simple_step(GossipPiece& piece, const SignedNetwork& net, ReputationMatrix& reputation, double omega,
                       RngStream& rng) {
  return gossip_step(piece, net, reputation, omega, rng, [](const TriadConfig&) { return true; });
}

}  // namespace gossipsim
