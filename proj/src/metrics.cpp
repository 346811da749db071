#include "gossipsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

namespace gossipsim {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

const char* phase_name(Phase p) { return p == Phase::BurnIn ? "burn_in" : "main"; }

}  // namespace

RunRecord summarize(const Population& population, const SimConfig& config) {
  RunRecord rec;
  rec.config = config;
  const std::size_t n = population.size();
  rec.agent_types.reserve(n);
  rec.final_resources.reserve(n);

  double sum_c = 0.0;
  double sum_d = 0.0;
  std::size_t n_c = 0;
  std::size_t n_d = 0;
  for (const auto& a : population.agents) {
    rec.agent_types.push_back(a.type);
    rec.final_resources.push_back(a.resources);
    rec.total_resources += a.resources;
    if (a.type == AgentType::Cooperator) {
      sum_c += a.resources;
      ++n_c;
    } else {
      sum_d += a.resources;
      ++n_d;
    }
  }
  if (n == 0) return rec;

  rec.mean_all = rec.total_resources / static_cast<double>(n);
  double ss = 0.0;
  for (double r : rec.final_resources) ss += (r - rec.mean_all) * (r - rec.mean_all);
  rec.sd_all = std::sqrt(ss / static_cast<double>(n));
  // Round-off from the mean can leave a tiny positive variance for equal values.
  const bool all_equal = std::all_of(rec.final_resources.begin(), rec.final_resources.end(),
                                     [&](double r) { return r == rec.final_resources.front(); });
  if (all_equal) rec.sd_all = 0.0;
  rec.degenerate = rec.sd_all == 0.0;

  if (n_c > 0 && n_d > 0) {
    GroupStats g;
    g.mean_c = sum_c / static_cast<double>(n_c);
    g.mean_d = sum_d / static_cast<double>(n_d);
    g.absolute_difference = std::abs(g.mean_c - g.mean_d);
    g.relative_difference = rec.degenerate ? 0.0 : (g.mean_c - g.mean_d) / rec.sd_all;
    g.c_win = g.relative_difference > 0.0;
    rec.groups = g;
  }
  return rec;
}

nlohmann::ordered_json to_json(const RunRecord& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["config"] = to_json(r.config);
  std::string types;
  for (AgentType t : r.agent_types) types.push_back(to_char(t));
  j["agent_types"] = types;
  j["final_resources"] = r.final_resources;
  j["mean_all"] = r.mean_all;
  j["sd_all"] = r.sd_all;
  j["total_resources"] = r.total_resources;
  j["degenerate"] = r.degenerate;
  if (r.groups) {
    j["mean_c"] = r.groups->mean_c;
    j["mean_d"] = r.groups->mean_d;
    j["relative_difference"] = r.groups->relative_difference;
    j["absolute_difference"] = r.groups->absolute_difference;
    j["c_win"] = r.groups->c_win;
  } else {
    j["mean_c"] = nullptr;
    j["mean_d"] = nullptr;
    j["relative_difference"] = nullptr;
    j["absolute_difference"] = nullptr;
    j["c_win"] = nullptr;
  }
  j["trustor_cooperations"] = r.trustor_cooperations;
  j["gossip_transmissions"] = r.gossip_transmissions;
  j["gossip_declines"] = r.gossip_declines;
  ordered_json rounds = ordered_json::array();
  for (const auto& s : r.rounds) {
    ordered_json row;
    row["round"] = s.round;
    row["phase"] = phase_name(s.phase);
    row["trustor_cooperations"] = s.trustor_cooperations;
    row["total_resources"] = s.total_resources;
    row["tie_changes"] = s.tie_changes;
    row["isolate_repairs"] = s.isolate_repairs;
    row["gossip_pieces"] = s.gossip_pieces;
    row["gossip_transmissions"] = s.gossip_transmissions;
    row["gossip_declines"] = s.gossip_declines;
    rounds.push_back(std::move(row));
  }
  j["rounds"] = std::move(rounds);
  return j;
}

std::string to_json_line(const RunRecord& record) { return to_json(record).dump(); }

AggregateResult aggregate(const std::vector<RunRecord>& records, const std::vector<std::string>& group_by) {
  AggregateResult result;
  result.group_by = group_by;

  const auto reference = to_json(SimConfig{});
  for (const auto& field : group_by) {
    if (!reference.contains(field)) throw ConfigError(field, "unknown group_by field");
  }

  struct Acc {
    std::size_t runs = 0;
    std::size_t degenerate = 0;
    std::size_t wins = 0;
    std::vector<double> rel;
    std::vector<double> total;
    std::vector<double> abs;
    std::size_t n_min = 0;
    std::size_t n_max = 0;
  };
  // Element-wise JSON value order; std::vector's own operator< does not
  // compose with json's comparison operators under C++20.
  struct KeyLess {
    bool operator()(const std::vector<nlohmann::json>& a, const std::vector<nlohmann::json>& b) const {
      for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
      }
      return a.size() < b.size();
    }
  };
  std::map<std::vector<nlohmann::json>, Acc, KeyLess> groups;
  for (const auto& rec : records) {
    const auto cfg = to_json(rec.config);
    std::vector<nlohmann::json> key;
    key.reserve(group_by.size());
    for (const auto& field : group_by) key.emplace_back(cfg[field]);

    Acc& acc = groups[key];
    const std::size_t n = rec.config.n_agents;
    acc.n_min = acc.runs == 0 ? n : std::min(acc.n_min, n);
    acc.n_max = acc.runs == 0 ? n : std::max(acc.n_max, n);
    ++acc.runs;
    acc.total.push_back(rec.total_resources);
    if (rec.degenerate) ++acc.degenerate;
    if (rec.groups) {
      if (rec.groups->c_win) ++acc.wins;
      acc.rel.push_back(rec.groups->relative_difference);
      acc.abs.push_back(rec.groups->absolute_difference);
    }
  }

  // Sorting before summing makes the floating-point result independent of record order.
  auto mean_of = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  };

  for (auto& [key, acc] : groups) {
    AggregateRow row;
    for (const auto& v : key) row.key.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    row.runs = acc.runs;
    row.comparable_runs = acc.rel.size();
    row.degenerate_runs = acc.degenerate;
    row.mean_total_resources = mean_of(acc.total);
    row.n_agents_min = acc.n_min;
    row.n_agents_max = acc.n_max;
    if (!acc.rel.empty()) {
      const double m = static_cast<double>(acc.rel.size());
      row.c_win_rate = static_cast<double>(acc.wins) / m;
      row.mean_relative_difference = mean_of(acc.rel);
      row.mean_absolute_difference = mean_of(acc.abs);
      if (acc.rel.size() > 1) {
        double ss = 0.0;
        for (double x : acc.rel) ss += (x - row.mean_relative_difference) * (x - row.mean_relative_difference);
        row.sd_relative_difference = std::sqrt(ss / (m - 1.0));
      }
    }
    if (acc.n_min != acc.n_max) {
      std::string label;
      for (const auto& k : row.key) label += (label.empty() ? "" : ",") + k;
      result.warnings.push_back("group [" + label + "] pools runs with n_agents from " + std::to_string(acc.n_min) +
                                " to " + std::to_string(acc.n_max));
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_aggregate_csv(std::ostream& out, const AggregateResult& result) {
  for (const auto& field : result.group_by) out << field << ',';
  out << "runs,comparable_runs,degenerate_runs,c_win_rate,mean_relative_difference,sd_relative_difference,"
         "mean_total_resources,mean_absolute_difference,n_agents_min,n_agents_max\n";
  for (const auto& row : result.rows) {
    for (const auto& k : row.key) out << k << ',';
    out << row.runs << ',' << row.comparable_runs << ',' << row.degenerate_runs << ',' << format_number(row.c_win_rate)
        << ',' << format_number(row.mean_relative_difference) << ',' << format_number(row.sd_relative_difference) << ','
        << format_number(row.mean_total_resources) << ',' << format_number(row.mean_absolute_difference) << ','
        << row.n_agents_min << ',' << row.n_agents_max << '\n';
  }
}

}  // namespace gossipsim
