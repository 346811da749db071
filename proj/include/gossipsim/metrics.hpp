#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gossipsim/config.hpp"
#include "gossipsim/population.hpp"

namespace gossipsim {

enum class Phase { BurnIn, Main };

struct RoundStats {
  std::size_t round = 0;  // 0-based over all executed rounds
  Phase phase = Phase::Main;
  std::size_t trustor_cooperations = 0;
  double total_resources = 0.0;
  std::size_t tie_changes = 0;
  std::size_t isolate_repairs = 0;
  std::size_t gossip_transmissions = 0;
  std::size_t gossip_declines = 0;
  std::size_t gossip_pieces = 0;
};

// Group statistics exist only when both types are present.
struct GroupStats {
  double mean_c = 0.0;
  double mean_d = 0.0;
  double relative_difference = 0.0;  // (mean_c - mean_d) / sd_all, 0 for degenerate runs
  double absolute_difference = 0.0;
  bool c_win = false;
};

struct RunRecord {
  SimConfig config;
  std::vector<AgentType> agent_types;
  std::vector<double> final_resources;
  double mean_all = 0.0;
  double sd_all = 0.0;  // population standard deviation
  double total_resources = 0.0;
  bool degenerate = false;  // sd_all == 0
  std::optional<GroupStats> groups;
  // Counted since accounting started (after burn-in when resources are reset).
  std::size_t trustor_cooperations = 0;
  std::size_t gossip_transmissions = 0;
  std::size_t gossip_declines = 0;
  std::vector<RoundStats> rounds;
};

// Terminal indicators over the population's resources. Run bookkeeping fields
// (cooperation counts, rounds) are left for the caller.
RunRecord summarize(const Population& population, const SimConfig& config);

nlohmann::ordered_json to_json(const RunRecord& record);
// Compact single-line JSON; byte-identical for identical records.
std::string to_json_line(const RunRecord& record);

struct AggregateRow {
  std::vector<std::string> key;  // one value per group_by field, JSON-rendered
  std::size_t runs = 0;
  std::size_t comparable_runs = 0;  // runs with both types present
  std::size_t degenerate_runs = 0;
  double c_win_rate = 0.0;
  double mean_relative_difference = 0.0;
  double sd_relative_difference = 0.0;  // sample SD across runs
  double mean_total_resources = 0.0;
  double mean_absolute_difference = 0.0;
  std::size_t n_agents_min = 0;
  std::size_t n_agents_max = 0;
};

struct AggregateResult {
  std::vector<std::string> group_by;
  std::vector<AggregateRow> rows;  // sorted by key
  std::vector<std::string> warnings;
};

// Condition-level summaries. group_by names SimConfig JSON keys; unknown names
// are ConfigErrors. Mixed n_agents within a group is a warning.
AggregateResult aggregate(const std::vector<RunRecord>& records, const std::vector<std::string>& group_by);

// Columns: <group_by...>,runs,comparable_runs,degenerate_runs,c_win_rate,
// mean_relative_difference,sd_relative_difference,mean_total_resources,
// mean_absolute_difference,n_agents_min,n_agents_max
void write_aggregate_csv(std::ostream& out, const AggregateResult& result);

}  // namespace gossipsim
