#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

namespace gossipsim {

// Action-rule repertoires.
//   I   conditional cooperation, ALLD defectors
//   II  I plus blind reciprocity by cooperators
//   III II plus leniency periods for both types
enum class ActionRule { I, II, III };

enum class Regime { WellMixed, StaticNetwork, DynamicNetwork };

enum class GossipMechanism { Parallel, Simple, Triadic };

// Which observers enter the parallel-gossip mean: those with a non-zero image
// of the target, or every other agent.
enum class ParallelAverage { Informed, All };

std::string_view to_string(ActionRule r);
std::string_view to_string(Regime r);
std::string_view to_string(GossipMechanism m);
ActionRule parse_action_rule(std::string_view s);
Regime parse_regime(std::string_view s);
GossipMechanism parse_gossip_mechanism(std::string_view s);
std::string_view to_string(ParallelAverage a);
ParallelAverage parse_parallel_average(std::string_view s);

struct SimConfig {
  std::size_t n_agents = 16;
  double endowment = 20.0;
  double defector_fraction = 0.25;
  double cooperation_threshold = 0.0;
  ActionRule action_rule = ActionRule::I;
  Regime regime = Regime::WellMixed;
  GossipMechanism gossip_mechanism = GossipMechanism::Triadic;
  ParallelAverage parallel_average = ParallelAverage::Informed;
  double omega = 0.3;
  double image_weight = 0.5;
  double multiplier = 3.0;
  double stake = 5.0;
  double return_fraction = 0.5;
  double image_step = 0.1;
  std::size_t total_steps = 1000;
  std::size_t tg_rounds = 10;
  std::size_t burnin_rounds = 2;
  std::size_t gossip_budget = 10;
  // Unset means total_steps / (tg_rounds * gossip_budget).
  std::optional<std::size_t> piece_lifespan;
  double neighbor_play_prob = 0.95;
  std::size_t min_degree = 3;
  int leniency_length = 3;
  std::uint64_t seed = 1;
  std::optional<std::string> triadic_table_path;
  // Without a file a synthetic signed network is drawn per run from these densities.
  std::optional<std::string> signed_network_path;
  double signed_pos_density = 0.3;
  double signed_neg_density = 0.1;
  // When false, burn-in rounds only delay accounting instead of resetting resources.
  bool reset_resources_after_burnin = true;
  // Permits single-type populations (control runs).
  bool allow_degenerate = false;

  std::size_t defector_count() const;
  std::size_t steps_per_round() const { return tg_rounds == 0 ? 0 : total_steps / tg_rounds; }
  std::size_t effective_piece_lifespan() const;
  bool uses_gossip_network() const { return gossip_mechanism != GossipMechanism::Parallel; }
  bool uses_game_network() const { return regime != Regime::WellMixed; }
};

// Throws ConfigError naming the first violated field.
void validate(const SimConfig& config);

// Flat JSON. Unknown keys and wrongly typed values are ConfigErrors.
nlohmann::ordered_json to_json(const SimConfig& config);
SimConfig config_from_json(const nlohmann::json& doc);
// Applies the keys present in `overrides` on top of `base`.
SimConfig apply_overrides(const SimConfig& base, const nlohmann::json& overrides);

SimConfig load_config(const std::string& path);

// Parses "key=value"; value is read as JSON when possible, otherwise as a string.
std::pair<std::string, nlohmann::json> parse_assignment(std::string_view assignment);

}  // namespace gossipsim
