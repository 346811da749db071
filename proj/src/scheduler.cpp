#include "gossipsim/scheduler.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "gossipsim/io.hpp"
#include "gossipsim/trust_game.hpp"

namespace gossipsim {

namespace {

std::shared_ptr<const TriadicTable> default_table_ptr() {
  static const auto table = std::make_shared<const TriadicTable>(TriadicTable::default_table());
  return table;
}

void run_gossip_block(SimState& state, RngStream& rng, RunObserver* observer, RoundStats& stats) {
  const SimConfig& cfg = state.config;
  if (cfg.gossip_mechanism == GossipMechanism::Parallel) {
    state.population.reputation = parallel_update(state.population.image, cfg.parallel_average);
    if (observer) observer->on_parallel_update(state);
    return;
  }

  const std::size_t lifespan = cfg.effective_piece_lifespan();
  auto pieces = emit_pieces(state.population.image, *state.signed_network, cfg.gossip_budget, lifespan, rng);
  stats.gossip_pieces = pieces.size();
  const bool triadic = cfg.gossip_mechanism == GossipMechanism::Triadic;
  for (GossipPiece& piece : pieces) {
    while (piece.steps_remaining > 0) {
      const StepResult r = triadic ? triadic_step(piece, *state.signed_network, *state.table, state.population.reputation,
                                                  cfg.omega, rng)
                                   : simple_step(piece, *state.signed_network, state.population.reputation, cfg.omega, rng);
      if (!r.interacted) break;
      if (r.transmitted) {
        ++stats.gossip_transmissions;
      } else {
        ++stats.gossip_declines;
      }
      if (observer) observer->on_gossip_step(state, piece, r);
    }
  }
}

}  // namespace

RunInputs resolve_inputs(const SimConfig& config) {
  RunInputs inputs;
  if (config.signed_network_path) {
    auto loaded = load_signed_network(*config.signed_network_path);
    if (loaded.network.size() != config.n_agents) {
      throw ConfigError("n_agents", "signed network '" + *config.signed_network_path + "' has " +
                                        std::to_string(loaded.network.size()) + " nodes, config says " +
                                        std::to_string(config.n_agents));
    }
    inputs.signed_network = std::make_shared<const SignedNetwork>(std::move(loaded.network));
  }
  if (config.triadic_table_path) {
    inputs.table = std::make_shared<const TriadicTable>(load_triadic_table(*config.triadic_table_path));
  }
  return inputs;
}

RunRecord run_simulation(const SimConfig& config) { return run_simulation(config, resolve_inputs(config)); }

RunRecord run_simulation(const SimConfig& config, const RunInputs& inputs, RunObserver* observer) {
  validate(config);
  const RngStream base(config.seed, "run");
  RngStream population_rng = base.derive("population");
  RngStream pairing_rng = base.derive("pairing");
  RngStream gossip_rng = base.derive("gossip");
  RngStream rewire_rng = base.derive("rewire");

  SimState state;
  state.config = config;
  state.population = init_population(config, population_rng);
  state.table = inputs.table ? inputs.table : default_table_ptr();
  if (inputs.signed_network) {
    if (inputs.signed_network->size() != config.n_agents) {
      throw ConfigError("n_agents", "signed network size does not match n_agents");
    }
    state.signed_network = inputs.signed_network;
  } else {
    RngStream net_rng = base.derive("signed-network");
    state.signed_network = std::make_shared<const SignedNetwork>(
        generate_signed_network(config.n_agents, config.signed_pos_density, config.signed_neg_density, net_rng));
  }
  if (config.uses_game_network()) {
    RngStream game_rng = base.derive("game-network");
    state.game_network = generate_game_network(config.n_agents, config.min_degree, game_rng);
  }

  RunRecord record;
  std::vector<RoundStats> rounds;
  const std::size_t total_rounds = config.burnin_rounds + config.tg_rounds;
  rounds.reserve(total_rounds);
  std::size_t transmissions = 0;
  std::size_t declines = 0;

  for (std::size_t r = 0; r < total_rounds; ++r) {
    state.clock.phase = r < config.burnin_rounds ? Phase::BurnIn : Phase::Main;
    if (r == config.burnin_rounds && config.burnin_rounds > 0 && config.reset_resources_after_burnin) {
      for (auto& a : state.population.agents) a.resources = config.endowment;
      state.accounted_cooperations = 0;
    }

    RoundStats stats;
    stats.round = r;
    stats.phase = state.clock.phase;

    const RoundPlan plan = state.game_network
                               ? plan_round_network(*state.game_network, config.neighbor_play_prob, pairing_rng)
                               : plan_round_wellmixed(config.n_agents, pairing_rng);
    const RoundOutcome outcome = play_round(plan, state.population, config);
    stats.trustor_cooperations = outcome.trustor_cooperations;
    state.accounted_cooperations += outcome.trustor_cooperations;

    run_gossip_block(state, gossip_rng, observer, stats);
    if (state.clock.phase == Phase::Main) {
      state.clock.step += config.steps_per_round();
    } else {
      state.clock.burnin_steps += config.steps_per_round();
    }

    if (config.regime == Regime::DynamicNetwork) {
      const RewireResult rw = rewire_dynamic(*state.game_network, state.population.image, state.population.reputation,
                                             rewire_rng);
      stats.tie_changes = rw.tie_changes();
      stats.isolate_repairs = rw.isolate_repairs;
      if (observer) observer->on_rewire(state, rw);
    }

    stats.total_resources = state.population.total_resources();
    transmissions += stats.gossip_transmissions;
    declines += stats.gossip_declines;
    ++state.clock.round;
    if (observer) observer->on_round_end(state, stats);
    rounds.push_back(stats);
  }

  record = summarize(state.population, config);
  record.trustor_cooperations = state.accounted_cooperations;
  record.gossip_transmissions = transmissions;
  record.gossip_declines = declines;
  record.rounds = std::move(rounds);
  return record;
}

SnapshotWriter::SnapshotWriter(std::ostream& out, std::string network_dir)
    : out_(out), network_dir_(std::move(network_dir)) {}

void SnapshotWriter::on_round_end(const SimState& state, const RoundStats& stats) {
  nlohmann::ordered_json j;
  j["round"] = stats.round;
  j["phase"] = stats.phase == Phase::BurnIn ? "burn_in" : "main";
  std::vector<double> resources;
  resources.reserve(state.population.size());
  for (const auto& a : state.population.agents) resources.push_back(a.resources);
  j["resources"] = resources;
  j["trustor_cooperations"] = stats.trustor_cooperations;
  j["tie_changes"] = stats.tie_changes;
  j["isolate_repairs"] = stats.isolate_repairs;
  j["gossip_pieces"] = stats.gossip_pieces;
  j["gossip_transmissions"] = stats.gossip_transmissions;
  j["gossip_declines"] = stats.gossip_declines;
  out_ << j.dump() << '\n';

  if (!network_dir_.empty() && state.game_network) {
    std::ostringstream name;
    name << network_dir_ << "/game_network_round_" << std::setw(4) << std::setfill('0') << stats.round << ".csv";
    std::ostringstream body;
    write_game_network(body, *state.game_network);
    atomic_write(name.str(), body.str());
  }
}

}  // namespace gossipsim
