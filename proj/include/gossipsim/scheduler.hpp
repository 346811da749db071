#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "gossipsim/config.hpp"
#include "gossipsim/gossip.hpp"
#include "gossipsim/metrics.hpp"
#include "gossipsim/population.hpp"
#include "gossipsim/regimes.hpp"

namespace gossipsim {

struct Clock {
  std::size_t step = 0;         // main-phase gossip steps elapsed
  std::size_t burnin_steps = 0;  // gossip steps elapsed during burn-in
  std::size_t round = 0;        // rounds completed, burn-in included
  Phase phase = Phase::BurnIn;
};

// Everything a run mutates. Observers get read-only views of it.
struct SimState {
  SimConfig config;
  Population population;
  std::shared_ptr<const SignedNetwork> signed_network;
  std::shared_ptr<const TriadicTable> table;
  std::optional<GameNetwork> game_network;
  Clock clock;
  std::size_t accounted_cooperations = 0;  // trustor cooperations since resources were last reset
};

class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_gossip_step(const SimState&, const GossipPiece&, const StepResult&) {}
  virtual void on_parallel_update(const SimState&) {}
  virtual void on_rewire(const SimState&, const RewireResult&) {}
  // After the round's game, gossip block and rewiring.
  virtual void on_round_end(const SimState&, const RoundStats&) {}
};

// Inputs that may be shared read-only between runs (loaded once per sweep).
struct RunInputs {
  std::shared_ptr<const SignedNetwork> signed_network;  // null: synthesize per run
  std::shared_ptr<const TriadicTable> table;            // null: built-in default
};

// Loads the files named in config. Throws ConfigError if the network size does
// not match n_agents.
RunInputs resolve_inputs(const SimConfig& config);

// Executes burnin_rounds + tg_rounds rounds. Each round: plan pairs, play them,
// run the gossip block (steps_per_round steps, or one parallel update), rewire
// in the dynamic regime. Resources reset to the endowment once burn-in ends.
RunRecord run_simulation(const SimConfig& config);
RunRecord run_simulation(const SimConfig& config, const RunInputs& inputs, RunObserver* observer = nullptr);

// Writes one JSON line per round (round, phase, resources, tie_changes, gossip
// counts) and, when a directory is given, the game network after every round.
class SnapshotWriter : public RunObserver {
 public:
  explicit SnapshotWriter(std::ostream& out, std::string network_dir = {});
  void on_round_end(const SimState& state, const RoundStats& stats) override;

 private:
  std::ostream& out_;
  std::string network_dir_;
};

}  // namespace gossipsim
