#pragma once

#include <cstddef>

#include "gossipsim/rng.hpp"
#include "gossipsim/trust_game.hpp"
#include "gossipsim/types.hpp"

namespace gossipsim {

// Each trustor's trustee drawn uniformly from the other n - 1 agents.
RoundPlan plan_round_wellmixed(std::size_t n, RngStream& rng);

// Agents in id order draw uniformly random partners, rejecting existing ties,
// until each has at least `min_degree` partners.
GameNetwork generate_game_network(std::size_t n, std::size_t min_degree, RngStream& rng);

// With probability `neighbor_prob` the trustee is a uniform neighbor, otherwise a
// uniform non-neighbor. Agents adjacent to everyone always pick a neighbor.
// Throws ContractViolation if the network has an isolate.
RoundPlan plan_round_network(const GameNetwork& net, double neighbor_prob, RngStream& rng);

struct RewireResult {
  std::size_t drops = 0;
  std::size_t adds = 0;
  std::size_t isolate_repairs = 0;

  // Ties changed by the drop/add pass, bounded by 2N. Isolate repairs are reported separately.
  std::size_t tie_changes() const noexcept { return drops + adds; }
};

// One partner-selection pass after a round. Agents, in a seeded random order,
// drop their worst-imaged neighbor (only when it is strictly worse than their best
// neighbor) and tie to the best-reputed agent they have heard of
// (highest positive gossip reputation, lowest id on ties). Afterwards each
// isolate links to a uniformly random other agent.
RewireResult rewire_dynamic(GameNetwork& net, const ImageMatrix& image, const ReputationMatrix& reputation,
                            RngStream& rng);

}  // namespace gossipsim
