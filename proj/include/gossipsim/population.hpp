#pragma once

#include <vector>

#include "gossipsim/config.hpp"
#include "gossipsim/rng.hpp"
#include "gossipsim/types.hpp"

namespace gossipsim {

struct Population {
  std::vector<AgentState> agents;
  ImageMatrix image;
  ReputationMatrix reputation;

  std::size_t size() const noexcept { return agents.size(); }
  std::size_t count(AgentType t) const;
  double total_resources() const;
};

// Exactly config.defector_count() defectors placed by a seeded shuffle; zeroed
// matrices; every agent holds the endowment. Validates config first.
Population init_population(const SimConfig& config, RngStream& rng);

// Decision-time blend of direct experience and gossip:
//   image_weight * I[i][j] + (1 - image_weight) * R[i][j]
double perception(AgentId i, AgentId j, const ImageMatrix& image, const ReputationMatrix& reputation,
                  double image_weight);

}  // namespace gossipsim
