#include "gossipsim/population.hpp"

#include <algorithm>
#include <numeric>

namespace gossipsim {

std::size_t Population::count(AgentType t) const {
  return static_cast<std::size_t>(std::count_if(agents.begin(), agents.end(), [t](const AgentState& a) { return a.type == t; }));
}

double Population::total_resources() const {
  double total = 0.0;
  for (const auto& a : agents) total += a.resources;
  return total;
}

Population init_population(const SimConfig& config, RngStream& rng) {
  validate(config);
  const std::size_t n = config.n_agents;

  std::vector<AgentType> types(n, AgentType::Cooperator);
  std::fill_n(types.begin(), config.defector_count(), AgentType::Defector);
  rng.shuffle(std::span<AgentType>(types));

  Population pop;
  pop.agents.reserve(n);
  for (AgentId id = 0; id < n; ++id) {
    AgentState a;
    a.id = id;
    a.type = types[id];
    a.resources = config.endowment;
    if (config.action_rule == ActionRule::III) {
      if (a.type == AgentType::Cooperator) {
        a.forgiveness_remaining.assign(n, config.leniency_length);
        a.forgiveness_remaining[id] = 0;
      } else {
        a.kindness_remaining = config.leniency_length;
      }
    }
    pop.agents.push_back(std::move(a));
  }
  pop.image = ImageMatrix(n);
  pop.reputation = ReputationMatrix(n);
  return pop;
}

double perception(AgentId i, AgentId j, const ImageMatrix& image, const ReputationMatrix& reputation,
                  double image_weight) {
  if (i == j) throw ContractViolation("perception of oneself is undefined");
  return image_weight * image(i, j) + (1.0 - image_weight) * reputation(i, j);
}

}  // namespace gossipsim
