#pragma once

#include <string>
#include <vector>

#include "gossipsim/population.hpp"

namespace testing_helpers {

using namespace gossipsim;

// Population with the given types ("CCD" ...), equal endowment and rule-III counters.
inline Population make_population(const std::string& types, double endowment = 20.0, int leniency = 3) {
  Population pop;
  const std::size_t n = types.size();
  pop.image = ImageMatrix(n);
  pop.reputation = ReputationMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    AgentState a;
    a.id = i;
    a.type = types[i] == 'D' ? AgentType::Defector : AgentType::Cooperator;
    a.resources = endowment;
    a.forgiveness_remaining.assign(n, leniency);
    a.kindness_remaining = 3;
    pop.agents.push_back(a);
  }
  return pop;
}

inline double binomial_sigma(double trials, double p) { return std::sqrt(trials * p * (1.0 - p)); }

}  // namespace testing_helpers
