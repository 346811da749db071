#include "gossipsim/regimes.hpp"

#include <numeric>

namespace gossipsim {

RoundPlan plan_round_wellmixed(std::size_t n, RngStream& rng) {
  if (n < 2) throw ContractViolation("well-mixed pairing needs at least two agents");
  RoundPlan plan;
  plan.pairs.reserve(n);
  for (AgentId trustor = 0; trustor < n; ++trustor) {
    AgentId other = rng.uniform_index(n - 1);
    if (other >= trustor) ++other;
    plan.pairs.push_back({trustor, other});
  }
  return plan;
}

GameNetwork generate_game_network(std::size_t n, std::size_t min_degree, RngStream& rng) {
  if (n < 2 || min_degree < 1 || min_degree > n - 1) {
    throw ConfigError("min_degree", "must lie in [1, n - 1] (n = " + std::to_string(n) + ")");
  }
  GameNetwork net(n);
  for (AgentId a = 0; a < n; ++a) {
    while (net.degree(a) < min_degree) {
      AgentId b = rng.uniform_index(n - 1);
      if (b >= a) ++b;
      net.add_edge(a, b);
    }
  }
  return net;
}

RoundPlan plan_round_network(const GameNetwork& net, double neighbor_prob, RngStream& rng) {
  const std::size_t n = net.size();
  RoundPlan plan;
  plan.pairs.reserve(n);
  for (AgentId trustor = 0; trustor < n; ++trustor) {
    const auto& nbrs = net.neighbors(trustor);
    if (nbrs.empty()) throw ContractViolation("trustor " + std::to_string(trustor) + " has no game-network ties");
    const std::size_t outside = n - 1 - nbrs.size();
    const bool pick_neighbor = rng.bernoulli(neighbor_prob) || outside == 0;
    AgentId trustee = 0;
    if (pick_neighbor) {
      trustee = nbrs[rng.uniform_index(nbrs.size())];
    } else {
      // k-th agent that is neither the trustor nor one of its (sorted) neighbors.
      std::size_t k = rng.uniform_index(outside);
      std::size_t skipped_nbrs = 0;
      for (AgentId cand = 0; cand < n; ++cand) {
        if (cand == trustor) continue;
        if (skipped_nbrs < nbrs.size() && nbrs[skipped_nbrs] == cand) {
          ++skipped_nbrs;
          continue;
        }
        if (k == 0) {
          trustee = cand;
          break;
        }
        --k;
      }
    }
    plan.pairs.push_back({trustor, trustee});
  }
  return plan;
}

RewireResult rewire_dynamic(GameNetwork& net, const ImageMatrix& image, const ReputationMatrix& reputation,
                            RngStream& rng) {
  const std::size_t n = net.size();
  std::vector<AgentId> order(n);
  std::iota(order.begin(), order.end(), AgentId{0});
  rng.shuffle(std::span<AgentId>(order));

  RewireResult result;
  for (AgentId agent : order) {
    const auto& nbrs = net.neighbors(agent);
    if (!nbrs.empty()) {
      // Neighbors are sorted, so strict comparisons keep the lowest id on ties.
      AgentId worst = nbrs.front();
      double worst_value = image(agent, worst);
      double best_value = worst_value;
      for (AgentId b : nbrs) {
        const double v = image(agent, b);
        if (v < worst_value) {
          worst_value = v;
          worst = b;
        }
        best_value = std::max(best_value, v);
      }
      if (worst_value < best_value && net.remove_edge(agent, worst)) ++result.drops;
    }

    std::optional<AgentId> best;
    double best_reputation = 0.0;
    for (AgentId b = 0; b < n; ++b) {
      if (b == agent) continue;
      const double r = reputation(agent, b);
      if (r <= 0.0) continue;  // unknown or not in good standing
      if (!best || r > best_reputation) {
        best = b;
        best_reputation = r;
      }
    }
    if (best && net.add_edge(agent, *best)) ++result.adds;
  }

  for (AgentId agent = 0; agent < n; ++agent) {
    if (net.degree(agent) != 0) continue;
    AgentId other = rng.uniform_index(n - 1);
    if (other >= agent) ++other;
    net.add_edge(agent, other);
    ++result.isolate_repairs;
  }
  return result;
}

}  // namespace gossipsim
