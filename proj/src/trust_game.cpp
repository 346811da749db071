#include "gossipsim/trust_game.hpp"

namespace gossipsim {

bool decide_trustor(AgentState& agent, AgentId partner, double perceived, double threshold, ActionRule rule) {
  if (agent.type == AgentType::Defector) {
    if (rule != ActionRule::III || agent.kindness_remaining <= 0) return false;
    --agent.kindness_remaining;
    return true;
  }
  if (perceived >= threshold) return true;
  if (rule == ActionRule::III && partner < agent.forgiveness_remaining.size() &&
      agent.forgiveness_remaining[partner] > 0) {
    --agent.forgiveness_remaining[partner];
    return true;
  }
  return false;
}

bool decide_trustee(AgentState& agent, AgentId /*partner*/, bool trustor_cooperated, double perceived, double threshold,
                    ActionRule rule) {
  if (!trustor_cooperated) throw ContractViolation("trustee decision requested after trustor defection");
  if (agent.type == AgentType::Defector) {
    if (rule != ActionRule::III || agent.kindness_remaining <= 0) return false;
    --agent.kindness_remaining;
    return true;
  }
  if (rule == ActionRule::I) return perceived >= threshold;
  return true;
}

TgOutcome apply_payoffs(const AgentState& trustor, const AgentState& trustee, bool trustor_cooperates,
                        bool trustee_returns, const PayoffParams& params) {
  TgOutcome out;
  out.trustor = trustor.id;
  out.trustee = trustee.id;
  out.trustor_cooperated = trustor_cooperates && trustor.resources >= params.stake;
  if (!out.trustor_cooperated) return out;

  const double transferred = params.multiplier * params.stake;
  out.trustee_returned = trustee_returns;
  if (trustee_returns) {
    const double returned = params.return_fraction * transferred;
    out.trustor_delta = -params.stake + returned;
    out.trustee_delta = transferred - returned;
  } else {
    out.trustor_delta = -params.stake;
    out.trustee_delta = transferred;
  }
  return out;
}

void update_images(ImageMatrix& image, const TgOutcome& o, double step) {
  const double toward_trustor = o.trustor_cooperated ? step : -step;
  image.set(o.trustee, o.trustor, image(o.trustee, o.trustor) + toward_trustor);
  if (o.trustor_cooperated) {
    const double toward_trustee = o.trustee_returned ? step : -step;
    image.set(o.trustor, o.trustee, image(o.trustor, o.trustee) + toward_trustee);
  }
}

RoundOutcome play_round(const RoundPlan& plan, Population& population, const SimConfig& config) {
  const PayoffParams params{config.stake, config.multiplier, config.return_fraction};
  const ActionRule rule = config.action_rule;
  const double threshold = config.cooperation_threshold;

  RoundOutcome result;
  result.interactions.reserve(plan.pairs.size());
  for (const Pairing& pair : plan.pairs) {
    if (pair.trustor == pair.trustee) throw ContractViolation("agent paired with itself");
    AgentState& trustor = population.agents[pair.trustor];
    AgentState& trustee = population.agents[pair.trustee];

    // Resources are only settled after the loop, so this is round-start wealth.
    bool cooperates = false;
    if (trustor.resources >= params.stake) {
      const double p = perception(pair.trustor, pair.trustee, population.image, population.reputation, config.image_weight);
      cooperates = decide_trustor(trustor, pair.trustee, p, threshold, rule);
    }
    bool returns = false;
    if (cooperates) {
      const double p = perception(pair.trustee, pair.trustor, population.image, population.reputation, config.image_weight);
      returns = decide_trustee(trustee, pair.trustor, true, p, threshold, rule);
    }
    TgOutcome o = apply_payoffs(trustor, trustee, cooperates, returns, params);
    if (o.trustor_cooperated) ++result.trustor_cooperations;
    result.interactions.push_back(o);
  }

  for (const TgOutcome& o : result.interactions) {
    population.agents[o.trustor].resources += o.trustor_delta;
    population.agents[o.trustee].resources += o.trustee_delta;
    update_images(population.image, o, config.image_step);
  }
  return result;
}

}  // namespace gossipsim
