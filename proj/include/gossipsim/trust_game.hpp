#pragma once

#include <vector>

#include "gossipsim/config.hpp"
#include "gossipsim/population.hpp"
#include "gossipsim/types.hpp"

namespace gossipsim {

struct TgOutcome {
  AgentId trustor = 0;
  AgentId trustee = 0;
  bool trustor_cooperated = false;
  bool trustee_returned = false;
  double trustor_delta = 0.0;
  double trustee_delta = 0.0;
};

struct PayoffParams {
  double stake = 5.0;
  double multiplier = 3.0;
  double return_fraction = 0.5;
};

struct Pairing {
  AgentId trustor = 0;
  AgentId trustee = 0;

  bool operator==(const Pairing&) const = default;
};

// One pairing per agent as trustor, in trustor id order.
struct RoundPlan {
  std::vector<Pairing> pairs;
};

// Trustor move. Consumes a rule-III leniency counter when it is the reason to cooperate.
bool decide_trustor(AgentState& agent, AgentId partner, double perceived, double threshold, ActionRule rule);

// Trustee move; only defined after the trustor cooperated.
bool decide_trustee(AgentState& agent, AgentId partner, bool trustor_cooperated, double perceived, double threshold,
                    ActionRule rule);

// Resource deltas of one interaction. A trustor holding less than the stake is
// recorded as defecting regardless of its decision.
TgOutcome apply_payoffs(const AgentState& trustor, const AgentState& trustee, bool trustor_cooperates,
                        bool trustee_returns, const PayoffParams& params);

// Image bookkeeping for one interaction. Both parties' views move by +/- step, clamped.
void update_images(ImageMatrix& image, const TgOutcome& outcome, double step);

struct RoundOutcome {
  std::vector<TgOutcome> interactions;
  std::size_t trustor_cooperations = 0;
};

// Plays a full round simultaneously: decisions read the round-start matrices and
// resources, then payoffs and image updates are applied in plan order.
RoundOutcome play_round(const RoundPlan& plan, Population& population, const SimConfig& config);

}  // namespace gossipsim
