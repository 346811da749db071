#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gossipsim/config.hpp"
#include "gossipsim/rng.hpp"
#include "gossipsim/types.hpp"

namespace gossipsim {

enum class Valence { PositiveOrNeutral, Negative };

// Relation of a triad member to the gossip target.
enum class TargetRelation { Positive, Negative, Absent };

struct TriadConfig {
  TieSign sender_receiver = TieSign::Positive;
  TargetRelation sender_target = TargetRelation::Absent;
  TargetRelation receiver_target = TargetRelation::Absent;
  Valence valence = Valence::PositiveOrNeutral;

  bool operator==(const TriadConfig&) const = default;
};

// Same spelling as the CSV columns, e.g. "sr=+ st=- rt=0 valence=neg".
std::string describe(const TriadConfig& c);

// Transmission rule for all 2 x 3 x 3 x 2 = 36 triad/valence configurations.
class TriadicTable {
 public:
  static constexpr std::size_t kEntries = 36;

  // The shipped rule set: friends pass on good news unless either of them
  // dislikes the target; bad news travels over friendly ties to receivers who are
  // not the target's friends, and between common enemies of the target regardless
  // of how sender and receiver get along.
  static TriadicTable default_table();
  static TriadicTable all_yes();

  bool transmits(const TriadConfig& c) const { return entries_[index(c)]; }
  void set(const TriadConfig& c, bool transmit) { entries_[index(c)] = transmit; }

  static std::size_t index(const TriadConfig& c);
  static TriadConfig config_at(std::size_t index);

  // 16 hex digits over the 36 decisions in index order.
  std::string checksum() const;

  // Human-readable warnings for cells that break the inhibition heuristic
  // (negative gossip passed to a friend of the target).
  std::vector<std::string> lint() const;

  bool operator==(const TriadicTable&) const = default;

 private:
  std::array<bool, kEntries> entries_{};
};

// CSV with header sr_sign,st_rel,rt_rel,valence,transmit.
//   sr_sign  + | -
//   st_rel   + | - | 0      (0: no tie)
//   rt_rel   + | - | 0
//   valence  pos | neg
//   transmit 1 | 0 | yes | no | true | false
// Blank lines and lines starting with '#' are ignored. Every configuration must
// appear exactly once.
TriadicTable parse_triadic_table(std::istream& in, const std::string& source);
TriadicTable load_triadic_table(const std::string& path);
void write_triadic_table(std::ostream& out, const TriadicTable& table);

struct GossipPiece {
  AgentId target = 0;
  double payload = 0.0;
  AgentId originator = 0;
  Valence valence = Valence::PositiveOrNeutral;
  std::size_t steps_remaining = 0;
  // Informed agents that may still have someone to tell, in the order they joined.
  std::vector<AgentId> frontier;
  std::vector<AgentId> informed;

  bool is_informed(AgentId a) const;
};

// Everyone's reputation of j (diagonal included) becomes the mean image of j
// held by the other agents. With Informed, agents whose image of j is still 0
// are left out; nobody informed gives 0.
ReputationMatrix parallel_update(const ImageMatrix& image, ParallelAverage mode = ParallelAverage::Informed);

// Up to `budget` pieces. Each originator is drawn uniformly among agents with a
// signed tie and at least one non-zero image entry; its target uniformly among
// those entries. No such agent means no pieces.
std::vector<GossipPiece> emit_pieces(const ImageMatrix& image, const SignedNetwork& net, std::size_t budget,
                                     std::size_t lifespan, RngStream& rng);

struct StepResult {
  bool interacted = false;   // a sender/receiver pair was found
  bool transmitted = false;  // receiver accepted and updated R
  std::optional<TriadConfig> triad;
};

// One dyadic gossip interaction. Sender uniform over frontier members with an
// uninformed, non-target neighbor; receiver uniform among those neighbors. On
// transmission R[r][target] <- (1 - omega) R[r][target] + omega * payload.
// A step is consumed either way; with no eligible pair the piece ends
// (steps_remaining = 0) and nothing else changes.
StepResult triadic_step(GossipPiece& piece, const SignedNetwork& net, const TriadicTable& table,
                        ReputationMatrix& reputation, double omega, RngStream& rng);

// As triadic_step, transmitting over every tie.
StepResult simple_step(GossipPiece& piece, const SignedNetwork& net, ReputationMatrix& reputation, double omega,
                       RngStream& rng);

}  // namespace gossipsim
