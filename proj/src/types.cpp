#include "gossipsim/types.hpp"

namespace gossipsim {

namespace {

template <class Vec, class Key>
auto lower_bound_by_id(Vec& v, Key id) {
  return std::lower_bound(v.begin(), v.end(), id, [](const auto& entry, Key key) { return entry.first < key; });
}

}  // namespace

void SignedNetwork::add_edge(AgentId a, AgentId b, TieSign sign) {
  if (a >= size() || b >= size()) throw ContractViolation("signed edge endpoint out of range");
  if (a == b) throw ContractViolation("signed network cannot contain self-loops");
  if (has_edge(a, b)) throw ContractViolation("signed network already has an edge between the pair");
  auto& ra = adjacency_[a];
  ra.insert(lower_bound_by_id(ra, b), {b, sign});
  auto& rb = adjacency_[b];
  rb.insert(lower_bound_by_id(rb, a), {a, sign});
  edges_.push_back({std::min(a, b), std::max(a, b), sign});
}

std::optional<TieSign> SignedNetwork::relation(AgentId a, AgentId b) const {
  const auto& ra = adjacency_[a];
  auto it = lower_bound_by_id(ra, b);
  if (it == ra.end() || it->first != b) return std::nullopt;
  return it->second;
}

bool GameNetwork::add_edge(AgentId a, AgentId b) {
  if (a >= size() || b >= size()) throw ContractViolation("game edge endpoint out of range");
  if (a == b) throw ContractViolation("game network cannot contain self-loops");
  auto& ra = adjacency_[a];
  auto it = std::lower_bound(ra.begin(), ra.end(), b);
  if (it != ra.end() && *it == b) return false;
  ra.insert(it, b);
  auto& rb = adjacency_[b];
  rb.insert(std::lower_bound(rb.begin(), rb.end(), a), a);
  return true;
}

bool GameNetwork::remove_edge(AgentId a, AgentId b) {
  auto& ra = adjacency_[a];
  auto it = std::lower_bound(ra.begin(), ra.end(), b);
  if (it == ra.end() || *it != b) return false;
  ra.erase(it);
  auto& rb = adjacency_[b];
  rb.erase(std::lower_bound(rb.begin(), rb.end(), a));
  return true;
}

bool GameNetwork::has_edge(AgentId a, AgentId b) const {
  const auto& ra = adjacency_[a];
  return std::binary_search(ra.begin(), ra.end(), b);
}

std::size_t GameNetwork::edge_count() const {
  std::size_t twice = 0;
  for (const auto& r : adjacency_) twice += r.size();
  return twice / 2;
}

std::size_t GameNetwork::isolate_count() const {
  return static_cast<std::size_t>(
      std::count_if(adjacency_.begin(), adjacency_.end(), [](const auto& r) { return r.empty(); }));
}

std::vector<std::pair<AgentId, AgentId>> GameNetwork::edges() const {
  std::vector<std::pair<AgentId, AgentId>> out;
  for (AgentId a = 0; a < adjacency_.size(); ++a) {
    for (AgentId b : adjacency_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

}  // namespace gossipsim
