#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gossipsim {

using AgentId = std::size_t;

// Raised for invalid user-facing configuration; field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Raised when a caller breaks a documented precondition (programming error).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed input file content. line() is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a semantic rule (duplicates, missing rows, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AgentType { Cooperator, Defector };

inline char to_char(AgentType t) { return t == AgentType::Cooperator ? 'C' : 'D'; }

struct AgentState {
  AgentId id = 0;
  AgentType type = AgentType::Cooperator;
  double resources = 0.0;
  // Rule III leniency. Cooperators hold one counter per partner, defectors a single one.
  std::vector<int> forgiveness_remaining;
  int kindness_remaining = 0;
};

// Dense N x N store with every entry kept inside [-1, 1].
template <class Tag>
class BoundedMatrix {
 public:
  BoundedMatrix() = default;
  explicit BoundedMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }

  double operator()(AgentId i, AgentId j) const { return data_[i * n_ + j]; }

  void set(AgentId i, AgentId j, double value) { data_[i * n_ + j] = std::clamp(value, -1.0, 1.0); }

  std::span<const double> row(AgentId i) const { return {data_.data() + i * n_, n_}; }
  std::span<const double> values() const noexcept { return data_; }

  bool operator==(const BoundedMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

using ImageMatrix = BoundedMatrix<struct ImageTag>;
using ReputationMatrix = BoundedMatrix<struct ReputationTag>;

enum class TieSign : std::int8_t { Negative = -1, Positive = 1 };

struct SignedEdge {
  AgentId a = 0;
  AgentId b = 0;
  TieSign sign = TieSign::Positive;

  bool operator==(const SignedEdge&) const = default;
};

// Undirected friendship/antipathy graph that gossip travels on.
class SignedNetwork {
 public:
  SignedNetwork() = default;
  explicit SignedNetwork(std::size_t n) : adjacency_(n) {}

  std::size_t size() const noexcept { return adjacency_.size(); }

  // Throws ContractViolation on self-loops, out-of-range ids or a pair already present.
  void add_edge(AgentId a, AgentId b, TieSign sign);

  std::optional<TieSign> relation(AgentId a, AgentId b) const;
  bool has_edge(AgentId a, AgentId b) const { return relation(a, b).has_value(); }

  // Neighbors sorted by id, with the sign of the connecting tie.
  const std::vector<std::pair<AgentId, TieSign>>& neighbors(AgentId a) const { return adjacency_[a]; }
  std::size_t degree(AgentId a) const { return adjacency_[a].size(); }

  // Edges in insertion order with a < b.
  const std::vector<SignedEdge>& edges() const noexcept { return edges_; }

 private:
  std::vector<std::vector<std::pair<AgentId, TieSign>>> adjacency_;
  std::vector<SignedEdge> edges_;
};

// Unsigned Trust Game interaction graph.
class GameNetwork {
 public:
  GameNetwork() = default;
  explicit GameNetwork(std::size_t n) : adjacency_(n) {}

  std::size_t size() const noexcept { return adjacency_.size(); }

  // Both return false when nothing changed.
  bool add_edge(AgentId a, AgentId b);
  bool remove_edge(AgentId a, AgentId b);

  bool has_edge(AgentId a, AgentId b) const;
  const std::vector<AgentId>& neighbors(AgentId a) const { return adjacency_[a]; }
  std::size_t degree(AgentId a) const { return adjacency_[a].size(); }
  std::size_t edge_count() const;
  std::size_t isolate_count() const;

  // Sorted (a, b) pairs with a < b.
  std::vector<std::pair<AgentId, AgentId>> edges() const;

  bool operator==(const GameNetwork&) const = default;

 private:
  std::vector<std::vector<AgentId>> adjacency_;
};

}  // namespace gossipsim
