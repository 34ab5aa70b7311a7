#pragma once

// Directed cycles of the K-node message-flow graph: canonical forms,
// enumeration by length, edge sets, and acyclicity of weighted digraphs.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ychan/rational.hpp"

namespace ychan {

/// 1-based user index.
struct NodeId {
  int index = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(int i) : index(i) {}

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Directed user pair: the message from `from` to `to`.
struct Edge {
  NodeId from;
  NodeId to;

  constexpr Edge() = default;
  constexpr Edge(NodeId f, NodeId t) : from(f), to(t) {}
  constexpr Edge(int f, int t) : from(f), to(t) {}

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// "i->j"
std::string to_string(const Edge& e);

class Cycle {
 public:
  /// Rotates `nodes` so the smallest id comes first.
  /// Throws Error(Errc::invalid_cycle) on duplicates or fewer than two nodes.
  static Cycle canonicalize(std::vector<NodeId> nodes);
  static Cycle canonicalize(std::initializer_list<int> nodes);

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  std::size_t length() const noexcept { return nodes_.size(); }
  NodeId operator[](std::size_t i) const { return nodes_[i]; }

  /// Position of `node` in the canonical rotation, if it is on the cycle.
  std::optional<std::size_t> position(NodeId node) const;

  bool contains(const Edge& e) const;

  friend auto operator<=>(const Cycle&, const Cycle&) = default;
  friend bool operator==(const Cycle&, const Cycle&) = default;

 private:
  explicit Cycle(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {}
  std::vector<NodeId> nodes_;
};

/// "(1,2,3)"
std::string to_string(const Cycle& c);

/// Every distinct cycle of one length, lexicographic by canonical node list.
struct CycleSet {
  int K = 0;
  int length = 0;
  std::vector<Cycle> cycles;
};

/// Throws Error(Errc::range) unless 2 <= length <= K.
CycleSet enumerate_cycles(int K, int length);

/// K!/(length * (K - length)!)
std::size_t cycle_count(int K, int length);

/// Edges in traversal order: c1c2, c2c3, ..., c_l c1.
std::vector<Edge> cycle_edges(const Cycle& c);

/// All K(K-1) ordered pairs, sorted lexicographically.
std::vector<Edge> all_edges(int K);

class WeightedDigraph {
 public:
  explicit WeightedDigraph(int K);

  int K() const noexcept { return K_; }

  /// Absent edges weigh zero.
  Rational weight(const Edge& e) const;

  /// Throws Error(Errc::range) for negative weights or edges outside 1..K.
  void set_weight(const Edge& e, Rational w);

  bool present(const Edge& e) const { return weight(e) > 0; }

  /// Positive-weight entries only, sorted by edge.
  const std::map<Edge, Rational>& weights() const noexcept { return weights_; }

  friend bool operator==(const WeightedDigraph&, const WeightedDigraph&) = default;

 private:
  int K_;
  std::map<Edge, Rational> weights_;
};

/// Some directed cycle among positive-weight edges, or nullopt if acyclic.
/// DFS from nodes 1..K with successors in ascending order; the first back edge
/// defines the cycle.
std::optional<Cycle> find_cycle(const WeightedDigraph& g);

}  // namespace ychan
