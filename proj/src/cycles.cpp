#include "ychan/cycles.hpp"

#include <algorithm>
#include <set>

#include "ychan/error.hpp"

namespace ychan {

std::string to_string(const Edge& e) {
  return std::to_string(e.from.index) + "->" + std::to_string(e.to.index);
}

Cycle Cycle::canonicalize(std::vector<NodeId> nodes) {
  if (nodes.size() < 2) throw Error(Errc::invalid_cycle, "a cycle needs at least two nodes");
  std::set<NodeId> seen(nodes.begin(), nodes.end());
  if (seen.size() != nodes.size()) throw Error(Errc::invalid_cycle, "repeated node in cycle");
  std::rotate(nodes.begin(), std::min_element(nodes.begin(), nodes.end()), nodes.end());
  return Cycle(std::move(nodes));
}

Cycle Cycle::canonicalize(std::initializer_list<int> nodes) {
  std::vector<NodeId> ids;
  ids.reserve(nodes.size());
  for (int n : nodes) ids.emplace_back(n);
  return canonicalize(std::move(ids));
}

std::optional<std::size_t> Cycle::position(NodeId node) const {
  const auto it = std::find(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool Cycle::contains(const Edge& e) const {
  const auto p = position(e.from);
  return p && nodes_[(*p + 1) % nodes_.size()] == e.to;
}

std::string to_string(const Cycle& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.length(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i].index);
  }
  return out + ")";
}

std::size_t cycle_count(int K, int length) {
  if (length < 2 || length > K) throw Error(Errc::range, "cycle length must lie in [2, K]");
  std::size_t falling = 1;
  for (int i = 0; i < length; ++i) falling *= static_cast<std::size_t>(K - i);
  return falling / static_cast<std::size_t>(length);
}

CycleSet enumerate_cycles(int K, int length) {
  if (length < 2 || length > K)
    throw Error(Errc::range, "cycle length " + std::to_string(length) + " outside [2, " + std::to_string(K) + "]");

  CycleSet set{K, length, {}};
  set.cycles.reserve(cycle_count(K, length));

  // Canonical cycles start at their minimum; extend depth-first with larger
  // ids in ascending order, which yields lexicographic output directly.
  std::vector<NodeId> path;
  std::vector<bool> used(static_cast<std::size_t>(K) + 1, false);
  auto extend = [&](auto&& self) -> void {
    if (static_cast<int>(path.size()) == length) {
      set.cycles.push_back(Cycle::canonicalize(path));
      return;
    }
    for (int v = path.front().index + 1; v <= K; ++v) {
      if (used[v]) continue;
      used[v] = true;
      path.emplace_back(v);
      self(self);
      path.pop_back();
      used[v] = false;
    }
  };
  for (int first = 1; first + length - 1 <= K; ++first) {
    path.assign(1, NodeId(first));
    extend(extend);
  }
  return set;
}

std::vector<Edge> cycle_edges(const Cycle& c) {
  std::vector<Edge> edges;
  edges.reserve(c.length());
  for (std::size_t i = 0; i < c.length(); ++i) edges.emplace_back(c[i], c[(i + 1) % c.length()]);
  return edges;
}

std::vector<Edge> all_edges(int K) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(K) * static_cast<std::size_t>(std::max(K - 1, 0)));
  for (int i = 1; i <= K; ++i)
    for (int j = 1; j <= K; ++j)
      if (i != j) edges.emplace_back(i, j);
  return edges;
}

WeightedDigraph::WeightedDigraph(int K) : K_(K) {
  if (K < 2) throw Error(Errc::range, "graph needs K >= 2");
}

Rational WeightedDigraph::weight(const Edge& e) const {
  const auto it = weights_.find(e);
  return it == weights_.end() ? Rational(0) : it->second;
}

void WeightedDigraph::set_weight(const Edge& e, Rational w) {
  if (e.from == e.to || e.from.index < 1 || e.to.index < 1 || e.from.index > K_ || e.to.index > K_)
    throw Error(Errc::range, "edge " + to_string(e) + " invalid for K=" + std::to_string(K_));
  if (w < 0) throw Error(Errc::range, "negative weight on edge " + to_string(e));
  if (w == 0)
    weights_.erase(e);
  else
    weights_[e] = std::move(w);
}

std::optional<Cycle> find_cycle(const WeightedDigraph& g) {
  const int K = g.K();
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(K) + 1);
  for (const auto& [e, w] : g.weights()) succ[e.from.index].push_back(e.to.index);  // map order: ascending

  enum class Mark { unvisited, on_stack, done };
  std::vector<Mark> mark(static_cast<std::size_t>(K) + 1, Mark::unvisited);
  std::vector<int> stack;
  std::optional<Cycle> found;

  auto visit = [&](auto&& self, int v) -> bool {
    mark[v] = Mark::on_stack;
    stack.push_back(v);
    for (int w : succ[v]) {
      if (mark[w] == Mark::on_stack) {
        const auto from = std::find(stack.begin(), stack.end(), w);
        std::vector<NodeId> nodes;
        for (auto it = from; it != stack.end(); ++it) nodes.emplace_back(*it);
        found = Cycle::canonicalize(std::move(nodes));
        return true;
      }
      if (mark[w] == Mark::unvisited && self(self, w)) return true;
    }
    stack.pop_back();
    mark[v] = Mark::done;
    return false;
  };

  for (int v = 1; v <= K; ++v)
    if (mark[v] == Mark::unvisited && visit(visit, v)) break;
  return found;
}

}  // namespace ychan
