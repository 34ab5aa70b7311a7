#pragma once

// DoF demand tuples and membership tests for the permutation-bound region,
// the general outer bound, and the per-user cut-set bounds.

#include <map>
#include <vector>

#include "ychan/cycles.hpp"
#include "ychan/rational.hpp"

namespace ychan {

/// Demand d_ij per directed user pair, stored sparsely (absent = 0).
class DofTuple {
 public:
  explicit DofTuple(int K) : graph_(K) {}

  int K() const noexcept { return graph_.K(); }
  Rational operator[](const Edge& e) const { return graph_.weight(e); }
  void set(const Edge& e, Rational value) { graph_.set_weight(e, std::move(value)); }

  /// Nonzero entries sorted by edge.
  const std::map<Edge, Rational>& entries() const noexcept { return graph_.weights(); }
  const WeightedDigraph& as_graph() const noexcept { return graph_; }

  bool all_integral() const;

  friend bool operator==(const DofTuple&, const DofTuple&) = default;

 private:
  WeightedDigraph graph_;
};

/// Builds a K=3 tuple from (d12, d13, d21, d23, d31, d32).
DofTuple make_tuple3(const Rational& d12, const Rational& d13, const Rational& d21, const Rational& d23,
                     const Rational& d31, const Rational& d32);

struct RegionParams {
  int K = 0;
  int M = 0;  // antennas per user
  int N = 0;  // relay antennas
};

using Permutation = std::vector<NodeId>;

struct RegionVerdict {
  bool inside = false;
  std::vector<Permutation> binding_permutations;  // first max_listed maximizers, in scan order
  std::size_t binding_count = 0;                  // all maximizers
  Rational max_lhs;
};

struct RegionOptions {
  int max_users = 10;  // K! permutations are scanned
  std::size_t max_listed = 4096;
};

/// Largest value of sum_{i<j} d[p_i -> p_j] over all orderings p, with every
/// maximizing ordering. Throws Error(Errc::complexity_guard) above the cap.
RegionVerdict permutation_bound(const DofTuple& d, const Rational& bound, const RegionOptions& options = {});

/// Membership in the region for N <= M.
/// Throws Error(Errc::regime) when N > M, Error(Errc::range) on a K mismatch.
RegionVerdict region_contains(const DofTuple& d, const RegionParams& p, const RegionOptions& options = {});

/// Permutation bound at min{N, (K-1)M} plus per-user cut-set bounds at min{M, N}.
bool general_outer_bound_contains(const DofTuple& d, const RegionParams& p, const RegionOptions& options = {});

Rational sum_dof(const DofTuple& d);

/// Every component equal to 2N / (K(K-1)).
DofTuple symmetric_tuple(int K, int N);

}  // namespace ychan
