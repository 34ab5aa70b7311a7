#pragma once

// Greedy cycle-resolution allocator. Cycles are resolved shortest first
// (2-cycles, then 3-cycles, ...), each taking the minimum residual demand
// along its edges; whatever is left goes to uni-directional transmission.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ychan/cycles.hpp"
#include "ychan/dof.hpp"
#include "ychan/rational.hpp"

namespace ychan {

struct CycleAllocation {
  Cycle cycle;
  Rational dof;  // d_c: streams each user of the cycle sends along it
};

/// Concrete 1-based sub-channel indices. A cycle of length l gets d_c bundles
/// of l-1 consecutive indices; bundle slot q carries users q and q+1 of the cycle.
struct SubchannelAssignment {
  std::vector<std::pair<Cycle, std::vector<std::vector<int>>>> cycle_bundles;
  std::map<Edge, std::vector<int>> uni_subchannels;
};

struct AllocationPlan {
  explicit AllocationPlan(int K) : demand(K) {}

  DofTuple demand;
  std::vector<CycleAllocation> cycle_alloc;  // positive entries, processing order
  std::map<Edge, Rational> uni_alloc;        // positive entries
  Rational n_s;
  std::optional<SubchannelAssignment> assignment;

  int K() const noexcept { return demand.K(); }
  Rational cycle_dof(const Cycle& c) const;
  Rational uni_dof(const Edge& e) const;
};

struct TraceStep {
  Cycle cycle;
  Rational dof;
  Edge bottleneck;  // first edge in traversal order attaining the minimum
  WeightedDigraph residual;
};

/// Steps with d_c > 0 only; zero-allocation cycles leave the residual unchanged.
struct ResidualTrace {
  std::vector<TraceStep> steps;
  WeightedDigraph final_residual;
};

struct Allocation {
  AllocationPlan plan;
  ResidualTrace trace;
};

/// Total over any input; feasibility is checked by verify_plan.
Allocation allocate(const DofTuple& d);

/// sum_c (l(c) - 1) d_c + sum_e d^u_e
Rational subchannels_by_strategy(const AllocationPlan& plan);
/// sum_e d_e - sum_c d_c
Rational subchannels_by_demand(const AllocationPlan& plan);

/// Both counts; throws Error(Errc::invariant_violation) if they differ.
Rational required_subchannels(const AllocationPlan& plan);

/// Throws Error(Errc::integrality) for fractional allocations and
/// Error(Errc::capacity) when n_s > N.
AllocationPlan assign_subchannels(const AllocationPlan& plan, int N);

struct PlanVerdict {
  bool conservation = true;
  bool identity = true;
  bool residual_nonnegative = true;
  bool acyclic = true;
  bool capacity = true;
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
};

PlanVerdict verify_plan(const AllocationPlan& plan, const DofTuple& d, const ResidualTrace& trace, int N);

}  // namespace ychan
