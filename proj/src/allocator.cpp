#include "ychan/allocator.hpp"

#include <algorithm>

#include "ychan/error.hpp"

namespace ychan {

Rational AllocationPlan::cycle_dof(const Cycle& c) const {
  const auto it = std::find_if(cycle_alloc.begin(), cycle_alloc.end(),
                               [&](const CycleAllocation& a) { return a.cycle == c; });
  return it == cycle_alloc.end() ? Rational(0) : it->dof;
}

Rational AllocationPlan::uni_dof(const Edge& e) const {
  const auto it = uni_alloc.find(e);
  return it == uni_alloc.end() ? Rational(0) : it->second;
}

Allocation allocate(const DofTuple& d) {
  const int K = d.K();
  WeightedDigraph residual = d.as_graph();
  AllocationPlan plan(K);
  plan.demand = d;
  std::vector<TraceStep> steps;

  for (int length = 2; length <= K; ++length) {
    for (const Cycle& c : enumerate_cycles(K, length).cycles) {
      const auto edges = cycle_edges(c);
      const Edge* bottleneck = &edges.front();
      Rational least = residual.weight(edges.front());
      for (const Edge& e : edges) {
        const Rational w = residual.weight(e);
        if (w < least) {
          least = w;
          bottleneck = &e;
        }
      }
      if (least == 0) continue;
      for (const Edge& e : edges) residual.set_weight(e, residual.weight(e) - least);
      plan.cycle_alloc.push_back({c, least});
      steps.push_back({c, least, *bottleneck, residual});
    }
  }

  plan.uni_alloc = residual.weights();
  plan.n_s = subchannels_by_strategy(plan);
  return {std::move(plan), {std::move(steps), std::move(residual)}};
}

Rational subchannels_by_strategy(const AllocationPlan& plan) {
  Rational total = 0;
  for (const auto& a : plan.cycle_alloc) total += static_cast<long long>(a.cycle.length() - 1) * a.dof;
  for (const auto& [e, v] : plan.uni_alloc) total += v;
  return total;
}

Rational subchannels_by_demand(const AllocationPlan& plan) {
  Rational total = sum_dof(plan.demand);
  for (const auto& a : plan.cycle_alloc) total -= a.dof;
  return total;
}

Rational required_subchannels(const AllocationPlan& plan) {
  const Rational by_strategy = subchannels_by_strategy(plan);
  const Rational by_demand = subchannels_by_demand(plan);
  if (by_strategy != by_demand)
    throw Error(Errc::invariant_violation, "sub-channel counts disagree: " + to_string(by_strategy) + " by strategy vs " +
                                               to_string(by_demand) + " by demand");
  return by_strategy;
}

AllocationPlan assign_subchannels(const AllocationPlan& plan, int N) {
  for (const auto& a : plan.cycle_alloc)
    if (!is_integer(a.dof))
      throw Error(Errc::integrality, "cycle " + to_string(a.cycle) + " has fractional allocation " + to_string(a.dof));
  for (const auto& [e, v] : plan.uni_alloc)
    if (!is_integer(v))
      throw Error(Errc::integrality, "edge " + to_string(e) + " has fractional allocation " + to_string(v));

  const Rational needed = required_subchannels(plan);
  if (needed > N)
    throw Error(Errc::capacity, "plan needs " + to_string(needed) + " sub-channels but only " + std::to_string(N) +
                                    " are available");

  SubchannelAssignment assignment;
  int next = 1;
  for (const auto& a : plan.cycle_alloc) {
    const long long bundles = to_integer(a.dof);
    const auto width = static_cast<int>(a.cycle.length()) - 1;
    std::vector<std::vector<int>> list;
    list.reserve(static_cast<std::size_t>(bundles));
    for (long long b = 0; b < bundles; ++b) {
      std::vector<int> bundle(static_cast<std::size_t>(width));
      for (int& s : bundle) s = next++;
      list.push_back(std::move(bundle));
    }
    assignment.cycle_bundles.emplace_back(a.cycle, std::move(list));
  }
  for (const auto& [e, v] : plan.uni_alloc) {
    std::vector<int> slots(static_cast<std::size_t>(to_integer(v)));
    for (int& s : slots) s = next++;
    assignment.uni_subchannels.emplace(e, std::move(slots));
  }

  AllocationPlan out = plan;
  out.assignment = std::move(assignment);
  return out;
}

PlanVerdict verify_plan(const AllocationPlan& plan, const DofTuple& d, const ResidualTrace& trace, int N) {
  PlanVerdict v;

  for (const Edge& e : all_edges(d.K())) {
    Rational carried = plan.uni_dof(e);
    for (const auto& a : plan.cycle_alloc)
      if (a.cycle.contains(e)) carried += a.dof;
    if (carried != d[e]) {
      v.conservation = false;
      v.failures.push_back("conservation: edge " + to_string(e) + " carries " + to_string(carried) + " of demand " +
                           to_string(d[e]));
    }
  }

  const Rational by_strategy = subchannels_by_strategy(plan);
  const Rational by_demand = subchannels_by_demand(plan);
  if (by_strategy != by_demand || plan.n_s != by_strategy) {
    v.identity = false;
    v.failures.push_back("identity: n_s " + to_string(plan.n_s) + ", by strategy " + to_string(by_strategy) +
                         ", by demand " + to_string(by_demand));
  }

  // WeightedDigraph rejects negative weights on construction, so a negative
  // residual can only surface as a mismatch between the trace and the plan.
  for (const auto& step : trace.steps) {
    if (step.dof < 0) {
      v.residual_nonnegative = false;
      v.failures.push_back("residual: negative allocation on " + to_string(step.cycle));
    }
  }
  if (trace.final_residual.weights() != plan.uni_alloc) {
    v.residual_nonnegative = false;
    v.failures.push_back("residual: final residual differs from uni-directional allocation");
  }

  if (const auto c = find_cycle(trace.final_residual)) {
    v.acyclic = false;
    v.failures.push_back("acyclicity: final residual still contains " + to_string(*c));
  }

  if (plan.n_s > N) {
    v.capacity = false;
    v.failures.push_back("capacity: n_s = " + to_string(plan.n_s) + " exceeds N = " + std::to_string(N));
  }
  return v;
}

}  // namespace ychan
