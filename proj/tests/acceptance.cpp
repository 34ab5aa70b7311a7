// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "cli.hpp"
#include "oracles.hpp"
#include "ychan/allocator.hpp"
#include "ychan/channel.hpp"
#include "ychan/phy.hpp"
#include "ychan/serialize.hpp"

using namespace ychan;

namespace {

constexpr double kExampleSeconds = 1.0;
constexpr double kPropertySeconds = 60.0;
constexpr int kPropertyTuples = 1000;
constexpr int kChannelSeeds = 100;
constexpr double kDiagonalTolerance = 1e-10;
constexpr double kSlopeTolerance = 0.01;
constexpr double kSlopeLow = 1e6;
constexpr double kSlopeHigh = 1e9;
constexpr int kSweepSeeds = 100;
constexpr double kSerCeiling = 1e-3;

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("threw: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!v.pass) ++failures;
  std::printf("AC%d %s  %s  (%.3f s)%s%s\n", id, v.pass ? "PASS" : "FAIL", title, secs, v.detail.empty() ? "" : "  ",
              v.detail.c_str());
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

struct CliRun {
  int code;
  Json json;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, Json::parse(out.str())};
}

bool conserved(const AllocationPlan& plan, const DofTuple& d) {
  for (const Edge& e : all_edges(d.K())) {
    Rational carried = plan.uni_dof(e);
    for (const auto& a : plan.cycle_alloc)
      for (const Edge& ce : cycle_edges(a.cycle))
        if (ce == e) carried += a.dof;
    if (carried != d[e]) return false;
  }
  return true;
}

Verdict worked_example() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const std::string tuple = dump_dof_tuple(make_tuple3(2, 0, 1, 1, 1, 0));

  const auto check = cli({"check", "--tuple-json", tuple, "--m", "3", "--n", "3"});
  v.require(check.code == 0 && check.json["inside"] == true, "check not inside");
  v.require(check.json["max_lhs"] == "3", "max_lhs " + check.json["max_lhs"].dump());

  const auto alloc = cli({"allocate", "--tuple-json", tuple, "--n", "3"});
  const Json& plan = alloc.json["plan"];
  const Json expected_cycles = Json::parse(R"([{"cycle":[1,2],"dof":"1"},{"cycle":[1,2,3],"dof":"1"}])");
  v.require(alloc.code == 0, "allocate exit " + std::to_string(alloc.code));
  v.require(plan["cycles"] == expected_cycles, "cycles " + plan["cycles"].dump());
  v.require(plan["uni"].empty(), "uni " + plan["uni"].dump());
  v.require(plan["n_s"] == "3", "n_s " + plan["n_s"].dump());

  const auto sim = cli({"simulate", "--tuple-json", tuple, "--m", "3", "--n", "3", "--mode", "noiseless"});
  v.require(sim.code == 0, "simulate exit " + std::to_string(sim.code));
  v.require(sim.json["delivered"] == 5 && sim.json["used"] == 3, "delivered/used " + sim.json["delivered"].dump() +
                                                                     "/" + sim.json["used"].dump());
  v.require(sim.json["errors"] == 0, "errors " + sim.json["errors"].dump());
  v.require(sim.json["delivered"].get<int>() > 3, "no gain over one symbol per sub-channel");

  const double secs = elapsed_since(start);
  v.require(secs < kExampleSeconds, "took " + std::to_string(secs) + " s");
  if (v.pass) v.detail = "inside, max_lhs=3, n_s=3, 5 symbols over 3 sub-channels, 0 errors";
  return v;
}

Verdict four_user_example() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  DofTuple d(4);
  d.set({1, 2}, 3);
  d.set({2, 3}, 2);
  d.set({4, 1}, 2);
  d.set({2, 1}, 1);
  d.set({2, 4}, 1);
  d.set({3, 1}, 1);
  d.set({3, 2}, 1);

  const auto [plan, trace] = allocate(d);
  const auto c = [](std::initializer_list<int> n) { return Cycle::canonicalize(n); };
  const std::vector<std::pair<Cycle, Rational>> expected{
      {c({1, 2}), 1}, {c({2, 3}), 1}, {c({1, 2, 3}), 1}, {c({1, 2, 4}), 1}};
  std::vector<std::pair<Cycle, Rational>> got;
  for (const auto& a : plan.cycle_alloc) got.emplace_back(a.cycle, a.dof);
  v.require(got == expected, "cycle allocation differs");
  v.require(plan.uni_alloc.size() == 1 && plan.uni_dof({4, 1}) == 1, "uni allocation differs");
  v.require(plan.n_s == 7, "n_s " + to_string(plan.n_s));
  const Rational oracle_max = oracle::permutation_max(d);
  v.require(oracle_max == 7, "oracle max " + to_string(oracle_max));
  const auto region = region_contains(d, {4, 7, 7});
  v.require(region.inside && region.max_lhs == 7, "region max_lhs " + to_string(region.max_lhs));
  const auto verdict = verify_plan(plan, d, trace, 7);
  v.require(verdict.ok(), "verify_plan failed");

  const double secs = elapsed_since(start);
  v.require(secs < kExampleSeconds, "took " + std::to_string(secs) + " s");
  if (v.pass) v.detail = "d(1,2)=d(2,3)=d(1,2,3)=d(1,2,4)=1, uni 4->1=1, n_s=7=max_lhs, verified";
  return v;
}

Verdict boundary_properties() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  std::string summary;
  for (int K = 3; K <= 5; ++K) {
    std::mt19937_64 rng(1000 + K);
    std::uniform_int_distribution<int> pick_n(1, 10);
    int over = 0, leaks = 0, mismatched = 0, cyclic = 0;
    for (int t = 0; t < kPropertyTuples; ++t) {
      DofTuple raw(K);
      while (raw.entries().empty()) raw = oracle::random_tuple(K, rng);
      const int N = pick_n(rng);
      const DofTuple d = oracle::scale_to_boundary(raw, N);
      const auto [plan, trace] = allocate(d);
      if (plan.n_s > N) ++over;
      if (!conserved(plan, d)) ++leaks;
      if (subchannels_by_strategy(plan) != subchannels_by_demand(plan)) ++mismatched;
      if (!oracle::topologically_sortable(K, trace.final_residual.weights())) ++cyclic;
    }
    const std::string k = "K=" + std::to_string(K) + ": ";
    v.require(over == 0, k + std::to_string(over) + "/" + std::to_string(kPropertyTuples) + " need n_s > N");
    v.require(leaks == 0, k + std::to_string(leaks) + " conservation failures");
    v.require(mismatched == 0, k + std::to_string(mismatched) + " sub-channel count mismatches");
    v.require(cyclic == 0, k + std::to_string(cyclic) + " cyclic residuals");
    if (!summary.empty()) summary += ", ";
    summary += k + std::to_string(kPropertyTuples - over) + "/" + std::to_string(kPropertyTuples) + " fit";
  }
  const double secs = elapsed_since(start);
  v.require(secs < kPropertySeconds, "took " + std::to_string(secs) + " s");
  v.detail = v.pass ? summary : v.detail + "  [" + summary + "]";
  return v;
}

Verdict symmetric_sum_dof() {
  Verdict v;
  for (auto [K, N] : {std::pair{3, 3}, {4, 6}, {5, 10}}) {
    const auto r = simulate_round(symmetric_tuple(K, N), random_channel(K, N, N, 500 + K), SimConfig{});
    const std::string tag = "(" + std::to_string(K) + "," + std::to_string(N) + ") ";
    v.require(r.delivered_symbols == 2 * N, tag + "delivered " + std::to_string(r.delivered_symbols));
    v.require(r.subchannels_used == N, tag + "used " + std::to_string(r.subchannels_used));
    v.require(r.efficiency == 2, tag + "efficiency " + to_string(r.efficiency));
    v.require(r.symbol_errors == 0, tag + "errors " + std::to_string(r.symbol_errors));
  }
  if (v.pass) v.detail = "2N symbols over N sub-channels, 0 errors, for N=3,6,10";
  return v;
}

Verdict cycle_counts() {
  Verdict v;
  int checked = 0;
  for (int K = 2; K <= 8; ++K)
    for (int l = 2; l <= K; ++l) {
      const auto formula = static_cast<long long>(oracle::factorial(K) / (l * oracle::factorial(K - l)));
      const auto brute = oracle::brute_force_cycles(K, l);
      std::set<std::vector<int>> listed;
      for (const Cycle& c : enumerate_cycles(K, l).cycles) {
        std::vector<int> nodes;
        for (NodeId n : c.nodes()) nodes.push_back(n.index);
        listed.insert(std::move(nodes));
      }
      const std::string tag = "K=" + std::to_string(K) + " l=" + std::to_string(l) + " ";
      v.require(static_cast<long long>(brute.size()) == formula, tag + "brute force disagrees with formula");
      v.require(static_cast<long long>(cycle_count(K, l)) == formula, tag + "cycle_count disagrees");
      v.require(listed == brute, tag + "enumeration differs from brute force");
      ++checked;
    }
  if (v.pass) v.detail = std::to_string(checked) + " (K, l) pairs match";
  return v;
}

Verdict diagonalization() {
  Verdict v;
  double worst_up = 0, worst_down = 0;
  for (auto [M, N] : {std::pair{2, 2}, {4, 3}, {6, 4}}) {
    for (int seed = 0; seed < kChannelSeeds; ++seed) {
      const auto ch = random_channel(3, M, N, static_cast<std::uint64_t>(seed));
      const auto coders = build_coders(ch);
      const ComplexMatrix I = ComplexMatrix::Identity(N, N);
      for (int i = 0; i < ch.K; ++i) {
        worst_up = std::max(worst_up, max_abs_diff(ch.uplink[i] * coders.precoders[i], coders.alphas[i] * I));
        worst_down = std::max(worst_down, max_abs_diff(coders.postcoders[i] * ch.downlink[i], I));
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max|HV-aI| = %.2e, max|UD-I| = %.2e", worst_up, worst_down);
  v.require(worst_up < kDiagonalTolerance && worst_down < kDiagonalTolerance, buf);
  if (v.pass) v.detail = buf;
  return v;
}

Verdict dof_slopes() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0, std::sqrt(0.5));
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const Complex h1 = t ? Complex(n(rng), n(rng)) : Complex(1), h2 = t ? Complex(n(rng), n(rng)) : Complex(1);
    const Complex d3 = t ? Complex(n(rng), n(rng)) : Complex(1);
    const double up = estimate_dof_slope([&](double P) { return cf_uplink_rate(h1, h2, P); }, kSlopeLow, kSlopeHigh);
    const double down = estimate_dof_slope([&](double P) { return cf_downlink_rate(d3, P); }, kSlopeLow, kSlopeHigh);
    worst = std::max({worst, std::abs(up - 1), std::abs(down - 1)});
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |slope - 1| = %.2e over 100 channel draws", worst);
  v.require(worst < kSlopeTolerance, buf);
  if (v.pass) v.detail = buf;
  return v;
}

Verdict awgn_sanity() {
  Verdict v;
  SweepSpec spec;
  spec.M = 3;
  spec.N = 3;
  spec.rhos = {1e2, 1e3, 1e4, 1e5};
  for (int s = 0; s < kSweepSeeds; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
  spec.mode = SimMode::awgn;
  spec.constellation = Constellation::qpsk;
  spec.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto rows = run_sweep(make_tuple3(2, 0, 1, 1, 1, 0), spec);

  std::vector<double> ser;
  for (double rho : spec.rhos) {
    long long errors = 0, sent = 0;
    for (const auto& r : rows)
      if (r.rho == rho) {
        errors += r.errors;
        sent += r.delivered;
      }
    ser.push_back(static_cast<double>(errors) / static_cast<double>(sent));
  }
  std::string curve;
  for (std::size_t k = 0; k < ser.size(); ++k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%g:%.4g", k ? " " : "", spec.rhos[k], ser[k]);
    curve += buf;
  }
  for (std::size_t k = 1; k < ser.size(); ++k) v.require(ser[k] <= ser[k - 1], "SER rises at rho " + format_double(spec.rhos[k]));
  v.require(ser.back() < kSerCeiling, "SER at 1e5 not below 1e-3");
  v.detail = v.pass ? "SER " + curve : v.detail + "  [SER " + curve + "]";
  return v;
}

}  // namespace

int main() {
  report(1, "3-user worked example", worked_example);
  report(2, "4-user example on the region boundary", four_user_example);
  report(3, "boundary tuples fit in N sub-channels (K=3,4,5)", boundary_properties);
  report(4, "symmetric tuple reaches sum-DoF 2N", symmetric_sum_dof);
  report(5, "cycle-count law up to K=8", cycle_counts);
  report(6, "channel diagonalization residuals", diagonalization);
  report(7, "compute-forward DoF slopes", dof_slopes);
  report(8, "AWGN QPSK error rate", awgn_sanity);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
