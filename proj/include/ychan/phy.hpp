#pragma once

// Symbol-level execution of the bi-directional, l-cyclic and uni-directional
// strategies over the diagonalized sub-channels, plus the compute-forward
// rate expressions used to read off DoF slopes.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ychan/allocator.hpp"
#include "ychan/channel.hpp"
#include "ychan/dof.hpp"

namespace ychan {

enum class SimMode { noiseless, awgn };
enum class Constellation { gaussian, qpsk };

std::string to_string(SimMode mode);
std::string to_string(Constellation c);
SimMode parse_sim_mode(std::string_view text);
Constellation parse_constellation(std::string_view text);

struct SimConfig {
  SimMode mode = SimMode::noiseless;
  double rho = 1.0;  // transmit power of every node
  std::uint64_t seed = 0;
  Constellation constellation = Constellation::gaussian;
};

/// One DoF unit of the message on `edge`.
struct StreamKey {
  Edge edge;
  int stream = 0;

  friend auto operator<=>(const StreamKey&, const StreamKey&) = default;
};

using SymbolLoad = std::map<StreamKey, Complex>;

/// d_e unit-power symbols for every edge e. Requires an integral tuple.
SymbolLoad make_symbol_load(const DofTuple& d, Constellation constellation, std::uint64_t seed);

/// Nearest QPSK point (+-1 +-i)/sqrt(2).
Complex slice_qpsk(Complex z);

/// One bundle of a cycle: slot q (0-based) is sub-channel subchannels[q],
/// shared by cycle[q] and cycle[q+1]. symbols[q] is what cycle[q] sends to
/// cycle[q+1 mod l].
struct CycleSlot {
  Cycle cycle;
  std::vector<int> subchannels;
  std::vector<StreamKey> symbols;
};

struct UniSlot {
  Edge edge;
  int subchannel = 0;
  StreamKey symbol;
};

struct Schedule {
  int K = 0;
  int N = 0;
  std::vector<CycleSlot> cycle_slots;
  std::vector<UniSlot> uni_slots;

  std::vector<bool> active() const;  // indexed 0..N-1
};

/// Streams of each edge are handed out to cycles in plan order, then to the
/// uni-directional part. Throws Error(Errc::integrality) without an assignment.
Schedule build_schedule(const AllocationPlan& plan, int N);

struct UplinkSignals {
  std::vector<ComplexVector> u;            // per user, length N
  std::vector<std::vector<double>> zeta;   // per user and sub-channel; 0 where silent
  std::vector<double> gain;                // coefficient of each symbol in the relay's sum
  double scale = 0;                        // common power scaling applied to every user
};

/// Aligns the two symbols sharing each sub-channel so that alpha_a zeta_a =
/// alpha_b zeta_b = min{alpha_a, alpha_b}, then scales all users by one common
/// factor so the most loaded user transmits exactly rho.
UplinkSignals build_uplink_signals(const Schedule& schedule, const SymbolLoad& load, const std::vector<double>& alphas,
                                   double rho);

struct RelaySums {
  ComplexVector sums;  // per sub-channel
  std::vector<bool> active;
};

/// Passes the precoded signals through the uplink matrices and adds CN(0, 1)
/// relay noise in awgn mode. The relay's computed sum is modelled directly.
RelaySums relay_compute(const Schedule& schedule, const UplinkSignals& uplink, const ChannelRealization& ch,
                        const CoderSet& coders, const SimConfig& config);

struct RelayTransmit {
  ComplexVector x;             // relay vector x_r
  std::vector<double> gamma;   // per sub-channel normalization, 0 where inactive
};

/// Equal split: every active sub-channel is sent with power rho / n_active.
RelayTransmit relay_forward(const RelaySums& sums, double rho);

/// y~_i = U_i (D_i x_r + z_i), noise only in awgn mode.
ComplexVector downlink_receive(const ChannelRealization& ch, const CoderSet& coders, int user, const ComplexVector& x,
                               const SimConfig& config);

struct DecodeContext {
  const Schedule& schedule;
  const UplinkSignals& uplink;
  const RelayTransmit& relay;
  const SimConfig& config;
};

/// Symbols of every message addressed to `user`. Cycle bundles are unwound
/// from the user's own slot outward in both directions, cancelling one known
/// symbol per sub-channel. Throws Error(Errc::plan_consistency) if the user's
/// own symbols for a scheduled slot are missing.
SymbolLoad decode_user(int user, const ComplexVector& received, const DecodeContext& ctx, const SymbolLoad& own);

struct SimResult {
  SymbolLoad sent;
  SymbolLoad decoded;
  long long symbol_errors = 0;
  double ser = 0;
  int subchannels_used = 0;
  int delivered_symbols = 0;
  Rational efficiency;  // delivered / used
  double max_abs_error = 0;
  double max_user_power = 0;  // max_i ||x_i||^2
  double relay_power = 0;     // ||x_r||^2
};

/// A decoded symbol counts as an error when it is farther than this from the
/// transmitted one.
inline constexpr double kSymbolTolerance = 1e-6;

/// allocate -> assign sub-channels -> coders -> uplink -> relay -> downlink ->
/// decode, on a channel clamped to min{M, N} relay antennas.
SimResult simulate_round(const DofTuple& d, const ChannelRealization& ch, const SimConfig& config);

struct SweepRow {
  double rho = 0;
  SimMode mode = SimMode::noiseless;
  int K = 0;
  int M = 0;
  int N = 0;
  std::uint64_t seed = 0;
  int delivered = 0;
  int used = 0;
  long long errors = 0;
  double ser = 0;
};

struct SweepSpec {
  int M = 0;
  int N = 0;
  std::vector<double> rhos;
  std::vector<std::uint64_t> seeds;
  SimMode mode = SimMode::awgn;
  Constellation constellation = Constellation::qpsk;
  unsigned threads = 1;
};

/// One round per (rho, seed); the channel and the round both derive from the
/// seed. Rows come back sorted by (rho, seed) regardless of thread count.
std::vector<SweepRow> run_sweep(const DofTuple& d, const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal text for a double.
std::string format_double(double value);

/// min{log2(1/2 + |h1|^2 P), log2(1/2 + |h2|^2 P)}, floored at 0.
double cf_uplink_rate(Complex h1, Complex h2, double P);

/// log2(1 + |d3|^2 P)
double cf_downlink_rate(Complex d3, double P);

/// (R(hi) - R(lo)) / (log2 hi - log2 lo)
double estimate_dof_slope(const std::function<double(double)>& rate, double rho_low, double rho_high);

}  // namespace ychan
