#include "ychan/phy.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "ychan/error.hpp"

namespace ychan {

namespace {

// Independent generator per purpose, all derived from the round seed.
enum Stream : std::uint32_t { kSymbols = 1, kRelayNoise = 2, kUserNoise = 3 };

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint32_t stream, std::uint32_t sub = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream, sub};
  return std::mt19937_64(seq);
}

Complex circular_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  const double re = component(rng);
  const double im = component(rng);
  return {re, im};
}

const Complex& symbol_at(const SymbolLoad& load, const StreamKey& key) {
  const auto it = load.find(key);
  if (it == load.end())
    throw Error(Errc::plan_consistency,
                "no symbol for stream " + std::to_string(key.stream) + " of edge " + to_string(key.edge));
  return it->second;
}

void check_subchannel(int s, int N) {
  if (s < 1 || s > N)
    throw Error(Errc::capacity, "sub-channel " + std::to_string(s) + " outside 1.." + std::to_string(N));
}

}  // namespace

std::string to_string(SimMode mode) { return mode == SimMode::noiseless ? "noiseless" : "awgn"; }
std::string to_string(Constellation c) { return c == Constellation::gaussian ? "gaussian" : "qpsk"; }

SimMode parse_sim_mode(std::string_view text) {
  if (text == "noiseless") return SimMode::noiseless;
  if (text == "awgn") return SimMode::awgn;
  throw Error(Errc::parse, "unknown mode '" + std::string(text) + "'");
}

Constellation parse_constellation(std::string_view text) {
  if (text == "gaussian") return Constellation::gaussian;
  if (text == "qpsk") return Constellation::qpsk;
  throw Error(Errc::parse, "unknown constellation '" + std::string(text) + "'");
}

SymbolLoad make_symbol_load(const DofTuple& d, Constellation constellation, std::uint64_t seed) {
  if (!d.all_integral()) throw Error(Errc::integrality, "symbol-level simulation needs an integral tuple");
  auto rng = stream_rng(seed, kSymbols);
  std::bernoulli_distribution bit(0.5);
  const double a = 1.0 / std::sqrt(2.0);
  SymbolLoad load;
  for (const auto& [e, v] : d.entries()) {
    const long long count = to_integer(v);
    for (long long k = 0; k < count; ++k) {
      Complex sym;
      if (constellation == Constellation::gaussian) {
        sym = circular_gaussian(rng);
      } else {
        const bool re = bit(rng);
        const bool im = bit(rng);
        sym = Complex(re ? a : -a, im ? a : -a);
      }
      load.emplace(StreamKey{e, static_cast<int>(k)}, sym);
    }
  }
  return load;
}

Complex slice_qpsk(Complex z) {
  const double a = 1.0 / std::sqrt(2.0);
  return {z.real() >= 0 ? a : -a, z.imag() >= 0 ? a : -a};
}

std::vector<bool> Schedule::active() const {
  std::vector<bool> mask(static_cast<std::size_t>(N), false);
  for (const auto& slot : cycle_slots)
    for (int s : slot.subchannels) mask[s - 1] = true;
  for (const auto& slot : uni_slots) mask[slot.subchannel - 1] = true;
  return mask;
}

Schedule build_schedule(const AllocationPlan& plan, int N) {
  if (!plan.assignment) throw Error(Errc::integrality, "plan has no sub-channel assignment");

  Schedule schedule{plan.K(), N, {}, {}};
  std::map<Edge, int> next_stream;
  for (const auto& [cycle, bundles] : plan.assignment->cycle_bundles) {
    const auto edges = cycle_edges(cycle);
    for (const auto& bundle : bundles) {
      if (bundle.size() + 1 != cycle.length())
        throw Error(Errc::plan_consistency, "bundle width does not match cycle " + to_string(cycle));
      CycleSlot slot{cycle, bundle, {}};
      for (int s : bundle) check_subchannel(s, N);
      for (const Edge& e : edges) slot.symbols.push_back({e, next_stream[e]++});
      schedule.cycle_slots.push_back(std::move(slot));
    }
  }
  for (const auto& [edge, subchannels] : plan.assignment->uni_subchannels) {
    for (int s : subchannels) {
      check_subchannel(s, N);
      schedule.uni_slots.push_back({edge, s, {edge, next_stream[edge]++}});
    }
  }
  return schedule;
}

UplinkSignals build_uplink_signals(const Schedule& schedule, const SymbolLoad& load, const std::vector<double>& alphas,
                                   double rho) {
  const int K = schedule.K;
  const int N = schedule.N;
  if (static_cast<int>(alphas.size()) != K) throw Error(Errc::plan_consistency, "one alpha per user required");

  UplinkSignals out;
  out.u.assign(static_cast<std::size_t>(K), ComplexVector::Zero(N));
  out.zeta.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(N), 0.0));
  out.gain.assign(static_cast<std::size_t>(N), 0.0);
  std::vector<bool> taken(static_cast<std::size_t>(N), false);

  auto claim = [&](int s) {
    if (taken[s - 1]) throw Error(Errc::plan_consistency, "sub-channel " + std::to_string(s) + " assigned twice");
    taken[s - 1] = true;
  };
  auto place = [&](NodeId user, int s, double zeta, const Complex& sym) {
    out.u[user.index - 1](s - 1) = zeta * sym;
    out.zeta[user.index - 1][s - 1] = zeta;
  };

  for (const auto& slot : schedule.cycle_slots) {
    for (std::size_t q = 0; q < slot.subchannels.size(); ++q) {
      const int s = slot.subchannels[q];
      claim(s);
      const NodeId a = slot.cycle[q];
      const NodeId b = slot.cycle[q + 1];
      const double alpha_a = alphas[a.index - 1];
      const double alpha_b = alphas[b.index - 1];
      const double aligned = std::min(alpha_a, alpha_b);
      place(a, s, aligned / alpha_a, symbol_at(load, slot.symbols[q]));
      place(b, s, aligned / alpha_b, symbol_at(load, slot.symbols[q + 1]));
      out.gain[s - 1] = aligned;
    }
  }
  for (const auto& slot : schedule.uni_slots) {
    claim(slot.subchannel);
    place(slot.edge.from, slot.subchannel, 1.0, symbol_at(load, slot.symbol));
    out.gain[slot.subchannel - 1] = alphas[slot.edge.from.index - 1];
  }

  double peak = 0;
  for (const auto& u : out.u) peak = std::max(peak, u.squaredNorm());
  out.scale = peak > 0 ? std::sqrt(rho / peak) : 1.0;
  for (auto& u : out.u) u *= out.scale;
  for (double& g : out.gain) g *= out.scale;
  return out;
}

RelaySums relay_compute(const Schedule& schedule, const UplinkSignals& uplink, const ChannelRealization& ch,
                        const CoderSet& coders, const SimConfig& config) {
  RelaySums out{ComplexVector::Zero(ch.N), schedule.active()};
  for (int i = 0; i < ch.K; ++i) out.sums += ch.uplink[i] * (coders.precoders[i] * uplink.u[i]);
  if (config.mode == SimMode::awgn) {
    auto rng = stream_rng(config.seed, kRelayNoise);
    for (int s = 0; s < ch.N; ++s) out.sums(s) += circular_gaussian(rng);
  }
  return out;
}

RelayTransmit relay_forward(const RelaySums& sums, double rho) {
  const auto n = sums.sums.size();
  RelayTransmit out{ComplexVector::Zero(n), std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  const auto active = std::count(sums.active.begin(), sums.active.end(), true);
  if (active == 0) return out;
  const double amplitude = std::sqrt(rho / static_cast<double>(active));
  for (Eigen::Index s = 0; s < n; ++s) {
    if (!sums.active[s]) continue;
    const double magnitude = std::abs(sums.sums(s));
    out.gamma[s] = magnitude > 0 ? amplitude / magnitude : amplitude;
    out.x(s) = out.gamma[s] * sums.sums(s);
  }
  return out;
}

ComplexVector downlink_receive(const ChannelRealization& ch, const CoderSet& coders, int user, const ComplexVector& x,
                               const SimConfig& config) {
  ComplexVector y = ch.downlink[user - 1] * x;
  if (config.mode == SimMode::awgn) {
    auto rng = stream_rng(config.seed, kUserNoise, static_cast<std::uint32_t>(user));
    for (Eigen::Index m = 0; m < y.size(); ++m) y(m) += circular_gaussian(rng);
  }
  return coders.postcoders[user - 1] * y;
}

SymbolLoad decode_user(int user, const ComplexVector& received, const DecodeContext& ctx, const SymbolLoad& own) {
  const NodeId me(user);
  const bool slicing = ctx.config.mode == SimMode::awgn && ctx.config.constellation == Constellation::qpsk;
  auto estimate = [&](Complex z) { return slicing ? slice_qpsk(z) : z; };
  // Received sample rescaled to the plain symbol sum of its sub-channel.
  auto observe = [&](int s) {
    const double g = ctx.relay.gamma[s - 1] * ctx.uplink.gain[s - 1];
    if (g == 0) throw Error(Errc::plan_consistency, "sub-channel " + std::to_string(s) + " carries no gain");
    return received(s - 1) / g;
  };

  SymbolLoad decoded;
  for (const auto& slot : ctx.schedule.cycle_slots) {
    const auto pos = slot.cycle.position(me);
    if (!pos) continue;
    const std::size_t l = slot.cycle.length();
    const std::size_t p = *pos;
    if (slot.symbols[p].edge.from != me)
      throw Error(Errc::plan_consistency, "user " + std::to_string(user) + " does not send slot " + std::to_string(p) +
                                              " of " + to_string(slot.cycle));

    std::vector<Complex> known(l);
    known[p] = symbol_at(own, slot.symbols[p]);
    for (std::size_t q = p; q + 1 < l; ++q) known[q + 1] = estimate(observe(slot.subchannels[q]) - known[q]);
    for (std::size_t q = p; q-- > 0;) known[q] = estimate(observe(slot.subchannels[q]) - known[q + 1]);

    const std::size_t from = (p + l - 1) % l;
    decoded[slot.symbols[from]] = known[from];
  }
  for (const auto& slot : ctx.schedule.uni_slots) {
    if (slot.edge.to != me) continue;
    decoded[slot.symbol] = estimate(observe(slot.subchannel));
  }
  return decoded;
}

SimResult simulate_round(const DofTuple& d, const ChannelRealization& ch_in, const SimConfig& config) {
  if (!d.all_integral()) throw Error(Errc::integrality, "symbol-level simulation needs an integral tuple");
  if (d.K() != ch_in.K) throw Error(Errc::range, "tuple and channel disagree on K");
  if (!(config.rho > 0)) throw Error(Errc::range, "rho must be positive");

  const ChannelRealization ch = clamp_antennas(ch_in);
  const auto allocation = allocate(d);
  const AllocationPlan plan = assign_subchannels(allocation.plan, ch.N);
  const CoderSet coders = build_coders(ch);
  const Schedule schedule = build_schedule(plan, ch.N);

  SimResult result;
  result.sent = make_symbol_load(d, config.constellation, config.seed);
  const UplinkSignals uplink = build_uplink_signals(schedule, result.sent, coders.alphas, config.rho);
  const RelaySums sums = relay_compute(schedule, uplink, ch, coders, config);
  const RelayTransmit relay = relay_forward(sums, config.rho);
  const DecodeContext ctx{schedule, uplink, relay, config};

  for (int i = 1; i <= ch.K; ++i) {
    result.max_user_power = std::max(result.max_user_power, (coders.precoders[i - 1] * uplink.u[i - 1]).squaredNorm());
    SymbolLoad own;
    for (const auto& [key, sym] : result.sent)
      if (key.edge.from.index == i) own.emplace(key, sym);
    const ComplexVector received = downlink_receive(ch, coders, i, relay.x, config);
    result.decoded.merge(decode_user(i, received, ctx, own));
  }
  result.relay_power = relay.x.squaredNorm();

  for (const auto& [key, sym] : result.sent) {
    const auto it = result.decoded.find(key);
    if (it == result.decoded.end())
      throw Error(Errc::plan_consistency, "stream of edge " + to_string(key.edge) + " was never decoded");
    const double err = std::abs(it->second - sym);
    result.max_abs_error = std::max(result.max_abs_error, err);
    if (err > kSymbolTolerance) ++result.symbol_errors;
  }
  result.delivered_symbols = static_cast<int>(result.sent.size());
  result.subchannels_used = static_cast<int>(to_integer(plan.n_s));
  result.ser = result.delivered_symbols ? static_cast<double>(result.symbol_errors) / result.delivered_symbols : 0.0;
  result.efficiency =
      result.subchannels_used ? Rational(result.delivered_symbols, result.subchannels_used) : Rational(0);
  return result;
}

std::vector<SweepRow> run_sweep(const DofTuple& d, const SweepSpec& spec) {
  struct Point {
    double rho;
    std::uint64_t seed;
  };
  std::vector<Point> grid;
  for (double rho : spec.rhos)
    for (std::uint64_t seed : spec.seeds) grid.push_back({rho, seed});
  std::sort(grid.begin(), grid.end(),
            [](const Point& a, const Point& b) { return a.rho != b.rho ? a.rho < b.rho : a.seed < b.seed; });

  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      try {
        const auto ch = random_channel(d.K(), spec.M, spec.N, grid[k].seed);
        const SimConfig config{spec.mode, grid[k].rho, grid[k].seed, spec.constellation};
        const SimResult r = simulate_round(d, ch, config);
        rows[k] = {grid[k].rho, spec.mode, d.K(), spec.M, spec.N, grid[k].seed,
                   r.delivered_symbols, r.subchannels_used, r.symbol_errors, r.ser};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = grid.size();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(grid.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "rho,mode,K,M,N,seed,delivered,used,errors,ser\n";
  for (const auto& r : rows) {
    out << format_double(r.rho) << ',' << to_string(r.mode) << ',' << r.K << ',' << r.M << ',' << r.N << ',' << r.seed
        << ',' << r.delivered << ',' << r.used << ',' << r.errors << ',' << format_double(r.ser) << '\n';
  }
}

double cf_uplink_rate(Complex h1, Complex h2, double P) {
  const double r1 = std::log2(0.5 + std::norm(h1) * P);
  const double r2 = std::log2(0.5 + std::norm(h2) * P);
  return std::max(0.0, std::min(r1, r2));
}

double cf_downlink_rate(Complex d3, double P) { return std::log2(1.0 + std::norm(d3) * P); }

double estimate_dof_slope(const std::function<double(double)>& rate, double rho_low, double rho_high) {
  if (!(rho_high > rho_low && rho_low > 0)) throw Error(Errc::range, "need rho_high > rho_low > 0");
  return (rate(rho_high) - rate(rho_low)) / (std::log2(rho_high) - std::log2(rho_low));
}

}  // namespace ychan
