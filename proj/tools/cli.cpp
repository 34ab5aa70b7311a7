#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "ychan/allocator.hpp"
#include "ychan/channel.hpp"
#include "ychan/cycles.hpp"
#include "ychan/dof.hpp"
#include "ychan/error.hpp"
#include "ychan/phy.hpp"
#include "ychan/serialize.hpp"

namespace ychan::cli {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct Options {
  std::optional<int> K;
  int len = 0;
  std::optional<int> M;
  std::optional<int> N;
  std::optional<std::uint64_t> seed;
  std::optional<int> seeds;
  std::optional<double> rho;
  std::vector<std::string> rho_list;
  std::string mode;
  std::string constellation;
  std::string tuple_file;
  std::string tuple_json;
  std::string config_file;
  std::string out_file;
  bool csv = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json load_config(const Options& o) {
  if (o.config_file.empty()) return Json::object();
  try {
    return Json::parse(read_file(o.config_file));
  } catch (const Json::exception& e) {
    throw Error(Errc::parse, "config '" + o.config_file + "': " + e.what());
  }
}

DofTuple load_tuple(const Options& o, const Json& config) {
  DofTuple d = [&] {
    if (!o.tuple_json.empty()) return parse_dof_tuple(o.tuple_json);
    if (!o.tuple_file.empty()) return parse_dof_tuple(read_file(o.tuple_file));
    if (config.contains("tuple")) return dof_tuple_from_json(config.at("tuple"));
    throw Error(Errc::parse, "no tuple given (use --tuple, --tuple-json or a config with \"tuple\")");
  }();
  if (o.K && *o.K != d.K())
    throw Error(Errc::parse, "--k " + std::to_string(*o.K) + " disagrees with tuple K=" + std::to_string(d.K()));
  return d;
}

int config_int(const Json& config, const std::string& key, const std::optional<int>& flag, const std::string& name) {
  if (flag) return *flag;
  if (config.contains(key)) return config.at(key).get<int>();
  throw Error(Errc::parse, "missing " + name);
}

// Writes to --out when given, otherwise to the command's stdout.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_file.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out_file, std::ios::binary);
  if (!file) throw Error(Errc::parse, "cannot write '" + o.out_file + "'");
  file << text;
}

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("YCHAN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const CycleSet set = enumerate_cycles(*o.K, o.len);
  std::ostringstream text;
  for (const Cycle& c : set.cycles) text << to_json(c).dump() << '\n';
  emit(o, out, text.str());
  return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const Json config = load_config(o);
  const DofTuple d = load_tuple(o, config);
  const RegionParams p{d.K(), config_int(config, "M", o.M, "--m"), config_int(config, "N", o.N, "--n")};
  const RegionVerdict verdict = region_contains(d, p);
  Json report{{"K", p.K}, {"M", p.M}, {"N", p.N}};
  report.update(to_json(verdict));
  report["general_outer_bound"] = general_outer_bound_contains(d, p);
  report["sum_dof"] = to_string(sum_dof(d));
  emit(o, out, report.dump(2) + "\n");
  return verdict.inside ? kOk : kNegative;
}

int cmd_allocate(const Options& o, std::ostream& out, std::ostream& err) {
  const Json config = load_config(o);
  const DofTuple d = load_tuple(o, config);
  const int N = config_int(config, "N", o.N, "--n");
  const Allocation a = allocate(d);
  const PlanVerdict verdict = verify_plan(a.plan, d, a.trace, N);

  AllocationPlan plan = a.plan;
  if (verdict.ok() && d.all_integral()) plan = assign_subchannels(a.plan, N);

  for (const auto& step : a.trace.steps) {
    err << "resolve " << to_string(step.cycle) << " with " << to_string(step.dof) << " (bottleneck "
        << to_string(step.bottleneck) << "), residual:";
    for (const auto& [e, w] : step.residual.weights()) err << ' ' << to_string(e) << '=' << to_string(w);
    err << '\n';
  }
  for (const auto& [e, v] : plan.uni_alloc) err << "uni-directional " << to_string(e) << " with " << to_string(v) << '\n';
  err << "n_s = " << to_string(plan.n_s) << " of N = " << N << (verdict.ok() ? ", plan verified\n" : ", plan FAILED\n");
  for (const auto& f : verdict.failures) err << "  " << f << '\n';

  const Json report{{"plan", to_json(plan)}, {"trace", to_json(a.trace)}, {"verdict", to_json(verdict)}};
  emit(o, out, report.dump(2) + "\n");
  return verdict.ok() ? kOk : kNegative;
}

SimConfig sim_config(const Options& o, const Json& config, SimMode default_mode, Constellation default_constellation,
                     bool sweep) {
  SimConfig c = config.contains("sim") ? sim_config_from_json(config.at("sim")) : SimConfig{};
  if (!config.contains("sim") || !config.at("sim").contains("mode")) c.mode = default_mode;
  if (!config.contains("sim") || !config.at("sim").contains("constellation")) c.constellation = default_constellation;
  if (!o.mode.empty()) c.mode = parse_sim_mode(o.mode);
  if (!o.constellation.empty()) c.constellation = parse_constellation(o.constellation);
  if (!sweep && o.rho) c.rho = *o.rho;
  if (o.seed) c.seed = *o.seed;
  if (!(c.rho > 0)) throw Error(Errc::parse, "rho must be positive");
  return c;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Json config = load_config(o);
  const DofTuple d = load_tuple(o, config);
  const int M = config_int(config, "M", o.M, "--m");
  const int N = config_int(config, "N", o.N, "--n");
  const SimConfig sc = sim_config(o, config, SimMode::noiseless, Constellation::gaussian, false);
  const auto ch = random_channel(d.K(), M, N, sc.seed);
  const SimResult r = simulate_round(d, ch, sc);

  if (o.csv) {
    std::ostringstream text;
    write_sweep_csv(text, {{sc.rho, sc.mode, d.K(), M, N, sc.seed, r.delivered_symbols, r.subchannels_used,
                            r.symbol_errors, r.ser}});
    emit(o, out, text.str());
  } else {
    Json report{{"K", d.K()}, {"M", M}, {"N", N}, {"config", to_json(sc)}};
    report.update(to_json(r));
    emit(o, out, report.dump(2) + "\n");
  }
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const Json config = load_config(o);
  const DofTuple d = load_tuple(o, config);
  const SimConfig sc = sim_config(o, config, SimMode::awgn, Constellation::qpsk, true);

  SweepSpec spec;
  spec.M = config_int(config, "M", o.M, "--m");
  spec.N = config_int(config, "N", o.N, "--n");
  spec.mode = sc.mode;
  spec.constellation = sc.constellation;
  spec.threads = thread_cap();
  if (!o.rho_list.empty()) {
    for (const auto& r : o.rho_list) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(r, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != r.size() || !(v > 0)) throw Error(Errc::parse, "bad rho value '" + r + "'");
      spec.rhos.push_back(v);
    }
  } else if (config.contains("rho")) {
    spec.rhos = config.at("rho").get<std::vector<double>>();
  } else {
    spec.rhos = {sc.rho};
  }
  const int count = o.seeds ? *o.seeds : config.value("seeds", 1);
  if (count < 1) throw Error(Errc::parse, "--seeds must be positive");
  for (int k = 0; k < count; ++k) spec.seeds.push_back(sc.seed + static_cast<std::uint64_t>(k));

  std::ostringstream text;
  write_sweep_csv(text, run_sweep(d, spec));
  emit(o, out, text.str());
  return kOk;
}

void add_tuple_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--tuple", o.tuple_file, "DoF tuple JSON file");
  cmd->add_option("--tuple-json", o.tuple_json, "DoF tuple given inline as JSON");
  cmd->add_option("--config", o.config_file, "JSON config with tuple, M, N, sim, rho, seeds");
  cmd->add_option("--k", o.K, "number of users (must match the tuple)");
  cmd->add_option("--out", o.out_file, "write output to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"K-user MIMO Y-channel: cycles, DoF region, allocation and simulation"};
  app.require_subcommand(1);
  Options o;

  auto* enumerate = app.add_subcommand("enumerate", "list the distinct cycles of one length");
  enumerate->add_option("--k", o.K, "number of users")->required();
  enumerate->add_option("--len", o.len, "cycle length")->required();
  enumerate->add_option("--out", o.out_file, "write output to this file instead of stdout");

  auto* check = app.add_subcommand("check", "test a DoF tuple against the region (N <= M)");
  add_tuple_options(check, o);
  check->add_option("--m", o.M, "antennas per user");
  check->add_option("--n", o.N, "relay antennas");

  auto* alloc = app.add_subcommand("allocate", "run the cycle-resolution allocator and verify the plan");
  add_tuple_options(alloc, o);
  alloc->add_option("--n", o.N, "relay antennas (available sub-channels)");

  auto* simulate = app.add_subcommand("simulate", "one symbol-level round on a seeded channel");
  add_tuple_options(simulate, o);
  simulate->add_option("--m", o.M, "antennas per user");
  simulate->add_option("--n", o.N, "relay antennas");
  simulate->add_option("--seed", o.seed, "seed for channel, symbols and noise");
  simulate->add_option("--rho", o.rho, "transmit power");
  simulate->add_option("--mode", o.mode, "noiseless or awgn");
  simulate->add_option("--constellation", o.constellation, "gaussian or qpsk");
  simulate->add_flag("--csv", o.csv, "emit one CSV row instead of JSON");

  auto* sweep = app.add_subcommand("sweep", "rounds over a rho grid and consecutive seeds, as CSV");
  add_tuple_options(sweep, o);
  sweep->add_option("--m", o.M, "antennas per user");
  sweep->add_option("--n", o.N, "relay antennas");
  sweep->add_option("--seed", o.seed, "first seed");
  sweep->add_option("--seeds", o.seeds, "number of consecutive seeds");
  sweep->add_option("--rho", o.rho_list, "comma-separated powers, e.g. 1e2,1e3")->delimiter(',');
  sweep->add_option("--mode", o.mode, "noiseless or awgn (default awgn)");
  sweep->add_option("--constellation", o.constellation, "gaussian or qpsk (default qpsk)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (enumerate->parsed()) return cmd_enumerate(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (alloc->parsed()) return cmd_allocate(o, out, err);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::parse:
      case Errc::range:
      case Errc::regime:
      case Errc::complexity_guard: return kUsage;
      default: return kNegative;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ychan::cli
