#include "ychan/serialize.hpp"

#include <cctype>

#include "ychan/error.hpp"

namespace ychan {

namespace {

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(Errc::parse, e.what());
  }
}

int parse_index(std::string_view s, std::string_view whole) {
  if (s.empty() || s.size() > 9) throw Error(Errc::parse, "malformed edge '" + std::string(whole) + "'");
  int v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(Errc::parse, "malformed edge '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

Cycle cycle_from_json(const Json& j) {
  std::vector<NodeId> nodes;
  for (const auto& n : j) nodes.emplace_back(n.get<int>());
  const Cycle c = Cycle::canonicalize(nodes);
  if (c.nodes() != nodes) throw Error(Errc::parse, "cycle " + to_string(c) + " is not in canonical rotation");
  return c;
}

Json complex_matrix_to_json(const ComplexMatrix& A) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < A.cols(); ++c) row.push_back(Json::array({A(r, c).real(), A(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix complex_matrix_from_json(const Json& j, int rows, int cols) {
  if (static_cast<int>(j.size()) != rows) throw Error(Errc::parse, "matrix row count mismatch");
  ComplexMatrix A(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) throw Error(Errc::parse, "matrix column count mismatch");
    for (int c = 0; c < cols; ++c) {
      const auto& z = j[r][c];
      if (!z.is_array() || z.size() != 2) throw Error(Errc::parse, "complex entries are [re, im] pairs");
      A(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return A;
}

Json stream_json(const StreamKey& key, const Complex& z) {
  return Json{{"edge", to_string(key.edge)}, {"stream", key.stream}, {"value", Json::array({z.real(), z.imag()})}};
}

}  // namespace

Edge parse_edge(std::string_view text) {
  const auto arrow = text.find("->");
  if (arrow == std::string_view::npos) throw Error(Errc::parse, "edge '" + std::string(text) + "' lacks '->'");
  const int from = parse_index(text.substr(0, arrow), text);
  const int to = parse_index(text.substr(arrow + 2), text);
  return {from, to};
}

Json to_json(const DofTuple& d) {
  Json entries = Json::object();
  for (const auto& [e, v] : d.entries()) entries[to_string(e)] = to_string(v);
  return Json{{"K", d.K()}, {"d", std::move(entries)}};
}

DofTuple dof_tuple_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_object() || !j.contains("K") || !j.contains("d")) throw Error(Errc::parse, "tuple needs \"K\" and \"d\"");
    const int K = j.at("K").get<int>();
    if (K < 2) throw Error(Errc::parse, "tuple needs K >= 2");
    DofTuple d(K);
    for (const auto& [key, value] : j.at("d").items()) {
      const Edge e = parse_edge(key);
      if (e.from == e.to || e.from.index < 1 || e.to.index < 1 || e.from.index > K || e.to.index > K)
        throw Error(Errc::parse, "edge '" + key + "' invalid for K=" + std::to_string(K));
      const Rational v =
          value.is_number_integer() ? Rational(value.get<long long>()) : parse_rational(value.get<std::string>());
      if (v < 0) throw Error(Errc::parse, "negative demand on edge '" + key + "'");
      d.set(e, v);
    }
    return d;
  });
}

std::string dump_dof_tuple(const DofTuple& d) { return to_json(d).dump(); }

DofTuple parse_dof_tuple(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(Errc::parse, e.what());
  }
  return dof_tuple_from_json(j);
}

Json to_json(const Cycle& c) {
  Json nodes = Json::array();
  for (NodeId n : c.nodes()) nodes.push_back(n.index);
  return nodes;
}

Json to_json(const AllocationPlan& plan) {
  Json cycles = Json::array();
  for (const auto& a : plan.cycle_alloc) cycles.push_back(Json{{"cycle", to_json(a.cycle)}, {"dof", to_string(a.dof)}});
  Json uni = Json::object();
  for (const auto& [e, v] : plan.uni_alloc) uni[to_string(e)] = to_string(v);

  Json out{{"K", plan.K()}, {"demand", to_json(plan.demand)}, {"cycles", std::move(cycles)},
           {"uni", std::move(uni)}, {"n_s", to_string(plan.n_s)}};
  if (plan.assignment) {
    Json bundles = Json::array();
    for (const auto& [c, list] : plan.assignment->cycle_bundles) bundles.push_back(Json{{"cycle", to_json(c)}, {"bundles", list}});
    Json uni_slots = Json::object();
    for (const auto& [e, slots] : plan.assignment->uni_subchannels) uni_slots[to_string(e)] = slots;
    out["subchannels"] = Json{{"cycles", std::move(bundles)}, {"uni", std::move(uni_slots)}};
  }
  return out;
}

AllocationPlan allocation_plan_from_json(const Json& j) {
  return guarded([&] {
    AllocationPlan plan(j.at("K").get<int>());
    plan.demand = dof_tuple_from_json(j.at("demand"));
    for (const auto& entry : j.at("cycles"))
      plan.cycle_alloc.push_back({cycle_from_json(entry.at("cycle")), parse_rational(entry.at("dof").get<std::string>())});
    for (const auto& [key, value] : j.at("uni").items())
      plan.uni_alloc.emplace(parse_edge(key), parse_rational(value.get<std::string>()));
    plan.n_s = parse_rational(j.at("n_s").get<std::string>());
    if (j.contains("subchannels")) {
      SubchannelAssignment a;
      const auto& sc = j.at("subchannels");
      for (const auto& entry : sc.at("cycles"))
        a.cycle_bundles.emplace_back(cycle_from_json(entry.at("cycle")), entry.at("bundles").get<std::vector<std::vector<int>>>());
      for (const auto& [key, value] : sc.at("uni").items())
        a.uni_subchannels.emplace(parse_edge(key), value.get<std::vector<int>>());
      plan.assignment = std::move(a);
    }
    return plan;
  });
}

Json to_json(const ResidualTrace& trace) {
  auto residual_json = [](const WeightedDigraph& g) {
    Json w = Json::object();
    for (const auto& [e, v] : g.weights()) w[to_string(e)] = to_string(v);
    return w;
  };
  Json steps = Json::array();
  for (const auto& s : trace.steps)
    steps.push_back(Json{{"cycle", to_json(s.cycle)},
                         {"dof", to_string(s.dof)},
                         {"bottleneck", to_string(s.bottleneck)},
                         {"residual", residual_json(s.residual)}});
  return Json{{"steps", std::move(steps)}, {"final_residual", residual_json(trace.final_residual)}};
}

Json to_json(const PlanVerdict& v) {
  return Json{{"ok", v.ok()},
              {"conservation", v.conservation},
              {"identity", v.identity},
              {"residual_nonnegative", v.residual_nonnegative},
              {"acyclic", v.acyclic},
              {"capacity", v.capacity},
              {"failures", v.failures}};
}

Json to_json(const RegionVerdict& v) {
  Json perms = Json::array();
  for (const auto& p : v.binding_permutations) {
    Json nodes = Json::array();
    for (NodeId n : p) nodes.push_back(n.index);
    perms.push_back(std::move(nodes));
  }
  return Json{{"inside", v.inside}, {"max_lhs", to_string(v.max_lhs)}, {"binding_permutations", std::move(perms)},
              {"binding_count", v.binding_count}};
}

Json to_json(const ChannelRealization& ch) {
  Json up = Json::array();
  Json down = Json::array();
  for (const auto& H : ch.uplink) up.push_back(complex_matrix_to_json(H));
  for (const auto& D : ch.downlink) down.push_back(complex_matrix_to_json(D));
  return Json{{"K", ch.K}, {"M", ch.M}, {"N", ch.N}, {"seed", ch.seed}, {"uplink", std::move(up)}, {"downlink", std::move(down)}};
}

ChannelRealization channel_from_json(const Json& j) {
  return guarded([&] {
    ChannelRealization ch;
    ch.K = j.at("K").get<int>();
    ch.M = j.at("M").get<int>();
    ch.N = j.at("N").get<int>();
    ch.seed = j.at("seed").get<std::uint64_t>();
    if (static_cast<int>(j.at("uplink").size()) != ch.K || static_cast<int>(j.at("downlink").size()) != ch.K)
      throw Error(Errc::parse, "one uplink and one downlink matrix per user required");
    for (const auto& H : j.at("uplink")) ch.uplink.push_back(complex_matrix_from_json(H, ch.N, ch.M));
    for (const auto& D : j.at("downlink")) ch.downlink.push_back(complex_matrix_from_json(D, ch.M, ch.N));
    return ch;
  });
}

Json to_json(const SimConfig& c) {
  return Json{{"mode", to_string(c.mode)}, {"rho", c.rho}, {"seed", c.seed}, {"constellation", to_string(c.constellation)}};
}

SimConfig sim_config_from_json(const Json& j) {
  return guarded([&] {
    SimConfig c;
    if (j.contains("mode")) c.mode = parse_sim_mode(j.at("mode").get<std::string>());
    if (j.contains("rho")) c.rho = j.at("rho").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("constellation")) c.constellation = parse_constellation(j.at("constellation").get<std::string>());
    if (!(c.rho > 0)) throw Error(Errc::parse, "rho must be positive");
    return c;
  });
}

Json to_json(const SimResult& r) {
  Json decoded = Json::array();
  for (const auto& [key, z] : r.decoded) decoded.push_back(stream_json(key, z));
  return Json{{"delivered", r.delivered_symbols},
              {"used", r.subchannels_used},
              {"errors", r.symbol_errors},
              {"ser", r.ser},
              {"efficiency", to_string(r.efficiency)},
              {"max_abs_error", r.max_abs_error},
              {"max_user_power", r.max_user_power},
              {"relay_power", r.relay_power},
              {"decoded", std::move(decoded)}};
}

}  // namespace ychan
