#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ychan/error.hpp"
#include "ychan/serialize.hpp"

using namespace ychan;

namespace {

template <class F>
void expect_parse_error(F&& f) {
  try {
    f();
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
  }
}

}  // namespace

TEST_CASE("dof tuple text form") {
  const auto d = make_tuple3(2, 0, 1, 1, 1, 0);
  const std::string text = dump_dof_tuple(d);
  CHECK(text == R"({"K":3,"d":{"1->2":"2","2->1":"1","2->3":"1","3->1":"1"}})");
  CHECK(parse_dof_tuple(text) == d);
  CHECK(dump_dof_tuple(parse_dof_tuple(text)) == text);

  DofTuple frac(4);
  frac.set({4, 1}, Rational(3, 4));
  frac.set({1, 4}, Rational(6, 4));
  CHECK(dump_dof_tuple(frac) == R"({"K":4,"d":{"1->4":"3/2","4->1":"3/4"}})");
}

TEST_CASE("dof tuple round trips on random tuples") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const DofTuple d = oracle::random_tuple(2 + trial % 6, rng);
    const std::string text = dump_dof_tuple(d);
    CHECK(parse_dof_tuple(text) == d);
    CHECK(dump_dof_tuple(parse_dof_tuple(text)) == text);
  }
}

TEST_CASE("dof tuple reader accepts loose input") {
  const auto d = parse_dof_tuple(R"({ "K": 3, "d": { "3->1": "4/2", "1->2": "0", "2->1": "1" } })");
  CHECK(d[Edge(3, 1)] == 2);
  CHECK(d[Edge(2, 1)] == 1);
  CHECK(d.entries().size() == 2);
  CHECK(parse_dof_tuple(R"({"K":2,"d":{"1->2":3}})")[Edge(1, 2)] == 3);
}

TEST_CASE("dof tuple reader rejects malformed input") {
  expect_parse_error([] { parse_dof_tuple("{"); });
  expect_parse_error([] { parse_dof_tuple(R"({"d":{}})"); });
  expect_parse_error([] { parse_dof_tuple(R"({"K":3,"d":{"1-2":"1"}})"); });
  expect_parse_error([] { parse_dof_tuple(R"({"K":3,"d":{"1->2":"1/0"}})"); });
  expect_parse_error([] { parse_dof_tuple(R"({"K":3,"d":{"1->2":"x"}})"); });
  expect_parse_error([] { parse_dof_tuple(R"({"K":3,"d":[1]})"); });
  expect_parse_error([] { parse_edge("a->b"); });
  expect_parse_error([] { parse_edge("12"); });
  CHECK(parse_edge("10->2") == Edge(10, 2));
}

TEST_CASE("dof tuple reader rejects out-of-range entries") {
  try {
    parse_dof_tuple(R"({"K":3,"d":{"1->4":"1"}})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == Errc::range || e.code() == Errc::parse));
  }
  try {
    parse_dof_tuple(R"({"K":3,"d":{"1->2":"-1"}})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == Errc::range || e.code() == Errc::parse));
  }
}

TEST_CASE("plan JSON round trip") {
  DofTuple d(4);
  d.set({1, 2}, 3);
  d.set({2, 3}, 2);
  d.set({4, 1}, 2);
  d.set({2, 1}, 1);
  d.set({2, 4}, 1);
  d.set({3, 1}, 1);
  d.set({3, 2}, 1);
  const auto plan = assign_subchannels(allocate(d).plan, 7);
  const Json j = to_json(plan);
  CHECK(j["n_s"] == "7");
  CHECK(j["cycles"].size() == 4);
  CHECK(j["cycles"][2]["cycle"] == Json::array({1, 2, 3}));
  CHECK(j["uni"]["4->1"] == "1");
  CHECK(j["subchannels"]["uni"]["4->1"] == Json::array({7}));

  const auto back = allocation_plan_from_json(j);
  CHECK(to_json(back).dump() == j.dump());
  CHECK(back.n_s == plan.n_s);
  CHECK(back.demand == plan.demand);

  Json bad = j;
  bad["cycles"][2]["cycle"] = Json::array({2, 3, 1});
  expect_parse_error([&] { allocation_plan_from_json(bad); });
}

TEST_CASE("trace and verdict JSON") {
  const auto d = make_tuple3(2, 0, 1, 1, 1, 0);
  const auto [plan, trace] = allocate(d);
  const Json t = to_json(trace);
  REQUIRE(t["steps"].size() == 2);
  CHECK(t["steps"][0]["cycle"] == Json::array({1, 2}));
  CHECK(t["steps"][0]["bottleneck"] == "2->1");

  const Json v = to_json(verify_plan(plan, d, trace, 2));
  CHECK(v["capacity"] == false);
  CHECK(v["conservation"] == true);
  CHECK(v["failures"].size() == 1);

  const Json r = to_json(region_contains(d, {3, 3, 3}));
  CHECK(r["inside"] == true);
  CHECK(r["max_lhs"] == "3");
  CHECK(r["binding_count"] == 3);
}

TEST_CASE("channel JSON round trip is exact") {
  const auto ch = random_channel(3, 4, 2, 77);
  const Json j = to_json(ch);
  const auto back = channel_from_json(Json::parse(j.dump()));
  CHECK(back.K == 3);
  CHECK(back.M == 4);
  CHECK(back.N == 2);
  CHECK(back.seed == 77);
  for (int i = 0; i < 3; ++i) {
    CHECK(back.uplink[i] == ch.uplink[i]);
    CHECK(back.downlink[i] == ch.downlink[i]);
  }
  Json bad = j;
  bad["uplink"][0][0] = Json::array({1.0});
  expect_parse_error([&] { channel_from_json(bad); });
}

TEST_CASE("sim config JSON") {
  SimConfig c;
  c.mode = SimMode::awgn;
  c.rho = 1e4;
  c.seed = 12345678901234ULL;
  c.constellation = Constellation::qpsk;
  const auto back = sim_config_from_json(Json::parse(to_json(c).dump()));
  CHECK(back.mode == c.mode);
  CHECK(back.rho == c.rho);
  CHECK(back.seed == c.seed);
  CHECK(back.constellation == c.constellation);
  expect_parse_error([] { sim_config_from_json(Json::parse(R"({"mode":"loud"})")); });
}

TEST_CASE("sim result JSON") {
  const auto r = simulate_round(make_tuple3(2, 0, 1, 1, 1, 0), random_channel(3, 3, 3, 1), SimConfig{});
  const Json j = to_json(r);
  CHECK(j.at("efficiency") == "5/3");
  CHECK(j.at("errors") == 0);
  CHECK(j.at("used") == 3);
  CHECK(j.at("delivered") == 5);
  CHECK(j.at("decoded").size() == 5);
}
