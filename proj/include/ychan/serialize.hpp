#pragma once

// JSON forms of the library's value types. Rationals travel as strings
// ("p" or "p/q"), complex entries as [re, im] pairs.

#include <string>
#include <string_view>

#include <json.hpp>

#include "ychan/allocator.hpp"
#include "ychan/channel.hpp"
#include "ychan/dof.hpp"
#include "ychan/phy.hpp"

namespace ychan {

using Json = nlohmann::ordered_json;

/// {"K": int, "d": {"i->j": "p/q", ...}}; zero entries are omitted.
Json to_json(const DofTuple& d);
DofTuple dof_tuple_from_json(const Json& j);

/// Compact text form; parse_dof_tuple(dump_dof_tuple(d)) == d and the text
/// of a canonical document survives the reverse trip byte for byte.
std::string dump_dof_tuple(const DofTuple& d);
DofTuple parse_dof_tuple(std::string_view text);

Edge parse_edge(std::string_view text);

Json to_json(const Cycle& c);
Json to_json(const AllocationPlan& plan);
AllocationPlan allocation_plan_from_json(const Json& j);
Json to_json(const ResidualTrace& trace);
Json to_json(const PlanVerdict& verdict);
Json to_json(const RegionVerdict& verdict);

Json to_json(const ChannelRealization& ch);
ChannelRealization channel_from_json(const Json& j);

Json to_json(const SimConfig& config);
SimConfig sim_config_from_json(const Json& j);

Json to_json(const SimResult& result);

}  // namespace ychan
