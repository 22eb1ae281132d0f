#pragma once

#include <json.hpp>

#include "core/selection.hpp"
#include "core/types.hpp"

namespace uaviov {

using Json = nlohmann::json;

inline void to_json(Json& j, const Position& p) { j = Json{{"x", p.x}, {"y", p.y}}; }
inline void from_json(const Json& j, Position& p) {
  j.at("x").get_to(p.x);
  j.at("y").get_to(p.y);
}

inline void to_json(Json& j, const VehicleInfo& v) {
  j = Json{{"address", v.address},
           {"position", v.position},
           {"pay_per_mbps", v.pay_per_mbps},
           {"reputation", v.reputation},
           {"requested_bandwidth", v.requested_bandwidth},
           {"timestamp", v.timestamp},
           {"zone_id", v.zone_id}};
}
inline void from_json(const Json& j, VehicleInfo& v) {
  j.at("address").get_to(v.address);
  j.at("position").get_to(v.position);
  j.at("pay_per_mbps").get_to(v.pay_per_mbps);
  j.at("reputation").get_to(v.reputation);
  j.at("requested_bandwidth").get_to(v.requested_bandwidth);
  v.timestamp = j.value("timestamp", std::uint64_t{0});
  v.zone_id = j.value("zone_id", ZoneId{0});
}

inline void to_json(Json& j, const UavInfo& u) {
  j = Json{{"address", u.address},
           {"position", u.position},
           {"altitude", u.altitude},
           {"reputation", u.reputation},
           {"battery_level", u.battery_level},
           {"available_bandwidth", u.available_bandwidth},
           {"timestamp", u.timestamp},
           {"zone_id", u.zone_id}};
}
inline void from_json(const Json& j, UavInfo& u) {
  j.at("address").get_to(u.address);
  j.at("position").get_to(u.position);
  u.altitude = j.value("altitude", 0.0);
  j.at("reputation").get_to(u.reputation);
  j.at("battery_level").get_to(u.battery_level);
  j.at("available_bandwidth").get_to(u.available_bandwidth);
  u.timestamp = j.value("timestamp", std::uint64_t{0});
  u.zone_id = j.value("zone_id", ZoneId{0});
}

inline void to_json(Json& j, const NormalizationBounds& b) {
  j = Json{{"max_ab", b.max_ab},
           {"max_bl", b.max_bl},
           {"max_rep", b.max_rep},
           {"max_distance", b.max_distance},
           {"max_rb", b.max_rb},
           {"max_pay_per_mbps", b.max_pay_per_mbps}};
}
inline void from_json(const Json& j, NormalizationBounds& b) {
  b.max_ab = j.value("max_ab", b.max_ab);
  b.max_bl = j.value("max_bl", b.max_bl);
  b.max_rep = j.value("max_rep", b.max_rep);
  b.max_distance = j.value("max_distance", b.max_distance);
  b.max_rb = j.value("max_rb", b.max_rb);
  b.max_pay_per_mbps = j.value("max_pay_per_mbps", b.max_pay_per_mbps);
}

inline void to_json(Json& j, const ScoringWeights& w) {
  j = Json{{"w1", w.w1}, {"w2", w.w2}, {"w3", w.w3}, {"w4", w.w4},
           {"w5", w.w5}, {"w6", w.w6}, {"w7", w.w7}, {"w8", w.w8}};
}
inline void from_json(const Json& j, ScoringWeights& w) {
  w.w1 = j.value("w1", w.w1);
  w.w2 = j.value("w2", w.w2);
  w.w3 = j.value("w3", w.w3);
  w.w4 = j.value("w4", w.w4);
  w.w5 = j.value("w5", w.w5);
  w.w6 = j.value("w6", w.w6);
  w.w7 = j.value("w7", w.w7);
  w.w8 = j.value("w8", w.w8);
}

inline void to_json(Json& j, const ZoneGrid& g) {
  j = Json{{"area_w", g.area_w}, {"area_h", g.area_h}, {"tile_size", g.tile_size}};
}
inline void from_json(const Json& j, ZoneGrid& g) {
  g.area_w = j.value("area_w", g.area_w);
  g.area_h = j.value("area_h", g.area_h);
  g.tile_size = j.value("tile_size", g.tile_size);
}

inline void to_json(Json& j, const ProposalRecord& p) {
  j = Json{{"vehicle_address", p.vehicle_address},
           {"qov", p.qov},
           {"requested_bandwidth", p.requested_bandwidth},
           {"rank_key", p.rank_key}};
}
inline void from_json(const Json& j, ProposalRecord& p) {
  j.at("vehicle_address").get_to(p.vehicle_address);
  j.at("qov").get_to(p.qov);
  j.at("requested_bandwidth").get_to(p.requested_bandwidth);
  j.at("rank_key").get_to(p.rank_key);
}

inline void to_json(Json& j, const UavAllocation& a) {
  j = Json{{"uav", a.uav_address},
           {"vehicles", a.accepted_vehicles},
           {"residual_AB", a.residual_bandwidth}};
}
inline void from_json(const Json& j, UavAllocation& a) {
  j.at("uav").get_to(a.uav_address);
  j.at("vehicles").get_to(a.accepted_vehicles);
  j.at("residual_AB").get_to(a.residual_bandwidth);
}

inline void to_json(Json& j, const SelectionOutcome& o) {
  j = Json{{"allocations", o.allocations},
           {"unmatched_vehicles", o.unmatched_vehicles}};
}
inline void from_json(const Json& j, SelectionOutcome& o) {
  j.at("allocations").get_to(o.allocations);
  j.at("unmatched_vehicles").get_to(o.unmatched_vehicles);
}

inline void to_json(Json& j, const SelectionMetrics& m) {
  j = Json{{"vehicles_per_selected_uav", m.vehicles_per_selected_uav},
           {"pct_uavs_selected", m.pct_uavs_selected},
           {"mean_qou", m.mean_qou},
           {"mean_qov", m.mean_qov},
           {"matched_vehicles", m.matched_vehicles},
           {"empty", m.empty}};
}

}  // namespace uaviov
