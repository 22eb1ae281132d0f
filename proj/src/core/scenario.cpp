#include "core/scenario.hpp"

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace uaviov {

void ScenarioConfig::validate() const {
  zone_grid.validate();
  bounds.validate();
  weights.validate();
  if (num_vehicles < 1) throw ConfigError("num_vehicles must be >= 1");
  if (uav_counts.empty()) throw ConfigError("uav_counts must be non-empty");
  for (int c : uav_counts) {
    if (c < 1) throw ConfigError("uav counts must be >= 1");
  }
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  auto check_range = [](double lo, double hi, const char* what) {
    if (lo > hi) throw ConfigError(std::string(what) + " range is inverted");
  };
  check_range(rb_min, rb_max, "RB");
  check_range(rep_min, rep_max, "reputation");
  check_range(pay_min, pay_max, "pay");
  check_range(ab_min, ab_max, "AB");
  check_range(bl_min, bl_max, "BL");
  check_range(alt_min, alt_max, "altitude");
  if (rb_min <= 0) throw ConfigError("RB range must be strictly positive");
  if (rep_min < 1 || bl_min < 1) {
    throw ConfigError("reputation and battery ranges start at 1");
  }
}

void to_json(Json& j, const ScenarioConfig& c) {
  j = Json{{"zone_grid", c.zone_grid},
           {"num_vehicles", c.num_vehicles},
           {"uav_counts", c.uav_counts},
           {"iterations", c.iterations},
           {"bounds", c.bounds},
           {"weights", c.weights},
           {"rb_min", c.rb_min},
           {"rb_max", c.rb_max},
           {"rep_min", c.rep_min},
           {"rep_max", c.rep_max},
           {"pay_min", c.pay_min},
           {"pay_max", c.pay_max},
           {"ab_min", c.ab_min},
           {"ab_max", c.ab_max},
           {"bl_min", c.bl_min},
           {"bl_max", c.bl_max},
           {"alt_min", c.alt_min},
           {"alt_max", c.alt_max},
           {"seed", c.seed}};
}

void from_json(const Json& j, ScenarioConfig& c) {
  c.zone_grid = j.value("zone_grid", c.zone_grid);
  c.num_vehicles = j.value("num_vehicles", c.num_vehicles);
  if (j.contains("uav_counts")) j.at("uav_counts").get_to(c.uav_counts);
  c.iterations = j.value("iterations", c.iterations);
  c.bounds = j.value("bounds", c.bounds);
  c.weights = j.value("weights", c.weights);
  c.rb_min = j.value("rb_min", c.rb_min);
  c.rb_max = j.value("rb_max", c.rb_max);
  c.rep_min = j.value("rep_min", c.rep_min);
  c.rep_max = j.value("rep_max", c.rep_max);
  c.pay_min = j.value("pay_min", c.pay_min);
  c.pay_max = j.value("pay_max", c.pay_max);
  c.ab_min = j.value("ab_min", c.ab_min);
  c.ab_max = j.value("ab_max", c.ab_max);
  c.bl_min = j.value("bl_min", c.bl_min);
  c.bl_max = j.value("bl_max", c.bl_max);
  c.alt_min = j.value("alt_min", c.alt_min);
  c.alt_max = j.value("alt_max", c.alt_max);
  c.seed = j.value("seed", c.seed);
}

Population generate_population(const ScenarioConfig& config, int num_uavs,
                               std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  Population pop;
  pop.vehicles.reserve(config.num_vehicles);
  pop.uavs.reserve(num_uavs);

  for (int i = 0; i < config.num_vehicles; ++i) {
    VehicleInfo v;
    v.address = "veh-" + std::to_string(i);
    v.position = {rng.uniform(0.0, config.zone_grid.area_w),
                  rng.uniform(0.0, config.zone_grid.area_h)};
    v.pay_per_mbps = rng.uniform(config.pay_min, config.pay_max);
    v.reputation = rng.uniform(config.rep_min, config.rep_max);
    v.requested_bandwidth = rng.uniform(config.rb_min, config.rb_max);
    v.zone_id = zone_of(v.position, config.zone_grid);
    pop.vehicles.push_back(std::move(v));
  }
  for (int i = 0; i < num_uavs; ++i) {
    UavInfo u;
    u.address = "uav-" + std::to_string(i);
    u.position = {rng.uniform(0.0, config.zone_grid.area_w),
                  rng.uniform(0.0, config.zone_grid.area_h)};
    u.altitude = rng.uniform(config.alt_min, config.alt_max);
    u.reputation = rng.uniform(config.rep_min, config.rep_max);
    u.battery_level = rng.uniform(config.bl_min, config.bl_max);
    u.available_bandwidth = rng.uniform(config.ab_min, config.ab_max);
    u.zone_id = zone_of(u.position, config.zone_grid);
    pop.uavs.push_back(std::move(u));
  }
  return pop;
}

}  // namespace uaviov
