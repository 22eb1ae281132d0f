#pragma once

#include <cstdint>
#include <vector>

#include "core/jsonio.hpp"
#include "core/types.hpp"

namespace uaviov {

// Population sampling ranges; defaults mirror the simulation-setup table
// (area 50x50 km, 200 vehicles, UAV sweep 20..160, 5 iterations, uniform
// attribute distributions).
struct ScenarioConfig {
  ZoneGrid zone_grid;
  int num_vehicles = 200;
  std::vector<int> uav_counts = {20, 40, 60, 80, 100, 120, 140, 160};
  int iterations = 5;
  NormalizationBounds bounds;
  ScoringWeights weights;

  double rb_min = 1.0, rb_max = 4.0;        // Mbps
  double rep_min = 1.0, rep_max = 100.0;
  double pay_min = 0.0, pay_max = 7.0;      // $/Mbps
  double ab_min = 0.0, ab_max = 20.0;       // Mbps
  double bl_min = 1.0, bl_max = 100.0;      // percent
  double alt_min = 0.05, alt_max = 0.15;    // km, carried only

  std::uint64_t seed = 0;

  void validate() const;
};

void to_json(Json& j, const ScenarioConfig& c);
void from_json(const Json& j, ScenarioConfig& c);

struct Population {
  std::vector<VehicleInfo> vehicles;
  std::vector<UavInfo> uavs;
};

// Samples one population; zone ids are derived from positions.
Population generate_population(const ScenarioConfig& config, int num_uavs,
                               std::uint64_t seed);

}  // namespace uaviov
