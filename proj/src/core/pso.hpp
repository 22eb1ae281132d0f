#pragma once

#include <cstdint>
#include <vector>

#include "core/env.hpp"

namespace uaviov {

struct PsoParams {
  int particles = 30;
  int iterations = 100;
  double inertia = 0.7298;
  double cognitive = 1.49618;
  double social = 1.49618;

  void validate() const;
};

void to_json(Json& j, const PsoParams& p);
void from_json(const Json& j, PsoParams& p);

struct PlacementResult {
  std::vector<Cell> positions;  // one per agent
  double score = 0.0;           // coverage + connectivity at placement time
};

// Particle-swarm search over the N UAV positions maximizing coverage plus
// connectivity against a fixed vehicle snapshot. Positions are then meant to
// stay frozen for the whole episode.
PlacementResult static_placement(const EnvState& snapshot,
                                 const EnvConfig& config,
                                 const PsoParams& params, std::uint64_t seed);

}  // namespace uaviov
