#include "core/pso.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace uaviov {

void PsoParams::validate() const {
  if (particles < 1 || iterations < 1) {
    throw ConfigError("PSO needs at least one particle and one iteration");
  }
  if (inertia < 0 || cognitive < 0 || social < 0) {
    throw ConfigError("PSO coefficients must be non-negative");
  }
}

void to_json(Json& j, const PsoParams& p) {
  j = Json{{"particles", p.particles},
           {"iterations", p.iterations},
           {"inertia", p.inertia},
           {"cognitive", p.cognitive},
           {"social", p.social}};
}

void from_json(const Json& j, PsoParams& p) {
  p.particles = j.value("particles", p.particles);
  p.iterations = j.value("iterations", p.iterations);
  p.inertia = j.value("inertia", p.inertia);
  p.cognitive = j.value("cognitive", p.cognitive);
  p.social = j.value("social", p.social);
}

namespace {

double placement_fitness(const std::vector<double>& coords,
                         EnvState& scratch, const EnvConfig& config) {
  const int n = config.num_agents;
  for (int k = 0; k < n; ++k) {
    scratch.uav_cells[k] = {
        std::clamp(static_cast<int>(std::lround(coords[2 * k])), 0,
                   config.grid_w - 1),
        std::clamp(static_cast<int>(std::lround(coords[2 * k + 1])), 0,
                   config.grid_h - 1)};
  }
  return compute_coverage(scratch, config) +
         compute_connectivity(scratch, config);
}

}  // namespace

PlacementResult static_placement(const EnvState& snapshot,
                                 const EnvConfig& config,
                                 const PsoParams& params, std::uint64_t seed) {
  params.validate();
  const int n = config.num_agents;
  const int dims = 2 * n;
  Rng rng(seed);

  EnvState scratch = snapshot;
  scratch.uav_cells.assign(n, Cell{});

  const double max_x = config.grid_w - 1;
  const double max_y = config.grid_h - 1;
  const double vmax_x = std::max(1.0, max_x / 4.0);
  const double vmax_y = std::max(1.0, max_y / 4.0);

  std::vector<std::vector<double>> pos(params.particles,
                                       std::vector<double>(dims));
  std::vector<std::vector<double>> vel(params.particles,
                                       std::vector<double>(dims, 0.0));
  std::vector<std::vector<double>> best_pos = pos;
  std::vector<double> best_fit(params.particles, 0.0);

  // Particle 0 starts on the per-agent vehicle centroids, which is usually a
  // connected, well-covering placement already.
  for (int k = 0; k < n; ++k) {
    double sx = 0, sy = 0;
    int count = 0;
    for (std::size_t i = 0; i < snapshot.vehicle_cells.size(); ++i) {
      if (snapshot.assignment[i] != k) continue;
      sx += snapshot.vehicle_cells[i].x;
      sy += snapshot.vehicle_cells[i].y;
      ++count;
    }
    pos[0][2 * k] = count ? sx / count : max_x / 2.0;
    pos[0][2 * k + 1] = count ? sy / count : max_y / 2.0;
  }
  for (int p = 1; p < params.particles; ++p) {
    for (int k = 0; k < n; ++k) {
      pos[p][2 * k] = rng.uniform(0.0, max_x);
      pos[p][2 * k + 1] = rng.uniform(0.0, max_y);
    }
  }

  int global_best = 0;
  for (int p = 0; p < params.particles; ++p) {
    best_pos[p] = pos[p];
    best_fit[p] = placement_fitness(pos[p], scratch, config);
    if (best_fit[p] > best_fit[global_best]) global_best = p;
  }

  for (int it = 0; it < params.iterations; ++it) {
    for (int p = 0; p < params.particles; ++p) {
      for (int d = 0; d < dims; ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        vel[p][d] = params.inertia * vel[p][d] +
                    params.cognitive * r1 * (best_pos[p][d] - pos[p][d]) +
                    params.social * r2 * (best_pos[global_best][d] - pos[p][d]);
        const double vmax = (d % 2 == 0) ? vmax_x : vmax_y;
        vel[p][d] = std::clamp(vel[p][d], -vmax, vmax);
        pos[p][d] += vel[p][d];
        const double hi = (d % 2 == 0) ? max_x : max_y;
        pos[p][d] = std::clamp(pos[p][d], 0.0, hi);
      }
      const double fit = placement_fitness(pos[p], scratch, config);
      if (fit > best_fit[p]) {
        best_fit[p] = fit;
        best_pos[p] = pos[p];
        if (fit > best_fit[global_best]) global_best = p;
      }
    }
  }

  PlacementResult result;
  result.score = placement_fitness(best_pos[global_best], scratch, config);
  result.positions = scratch.uav_cells;
  return result;
}

}  // namespace uaviov
