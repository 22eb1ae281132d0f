#include "core/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "core/errors.hpp"

namespace uaviov {

void EnvConfig::validate() const {
  if (grid_h < 2 || grid_w < 2) throw ConfigError("grid must be at least 2x2");
  if (cell_size <= 0) throw ConfigError("cell_size must be positive");
  if (obs_n % 2 == 0 || obs_n <= 1 || obs_n >= std::min(grid_h, grid_w)) {
    throw ConfigError("obs_n must be odd with 1 < n < min(grid_h, grid_w)");
  }
  if (uav_link_range <= 0 || uav_cover_range <= 0) {
    throw ConfigError("communication ranges must be positive");
  }
  if (num_agents < 1) throw ConfigError("num_agents must be >= 1");
  if (num_vehicles < 1) throw ConfigError("num_vehicles must be >= 1");
  if (vehicle_speed < 0) throw ConfigError("vehicle_speed must be >= 0");
  if (episode_length < 1) throw ConfigError("episode_length must be >= 1");
  if (static_cast<long long>(num_vehicles) >
      static_cast<long long>(grid_h) * grid_w) {
    throw ConfigError("more vehicles than grid cells");
  }
}

std::vector<int> EnvConfig::vehicles_per_agent() const {
  std::vector<int> counts(num_agents, num_vehicles / num_agents);
  for (int i = 0; i < num_vehicles % num_agents; ++i) counts[i] += 1;
  return counts;
}

void to_json(Json& j, const EnvConfig& c) {
  j = Json{{"grid_h", c.grid_h},
           {"grid_w", c.grid_w},
           {"cell_size", c.cell_size},
           {"obs_n", c.obs_n},
           {"uav_link_range", c.uav_link_range},
           {"uav_cover_range", c.uav_cover_range},
           {"num_agents", c.num_agents},
           {"num_vehicles", c.num_vehicles},
           {"vehicle_speed", c.vehicle_speed},
           {"episode_length", c.episode_length},
           {"seed", c.seed}};
}

void from_json(const Json& j, EnvConfig& c) {
  c.grid_h = j.value("grid_h", c.grid_h);
  c.grid_w = j.value("grid_w", c.grid_w);
  c.cell_size = j.value("cell_size", c.cell_size);
  c.obs_n = j.value("obs_n", c.obs_n);
  c.uav_link_range = j.value("uav_link_range", c.uav_link_range);
  c.uav_cover_range = j.value("uav_cover_range", c.uav_cover_range);
  c.num_agents = j.value("num_agents", c.num_agents);
  c.num_vehicles = j.value("num_vehicles", c.num_vehicles);
  c.vehicle_speed = j.value("vehicle_speed", c.vehicle_speed);
  c.episode_length = j.value("episode_length", c.episode_length);
  c.seed = j.value("seed", c.seed);
}

Cell action_to_delta(int action, int directions) {
  if (action < 0 || action > directions) {
    throw ContractError("action id out of range");
  }
  if (action == directions) return {0, 0};
  const double theta =
      2.0 * std::numbers::pi * static_cast<double>(action) / directions;
  return {static_cast<int>(std::lround(std::cos(theta))),
          static_cast<int>(std::lround(std::sin(theta)))};
}

namespace {

double cell_distance_km(const Cell& a, const Cell& b, double cell_size) {
  const double dx = static_cast<double>(a.x - b.x);
  const double dy = static_cast<double>(a.y - b.y);
  return std::sqrt(dx * dx + dy * dy) * cell_size;
}

// Union-find over agent indices.
class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

int reflect_into(int v, int size) {
  // Reflects about the boundary cells until v lands inside [0, size).
  while (v < 0 || v >= size) {
    if (v < 0) v = -v;
    if (v >= size) v = 2 * (size - 1) - v;
  }
  return v;
}

}  // namespace

double compute_coverage(const EnvState& state, const EnvConfig& config) {
  if (state.vehicle_cells.empty()) return 1.0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < state.vehicle_cells.size(); ++i) {
    const Cell& uav = state.uav_cells[state.assignment[i]];
    if (cell_distance_km(state.vehicle_cells[i], uav, config.cell_size) <=
        config.uav_cover_range) {
      ++covered;
    }
  }
  return static_cast<double>(covered) / state.vehicle_cells.size();
}

int compute_connectivity(const EnvState& state, const EnvConfig& config) {
  const int n = static_cast<int>(state.uav_cells.size());
  if (n <= 1) return 1;
  DisjointSet ds(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (cell_distance_km(state.uav_cells[i], state.uav_cells[j],
                           config.cell_size) <= config.uav_link_range) {
        ds.unite(i, j);
      }
    }
  }
  const int root = ds.find(0);
  for (int i = 1; i < n; ++i) {
    if (ds.find(i) != root) return 0;
  }
  return 1;
}

std::vector<float> downsample(const std::vector<float>& map, int h, int w,
                              int n, PoolMode mode) {
  std::vector<float> out(static_cast<std::size_t>(n) * n, 0.0f);
  for (int ty = 0; ty < n; ++ty) {
    const int y0 = ty * h / n;
    const int y1 = (ty + 1) * h / n;
    for (int tx = 0; tx < n; ++tx) {
      const int x0 = tx * w / n;
      const int x1 = (tx + 1) * w / n;
      float acc = 0.0f;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const float v = map[static_cast<std::size_t>(y) * w + x];
          acc = mode == PoolMode::kMax ? std::max(acc, v) : acc + v;
        }
      }
      if (mode == PoolMode::kMean) {
        const int count = (y1 - y0) * (x1 - x0);
        acc = count > 0 ? acc / static_cast<float>(count) : 0.0f;
      }
      out[static_cast<std::size_t>(ty) * n + tx] = acc;
    }
  }
  return out;
}

CoverageEnv::CoverageEnv(EnvConfig config) : config_(std::move(config)) {
  config_.validate();
}

std::vector<ObservationStack> CoverageEnv::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  state_ = EnvState{};
  state_.uav_cells.resize(config_.num_agents);
  state_.vehicle_cells.resize(config_.num_vehicles);
  state_.assignment.resize(config_.num_vehicles);
  vehicle_headings_.resize(config_.num_vehicles);

  const std::vector<int> counts = config_.vehicles_per_agent();
  int next_vehicle = 0;
  for (int agent = 0; agent < config_.num_agents; ++agent) {
    for (int k = 0; k < counts[agent]; ++k) {
      state_.assignment[next_vehicle++] = agent;
    }
  }

  for (int i = 0; i < config_.num_vehicles; ++i) {
    state_.vehicle_cells[i] = {
        static_cast<int>(rng_.uniform_index(config_.grid_w)),
        static_cast<int>(rng_.uniform_index(config_.grid_h))};
    vehicle_headings_[i] = static_cast<int>(rng_.uniform_index(kDirections));
  }

  // Each UAV starts on the rounded centroid of its assigned vehicles, clamped
  // into the grid. Agents with no vehicles start at the grid center.
  for (int agent = 0; agent < config_.num_agents; ++agent) {
    double sx = 0.0, sy = 0.0;
    int count = 0;
    for (int i = 0; i < config_.num_vehicles; ++i) {
      if (state_.assignment[i] != agent) continue;
      sx += state_.vehicle_cells[i].x;
      sy += state_.vehicle_cells[i].y;
      ++count;
    }
    Cell c;
    if (count > 0) {
      c.x = static_cast<int>(std::lround(sx / count));
      c.y = static_cast<int>(std::lround(sy / count));
    } else {
      c.x = config_.grid_w / 2;
      c.y = config_.grid_h / 2;
    }
    c.x = std::clamp(c.x, 0, config_.grid_w - 1);
    c.y = std::clamp(c.y, 0, config_.grid_h - 1);
    state_.uav_cells[agent] = c;
  }

  state_.step_counter = 0;
  awaiting_reset_ = false;

  std::vector<ObservationStack> obs;
  obs.reserve(config_.num_agents);
  for (int agent = 0; agent < config_.num_agents; ++agent) {
    obs.push_back(build_observations(agent));
  }
  return obs;
}

void CoverageEnv::move_vehicles() {
  if (config_.vehicle_speed == 0) return;
  for (int i = 0; i < config_.num_vehicles; ++i) {
    // Persistent-heading walk: keep the heading with probability 0.8.
    if (rng_.uniform() >= 0.8) {
      vehicle_headings_[i] = static_cast<int>(rng_.uniform_index(kDirections));
    }
    Cell delta = action_to_delta(vehicle_headings_[i]);
    Cell& cell = state_.vehicle_cells[i];
    int nx = cell.x + delta.x * config_.vehicle_speed;
    int ny = cell.y + delta.y * config_.vehicle_speed;
    if (nx < 0 || nx >= config_.grid_w) {
      nx = reflect_into(nx, config_.grid_w);
      delta.x = -delta.x;
    }
    if (ny < 0 || ny >= config_.grid_h) {
      ny = reflect_into(ny, config_.grid_h);
      delta.y = -delta.y;
    }
    cell = {nx, ny};
    // Keep the bounced heading persistent.
    for (int k = 0; k < kDirections; ++k) {
      if (action_to_delta(k) == delta) {
        vehicle_headings_[i] = k;
        break;
      }
    }
  }
}

void CoverageEnv::set_uav_cells(const std::vector<Cell>& cells) {
  if (static_cast<int>(cells.size()) != config_.num_agents) {
    throw ContractError("cell count must equal num_agents");
  }
  for (const Cell& c : cells) {
    if (c.x < 0 || c.x >= config_.grid_w || c.y < 0 || c.y >= config_.grid_h) {
      throw ContractError("uav cell outside the grid");
    }
  }
  state_.uav_cells = cells;
}

JointStep CoverageEnv::step(const std::vector<int>& joint_actions) {
  if (awaiting_reset_) throw ContractError("step() before reset()");
  if (static_cast<int>(joint_actions.size()) != config_.num_agents) {
    throw ContractError("joint action size must equal num_agents");
  }
  for (int agent = 0; agent < config_.num_agents; ++agent) {
    const Cell delta = action_to_delta(joint_actions[agent]);
    Cell& cell = state_.uav_cells[agent];
    cell.x = std::clamp(cell.x + delta.x, 0, config_.grid_w - 1);
    cell.y = std::clamp(cell.y + delta.y, 0, config_.grid_h - 1);
  }
  move_vehicles();
  state_.step_counter += 1;

  JointStep result;
  result.reward = compute_reward(compute_coverage(state_, config_),
                                 compute_connectivity(state_, config_));
  result.done = state_.step_counter >= config_.episode_length;
  if (result.done) awaiting_reset_ = true;
  result.observations.reserve(config_.num_agents);
  for (int agent = 0; agent < config_.num_agents; ++agent) {
    result.observations.push_back(build_observations(agent));
  }
  return result;
}

std::vector<float> CoverageEnv::full_map_location(int agent) const {
  std::vector<float> map(
      static_cast<std::size_t>(config_.grid_h) * config_.grid_w, 0.0f);
  const Cell& c = state_.uav_cells[agent];
  map[static_cast<std::size_t>(c.y) * config_.grid_w + c.x] = 1.0f;
  return map;
}

std::vector<float> CoverageEnv::full_map_team(int agent) const {
  std::vector<float> map(
      static_cast<std::size_t>(config_.grid_h) * config_.grid_w, 0.0f);
  for (int other = 0; other < config_.num_agents; ++other) {
    if (other == agent) continue;
    const Cell& c = state_.uav_cells[other];
    map[static_cast<std::size_t>(c.y) * config_.grid_w + c.x] = 1.0f;
  }
  return map;
}

std::vector<float> CoverageEnv::full_map_coverage() const {
  std::vector<float> map(
      static_cast<std::size_t>(config_.grid_h) * config_.grid_w, 0.0f);
  const int radius_cells = static_cast<int>(
      std::floor(config_.uav_cover_range / config_.cell_size));
  for (const Cell& uav : state_.uav_cells) {
    const int x0 = std::max(0, uav.x - radius_cells);
    const int x1 = std::min(config_.grid_w - 1, uav.x + radius_cells);
    const int y0 = std::max(0, uav.y - radius_cells);
    const int y1 = std::min(config_.grid_h - 1, uav.y + radius_cells);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (cell_distance_km({x, y}, uav, config_.cell_size) <=
            config_.uav_cover_range) {
          map[static_cast<std::size_t>(y) * config_.grid_w + x] = 1.0f;
        }
      }
    }
  }
  return map;
}

std::vector<float> CoverageEnv::full_map_vehicles(int agent) const {
  std::vector<float> map(
      static_cast<std::size_t>(config_.grid_h) * config_.grid_w, 0.0f);
  for (int i = 0; i < config_.num_vehicles; ++i) {
    if (state_.assignment[i] != agent) continue;
    const Cell& c = state_.vehicle_cells[i];
    map[static_cast<std::size_t>(c.y) * config_.grid_w + c.x] = 1.0f;
  }
  return map;
}

ObservationStack CoverageEnv::build_observations(int agent) const {
  if (agent < 0 || agent >= config_.num_agents) {
    throw ContractError("agent index out of range");
  }
  if (state_.uav_cells.empty()) {
    throw ContractError("build_observations() before the first reset()");
  }
  const int n = config_.obs_n;
  const int h = config_.grid_h;
  const int w = config_.grid_w;

  ObservationStack stack;
  stack.n = n;
  stack.data.assign(static_cast<std::size_t>(ObservationStack::kChannels) * n * n,
                    0.0f);

  // Local window centered on the agent; near the boundary the window shifts
  // to stay fully inside the grid.
  const Cell& self = state_.uav_cells[agent];
  const int half = n / 2;
  const int wx0 = std::clamp(self.x - half, 0, w - n);
  const int wy0 = std::clamp(self.y - half, 0, h - n);

  stack.at(ObservationStack::kLocalLocation, self.y - wy0, self.x - wx0) = 1.0f;
  for (int i = 0; i < config_.num_vehicles; ++i) {
    if (state_.assignment[i] != agent) continue;
    const Cell& c = state_.vehicle_cells[i];
    if (c.x >= wx0 && c.x < wx0 + n && c.y >= wy0 && c.y < wy0 + n) {
      stack.at(ObservationStack::kLocalVehicles, c.y - wy0, c.x - wx0) = 1.0f;
    }
  }

  const auto put_global = [&stack, h, w, n](int channel,
                                            const std::vector<float>& map,
                                            PoolMode mode) {
    const std::vector<float> small = downsample(map, h, w, n, mode);
    std::copy(small.begin(), small.end(),
              stack.data.begin() + static_cast<std::size_t>(channel) * n * n);
  };
  put_global(ObservationStack::kGlobalLocation, full_map_location(agent),
             PoolMode::kMax);
  put_global(ObservationStack::kGlobalTeam, full_map_team(agent),
             PoolMode::kMax);
  put_global(ObservationStack::kGlobalCoverage, full_map_coverage(),
             PoolMode::kMean);
  put_global(ObservationStack::kGlobalVehicles, full_map_vehicles(agent),
             PoolMode::kMax);
  return stack;
}

}  // namespace uaviov
