#pragma once

#include <cstdint>
#include <vector>

#include "core/jsonio.hpp"
#include "core/rng.hpp"

namespace uaviov {

// Integer grid coordinates (cells).
struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

struct EnvConfig {
  int grid_h = 50;
  int grid_w = 50;
  double cell_size = 1.0;       // km per cell
  int obs_n = 21;               // reduced observation side, odd, 1 < n < min(h, w)
  double uav_link_range = 15.0; // km, UAV <-> UAV
  double uav_cover_range = 8.0; // km, UAV -> vehicle
  int num_agents = 2;
  int num_vehicles = 10;        // split near-evenly across agents
  int vehicle_speed = 1;        // cells per step
  int episode_length = 100;
  std::uint64_t seed = 0;

  void validate() const;
  std::vector<int> vehicles_per_agent() const;
};

void to_json(Json& j, const EnvConfig& c);
void from_json(const Json& j, EnvConfig& c);

struct EnvState {
  std::vector<Cell> uav_cells;      // per agent
  std::vector<Cell> vehicle_cells;  // per vehicle
  std::vector<int> assignment;      // vehicle -> agent index
  int step_counter = 0;
};

// Six n*n maps, values in [0, 1], row-major, channel order below.
struct ObservationStack {
  static constexpr int kChannels = 6;
  enum Channel {
    kLocalLocation = 0,
    kLocalVehicles = 1,
    kGlobalLocation = 2,
    kGlobalTeam = 3,
    kGlobalCoverage = 4,
    kGlobalVehicles = 5,
  };
  int n = 0;
  std::vector<float> data;  // kChannels * n * n

  float at(int channel, int y, int x) const {
    return data[(channel * n + y) * n + x];
  }
  float& at(int channel, int y, int x) {
    return data[(channel * n + y) * n + x];
  }
};

struct JointStep {
  double reward = 0.0;  // shared, in [-2, 0]
  bool done = false;
  std::vector<ObservationStack> observations;  // per agent
};

// Number of move directions; action ids 0..kDirections-1 are moves, id
// kDirections is "stay".
constexpr int kDirections = 8;
constexpr int kNumActions = kDirections + 1;

// Angle 2*pi*k/K discretized to a one-cell displacement; k == K stays put.
Cell action_to_delta(int action, int directions = kDirections);

double compute_coverage(const EnvState& state, const EnvConfig& config);
int compute_connectivity(const EnvState& state, const EnvConfig& config);

// Reward shaping: (coverage - 1) + (connectivity - 1), so full coverage and
// connectivity score 0 and total absence scores -2.
inline double compute_reward(double coverage, int connectivity) {
  return (coverage - 1.0) + (static_cast<double>(connectivity) - 1.0);
}

// Near-equal tiling downsample: presence maps pool by max, the coverage map
// pools by mean.
enum class PoolMode { kMax, kMean };
std::vector<float> downsample(const std::vector<float>& map, int h, int w,
                              int n, PoolMode mode);

// The grid-world Markov game: UAV agents move in discrete steps to keep
// mobile vehicles covered while staying mutually connected.
class CoverageEnv {
 public:
  explicit CoverageEnv(EnvConfig config);

  // Places vehicles uniformly at random, each UAV at the rounded centroid of
  // its assigned vehicles, and returns the initial observations.
  std::vector<ObservationStack> reset(std::uint64_t seed);

  // One joint transition: UAVs move (clipped at the boundary), vehicles take
  // their random-walk step, the shared reward is computed on the new state.
  JointStep step(const std::vector<int>& joint_actions);

  ObservationStack build_observations(int agent) const;

  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return config_; }
  bool awaiting_reset() const { return awaiting_reset_; }

  // Exposed for the mobility unit tests.
  void move_vehicles();

  // Overrides agent positions (placement baselines). Cells must be in-grid.
  void set_uav_cells(const std::vector<Cell>& cells);

 private:
  std::vector<float> full_map_location(int agent) const;
  std::vector<float> full_map_team(int agent) const;
  std::vector<float> full_map_coverage() const;
  std::vector<float> full_map_vehicles(int agent) const;

  EnvConfig config_;
  EnvState state_;
  std::vector<int> vehicle_headings_;  // direction id per vehicle
  Rng rng_;
  bool awaiting_reset_ = true;
};

}  // namespace uaviov
