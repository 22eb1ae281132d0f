#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/ppo.hpp"
#include "core/pso.hpp"

namespace uaviov {

// Joint-action codec for the centralized baseline: agent 0 is the least
// significant digit in base-9.
std::uint64_t joint_action_width(int num_agents);
std::uint64_t encode_joint_action(const std::vector<int>& actions);
std::vector<int> decode_joint_action(std::uint64_t id, int num_agents);

// Input shape of the centralized network: the per-agent stacks concatenated
// along the channel axis.
ArchDescriptor centralized_arch(const ArchDescriptor& base, int num_agents);

// Hard cap on the joint-action head; beyond this the 9^N head blows up.
constexpr int kMaxCentralizedAgents = 5;

// The centralized-control baseline: one network consumes all observations and
// emits a distribution over 9^N joint actions, trained with the same PPO loop.
TrainResult centralized_train(const EnvConfig& env_config,
                              const ArchDescriptor& base_arch,
                              const PpoHyperparams& hp, std::uint64_t seed,
                              const TrainProgressFn& progress = {});

EvalMetrics evaluate_centralized_greedy(const Policy& policy,
                                        const EnvConfig& env_config,
                                        long long num_steps,
                                        std::uint64_t seed);

// Static-placement baseline: PSO positions at t=0, frozen for the episode.
EvalMetrics evaluate_static_placement(const EnvConfig& env_config,
                                      const PsoParams& pso, long long num_steps,
                                      std::uint64_t seed);

// Uniform-random action baseline.
EvalMetrics evaluate_random_policy(const EnvConfig& env_config,
                                   long long num_steps, std::uint64_t seed);

struct BenchScenario {
  std::string name;
  EnvConfig env;
  ArchDescriptor arch;       // decentralized trunk; centralized derives from it
  PpoHyperparams hp;         // shared training budget
  PsoParams pso;
  long long eval_steps = 2000;
};

struct BenchRow {
  std::string scenario;
  std::string method;  // mdrl | centralized | static_placement | random
  double mean_reward = 0.0;
  double mean_coverage = 0.0;
  double connectivity_fraction = 0.0;
};

// Runs the four methods on shared seeds, one row each per scenario.
std::vector<BenchRow> benchmark_suite(const std::vector<BenchScenario>& scenarios,
                                      std::uint64_t seed);

}  // namespace uaviov
