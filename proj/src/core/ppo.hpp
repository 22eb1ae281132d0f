#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/env.hpp"
#include "core/policy.hpp"

namespace uaviov {

struct PpoHyperparams {
  double entropy_coef = 0.01;     // c2
  double learning_rate = 3e-4;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  int epochs_per_update = 20;
  double discount = 0.99;         // gamma
  int horizon = 4000;             // env steps per update
  int minibatch_size = 250;       // must divide horizon
  long long total_steps = 1'000'000;
  double value_coef = 0.5;
  double grad_norm_clip = 0.5;
  long long eval_every = 40'000;
  long long eval_steps = 4'000;
  int threads = 2;

  void validate() const;
};

void to_json(Json& j, const PpoHyperparams& hp);
void from_json(const Json& j, PpoHyperparams& hp);

// Rollout storage, agent-major: sample s = agent * horizon + t. The shared
// reward and termination flag are replicated into every agent's stream.
struct TrajectoryBuffer {
  int num_agents = 0;
  int horizon = 0;
  std::size_t obs_size = 0;

  std::vector<float> obs;        // (num_agents * horizon) * obs_size
  std::vector<int> actions;
  std::vector<float> log_probs;
  std::vector<float> values;
  std::vector<float> rewards;
  std::vector<std::uint8_t> done_flags;
  std::vector<float> bootstrap_values;  // per agent, V(o_H) or 0 on terminal
  std::vector<float> advantages;
  std::vector<float> returns;
  int episodes_completed = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(num_agents) * horizon;
  }
  const float* obs_at(std::size_t s) const { return obs.data() + s * obs_size; }
};

// GAE over one reward/value stream. flags mask episode boundaries; the
// bootstrap value stands in for V(s_T) when the stream is cut mid-episode.
void compute_gae(const std::vector<float>& rewards,
                 const std::vector<float>& values,
                 const std::vector<std::uint8_t>& flags, double gamma,
                 double lambda, float bootstrap_value,
                 std::vector<float>& advantages, std::vector<float>& returns);

// Owns the environment between collection rounds so episodes can straddle
// updates. Every agent acts through the one shared policy snapshot.
class RolloutWorker {
 public:
  RolloutWorker(EnvConfig env_config, std::uint64_t seed);

  TrajectoryBuffer collect(const Policy& policy, const PpoHyperparams& hp);

  const EnvConfig& env_config() const { return env_config_; }

 private:
  EnvConfig env_config_;
  CoverageEnv env_;
  std::vector<ObservationStack> current_obs_;
  Rng action_rng_;
  Rng reset_rng_;
  bool episode_open_ = false;
};

struct UpdateDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double grad_norm = 0.0;  // pre-clip, last minibatch
};

// Adam state over one flat parameter vector.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(std::size_t size = 0) : m_(size, 0.0f), v_(size, 0.0f) {}

  void step(std::vector<float>& params, const std::vector<float>& grads,
            double lr, double scale);

 private:
  std::vector<float> m_, v_;
  long long t_ = 0;
};

// One PPO update: epochs_per_update passes of shuffled minibatches maximizing
// the clipped surrogate plus entropy bonus minus the value loss. Advantages
// are normalized per minibatch; gradients are clipped by global norm across
// both networks. Throws TrainingDiverged when a loss goes non-finite.
UpdateDiagnostics ppo_update(TrajectoryBuffer& buffer, Policy& policy,
                             const PpoHyperparams& hp, AdamOptimizer& actor_opt,
                             AdamOptimizer& critic_opt, Rng& shuffle_rng);

struct TrainingDiverged : std::runtime_error {
  explicit TrainingDiverged(const std::string& what, Json dump)
      : std::runtime_error(what), diagnostics(std::move(dump)) {}
  Json diagnostics;
};

struct EvalMetrics {
  double mean_episodic_reward = 0.0;
  double mean_coverage = 0.0;       // per step
  double connectivity_fraction = 0.0;
  int episodes = 0;
};

// Greedy evaluation over complete episodes only.
EvalMetrics evaluate_greedy(const Policy& policy, const EnvConfig& env_config,
                            long long num_steps, std::uint64_t seed);

struct CurvePoint {
  long long step = 0;
  double mean_episodic_reward = 0.0;
  double mean_coverage = 0.0;
  double connectivity_fraction = 0.0;
};

struct TrainResult {
  Policy policy;
  std::vector<CurvePoint> curve;
};

using TrainProgressFn =
    std::function<void(long long steps_done, const UpdateDiagnostics&)>;

// Algorithm loop: alternate collection and updates until total_steps, with a
// greedy evaluation every eval_every steps appended to the learning curve.
TrainResult train(const EnvConfig& env_config, const ArchDescriptor& arch,
                  const PpoHyperparams& hp, std::uint64_t seed,
                  const TrainProgressFn& progress = {});

}  // namespace uaviov
