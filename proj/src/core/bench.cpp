#include "core/bench.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace uaviov {

std::uint64_t joint_action_width(int num_agents) {
  std::uint64_t width = 1;
  for (int i = 0; i < num_agents; ++i) width *= kNumActions;
  return width;
}

std::uint64_t encode_joint_action(const std::vector<int>& actions) {
  std::uint64_t id = 0;
  std::uint64_t base = 1;
  for (int a : actions) {
    if (a < 0 || a >= kNumActions) throw ContractError("action id out of range");
    id += base * static_cast<std::uint64_t>(a);
    base *= kNumActions;
  }
  return id;
}

std::vector<int> decode_joint_action(std::uint64_t id, int num_agents) {
  std::vector<int> actions(num_agents);
  for (int k = 0; k < num_agents; ++k) {
    actions[k] = static_cast<int>(id % kNumActions);
    id /= kNumActions;
  }
  if (id != 0) throw ContractError("joint action id out of range");
  return actions;
}

ArchDescriptor centralized_arch(const ArchDescriptor& base, int num_agents) {
  ArchDescriptor arch = base;
  arch.input_channels = base.input_channels * num_agents;
  return arch;
}

namespace {

std::vector<float> concat_observations(const std::vector<ObservationStack>& obs) {
  std::vector<float> joint;
  std::size_t total = 0;
  for (const ObservationStack& o : obs) total += o.data.size();
  joint.reserve(total);
  for (const ObservationStack& o : obs) {
    joint.insert(joint.end(), o.data.begin(), o.data.end());
  }
  return joint;
}

void guard_centralized(int num_agents) {
  if (num_agents > kMaxCentralizedAgents) {
    throw ConfigError(
        "centralized baseline limited to " +
        std::to_string(kMaxCentralizedAgents) +
        " agents: the joint action head grows as 9^N");
  }
}

}  // namespace

TrainResult centralized_train(const EnvConfig& env_config,
                              const ArchDescriptor& base_arch,
                              const PpoHyperparams& hp, std::uint64_t seed,
                              const TrainProgressFn& progress) {
  hp.validate();
  env_config.validate();
  guard_centralized(env_config.num_agents);

  const int num_actions =
      static_cast<int>(joint_action_width(env_config.num_agents));
  TrainResult result;
  result.policy = Policy(centralized_arch(base_arch, env_config.num_agents),
                         num_actions, derive_seed(seed, 0x706f6c31));

  CoverageEnv env(env_config);
  Rng action_rng(derive_seed(seed, 0x61637431));
  Rng reset_rng(derive_seed(seed, 0x72657331));
  AdamOptimizer actor_opt(result.policy.actor().param_count());
  AdamOptimizer critic_opt(result.policy.critic().param_count());
  Rng shuffle_rng(derive_seed(seed, 0x73687531));

  std::vector<float> joint_obs = concat_observations(env.reset(reset_rng.next_u64()));

  long long steps_done = 0;
  long long next_eval = hp.eval_every;
  while (steps_done < hp.total_steps) {
    TrajectoryBuffer buf;
    buf.num_agents = 1;  // one joint decision-maker
    buf.horizon = hp.horizon;
    buf.obs_size = result.policy.actor().input_size();
    buf.obs.resize(static_cast<std::size_t>(hp.horizon) * buf.obs_size);
    buf.actions.resize(hp.horizon);
    buf.log_probs.resize(hp.horizon);
    buf.values.resize(hp.horizon);
    buf.rewards.resize(hp.horizon);
    buf.done_flags.resize(hp.horizon);
    buf.bootstrap_values.assign(1, 0.0f);

    for (int t = 0; t < hp.horizon; ++t) {
      std::copy(joint_obs.begin(), joint_obs.end(),
                buf.obs.begin() + static_cast<std::size_t>(t) * buf.obs_size);
      const ActionDistribution dist = result.policy.actor_forward(joint_obs);
      const auto [action, logp] = sample_action(dist, action_rng);
      buf.actions[t] = action;
      buf.log_probs[t] = logp;
      buf.values[t] = result.policy.critic_forward(joint_obs);

      JointStep stepped = env.step(
          decode_joint_action(static_cast<std::uint64_t>(action),
                              env_config.num_agents));
      buf.rewards[t] = static_cast<float>(stepped.reward);
      buf.done_flags[t] = stepped.done ? 1 : 0;
      if (stepped.done) {
        buf.episodes_completed += 1;
        joint_obs = concat_observations(env.reset(reset_rng.next_u64()));
      } else {
        joint_obs = concat_observations(stepped.observations);
      }
    }
    buf.bootstrap_values[0] = buf.done_flags[hp.horizon - 1]
                                  ? 0.0f
                                  : result.policy.critic_forward(joint_obs);
    std::vector<float> adv, ret;
    compute_gae(buf.rewards, buf.values, buf.done_flags, hp.discount,
                hp.gae_lambda, buf.bootstrap_values[0], adv, ret);
    buf.advantages = std::move(adv);
    buf.returns = std::move(ret);

    const UpdateDiagnostics diag = ppo_update(
        buf, result.policy, hp, actor_opt, critic_opt, shuffle_rng);
    steps_done += hp.horizon;
    if (progress) progress(steps_done, diag);

    while (next_eval <= steps_done && next_eval <= hp.total_steps) {
      const EvalMetrics m = evaluate_centralized_greedy(
          result.policy, env_config, hp.eval_steps,
          derive_seed(seed, 0xe5a10000ULL + next_eval));
      result.curve.push_back(CurvePoint{next_eval, m.mean_episodic_reward,
                                        m.mean_coverage,
                                        m.connectivity_fraction});
      next_eval += hp.eval_every;
    }
  }
  return result;
}

EvalMetrics evaluate_centralized_greedy(const Policy& policy,
                                        const EnvConfig& env_config,
                                        long long num_steps,
                                        std::uint64_t seed) {
  guard_centralized(env_config.num_agents);
  EvalMetrics metrics;
  const long long episodes = num_steps / env_config.episode_length;
  if (episodes == 0) return metrics;

  CoverageEnv env(env_config);
  double reward_sum = 0.0, coverage_sum = 0.0;
  long long connected_steps = 0, steps = 0;
  for (long long e = 0; e < episodes; ++e) {
    std::vector<float> joint_obs =
        concat_observations(env.reset(derive_seed(seed, e)));
    bool done = false;
    while (!done) {
      const int action = policy.actor_forward(joint_obs).greedy();
      JointStep result = env.step(decode_joint_action(
          static_cast<std::uint64_t>(action), env_config.num_agents));
      reward_sum += result.reward;
      coverage_sum += compute_coverage(env.state(), env_config);
      connected_steps += compute_connectivity(env.state(), env_config);
      steps += 1;
      done = result.done;
      joint_obs = concat_observations(result.observations);
    }
  }
  metrics.episodes = static_cast<int>(episodes);
  metrics.mean_episodic_reward = reward_sum / static_cast<double>(episodes);
  metrics.mean_coverage = coverage_sum / static_cast<double>(steps);
  metrics.connectivity_fraction =
      static_cast<double>(connected_steps) / static_cast<double>(steps);
  return metrics;
}

EvalMetrics evaluate_static_placement(const EnvConfig& env_config,
                                      const PsoParams& pso, long long num_steps,
                                      std::uint64_t seed) {
  EvalMetrics metrics;
  const long long episodes = num_steps / env_config.episode_length;
  if (episodes == 0) return metrics;

  CoverageEnv env(env_config);
  const std::vector<int> stay(env_config.num_agents, kDirections);
  double reward_sum = 0.0, coverage_sum = 0.0;
  long long connected_steps = 0, steps = 0;
  for (long long e = 0; e < episodes; ++e) {
    env.reset(derive_seed(seed, e));
    const PlacementResult placement = static_placement(
        env.state(), env_config, pso, derive_seed(seed, 0x50534f00ULL + e));
    env.set_uav_cells(placement.positions);
    bool done = false;
    while (!done) {
      JointStep result = env.step(stay);
      reward_sum += result.reward;
      coverage_sum += compute_coverage(env.state(), env_config);
      connected_steps += compute_connectivity(env.state(), env_config);
      steps += 1;
      done = result.done;
    }
  }
  metrics.episodes = static_cast<int>(episodes);
  metrics.mean_episodic_reward = reward_sum / static_cast<double>(episodes);
  metrics.mean_coverage = coverage_sum / static_cast<double>(steps);
  metrics.connectivity_fraction =
      static_cast<double>(connected_steps) / static_cast<double>(steps);
  return metrics;
}

EvalMetrics evaluate_random_policy(const EnvConfig& env_config,
                                   long long num_steps, std::uint64_t seed) {
  EvalMetrics metrics;
  const long long episodes = num_steps / env_config.episode_length;
  if (episodes == 0) return metrics;

  CoverageEnv env(env_config);
  Rng rng(derive_seed(seed, 0x72616e64));
  double reward_sum = 0.0, coverage_sum = 0.0;
  long long connected_steps = 0, steps = 0;
  for (long long e = 0; e < episodes; ++e) {
    env.reset(derive_seed(seed, e));
    bool done = false;
    while (!done) {
      std::vector<int> actions(env_config.num_agents);
      for (int& a : actions) {
        a = static_cast<int>(rng.uniform_index(kNumActions));
      }
      JointStep result = env.step(actions);
      reward_sum += result.reward;
      coverage_sum += compute_coverage(env.state(), env_config);
      connected_steps += compute_connectivity(env.state(), env_config);
      steps += 1;
      done = result.done;
    }
  }
  metrics.episodes = static_cast<int>(episodes);
  metrics.mean_episodic_reward = reward_sum / static_cast<double>(episodes);
  metrics.mean_coverage = coverage_sum / static_cast<double>(steps);
  metrics.connectivity_fraction =
      static_cast<double>(connected_steps) / static_cast<double>(steps);
  return metrics;
}

std::vector<BenchRow> benchmark_suite(const std::vector<BenchScenario>& scenarios,
                                      std::uint64_t seed) {
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const BenchScenario& sc = scenarios[i];
    const std::uint64_t sc_seed = derive_seed(seed, 0xb0000000ULL + i);
    const std::uint64_t eval_seed = derive_seed(sc_seed, 0xe0e0);

    const TrainResult mdrl = train(sc.env, sc.arch, sc.hp, sc_seed);
    const EvalMetrics m_mdrl =
        evaluate_greedy(mdrl.policy, sc.env, sc.eval_steps, eval_seed);
    rows.push_back(BenchRow{sc.name, "mdrl", m_mdrl.mean_episodic_reward,
                            m_mdrl.mean_coverage, m_mdrl.connectivity_fraction});

    const TrainResult central = centralized_train(sc.env, sc.arch, sc.hp, sc_seed);
    const EvalMetrics m_central = evaluate_centralized_greedy(
        central.policy, sc.env, sc.eval_steps, eval_seed);
    rows.push_back(BenchRow{sc.name, "centralized",
                            m_central.mean_episodic_reward,
                            m_central.mean_coverage,
                            m_central.connectivity_fraction});

    const EvalMetrics m_static =
        evaluate_static_placement(sc.env, sc.pso, sc.eval_steps, eval_seed);
    rows.push_back(BenchRow{sc.name, "static_placement",
                            m_static.mean_episodic_reward,
                            m_static.mean_coverage,
                            m_static.connectivity_fraction});

    const EvalMetrics m_random =
        evaluate_random_policy(sc.env, sc.eval_steps, eval_seed);
    rows.push_back(BenchRow{sc.name, "random", m_random.mean_episodic_reward,
                            m_random.mean_coverage,
                            m_random.connectivity_fraction});
  }
  return rows;
}

}  // namespace uaviov
