#include "core/ppo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace uaviov {

namespace {

// Fixed chunk count keeps the gradient reduction order, and therefore the
// result, independent of the thread count.
constexpr int kGradChunks = 8;

void parallel_chunks(int num_chunks, int num_threads,
                     const std::function<void(int)>& body) {
  if (num_threads <= 1) {
    for (int c = 0; c < num_chunks; ++c) body(c);
    return;
  }
  std::atomic<int> next{0};
  auto run = [&] {
    for (int c = next.fetch_add(1); c < num_chunks; c = next.fetch_add(1)) {
      body(c);
    }
  };
  std::vector<std::thread> pool;
  const int spawn = std::min(num_threads, num_chunks) - 1;
  pool.reserve(spawn);
  for (int i = 0; i < spawn; ++i) pool.emplace_back(run);
  run();
  for (std::thread& th : pool) th.join();
}

}  // namespace

void PpoHyperparams::validate() const {
  if (!(discount > 0.0 && discount <= 1.0)) {
    throw ConfigError("discount must be in (0, 1]");
  }
  if (gae_lambda < 0.0 || gae_lambda > 1.0) {
    throw ConfigError("gae_lambda must be in [0, 1]");
  }
  if (clip_epsilon <= 0.0) throw ConfigError("clip_epsilon must be positive");
  if (horizon < 1 || minibatch_size < 1 || horizon % minibatch_size != 0) {
    throw ConfigError("horizon must be a positive multiple of minibatch_size");
  }
  if (epochs_per_update < 1) throw ConfigError("epochs_per_update must be >= 1");
  if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
  if (total_steps < 1) throw ConfigError("total_steps must be >= 1");
  if (eval_every < 1 || eval_steps < 1) {
    throw ConfigError("evaluation cadence must be positive");
  }
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

void to_json(Json& j, const PpoHyperparams& hp) {
  j = Json{{"entropy_coef", hp.entropy_coef},
           {"learning_rate", hp.learning_rate},
           {"gae_lambda", hp.gae_lambda},
           {"clip_epsilon", hp.clip_epsilon},
           {"epochs_per_update", hp.epochs_per_update},
           {"discount", hp.discount},
           {"horizon", hp.horizon},
           {"minibatch_size", hp.minibatch_size},
           {"total_steps", hp.total_steps},
           {"value_coef", hp.value_coef},
           {"grad_norm_clip", hp.grad_norm_clip},
           {"eval_every", hp.eval_every},
           {"eval_steps", hp.eval_steps},
           {"threads", hp.threads}};
}

void from_json(const Json& j, PpoHyperparams& hp) {
  hp.entropy_coef = j.value("entropy_coef", hp.entropy_coef);
  hp.learning_rate = j.value("learning_rate", hp.learning_rate);
  hp.gae_lambda = j.value("gae_lambda", hp.gae_lambda);
  hp.clip_epsilon = j.value("clip_epsilon", hp.clip_epsilon);
  hp.epochs_per_update = j.value("epochs_per_update", hp.epochs_per_update);
  hp.discount = j.value("discount", hp.discount);
  hp.horizon = j.value("horizon", hp.horizon);
  hp.minibatch_size = j.value("minibatch_size", hp.minibatch_size);
  hp.total_steps = j.value("total_steps", hp.total_steps);
  hp.value_coef = j.value("value_coef", hp.value_coef);
  hp.grad_norm_clip = j.value("grad_norm_clip", hp.grad_norm_clip);
  hp.eval_every = j.value("eval_every", hp.eval_every);
  hp.eval_steps = j.value("eval_steps", hp.eval_steps);
  hp.threads = j.value("threads", hp.threads);
}

void compute_gae(const std::vector<float>& rewards,
                 const std::vector<float>& values,
                 const std::vector<std::uint8_t>& flags, double gamma,
                 double lambda, float bootstrap_value,
                 std::vector<float>& advantages, std::vector<float>& returns) {
  const std::size_t n = rewards.size();
  if (values.size() != n || flags.size() != n) {
    throw ContractError("GAE input sequences must be aligned");
  }
  advantages.resize(n);
  returns.resize(n);
  double gae = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double not_done = flags[i] ? 0.0 : 1.0;
    const double next_value =
        i + 1 < n ? values[i + 1] : static_cast<double>(bootstrap_value);
    const double delta =
        rewards[i] + gamma * next_value * not_done - values[i];
    gae = delta + gamma * lambda * not_done * gae;
    advantages[i] = static_cast<float>(gae);
    returns[i] = static_cast<float>(gae + values[i]);
  }
}

RolloutWorker::RolloutWorker(EnvConfig env_config, std::uint64_t seed)
    : env_config_(std::move(env_config)),
      env_(env_config_),
      action_rng_(derive_seed(seed, 0x61637431)),
      reset_rng_(derive_seed(seed, 0x72657331)) {}

TrajectoryBuffer RolloutWorker::collect(const Policy& policy,
                                        const PpoHyperparams& hp) {
  const int num_agents = env_config_.num_agents;
  TrajectoryBuffer buf;
  buf.num_agents = num_agents;
  buf.horizon = hp.horizon;
  buf.obs_size = policy.actor().input_size();
  const std::size_t total = buf.size();
  buf.obs.resize(total * buf.obs_size);
  buf.actions.resize(total);
  buf.log_probs.resize(total);
  buf.values.resize(total);
  buf.rewards.resize(total);
  buf.done_flags.resize(total);
  buf.bootstrap_values.assign(num_agents, 0.0f);

  if (!episode_open_) {
    current_obs_ = env_.reset(reset_rng_.next_u64());
    episode_open_ = true;
  }

  std::vector<int> joint_actions(num_agents);
  for (int t = 0; t < hp.horizon; ++t) {
    for (int k = 0; k < num_agents; ++k) {
      const std::size_t s = static_cast<std::size_t>(k) * hp.horizon + t;
      const std::vector<float>& obs = current_obs_[k].data;
      std::copy(obs.begin(), obs.end(), buf.obs.begin() + s * buf.obs_size);
      const ActionDistribution dist = policy.actor_forward(obs);
      const auto [action, logp] = sample_action(dist, action_rng_);
      joint_actions[k] = action;
      buf.actions[s] = action;
      buf.log_probs[s] = logp;
      buf.values[s] = policy.critic_forward(obs);
    }
    JointStep result = env_.step(joint_actions);
    for (int k = 0; k < num_agents; ++k) {
      const std::size_t s = static_cast<std::size_t>(k) * hp.horizon + t;
      buf.rewards[s] = static_cast<float>(result.reward);
      buf.done_flags[s] = result.done ? 1 : 0;
    }
    if (result.done) {
      buf.episodes_completed += 1;
      current_obs_ = env_.reset(reset_rng_.next_u64());
    } else {
      current_obs_ = std::move(result.observations);
    }
  }

  for (int k = 0; k < num_agents; ++k) {
    const std::size_t last = static_cast<std::size_t>(k) * hp.horizon +
                             (hp.horizon - 1);
    buf.bootstrap_values[k] =
        buf.done_flags[last] ? 0.0f : policy.critic_forward(current_obs_[k].data);
  }

  // Per-agent GAE over contiguous streams.
  buf.advantages.resize(total);
  buf.returns.resize(total);
  std::vector<float> rew(hp.horizon), val(hp.horizon), adv, ret;
  std::vector<std::uint8_t> flags(hp.horizon);
  for (int k = 0; k < num_agents; ++k) {
    const std::size_t base = static_cast<std::size_t>(k) * hp.horizon;
    std::copy_n(buf.rewards.begin() + base, hp.horizon, rew.begin());
    std::copy_n(buf.values.begin() + base, hp.horizon, val.begin());
    std::copy_n(buf.done_flags.begin() + base, hp.horizon, flags.begin());
    compute_gae(rew, val, flags, hp.discount, hp.gae_lambda,
                buf.bootstrap_values[k], adv, ret);
    std::copy(adv.begin(), adv.end(), buf.advantages.begin() + base);
    std::copy(ret.begin(), ret.end(), buf.returns.begin() + base);
  }
  return buf;
}

void AdamOptimizer::step(std::vector<float>& params,
                         const std::vector<float>& grads, double lr,
                         double scale) {
  if (m_.size() != params.size()) {
    m_.assign(params.size(), 0.0f);
    v_.assign(params.size(), 0.0f);
    t_ = 0;
  }
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  t_ += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = static_cast<double>(grads[i]) * scale;
    const double m = beta1 * m_[i] + (1.0 - beta1) * g;
    const double v = beta2 * v_[i] + (1.0 - beta2) * g * g;
    m_[i] = static_cast<float>(m);
    v_[i] = static_cast<float>(v);
    const double m_hat = m / bc1;
    const double v_hat = v / bc2;
    params[i] -= static_cast<float>(lr * m_hat / (std::sqrt(v_hat) + eps));
  }
}

UpdateDiagnostics ppo_update(TrajectoryBuffer& buffer, Policy& policy,
                             const PpoHyperparams& hp,
                             AdamOptimizer& actor_opt,
                             AdamOptimizer& critic_opt, Rng& shuffle_rng) {
  hp.validate();
  const std::size_t total = buffer.size();
  if (total == 0 || buffer.obs.size() != total * buffer.obs_size) {
    throw ContractError("trajectory buffer is not full");
  }
  const std::size_t batch = static_cast<std::size_t>(hp.minibatch_size);
  const std::size_t num_batches = total / batch;

  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;

  const std::size_t actor_n = policy.actor().param_count();
  const std::size_t critic_n = policy.critic().param_count();
  std::vector<std::vector<float>> actor_grads(kGradChunks),
      critic_grads(kGradChunks);
  std::vector<double> chunk_ploss(kGradChunks), chunk_vloss(kGradChunks),
      chunk_entropy(kGradChunks), chunk_kl(kGradChunks);
  std::vector<float> actor_grad(actor_n), critic_grad(critic_n);

  UpdateDiagnostics diag;

  for (int epoch = 0; epoch < hp.epochs_per_update; ++epoch) {
    // Fisher-Yates shuffle.
    for (std::size_t i = total - 1; i > 0; --i) {
      const std::size_t j = shuffle_rng.uniform_index(i + 1);
      std::swap(order[i], order[j]);
    }

    for (std::size_t b = 0; b < num_batches; ++b) {
      const std::size_t* batch_ix = order.data() + b * batch;

      // Advantage normalization per minibatch.
      double mean = 0.0;
      for (std::size_t i = 0; i < batch; ++i) {
        mean += buffer.advantages[batch_ix[i]];
      }
      mean /= static_cast<double>(batch);
      double var = 0.0;
      for (std::size_t i = 0; i < batch; ++i) {
        const double d = buffer.advantages[batch_ix[i]] - mean;
        var += d * d;
      }
      var /= static_cast<double>(batch);
      const double inv_std = 1.0 / (std::sqrt(var) + 1e-8);

      const double inv_batch = 1.0 / static_cast<double>(batch);
      const std::size_t chunk_len = (batch + kGradChunks - 1) / kGradChunks;

      parallel_chunks(kGradChunks, hp.threads, [&](int c) {
        auto& ag = actor_grads[c];
        auto& cg = critic_grads[c];
        ag.assign(actor_n, 0.0f);
        cg.assign(critic_n, 0.0f);
        double ploss = 0.0, vloss = 0.0, ent = 0.0, kl = 0.0;
        Network<float>::Cache actor_cache, critic_cache;
        std::vector<float> probs, log_probs, dlogits;

        const std::size_t lo = c * chunk_len;
        const std::size_t hi = std::min(batch, lo + chunk_len);
        for (std::size_t i = lo; i < hi; ++i) {
          const std::size_t s = batch_ix[i];
          const float* obs = buffer.obs_at(s);
          const int action = buffer.actions[s];
          const double adv =
              (buffer.advantages[s] - mean) * inv_std;

          policy.actor().forward(obs, actor_cache);
          softmax(actor_cache.acts.back(), probs, log_probs);
          const double logp_new = log_probs[action];
          const double logp_old = buffer.log_probs[s];
          const double ratio = std::exp(logp_new - logp_old);
          const double unclipped = ratio * adv;
          const double clipped =
              std::clamp(ratio, 1.0 - hp.clip_epsilon, 1.0 + hp.clip_epsilon) *
              adv;
          const double entropy = entropy_of(probs, log_probs);
          ploss += -std::min(unclipped, clipped);
          ent += entropy;
          kl += logp_old - logp_new;

          // Gradient flows through the unclipped branch unless the min picked
          // the actively clipped one, which is constant in the parameters.
          const bool clip_active =
              ratio < 1.0 - hp.clip_epsilon || ratio > 1.0 + hp.clip_epsilon;
          const double coef =
              (unclipped <= clipped || !clip_active) ? ratio * adv : 0.0;

          dlogits.assign(probs.size(), 0.0f);
          for (std::size_t a = 0; a < probs.size(); ++a) {
            const double onehot = (static_cast<int>(a) == action) ? 1.0 : 0.0;
            double g = -coef * (onehot - probs[a]);
            g += hp.entropy_coef * probs[a] * (log_probs[a] + entropy);
            dlogits[a] = static_cast<float>(g * inv_batch);
          }
          policy.actor().backward(actor_cache, dlogits, ag);

          policy.critic().forward(obs, critic_cache);
          const double value = critic_cache.acts.back()[0];
          const double verr = value - buffer.returns[s];
          vloss += hp.value_coef * verr * verr;
          const std::vector<float> dvalue = {
              static_cast<float>(2.0 * hp.value_coef * verr * inv_batch)};
          policy.critic().backward(critic_cache, dvalue, cg);
        }
        chunk_ploss[c] = ploss;
        chunk_vloss[c] = vloss;
        chunk_entropy[c] = ent;
        chunk_kl[c] = kl;
      });

      // Ordered reduction keeps the update bit-deterministic.
      std::fill(actor_grad.begin(), actor_grad.end(), 0.0f);
      std::fill(critic_grad.begin(), critic_grad.end(), 0.0f);
      double ploss = 0.0, vloss = 0.0, ent = 0.0, kl = 0.0;
      for (int c = 0; c < kGradChunks; ++c) {
        for (std::size_t i = 0; i < actor_n; ++i) actor_grad[i] += actor_grads[c][i];
        for (std::size_t i = 0; i < critic_n; ++i) critic_grad[i] += critic_grads[c][i];
        ploss += chunk_ploss[c];
        vloss += chunk_vloss[c];
        ent += chunk_entropy[c];
        kl += chunk_kl[c];
      }
      ploss *= inv_batch;
      vloss *= inv_batch;
      ent *= inv_batch;
      kl *= inv_batch;

      const double total_loss = ploss + vloss - hp.entropy_coef * ent;
      if (!std::isfinite(total_loss)) {
        Json dump{{"epoch", epoch},
                  {"minibatch", b},
                  {"policy_loss", ploss},
                  {"value_loss", vloss},
                  {"entropy", ent},
                  {"approx_kl", kl}};
        throw TrainingDiverged("non-finite PPO loss", std::move(dump));
      }

      // Global norm over both networks' gradients.
      double sq = 0.0;
      for (float g : actor_grad) sq += static_cast<double>(g) * g;
      for (float g : critic_grad) sq += static_cast<double>(g) * g;
      const double norm = std::sqrt(sq);
      const double scale =
          norm > hp.grad_norm_clip ? hp.grad_norm_clip / norm : 1.0;

      actor_opt.step(policy.actor().params(), actor_grad, hp.learning_rate,
                     scale);
      critic_opt.step(policy.critic().params(), critic_grad, hp.learning_rate,
                      scale);

      diag.policy_loss = ploss;
      diag.value_loss = vloss;
      diag.entropy = ent;
      diag.approx_kl = kl;
      diag.grad_norm = norm;
    }
  }

  for (const auto* net : {&policy.actor(), &policy.critic()}) {
    for (float p : net->params()) {
      if (!std::isfinite(p)) {
        throw TrainingDiverged("non-finite parameter after update",
                               Json{{"grad_norm", diag.grad_norm},
                                    {"policy_loss", diag.policy_loss},
                                    {"value_loss", diag.value_loss}});
      }
    }
  }

  // Buffer is consumed by the update.
  buffer = TrajectoryBuffer{};
  return diag;
}

EvalMetrics evaluate_greedy(const Policy& policy, const EnvConfig& env_config,
                            long long num_steps, std::uint64_t seed) {
  EvalMetrics metrics;
  const long long episodes = num_steps / env_config.episode_length;
  if (episodes == 0) return metrics;

  CoverageEnv env(env_config);
  double reward_sum = 0.0, coverage_sum = 0.0;
  long long connected_steps = 0, steps = 0;
  for (long long e = 0; e < episodes; ++e) {
    std::vector<ObservationStack> obs = env.reset(derive_seed(seed, e));
    bool done = false;
    while (!done) {
      std::vector<int> actions(env_config.num_agents);
      for (int k = 0; k < env_config.num_agents; ++k) {
        actions[k] = policy.actor_forward(obs[k].data).greedy();
      }
      JointStep result = env.step(actions);
      reward_sum += result.reward;
      coverage_sum += compute_coverage(env.state(), env_config);
      connected_steps += compute_connectivity(env.state(), env_config);
      steps += 1;
      done = result.done;
      obs = std::move(result.observations);
    }
  }
  metrics.episodes = static_cast<int>(episodes);
  metrics.mean_episodic_reward = reward_sum / static_cast<double>(episodes);
  metrics.mean_coverage = coverage_sum / static_cast<double>(steps);
  metrics.connectivity_fraction =
      static_cast<double>(connected_steps) / static_cast<double>(steps);
  return metrics;
}

TrainResult train(const EnvConfig& env_config, const ArchDescriptor& arch,
                  const PpoHyperparams& hp, std::uint64_t seed,
                  const TrainProgressFn& progress) {
  hp.validate();
  env_config.validate();

  TrainResult result;
  result.policy = Policy(arch, kNumActions, derive_seed(seed, 0x706f6c31));
  RolloutWorker worker(env_config, derive_seed(seed, 0x726f6c31));
  AdamOptimizer actor_opt(result.policy.actor().param_count());
  AdamOptimizer critic_opt(result.policy.critic().param_count());
  Rng shuffle_rng(derive_seed(seed, 0x73687531));

  long long steps_done = 0;
  long long next_eval = hp.eval_every;
  while (steps_done < hp.total_steps) {
    TrajectoryBuffer buffer = worker.collect(result.policy, hp);
    const UpdateDiagnostics diag = ppo_update(
        buffer, result.policy, hp, actor_opt, critic_opt, shuffle_rng);
    steps_done += hp.horizon;
    if (progress) progress(steps_done, diag);

    while (next_eval <= steps_done && next_eval <= hp.total_steps) {
      const EvalMetrics m =
          evaluate_greedy(result.policy, env_config, hp.eval_steps,
                          derive_seed(seed, 0xe5a10000ULL + next_eval));
      result.curve.push_back(CurvePoint{next_eval, m.mean_episodic_reward,
                                        m.mean_coverage,
                                        m.connectivity_fraction});
      next_eval += hp.eval_every;
    }
  }
  return result;
}

}  // namespace uaviov
