#include "uaviov.h"

#include <cstring>
#include <new>
#include <string>

#include "core/env.hpp"
#include "core/errors.hpp"
#include "core/ledger.hpp"
#include "core/model_store.hpp"
#include "core/policy.hpp"
#include "core/runner.hpp"
#include "core/scoring.hpp"
#include "core/version.hpp"

using namespace uaviov;

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

uaviov_status fail(uaviov_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Maps core exceptions onto status codes.
template <typename Fn>
uaviov_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    return fail(UAVIOV_ERR_CONFIG, e.what());
  } catch (const ContractError& e) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, e.what());
  } catch (const DomainError& e) {
    return fail(UAVIOV_ERR_DOMAIN, e.what());
  } catch (const NotFoundError& e) {
    return fail(UAVIOV_ERR_NOT_FOUND, e.what());
  } catch (const IntegrityError& e) {
    return fail(UAVIOV_ERR_INTEGRITY, e.what());
  } catch (const Json::exception& e) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(UAVIOV_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(UAVIOV_ERR_RUNTIME, e.what());
  }
}

Json parse_or_empty(const char* json) {
  if (json == nullptr || *json == '\0') return Json::object();
  return Json::parse(json);
}

}  // namespace

struct uaviov_ledger {
  Ledger impl;
};

struct uaviov_model_store {
  ModelStore impl;
};

struct uaviov_env {
  CoverageEnv impl;
};

struct uaviov_policy {
  Policy impl;
};

extern "C" {

const char* uaviov_version(void) { return kVersionString; }

const char* uaviov_last_error(void) { return g_last_error.c_str(); }

void uaviov_string_free(char* s) { delete[] s; }

void uaviov_buffer_free(uint8_t* p) { delete[] p; }

/* ---- quality scores ----------------------------------------------------- */

static uaviov_status compute_score(const char* uav_json,
                                   const char* vehicle_json,
                                   const char* bounds_json,
                                   const char* weights_json, double* out_score,
                                   bool qou) {
  if (!uav_json || !vehicle_json || !out_score) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const UavInfo u = Json::parse(uav_json).get<UavInfo>();
    const VehicleInfo v = Json::parse(vehicle_json).get<VehicleInfo>();
    NormalizationBounds b;
    parse_or_empty(bounds_json).get_to(b);
    ScoringWeights w;
    parse_or_empty(weights_json).get_to(w);
    w.validate();
    *out_score = qou ? compute_qou(u, v, b, w) : compute_qov(u, v, b, w);
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_compute_qou(const char* uav_json, const char* vehicle_json,
                                 const char* bounds_json,
                                 const char* weights_json, double* out_score) {
  return compute_score(uav_json, vehicle_json, bounds_json, weights_json,
                       out_score, true);
}

uaviov_status uaviov_compute_qov(const char* uav_json, const char* vehicle_json,
                                 const char* bounds_json,
                                 const char* weights_json, double* out_score) {
  return compute_score(uav_json, vehicle_json, bounds_json, weights_json,
                       out_score, false);
}

/* ---- ledger ------------------------------------------------------------- */

uaviov_status uaviov_ledger_new(const char* config_json, uaviov_ledger** out) {
  if (!out) return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    LedgerConfig config;
    parse_or_empty(config_json).get_to(config);
    *out = new uaviov_ledger{Ledger(std::move(config))};
    return UAVIOV_OK;
  });
}

void uaviov_ledger_free(uaviov_ledger* ledger) { delete ledger; }

uaviov_status uaviov_ledger_apply(uaviov_ledger* ledger, const char* op,
                                  const char* caller, const char* args_json,
                                  char** receipt_json) {
  if (!ledger || !op || !receipt_json) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const TransactionReceipt r = ledger->impl.apply(
        op, caller ? caller : "", parse_or_empty(args_json));
    const Json j{{"seq", r.seq},
                 {"ok", r.ok},
                 {"op", r.op},
                 {"error", r.error},
                 {"payload", r.payload}};
    *receipt_json = dup_string(j.dump());
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_ledger_query(const uaviov_ledger* ledger, const char* what,
                                  const char* args_json, char** result_json) {
  if (!ledger || !what || !result_json) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const Ledger& l = ledger->impl;
    const Json args = parse_or_empty(args_json);
    const std::string query(what);
    Json result;
    if (query == "state") {
      result = l.state_json();
    } else if (query == "state_digest") {
      result = l.state_digest();
    } else if (query == "event_log_ndjson") {
      result = l.event_log_ndjson();
    } else if (query == "config") {
      result = l.config();
    } else if (query == "vehicle_list") {
      result = l.vehicle_list();
    } else if (query == "uav_list") {
      result = l.uav_list();
    } else if (query == "zones") {
      result = l.zones();
    } else if (query == "vehicle") {
      const auto v = l.vehicle(args.at("address").get<std::string>());
      if (!v) throw NotFoundError("vehicle not registered");
      result = *v;
    } else if (query == "uav") {
      const auto u = l.uav(args.at("address").get<std::string>());
      if (!u) throw NotFoundError("uav not registered");
      result = *u;
    } else if (query == "uavs_in_zone") {
      result = l.uavs_in_zone(args.at("zone").get<ZoneId>());
    } else if (query == "proposals") {
      result = l.proposals_for(args.at("uav").get<std::string>());
    } else if (query == "selection_list") {
      result = l.selection_list_for(args.at("uav").get<std::string>());
    } else if (query == "selected_uavs") {
      result = l.selected_uavs(args.at("zone").get<ZoneId>());
    } else if (query == "model_registry") {
      result = l.model_registry();
    } else if (query == "determine_model") {
      result = l.determine_mdrl_model(args.at("num_agents").get<std::int64_t>(),
                                      args.at("num_vehicles").get<std::int64_t>());
    } else {
      throw ContractError("unknown ledger query: " + query);
    }
    *result_json = dup_string(result.dump());
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_ledger_replay(const char* events_ndjson,
                                   uaviov_ledger** out) {
  if (!events_ndjson || !out) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out = new uaviov_ledger{Ledger::replay_ndjson(events_ndjson)};
    return UAVIOV_OK;
  });
}

/* ---- model store ---------------------------------------------------------- */

uaviov_status uaviov_model_store_open(const char* root_dir,
                                      uaviov_model_store** out) {
  if (!root_dir || !out) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out = new uaviov_model_store{ModelStore(root_dir)};
    return UAVIOV_OK;
  });
}

void uaviov_model_store_free(uaviov_model_store* store) { delete store; }

uaviov_status uaviov_model_store_put(uaviov_model_store* store,
                                     const uint8_t* bytes, size_t len,
                                     char** hex_digest) {
  if (!store || (!bytes && len > 0) || !hex_digest) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const std::vector<std::uint8_t> blob(bytes, bytes + len);
    *hex_digest = dup_string(store->impl.put(blob));
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_model_store_get(const uaviov_model_store* store,
                                     const char* hex_digest, uint8_t** bytes,
                                     size_t* len) {
  if (!store || !hex_digest || !bytes || !len) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const std::vector<std::uint8_t> blob = store->impl.get(hex_digest);
    auto* out = new uint8_t[blob.size()];
    std::memcpy(out, blob.data(), blob.size());
    *bytes = out;
    *len = blob.size();
    return UAVIOV_OK;
  });
}

/* ---- environment ----------------------------------------------------------- */

uaviov_status uaviov_env_new(const char* config_json, uaviov_env** out) {
  if (!out) return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    EnvConfig config;
    parse_or_empty(config_json).get_to(config);
    *out = new uaviov_env{CoverageEnv(config)};
    return UAVIOV_OK;
  });
}

void uaviov_env_free(uaviov_env* env) { delete env; }

uaviov_status uaviov_env_reset(uaviov_env* env, uint64_t seed) {
  if (!env) return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null env");
  return guarded([&] {
    env->impl.reset(seed);
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_env_step(uaviov_env* env, const int* actions,
                              size_t num_actions, double* out_reward,
                              int* out_done) {
  if (!env || !actions || !out_reward || !out_done) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const JointStep result =
        env->impl.step(std::vector<int>(actions, actions + num_actions));
    *out_reward = result.reward;
    *out_done = result.done ? 1 : 0;
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_env_obs_size(const uaviov_env* env, size_t* out_size) {
  if (!env || !out_size) return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  const int n = env->impl.config().obs_n;
  *out_size = static_cast<size_t>(ObservationStack::kChannels) * n * n;
  return UAVIOV_OK;
}

uaviov_status uaviov_env_observe(const uaviov_env* env, int agent, float* out,
                                 size_t capacity) {
  if (!env || !out) return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const ObservationStack stack = env->impl.build_observations(agent);
    if (capacity < stack.data.size()) {
      throw ContractError("observation buffer too small");
    }
    std::memcpy(out, stack.data.data(), stack.data.size() * sizeof(float));
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_env_metrics(const uaviov_env* env, double* out_coverage,
                                 int* out_connectivity) {
  if (!env || !out_coverage || !out_connectivity) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out_coverage = compute_coverage(env->impl.state(), env->impl.config());
    *out_connectivity =
        compute_connectivity(env->impl.state(), env->impl.config());
    return UAVIOV_OK;
  });
}

/* ---- policy ------------------------------------------------------------------ */

uaviov_status uaviov_policy_new(const char* arch_json, int num_actions,
                                uint64_t init_seed, uaviov_policy** out) {
  if (!out) return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    ArchDescriptor arch;
    parse_or_empty(arch_json).get_to(arch);
    *out = new uaviov_policy{Policy(arch, num_actions, init_seed)};
    return UAVIOV_OK;
  });
}

void uaviov_policy_free(uaviov_policy* policy) { delete policy; }

uaviov_status uaviov_policy_serialize(const uaviov_policy* policy,
                                      uint8_t** bytes, size_t* len) {
  if (!policy || !bytes || !len) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const std::vector<std::uint8_t> blob = policy->impl.serialize();
    auto* out = new uint8_t[blob.size()];
    std::memcpy(out, blob.data(), blob.size());
    *bytes = out;
    *len = blob.size();
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_policy_deserialize(const uint8_t* bytes, size_t len,
                                        uaviov_policy** out) {
  if (!bytes || !out) return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new uaviov_policy{
        Policy::deserialize(std::vector<std::uint8_t>(bytes, bytes + len))};
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_policy_param_count(const uaviov_policy* policy,
                                        uint64_t* out_count) {
  if (!policy || !out_count) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out_count = policy->impl.param_count();
  return UAVIOV_OK;
}

uaviov_status uaviov_policy_action_probs(const uaviov_policy* policy,
                                         const float* obs, size_t obs_len,
                                         float* probs_out, size_t capacity) {
  if (!policy || !obs || !probs_out) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const ActionDistribution dist =
        policy->impl.actor_forward(std::vector<float>(obs, obs + obs_len));
    if (capacity < dist.probs.size()) {
      throw ContractError("probability buffer too small");
    }
    std::memcpy(probs_out, dist.probs.data(),
                dist.probs.size() * sizeof(float));
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_policy_greedy_action(const uaviov_policy* policy,
                                          const float* obs, size_t obs_len,
                                          int* out_action) {
  if (!policy || !obs || !out_action) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out_action =
        policy->impl.actor_forward(std::vector<float>(obs, obs + obs_len))
            .greedy();
    return UAVIOV_OK;
  });
}

uaviov_status uaviov_policy_value(const uaviov_policy* policy, const float* obs,
                                  size_t obs_len, double* out_value) {
  if (!policy || !obs || !out_value) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out_value =
        policy->impl.critic_forward(std::vector<float>(obs, obs + obs_len));
    return UAVIOV_OK;
  });
}

/* ---- runners ------------------------------------------------------------------ */

uaviov_status uaviov_run(const char* command, const char* config_json,
                         char** summary_json) {
  if (!command || !summary_json) {
    return fail(UAVIOV_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const Json config = parse_or_empty(config_json);
    const std::string cmd(command);
    Json summary;
    if (cmd == "generate") summary = runner::run_generate(config);
    else if (cmd == "select") summary = runner::run_select(config);
    else if (cmd == "train") summary = runner::run_train(config);
    else if (cmd == "eval") summary = runner::run_eval(config);
    else if (cmd == "bench") summary = runner::run_bench(config);
    else if (cmd == "plotdata") summary = runner::run_plotdata(config);
    else if (cmd == "ledger-replay") summary = runner::run_ledger_replay(config);
    else throw ContractError("unknown command: " + cmd);
    *summary_json = dup_string(summary.dump());
    return UAVIOV_OK;
  });
}

} /* extern "C" */
