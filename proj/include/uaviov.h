/*
 * uaviov: UAV-assisted IoV relay selection, ledger simulation and
 * multi-agent PPO coordination.
 *
 * C API over the C++ core. Conventions:
 *  - every function returns a uaviov_status; UAVIOV_OK is 0
 *  - on failure, uaviov_last_error() describes the problem (thread-local)
 *  - strings returned through char** are NUL-terminated, UTF-8, and owned by
 *    the caller: release them with uaviov_string_free()
 *  - byte buffers returned through uint8_t** are released with
 *    uaviov_buffer_free()
 *  - structured inputs and outputs are JSON documents; the schemas are
 *    documented in the project README
 */
#ifndef UAVIOV_H
#define UAVIOV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef UAVIOV_API
#define UAVIOV_API __attribute__((visibility("default")))
#endif

typedef enum uaviov_status {
  UAVIOV_OK = 0,
  UAVIOV_ERR_INVALID_ARGUMENT = 1, /* bad pointer, malformed JSON, bad shape */
  UAVIOV_ERR_CONFIG = 2,           /* invalid configuration value */
  UAVIOV_ERR_DOMAIN = 3,           /* input outside the modeled domain */
  UAVIOV_ERR_NOT_FOUND = 4,        /* missing file, blob, or model */
  UAVIOV_ERR_INTEGRITY = 5,        /* digest mismatch, replay divergence */
  UAVIOV_ERR_RUNTIME = 6,          /* anything else (I/O, training failure) */
} uaviov_status;

UAVIOV_API const char* uaviov_version(void);

/* Message for the most recent failure on this thread; never NULL. */
UAVIOV_API const char* uaviov_last_error(void);

UAVIOV_API void uaviov_string_free(char* s);
UAVIOV_API void uaviov_buffer_free(uint8_t* p);

/* ---- quality scores ----------------------------------------------------- */

/* uav/vehicle/bounds/weights are JSON documents. */
UAVIOV_API uaviov_status uaviov_compute_qou(const char* uav_json,
                                            const char* vehicle_json,
                                            const char* bounds_json,
                                            const char* weights_json,
                                            double* out_score);
UAVIOV_API uaviov_status uaviov_compute_qov(const char* uav_json,
                                            const char* vehicle_json,
                                            const char* bounds_json,
                                            const char* weights_json,
                                            double* out_score);

/* ---- ledger ------------------------------------------------------------- */

typedef struct uaviov_ledger uaviov_ledger;

/* config_json may be "{}" for defaults. */
UAVIOV_API uaviov_status uaviov_ledger_new(const char* config_json,
                                           uaviov_ledger** out);
UAVIOV_API void uaviov_ledger_free(uaviov_ledger* ledger);

/*
 * Submits one transaction. op is one of: register_uav, register_vehicle,
 * update_uav_info, update_vehicle_info, update_uav_zone,
 * submit_veh_selection, allocate_zone, reset_lists_for_zone,
 * reset_uav_submission, register_model.
 *
 * Returns UAVIOV_OK whenever the transaction was processed, including
 * rejections; the receipt JSON {seq, ok, op, error, payload} carries the
 * outcome.
 */
UAVIOV_API uaviov_status uaviov_ledger_apply(uaviov_ledger* ledger,
                                             const char* op,
                                             const char* caller,
                                             const char* args_json,
                                             char** receipt_json);

/*
 * Read-only queries. what is one of: state, state_digest, event_log_ndjson,
 * config, vehicle_list, uav_list, zones, vehicle, uav, uavs_in_zone,
 * proposals, selection_list, selected_uavs, model_registry, determine_model.
 * args_json supplies parameters where needed (may be NULL otherwise).
 */
UAVIOV_API uaviov_status uaviov_ledger_query(const uaviov_ledger* ledger,
                                             const char* what,
                                             const char* args_json,
                                             char** result_json);

/* Rebuilds a ledger from a newline-delimited JSON event log. */
UAVIOV_API uaviov_status uaviov_ledger_replay(const char* events_ndjson,
                                              uaviov_ledger** out);

/* ---- content-addressed model store --------------------------------------- */

typedef struct uaviov_model_store uaviov_model_store;

UAVIOV_API uaviov_status uaviov_model_store_open(const char* root_dir,
                                                 uaviov_model_store** out);
UAVIOV_API void uaviov_model_store_free(uaviov_model_store* store);
UAVIOV_API uaviov_status uaviov_model_store_put(uaviov_model_store* store,
                                                const uint8_t* bytes,
                                                size_t len, char** hex_digest);
UAVIOV_API uaviov_status uaviov_model_store_get(const uaviov_model_store* store,
                                                const char* hex_digest,
                                                uint8_t** bytes, size_t* len);

/* ---- coverage environment ------------------------------------------------ */

typedef struct uaviov_env uaviov_env;

UAVIOV_API uaviov_status uaviov_env_new(const char* config_json,
                                        uaviov_env** out);
UAVIOV_API void uaviov_env_free(uaviov_env* env);
UAVIOV_API uaviov_status uaviov_env_reset(uaviov_env* env, uint64_t seed);

/* actions has num_agents entries, each in [0, 9): 8 directions plus stay=8. */
UAVIOV_API uaviov_status uaviov_env_step(uaviov_env* env, const int* actions,
                                         size_t num_actions, double* out_reward,
                                         int* out_done);

/* Observation stack size in floats: 6 * n * n. */
UAVIOV_API uaviov_status uaviov_env_obs_size(const uaviov_env* env,
                                             size_t* out_size);
UAVIOV_API uaviov_status uaviov_env_observe(const uaviov_env* env, int agent,
                                            float* out, size_t capacity);
UAVIOV_API uaviov_status uaviov_env_metrics(const uaviov_env* env,
                                            double* out_coverage,
                                            int* out_connectivity);

/* ---- policy --------------------------------------------------------------- */

typedef struct uaviov_policy uaviov_policy;

/* arch_json may be "{}" for the default architecture. */
UAVIOV_API uaviov_status uaviov_policy_new(const char* arch_json,
                                           int num_actions, uint64_t init_seed,
                                           uaviov_policy** out);
UAVIOV_API void uaviov_policy_free(uaviov_policy* policy);
UAVIOV_API uaviov_status uaviov_policy_serialize(const uaviov_policy* policy,
                                                 uint8_t** bytes, size_t* len);
UAVIOV_API uaviov_status uaviov_policy_deserialize(const uint8_t* bytes,
                                                   size_t len,
                                                   uaviov_policy** out);
UAVIOV_API uaviov_status uaviov_policy_param_count(const uaviov_policy* policy,
                                                   uint64_t* out_count);
UAVIOV_API uaviov_status uaviov_policy_action_probs(const uaviov_policy* policy,
                                                    const float* obs,
                                                    size_t obs_len,
                                                    float* probs_out,
                                                    size_t capacity);
UAVIOV_API uaviov_status uaviov_policy_greedy_action(const uaviov_policy* policy,
                                                     const float* obs,
                                                     size_t obs_len,
                                                     int* out_action);
UAVIOV_API uaviov_status uaviov_policy_value(const uaviov_policy* policy,
                                             const float* obs, size_t obs_len,
                                             double* out_value);

/* ---- pipeline runners ------------------------------------------------------ */

/*
 * Executes one pipeline command: generate, select, train, eval, bench,
 * plotdata, or ledger-replay. config_json holds the command's configuration
 * (including out_dir); artifacts and a manifest are written there and a
 * summary JSON is returned.
 */
UAVIOV_API uaviov_status uaviov_run(const char* command,
                                    const char* config_json,
                                    char** summary_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* UAVIOV_H */
