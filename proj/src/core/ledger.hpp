#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/jsonio.hpp"
#include "core/selection.hpp"
#include "core/types.hpp"

namespace uaviov {

struct LedgerConfig {
  NormalizationBounds bounds;
  ScoringWeights weights;
  ZoneGrid zone_grid;
  double initial_reputation = 50.0;  // assigned at registration
};

inline void to_json(Json& j, const LedgerConfig& c) {
  j = Json{{"bounds", c.bounds},
           {"weights", c.weights},
           {"zone_grid", c.zone_grid},
           {"initial_reputation", c.initial_reputation}};
}
inline void from_json(const Json& j, LedgerConfig& c) {
  c.bounds = j.value("bounds", c.bounds);
  c.weights = j.value("weights", c.weights);
  c.zone_grid = j.value("zone_grid", c.zone_grid);
  c.initial_reputation = j.value("initial_reputation", c.initial_reputation);
}

struct LedgerEvent {
  std::uint64_t seq = 0;
  std::string op;
  std::string caller;
  Json args;
  std::string status;  // "ok" or "rejected: <reason>"
};

inline void to_json(Json& j, const LedgerEvent& e) {
  j = Json{{"seq", e.seq},
           {"op", e.op},
           {"caller", e.caller},
           {"args", e.args},
           {"status", e.status}};
}
inline void from_json(const Json& j, LedgerEvent& e) {
  j.at("seq").get_to(e.seq);
  j.at("op").get_to(e.op);
  j.at("caller").get_to(e.caller);
  e.args = j.at("args");
  j.at("status").get_to(e.status);
}

struct TransactionReceipt {
  std::uint64_t seq = 0;
  bool ok = false;
  std::string op;
  std::string error;  // empty when ok
  Json payload;       // op-specific result (e.g. the allocation outcome)
};

// Metadata of a trained model whose bytes live in the content-addressed
// store. Ranges are inclusive.
struct ModelRegistryEntry {
  std::string model_id;
  std::string content_hash;
  std::int64_t min_agents = 0, max_agents = 0;
  std::int64_t min_vehicles = 0, max_vehicles = 0;
};

inline void to_json(Json& j, const ModelRegistryEntry& e) {
  j = Json{{"model_id", e.model_id},
           {"content_hash", e.content_hash},
           {"min_agents", e.min_agents},
           {"max_agents", e.max_agents},
           {"min_vehicles", e.min_vehicles},
           {"max_vehicles", e.max_vehicles}};
}
inline void from_json(const Json& j, ModelRegistryEntry& e) {
  j.at("model_id").get_to(e.model_id);
  j.at("content_hash").get_to(e.content_hash);
  j.at("min_agents").get_to(e.min_agents);
  j.at("max_agents").get_to(e.max_agents);
  j.at("min_vehicles").get_to(e.min_vehicles);
  j.at("max_vehicles").get_to(e.max_vehicles);
}

// Deterministic in-memory replica of the coordination smart contract:
// registration, info updates, proposal submission, zone allocation, resets
// and the model registry, with an append-only event log.
//
// Single-writer semantics: every mutating call is serialized through one
// internal lock, mirroring total transaction ordering. The logical clock
// equals the event sequence number.
class Ledger {
 public:
  explicit Ledger(LedgerConfig config = {});

  // Movable (fresh lock on the destination); not copyable.
  Ledger(Ledger&& other) noexcept;
  Ledger& operator=(Ledger&& other) noexcept;
  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  // --- transactions (each appends exactly one event, even when rejected) ---
  TransactionReceipt register_uav(UavInfo info);
  TransactionReceipt register_vehicle(VehicleInfo info);
  TransactionReceipt update_uav_info(UavInfo info);
  TransactionReceipt update_vehicle_info(VehicleInfo info);
  TransactionReceipt update_uav_zone(const NodeAddress& uav, ZoneId new_zone);
  TransactionReceipt submit_veh_selection(const NodeAddress& vehicle,
                                          const NodeAddress& uav,
                                          double requested_bandwidth);
  TransactionReceipt allocate_zone(ZoneId zone);
  TransactionReceipt reset_lists_for_zone(ZoneId zone);
  TransactionReceipt reset_uav_submission(const NodeAddress& uav);
  TransactionReceipt register_model(ModelRegistryEntry entry);

  // Generic dispatcher used by the replay path and the C API.
  TransactionReceipt apply(const std::string& op, const std::string& caller,
                           const Json& args);

  // --- views ---
  const LedgerConfig& config() const { return config_; }
  std::optional<VehicleInfo> vehicle(const NodeAddress& addr) const;
  std::optional<UavInfo> uav(const NodeAddress& addr) const;
  std::vector<NodeAddress> vehicle_list() const;
  std::vector<NodeAddress> uav_list() const;
  std::vector<NodeAddress> uavs_in_zone(ZoneId zone) const;
  std::vector<ProposalRecord> proposals_for(const NodeAddress& uav) const;
  std::vector<NodeAddress> selection_list_for(const NodeAddress& uav) const;
  std::vector<NodeAddress> selected_uavs(ZoneId zone) const;
  std::vector<ZoneId> zones() const;
  std::vector<ModelRegistryEntry> model_registry() const;
  std::size_t event_count() const;
  std::vector<LedgerEvent> events() const;

  // Model lookup: entries whose ranges contain the query; the narrowest
  // agent range wins, then the lowest model id. Throws NotFoundError when
  // nothing matches.
  ModelRegistryEntry determine_mdrl_model(std::int64_t num_agents,
                                          std::int64_t num_vehicles) const;

  // Canonical JSON of the full contract state, event log included. Replaying
  // the event log on an empty ledger reproduces this byte for byte.
  Json state_json() const;
  std::string state_digest() const;

  // Event log as newline-delimited JSON records {seq, op, caller, args, status}.
  std::string event_log_ndjson() const;

  // Rebuilds a ledger from its event log (the first record must be the
  // genesis carrying the config). Replayed receipts must match the recorded
  // statuses; a mismatch throws IntegrityError.
  static Ledger replay(const std::vector<LedgerEvent>& events);
  static Ledger replay_ndjson(const std::string& ndjson);

  // Invariant sweep: registration lists vs. mappings, zone-list disjointness,
  // referential integrity of proposals and selections. Throws on violation.
  void check_integrity() const;

 private:
  TransactionReceipt run_tx(const std::string& op, const std::string& caller,
                            const Json& args);
  // Transaction bodies return the payload or throw TxReject.
  Json do_register_uav(const Json& args, std::uint64_t seq);
  Json do_register_vehicle(const Json& args, std::uint64_t seq);
  Json do_update_uav_info(const Json& args, std::uint64_t seq);
  Json do_update_vehicle_info(const Json& args, std::uint64_t seq);
  Json do_update_uav_zone(const Json& args);
  Json do_submit_veh_selection(const Json& args);
  Json do_allocate_zone(const Json& args);
  Json do_reset_lists_for_zone(const Json& args);
  Json do_reset_uav_submission(const Json& args);
  Json do_register_model(const Json& args);

  void note_zone(ZoneId zone);
  void move_uav_zone(const NodeAddress& uav, ZoneId from, ZoneId to);
  void validate_vehicle(const VehicleInfo& v) const;
  void validate_uav(const UavInfo& u) const;

  LedgerConfig config_;

  std::vector<NodeAddress> vehicle_list_;
  std::vector<NodeAddress> uav_list_;
  std::vector<ZoneId> zones_;  // insertion order, unique
  std::map<NodeAddress, VehicleInfo> vehicle_data_;
  std::map<NodeAddress, UavInfo> uav_data_;
  std::map<ZoneId, std::vector<NodeAddress>> uavs_in_zone_;
  std::map<NodeAddress, std::vector<ProposalRecord>> uav_proposal_list_;
  std::map<NodeAddress, std::vector<NodeAddress>> uav_selection_list_;
  std::map<ZoneId, std::vector<NodeAddress>> selected_uavs_;
  std::map<NodeAddress, NodeAddress> proposal_target_;  // vehicle -> uav, live proposals
  std::vector<ModelRegistryEntry> model_registry_;
  std::vector<LedgerEvent> event_log_;

  mutable std::mutex mutex_;
};

}  // namespace uaviov
