#include "core/ledger.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "core/errors.hpp"
#include "core/sha256.hpp"

namespace uaviov {

namespace {

// Internal control flow for rejected transactions.
struct TxReject {
  std::string reason;
};

[[noreturn]] void reject(const std::string& reason) { throw TxReject{reason}; }

constexpr const char* kGenesisOp = "genesis";
// Derived notification records re-emitted by allocate_zone; replay skips them.
constexpr const char* kNotifyOp = "uav_notified";

}  // namespace

Ledger::Ledger(LedgerConfig config) : config_(std::move(config)) {
  config_.bounds.validate();
  config_.weights.validate();
  config_.zone_grid.validate();
  LedgerEvent genesis;
  genesis.seq = 0;
  genesis.op = kGenesisOp;
  genesis.caller = "system";
  genesis.args = Json(config_);
  genesis.status = "ok";
  event_log_.push_back(std::move(genesis));
}

Ledger::Ledger(Ledger&& other) noexcept { *this = std::move(other); }

Ledger& Ledger::operator=(Ledger&& other) noexcept {
  if (this == &other) return *this;
  std::lock_guard<std::mutex> lock(other.mutex_);
  config_ = std::move(other.config_);
  vehicle_list_ = std::move(other.vehicle_list_);
  uav_list_ = std::move(other.uav_list_);
  zones_ = std::move(other.zones_);
  vehicle_data_ = std::move(other.vehicle_data_);
  uav_data_ = std::move(other.uav_data_);
  uavs_in_zone_ = std::move(other.uavs_in_zone_);
  uav_proposal_list_ = std::move(other.uav_proposal_list_);
  uav_selection_list_ = std::move(other.uav_selection_list_);
  selected_uavs_ = std::move(other.selected_uavs_);
  proposal_target_ = std::move(other.proposal_target_);
  model_registry_ = std::move(other.model_registry_);
  event_log_ = std::move(other.event_log_);
  return *this;
}

void Ledger::note_zone(ZoneId zone) {
  if (std::find(zones_.begin(), zones_.end(), zone) == zones_.end()) {
    zones_.push_back(zone);
  }
}

void Ledger::move_uav_zone(const NodeAddress& uav, ZoneId from, ZoneId to) {
  auto& old_list = uavs_in_zone_[from];
  old_list.erase(std::remove(old_list.begin(), old_list.end(), uav),
                 old_list.end());
  if (old_list.empty()) uavs_in_zone_.erase(from);
  uavs_in_zone_[to].push_back(uav);
  note_zone(to);
}

void Ledger::validate_vehicle(const VehicleInfo& v) const {
  if (v.address.empty()) reject("empty address");
  if (!(v.requested_bandwidth > 0)) reject("requested bandwidth must be > 0");
  if (v.reputation < 1 || v.reputation > config_.bounds.max_rep) {
    reject("reputation outside [1, max_rep]");
  }
  if (v.pay_per_mbps < 0 || v.pay_per_mbps > config_.bounds.max_pay_per_mbps) {
    reject("pay_per_mbps outside [0, max_pay_per_mbps]");
  }
}

void Ledger::validate_uav(const UavInfo& u) const {
  if (u.address.empty()) reject("empty address");
  if (u.available_bandwidth < 0) reject("available bandwidth must be >= 0");
  if (u.battery_level < 1 || u.battery_level > config_.bounds.max_bl) {
    reject("battery level outside [1, max_bl]");
  }
  if (u.reputation < 1 || u.reputation > config_.bounds.max_rep) {
    reject("reputation outside [1, max_rep]");
  }
}

TransactionReceipt Ledger::run_tx(const std::string& op,
                                  const std::string& caller, const Json& args) {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::uint64_t seq = event_log_.size();

  TransactionReceipt receipt;
  receipt.seq = seq;
  receipt.op = op;

  LedgerEvent event;
  event.seq = seq;
  event.op = op;
  event.caller = caller;
  event.args = args;

  try {
    Json payload;
    if (op == "register_uav") payload = do_register_uav(args, seq);
    else if (op == "register_vehicle") payload = do_register_vehicle(args, seq);
    else if (op == "update_uav_info") payload = do_update_uav_info(args, seq);
    else if (op == "update_vehicle_info") payload = do_update_vehicle_info(args, seq);
    else if (op == "update_uav_zone") payload = do_update_uav_zone(args);
    else if (op == "submit_veh_selection") payload = do_submit_veh_selection(args);
    else if (op == "allocate_zone") payload = do_allocate_zone(args);
    else if (op == "reset_lists_for_zone") payload = do_reset_lists_for_zone(args);
    else if (op == "reset_uav_submission") payload = do_reset_uav_submission(args);
    else if (op == "register_model") payload = do_register_model(args);
    else reject("unknown operation: " + op);

    receipt.ok = true;
    receipt.payload = payload;
    event.status = "ok";
  } catch (const TxReject& r) {
    receipt.ok = false;
    receipt.error = r.reason;
    event.status = "rejected: " + r.reason;
  } catch (const Json::exception&) {
    receipt.ok = false;
    receipt.error = "malformed transaction arguments";
    event.status = "rejected: malformed transaction arguments";
  }

  // The allocation notifications must land after the allocate event itself,
  // so the event is inserted first.
  std::vector<LedgerEvent> notifications;
  if (receipt.ok && op == "allocate_zone") {
    const SelectionOutcome outcome = receipt.payload.get<SelectionOutcome>();
    for (const UavAllocation& alloc : outcome.allocations) {
      if (alloc.accepted_vehicles.empty()) continue;
      LedgerEvent note;
      note.op = kNotifyOp;
      note.caller = "ledger";
      note.args = Json{{"uav", alloc.uav_address},
                       {"zone", args.at("zone").get<ZoneId>()},
                       {"vehicles", alloc.accepted_vehicles}};
      note.status = "ok";
      notifications.push_back(std::move(note));
    }
  }

  event_log_.push_back(std::move(event));
  for (LedgerEvent& note : notifications) {
    note.seq = event_log_.size();
    event_log_.push_back(std::move(note));
  }
  return receipt;
}

TransactionReceipt Ledger::apply(const std::string& op,
                                 const std::string& caller, const Json& args) {
  return run_tx(op, caller, args);
}

// --- transaction bodies -----------------------------------------------------

Json Ledger::do_register_uav(const Json& args, std::uint64_t seq) {
  UavInfo info = args.get<UavInfo>();
  if (uav_data_.count(info.address)) reject("uav already registered");
  info.reputation = config_.initial_reputation;
  validate_uav(info);
  try {
    info.zone_id = zone_of(info.position, config_.zone_grid);
  } catch (const DomainError& e) {
    reject(e.what());
  }
  info.timestamp = seq;

  uav_list_.push_back(info.address);
  uavs_in_zone_[info.zone_id].push_back(info.address);
  note_zone(info.zone_id);
  uav_data_[info.address] = info;
  return Json{{"address", info.address},
              {"zone", info.zone_id},
              {"timestamp", info.timestamp}};
}

Json Ledger::do_register_vehicle(const Json& args, std::uint64_t seq) {
  VehicleInfo info = args.get<VehicleInfo>();
  if (vehicle_data_.count(info.address)) reject("vehicle already registered");
  info.reputation = config_.initial_reputation;
  validate_vehicle(info);
  try {
    info.zone_id = zone_of(info.position, config_.zone_grid);
  } catch (const DomainError& e) {
    reject(e.what());
  }
  info.timestamp = seq;

  vehicle_list_.push_back(info.address);
  note_zone(info.zone_id);
  vehicle_data_[info.address] = info;
  return Json{{"address", info.address},
              {"zone", info.zone_id},
              {"timestamp", info.timestamp}};
}

Json Ledger::do_update_uav_info(const Json& args, std::uint64_t seq) {
  UavInfo info = args.get<UavInfo>();
  auto it = uav_data_.find(info.address);
  if (it == uav_data_.end()) reject("uav not registered");
  validate_uav(info);
  ZoneId new_zone;
  try {
    new_zone = zone_of(info.position, config_.zone_grid);
  } catch (const DomainError& e) {
    reject(e.what());
  }
  const ZoneId old_zone = it->second.zone_id;
  if (new_zone != old_zone) move_uav_zone(info.address, old_zone, new_zone);
  info.zone_id = new_zone;
  info.timestamp = seq;
  it->second = info;
  return Json{{"address", info.address},
              {"zone", new_zone},
              {"timestamp", info.timestamp}};
}

Json Ledger::do_update_vehicle_info(const Json& args, std::uint64_t seq) {
  VehicleInfo info = args.get<VehicleInfo>();
  auto it = vehicle_data_.find(info.address);
  if (it == vehicle_data_.end()) reject("vehicle not registered");
  validate_vehicle(info);
  try {
    info.zone_id = zone_of(info.position, config_.zone_grid);
  } catch (const DomainError& e) {
    reject(e.what());
  }
  note_zone(info.zone_id);
  info.timestamp = seq;
  it->second = info;
  return Json{{"address", info.address},
              {"zone", info.zone_id},
              {"timestamp", info.timestamp}};
}

Json Ledger::do_update_uav_zone(const Json& args) {
  const auto addr = args.at("uav").get<NodeAddress>();
  const auto new_zone = args.at("zone").get<ZoneId>();
  auto it = uav_data_.find(addr);
  if (it == uav_data_.end()) reject("uav not registered");
  const auto max_zone =
      config_.zone_grid.tiles_x() * config_.zone_grid.tiles_y();
  if (new_zone < 0 || new_zone >= max_zone) reject("zone id out of range");
  const ZoneId old_zone = it->second.zone_id;
  if (new_zone != old_zone) {
    move_uav_zone(addr, old_zone, new_zone);
    it->second.zone_id = new_zone;
  }
  return Json{{"address", addr}, {"zone", new_zone}};
}

Json Ledger::do_submit_veh_selection(const Json& args) {
  const auto vehicle_addr = args.at("vehicle").get<NodeAddress>();
  const auto uav_addr = args.at("uav").get<NodeAddress>();
  const double rb = args.at("requested_bandwidth").get<double>();

  auto vit = vehicle_data_.find(vehicle_addr);
  if (vit == vehicle_data_.end()) reject("vehicle not registered");
  auto uit = uav_data_.find(uav_addr);
  if (uit == uav_data_.end()) reject("uav not registered");
  if (!(rb > 0)) reject("requested bandwidth must be > 0");
  if (vit->second.zone_id != uit->second.zone_id) {
    reject("uav is not in the vehicle's zone");
  }
  if (proposal_target_.count(vehicle_addr)) {
    reject("vehicle already has a live proposal this round");
  }

  // QoV is computed contract-side from the stored records; the proposal's
  // bandwidth request is the one passed with the call.
  VehicleInfo scored = vit->second;
  scored.requested_bandwidth = rb;
  const double qov =
      compute_qov(uit->second, scored, config_.bounds, config_.weights);
  const ProposalRecord record = make_proposal(vehicle_addr, qov, rb);
  uav_proposal_list_[uav_addr].push_back(record);
  proposal_target_[vehicle_addr] = uav_addr;
  return Json(record);
}

Json Ledger::do_allocate_zone(const Json& args) {
  const auto zone = args.at("zone").get<ZoneId>();
  if (std::find(zones_.begin(), zones_.end(), zone) == zones_.end()) {
    reject("unknown zone");
  }

  std::vector<UavInfo> zone_uavs;
  std::map<NodeAddress, std::vector<ProposalRecord>> proposals;
  auto zit = uavs_in_zone_.find(zone);
  if (zit != uavs_in_zone_.end()) {
    for (const NodeAddress& addr : zit->second) {
      zone_uavs.push_back(uav_data_.at(addr));
      auto pit = uav_proposal_list_.find(addr);
      if (pit != uav_proposal_list_.end()) proposals[addr] = pit->second;
    }
  }

  const SelectionOutcome outcome = uaviov::allocate_zone(zone_uavs, proposals);

  std::vector<NodeAddress> selected;
  for (const UavAllocation& alloc : outcome.allocations) {
    uav_selection_list_[alloc.uav_address] = alloc.accepted_vehicles;
    if (!alloc.accepted_vehicles.empty()) selected.push_back(alloc.uav_address);
  }
  selected_uavs_[zone] = selected;
  return Json(outcome);
}

Json Ledger::do_reset_lists_for_zone(const Json& args) {
  const auto zone = args.at("zone").get<ZoneId>();
  if (std::find(zones_.begin(), zones_.end(), zone) == zones_.end()) {
    reject("unknown zone");
  }
  auto zit = uavs_in_zone_.find(zone);
  if (zit != uavs_in_zone_.end()) {
    for (const NodeAddress& addr : zit->second) {
      uav_selection_list_.erase(addr);
    }
  }
  selected_uavs_.erase(zone);
  return Json{{"zone", zone}};
}

Json Ledger::do_reset_uav_submission(const Json& args) {
  const auto addr = args.at("uav").get<NodeAddress>();
  auto it = uav_data_.find(addr);
  if (it == uav_data_.end()) reject("uav not registered");

  // Vehicles whose live proposal targeted this UAV may propose again.
  for (auto pit = proposal_target_.begin(); pit != proposal_target_.end();) {
    if (pit->second == addr) {
      pit = proposal_target_.erase(pit);
    } else {
      ++pit;
    }
  }
  uav_proposal_list_.erase(addr);
  uav_selection_list_.erase(addr);
  auto sit = selected_uavs_.find(it->second.zone_id);
  if (sit != selected_uavs_.end()) {
    auto& list = sit->second;
    list.erase(std::remove(list.begin(), list.end(), addr), list.end());
    if (list.empty()) selected_uavs_.erase(sit);
  }
  return Json{{"uav", addr}};
}

Json Ledger::do_register_model(const Json& args) {
  ModelRegistryEntry entry = args.get<ModelRegistryEntry>();
  if (entry.model_id.empty()) reject("empty model id");
  if (entry.min_agents > entry.max_agents ||
      entry.min_vehicles > entry.max_vehicles) {
    reject("invalid applicability range");
  }
  for (const ModelRegistryEntry& e : model_registry_) {
    if (e.model_id == entry.model_id) reject("model id already registered");
  }
  model_registry_.push_back(entry);
  return Json(entry);
}

// --- typed wrappers ----------------------------------------------------------

TransactionReceipt Ledger::register_uav(UavInfo info) {
  const std::string caller = info.address;
  return run_tx("register_uav", caller, Json(info));
}

TransactionReceipt Ledger::register_vehicle(VehicleInfo info) {
  const std::string caller = info.address;
  return run_tx("register_vehicle", caller, Json(info));
}

TransactionReceipt Ledger::update_uav_info(UavInfo info) {
  const std::string caller = info.address;
  return run_tx("update_uav_info", caller, Json(info));
}

TransactionReceipt Ledger::update_vehicle_info(VehicleInfo info) {
  const std::string caller = info.address;
  return run_tx("update_vehicle_info", caller, Json(info));
}

TransactionReceipt Ledger::update_uav_zone(const NodeAddress& uav,
                                           ZoneId new_zone) {
  return run_tx("update_uav_zone", uav, Json{{"uav", uav}, {"zone", new_zone}});
}

TransactionReceipt Ledger::submit_veh_selection(const NodeAddress& vehicle,
                                                const NodeAddress& uav,
                                                double requested_bandwidth) {
  return run_tx("submit_veh_selection", vehicle,
                Json{{"vehicle", vehicle},
                     {"uav", uav},
                     {"requested_bandwidth", requested_bandwidth}});
}

TransactionReceipt Ledger::allocate_zone(ZoneId zone) {
  return run_tx("allocate_zone", "operator", Json{{"zone", zone}});
}

TransactionReceipt Ledger::reset_lists_for_zone(ZoneId zone) {
  return run_tx("reset_lists_for_zone", "operator", Json{{"zone", zone}});
}

TransactionReceipt Ledger::reset_uav_submission(const NodeAddress& uav) {
  return run_tx("reset_uav_submission", uav, Json{{"uav", uav}});
}

TransactionReceipt Ledger::register_model(ModelRegistryEntry entry) {
  return run_tx("register_model", "operator", Json(entry));
}

// --- views -------------------------------------------------------------------

std::optional<VehicleInfo> Ledger::vehicle(const NodeAddress& addr) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = vehicle_data_.find(addr);
  if (it == vehicle_data_.end()) return std::nullopt;
  return it->second;
}

std::optional<UavInfo> Ledger::uav(const NodeAddress& addr) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = uav_data_.find(addr);
  if (it == uav_data_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeAddress> Ledger::vehicle_list() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return vehicle_list_;
}

std::vector<NodeAddress> Ledger::uav_list() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return uav_list_;
}

std::vector<NodeAddress> Ledger::uavs_in_zone(ZoneId zone) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = uavs_in_zone_.find(zone);
  if (it == uavs_in_zone_.end()) return {};
  return it->second;
}

std::vector<ProposalRecord> Ledger::proposals_for(const NodeAddress& uav) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = uav_proposal_list_.find(uav);
  if (it == uav_proposal_list_.end()) return {};
  return it->second;
}

std::vector<NodeAddress> Ledger::selection_list_for(
    const NodeAddress& uav) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = uav_selection_list_.find(uav);
  if (it == uav_selection_list_.end()) return {};
  return it->second;
}

std::vector<NodeAddress> Ledger::selected_uavs(ZoneId zone) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = selected_uavs_.find(zone);
  if (it == selected_uavs_.end()) return {};
  return it->second;
}

std::vector<ZoneId> Ledger::zones() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return zones_;
}

std::vector<ModelRegistryEntry> Ledger::model_registry() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return model_registry_;
}

std::size_t Ledger::event_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return event_log_.size();
}

std::vector<LedgerEvent> Ledger::events() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return event_log_;
}

ModelRegistryEntry Ledger::determine_mdrl_model(
    std::int64_t num_agents, std::int64_t num_vehicles) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const ModelRegistryEntry* best = nullptr;
  for (const ModelRegistryEntry& e : model_registry_) {
    if (num_agents < e.min_agents || num_agents > e.max_agents) continue;
    if (num_vehicles < e.min_vehicles || num_vehicles > e.max_vehicles) continue;
    if (!best) {
      best = &e;
      continue;
    }
    const auto best_span = best->max_agents - best->min_agents;
    const auto span = e.max_agents - e.min_agents;
    if (span < best_span || (span == best_span && e.model_id < best->model_id)) {
      best = &e;
    }
  }
  if (!best) {
    throw NotFoundError("no registered model covers agents=" +
                        std::to_string(num_agents) +
                        " vehicles=" + std::to_string(num_vehicles));
  }
  return *best;
}

// --- state serialization -----------------------------------------------------

Json Ledger::state_json() const {
  std::lock_guard<std::mutex> lock(mutex_);
  Json j;
  j["config"] = config_;
  j["vehicle_list"] = vehicle_list_;
  j["uav_list"] = uav_list_;
  j["zones"] = zones_;
  Json vd = Json::object();
  for (const auto& [addr, info] : vehicle_data_) vd[addr] = info;
  j["vehicle_data"] = vd;
  Json ud = Json::object();
  for (const auto& [addr, info] : uav_data_) ud[addr] = info;
  j["uav_data"] = ud;
  Json uiz = Json::object();
  for (const auto& [zone, list] : uavs_in_zone_) uiz[std::to_string(zone)] = list;
  j["uavs_in_zone"] = uiz;
  Json props = Json::object();
  for (const auto& [addr, list] : uav_proposal_list_) props[addr] = list;
  j["uav_proposal_list"] = props;
  Json sel = Json::object();
  for (const auto& [addr, list] : uav_selection_list_) sel[addr] = list;
  j["uav_selection_list"] = sel;
  Json selz = Json::object();
  for (const auto& [zone, list] : selected_uavs_) selz[std::to_string(zone)] = list;
  j["selected_uavs"] = selz;
  j["model_registry"] = model_registry_;
  j["event_log"] = event_log_;
  return j;
}

std::string Ledger::state_digest() const {
  const std::string dump = state_json().dump();
  return Sha256::hex_digest(dump);
}

std::string Ledger::event_log_ndjson() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ostringstream out;
  for (const LedgerEvent& e : event_log_) out << Json(e).dump() << '\n';
  return out.str();
}

Ledger Ledger::replay(const std::vector<LedgerEvent>& events) {
  if (events.empty() || events.front().op != kGenesisOp) {
    throw IntegrityError("event log must start with a genesis record");
  }
  Ledger ledger(events.front().args.get<LedgerConfig>());
  for (std::size_t i = 1; i < events.size(); ++i) {
    const LedgerEvent& e = events[i];
    if (e.op == kNotifyOp) continue;  // re-emitted by allocate_zone
    const TransactionReceipt r = ledger.apply(e.op, e.caller, e.args);
    const std::string status = r.ok ? "ok" : "rejected: " + r.error;
    if (status != e.status) {
      throw IntegrityError("replay diverged at seq " + std::to_string(e.seq) +
                           ": recorded '" + e.status + "', got '" + status +
                           "'");
    }
  }
  return ledger;
}

Ledger Ledger::replay_ndjson(const std::string& ndjson) {
  std::vector<LedgerEvent> events;
  std::istringstream in(ndjson);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    events.push_back(Json::parse(line).get<LedgerEvent>());
  }
  return replay(events);
}

void Ledger::check_integrity() const {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::unordered_set<std::string> vehicles(vehicle_list_.begin(),
                                                 vehicle_list_.end());
  const std::unordered_set<std::string> uavs(uav_list_.begin(),
                                             uav_list_.end());
  auto fail = [](const std::string& what) {
    throw IntegrityError("ledger integrity: " + what);
  };

  if (vehicles.size() != vehicle_list_.size()) fail("duplicate vehicle ids");
  if (uavs.size() != uav_list_.size()) fail("duplicate uav ids");
  for (const auto& [addr, info] : vehicle_data_) {
    if (!vehicles.count(addr)) fail("vehicle_data key not registered: " + addr);
    (void)info;
  }
  if (vehicle_data_.size() != vehicle_list_.size()) {
    fail("vehicle_list entry without data");
  }
  for (const auto& [addr, info] : uav_data_) {
    if (!uavs.count(addr)) fail("uav_data key not registered: " + addr);
    (void)info;
  }
  if (uav_data_.size() != uav_list_.size()) fail("uav_list entry without data");

  std::unordered_set<std::string> seen_in_zone;
  for (const auto& [zone, list] : uavs_in_zone_) {
    for (const NodeAddress& addr : list) {
      if (!uavs.count(addr)) fail("zone list references unknown uav: " + addr);
      if (!seen_in_zone.insert(addr).second) {
        fail("uav present in two zone lists: " + addr);
      }
      if (uav_data_.at(addr).zone_id != zone) {
        fail("zone list disagrees with uav_data zone: " + addr);
      }
    }
  }
  for (const auto& [addr, list] : uav_proposal_list_) {
    if (!uavs.count(addr)) fail("proposal list keyed by unknown uav: " + addr);
    for (const ProposalRecord& p : list) {
      if (!vehicles.count(p.vehicle_address)) {
        fail("proposal references unknown vehicle: " + p.vehicle_address);
      }
    }
  }
  for (const auto& [addr, list] : uav_selection_list_) {
    if (!uavs.count(addr)) fail("selection list keyed by unknown uav: " + addr);
    for (const NodeAddress& v : list) {
      if (!vehicles.count(v)) {
        fail("selection references unknown vehicle: " + v);
      }
    }
  }
  for (const auto& [zone, list] : selected_uavs_) {
    (void)zone;
    for (const NodeAddress& addr : list) {
      if (!uavs.count(addr)) fail("selected_uavs references unknown uav: " + addr);
    }
  }
  for (const auto& [vehicle, uav] : proposal_target_) {
    if (!vehicles.count(vehicle)) {
      fail("live proposal from unknown vehicle: " + vehicle);
    }
    if (!uavs.count(uav)) fail("live proposal to unknown uav: " + uav);
  }
}

}  // namespace uaviov
