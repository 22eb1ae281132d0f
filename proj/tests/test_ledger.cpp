#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "core/ledger.hpp"
#include "core/model_store.hpp"
#include "core/rng.hpp"
#include "core/sha256.hpp"

using namespace uaviov;

namespace {

UavInfo uav_info(const std::string& addr, double x, double y, double ab = 10) {
  UavInfo u;
  u.address = addr;
  u.position = {x, y};
  u.altitude = 0.1;
  u.reputation = 50;
  u.battery_level = 80;
  u.available_bandwidth = ab;
  return u;
}

VehicleInfo veh_info(const std::string& addr, double x, double y,
                     double rb = 2) {
  VehicleInfo v;
  v.address = addr;
  v.position = {x, y};
  v.reputation = 50;
  v.pay_per_mbps = 3;
  v.requested_bandwidth = rb;
  return v;
}

std::filesystem::path temp_dir(const std::string& tag) {
  const auto dir =
      std::filesystem::temp_directory_path() / ("uaviov_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("sha256 known vectors") {
  CHECK(Sha256::hex_digest(std::string("")) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(Sha256::hex_digest(std::string("abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(Sha256::hex_digest(
            std::string("The quick brown fox jumps over the lazy dog")) ==
        "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
  // Multi-block input (> 64 bytes) through the streaming path.
  const std::string long_input(200, 'a');
  Sha256 h;
  h.update(long_input.data(), 100);
  h.update(long_input.data() + 100, 100);
  CHECK(Sha256::to_hex(h.finish()) == Sha256::hex_digest(long_input));
}

TEST_CASE("registration and duplicate rejection") {
  Ledger ledger;
  const auto r1 = ledger.register_uav(uav_info("u0", 5, 5));
  CHECK(r1.ok);
  CHECK(ledger.uav_list() == std::vector<NodeAddress>{"u0"});
  CHECK(ledger.uav("u0")->zone_id == 0);
  // Contract initializes reputation.
  CHECK(ledger.uav("u0")->reputation == doctest::Approx(50.0));

  const std::size_t events_before = ledger.event_count();
  const std::string digest_before = ledger.state_digest();
  const auto r2 = ledger.register_uav(uav_info("u0", 6, 6));
  CHECK_FALSE(r2.ok);
  CHECK(ledger.event_count() == events_before + 1);
  // State unchanged apart from the failure event: replaying both logs from
  // scratch converges on the same registered data.
  CHECK(ledger.uav("u0")->position.x == doctest::Approx(5.0));
  CHECK(digest_before != ledger.state_digest());  // the log itself grew

  const auto r3 = ledger.register_vehicle(veh_info("v0", 1, 1));
  CHECK(r3.ok);
  CHECK_FALSE(ledger.register_vehicle(veh_info("v0", 1, 1)).ok);
  // Out-of-area positions are rejected, not fatal.
  CHECK_FALSE(ledger.register_vehicle(veh_info("v1", 99, 1)).ok);
}

TEST_CASE("updates, zone moves, and logical timestamps") {
  Ledger ledger;
  ledger.register_uav(uav_info("u0", 5, 5));
  const auto t0 = ledger.uav("u0")->timestamp;

  // Zone move A -> B via explicit zone update.
  const auto receipt = ledger.update_uav_zone("u0", 7);
  CHECK(receipt.ok);
  CHECK(ledger.uavs_in_zone(0).empty());
  CHECK(ledger.uavs_in_zone(7) == std::vector<NodeAddress>{"u0"});

  auto info = uav_info("u0", 12, 3);  // zone (1,0) = 1
  const auto r1 = ledger.update_uav_info(info);
  CHECK(r1.ok);
  const auto t1 = ledger.uav("u0")->timestamp;
  CHECK(t1 > t0);
  CHECK(ledger.uavs_in_zone(7).empty());
  CHECK(ledger.uavs_in_zone(1) == std::vector<NodeAddress>{"u0"});

  info.position = {13, 3};
  ledger.update_uav_info(info);
  CHECK(ledger.uav("u0")->timestamp > t1);

  CHECK_FALSE(ledger.update_uav_info(uav_info("ghost", 1, 1)).ok);
  CHECK_FALSE(ledger.update_uav_zone("u0", 999).ok);
  CHECK_FALSE(ledger.update_vehicle_info(veh_info("ghost", 1, 1)).ok);
}

TEST_CASE("proposal submission validates parties, zone, bandwidth") {
  Ledger ledger;
  ledger.register_uav(uav_info("u0", 5, 5));
  ledger.register_uav(uav_info("u1", 15, 5));  // different zone
  ledger.register_vehicle(veh_info("v0", 4, 4));

  SUBCASE("valid proposal carries the contract-computed rank key") {
    const auto receipt = ledger.submit_veh_selection("v0", "u0", 2.0);
    CHECK(receipt.ok);
    const auto proposals = ledger.proposals_for("u0");
    REQUIRE(proposals.size() == 1);
    const VehicleInfo stored = *ledger.vehicle("v0");
    const UavInfo u = *ledger.uav("u0");
    VehicleInfo scored = stored;
    scored.requested_bandwidth = 2.0;
    const double expected_qov =
        compute_qov(u, scored, ledger.config().bounds, ledger.config().weights);
    CHECK(proposals[0].qov == doctest::Approx(expected_qov));
    CHECK(proposals[0].rank_key ==
          doctest::Approx(expected_qov / std::sqrt(2.0)));
  }
  SUBCASE("cross-zone proposal rejected") {
    CHECK_FALSE(ledger.submit_veh_selection("v0", "u1", 2.0).ok);
  }
  SUBCASE("non-positive bandwidth rejected") {
    CHECK_FALSE(ledger.submit_veh_selection("v0", "u0", 0.0).ok);
  }
  SUBCASE("unregistered parties rejected") {
    CHECK_FALSE(ledger.submit_veh_selection("ghost", "u0", 2.0).ok);
    CHECK_FALSE(ledger.submit_veh_selection("v0", "ghost", 2.0).ok);
  }
  SUBCASE("duplicate proposal in the same round rejected") {
    CHECK(ledger.submit_veh_selection("v0", "u0", 2.0).ok);
    CHECK_FALSE(ledger.submit_veh_selection("v0", "u0", 2.0).ok);
    // A submission reset frees the vehicle to propose again.
    CHECK(ledger.reset_uav_submission("u0").ok);
    CHECK(ledger.submit_veh_selection("v0", "u0", 2.0).ok);
  }
}

TEST_CASE("ledger allocation equals the selection module on the snapshot") {
  Ledger ledger;
  Rng rng(5150);
  for (int i = 0; i < 6; ++i) {
    ledger.register_uav(
        uav_info("u" + std::to_string(i), rng.uniform(0, 10),
                 rng.uniform(0, 10), rng.uniform(2, 15)));
  }
  for (int i = 0; i < 20; ++i) {
    auto v = veh_info("v" + std::to_string(i), rng.uniform(0, 10),
                      rng.uniform(0, 10), rng.uniform(1, 4));
    ledger.register_vehicle(v);
    const VehicleInfo stored = *ledger.vehicle(v.address);
    std::vector<UavInfo> zone_uavs;
    for (const auto& addr : ledger.uavs_in_zone(stored.zone_id)) {
      zone_uavs.push_back(*ledger.uav(addr));
    }
    const auto choice = vehicle_propose(stored, zone_uavs,
                                        ledger.config().bounds,
                                        ledger.config().weights);
    if (choice) {
      CHECK(ledger
                .submit_veh_selection(v.address, choice->uav_address,
                                      stored.requested_bandwidth)
                .ok);
    }
  }

  CHECK_FALSE(ledger.allocate_zone(999).ok);
  for (ZoneId zone : ledger.zones()) {
    // Snapshot before allocation.
    std::vector<UavInfo> zone_uavs;
    std::map<NodeAddress, std::vector<ProposalRecord>> proposals;
    for (const auto& addr : ledger.uavs_in_zone(zone)) {
      zone_uavs.push_back(*ledger.uav(addr));
      const auto list = ledger.proposals_for(addr);
      if (!list.empty()) proposals[addr] = list;
    }
    const SelectionOutcome expected = allocate_zone(zone_uavs, proposals);

    const auto receipt = ledger.allocate_zone(zone);
    REQUIRE(receipt.ok);
    const auto outcome = receipt.payload.get<SelectionOutcome>();
    REQUIRE(outcome.allocations.size() == expected.allocations.size());
    for (std::size_t i = 0; i < outcome.allocations.size(); ++i) {
      CHECK(outcome.allocations[i].uav_address ==
            expected.allocations[i].uav_address);
      CHECK(outcome.allocations[i].accepted_vehicles ==
            expected.allocations[i].accepted_vehicles);
      CHECK(outcome.allocations[i].residual_bandwidth ==
            doctest::Approx(expected.allocations[i].residual_bandwidth));
      CHECK(ledger.selection_list_for(outcome.allocations[i].uav_address) ==
            expected.allocations[i].accepted_vehicles);
    }
  }
}

TEST_CASE("resets scope correctly and reallocation is deterministic") {
  Ledger ledger;
  ledger.register_uav(uav_info("a0", 5, 5));
  ledger.register_uav(uav_info("b0", 15, 5));
  ledger.register_vehicle(veh_info("va", 4, 4));
  ledger.register_vehicle(veh_info("vb", 16, 4));
  CHECK(ledger.submit_veh_selection("va", "a0", 2).ok);
  CHECK(ledger.submit_veh_selection("vb", "b0", 2).ok);

  const auto first_a = ledger.allocate_zone(0);
  const auto first_b = ledger.allocate_zone(1);
  REQUIRE(first_a.ok);
  REQUIRE(first_b.ok);
  CHECK(ledger.selected_uavs(0) == std::vector<NodeAddress>{"a0"});
  CHECK(ledger.selected_uavs(1) == std::vector<NodeAddress>{"b0"});

  // Reset zone 0; zone 1 stays intact.
  CHECK(ledger.reset_lists_for_zone(0).ok);
  CHECK(ledger.selection_list_for("a0").empty());
  CHECK(ledger.selected_uavs(0).empty());
  CHECK(ledger.selection_list_for("b0") == std::vector<NodeAddress>{"vb"});
  CHECK(ledger.selected_uavs(1) == std::vector<NodeAddress>{"b0"});
  // Proposals survive a zone reset, so reallocation reproduces the outcome.
  const auto again = ledger.allocate_zone(0);
  REQUIRE(again.ok);
  CHECK(again.payload == first_a.payload);

  CHECK_FALSE(ledger.reset_lists_for_zone(424242).ok);

  // Per-UAV submission reset clears proposals and selection.
  CHECK(ledger.reset_uav_submission("b0").ok);
  CHECK(ledger.proposals_for("b0").empty());
  CHECK(ledger.selection_list_for("b0").empty());
  CHECK(ledger.selected_uavs(1).empty());
}

TEST_CASE("model registry and lookup") {
  Ledger ledger;
  ModelRegistryEntry m1{"M1", std::string(64, 'a'), 2, 3, 10, 20};
  ModelRegistryEntry m2{"M2", std::string(64, 'b'), 4, 5, 10, 20};
  CHECK(ledger.register_model(m1).ok);
  CHECK(ledger.register_model(m2).ok);
  CHECK_FALSE(ledger.register_model(m1).ok);  // duplicate id
  ModelRegistryEntry bad{"M3", std::string(64, 'c'), 5, 4, 10, 20};
  CHECK_FALSE(ledger.register_model(bad).ok);

  CHECK(ledger.determine_mdrl_model(2, 15).model_id == "M1");
  CHECK(ledger.determine_mdrl_model(5, 15).model_id == "M2");
  CHECK_THROWS_AS(ledger.determine_mdrl_model(9, 15), NotFoundError);
  CHECK_THROWS_AS(ledger.determine_mdrl_model(2, 50), NotFoundError);

  // Overlapping ranges: the narrowest agent range wins, then lowest id.
  ModelRegistryEntry wide{"A-wide", std::string(64, 'd'), 1, 5, 0, 100};
  ModelRegistryEntry narrow{"B-narrow", std::string(64, 'e'), 2, 2, 0, 100};
  ModelRegistryEntry narrow2{"A-narrow", std::string(64, 'f'), 2, 2, 0, 100};
  CHECK(ledger.register_model(wide).ok);
  CHECK(ledger.register_model(narrow).ok);
  CHECK(ledger.register_model(narrow2).ok);
  CHECK(ledger.determine_mdrl_model(2, 50).model_id == "A-narrow");
}

TEST_CASE("model store roundtrip and integrity") {
  const auto dir = temp_dir("store");
  ModelStore store(dir);

  const std::vector<std::uint8_t> blob = {1, 2, 3, 4, 5, 250, 251, 252};
  const std::string digest = store.put(blob);
  CHECK(digest.size() == 64);
  CHECK(store.contains(digest));
  CHECK(store.get(digest) == blob);

  // Distinct blobs hash apart.
  std::vector<std::uint8_t> other = blob;
  other.push_back(9);
  CHECK(store.put(other) != digest);

  // Corrupt the stored bytes: get must fail the digest check.
  {
    std::ofstream out(dir / digest, std::ios::binary | std::ios::trunc);
    out << "corrupted";
  }
  CHECK_THROWS_AS(store.get(digest), IntegrityError);
  CHECK_THROWS_AS(store.get(std::string(64, '0')), NotFoundError);
  CHECK_THROWS_AS(store.get("nonsense"), NotFoundError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("replay reproduces state from the event log") {
  Ledger ledger;
  Rng rng(99);

  SUBCASE("bulk registration") {
    for (int i = 0; i < 100; ++i) {
      ledger.register_uav(uav_info("u" + std::to_string(i),
                                   rng.uniform(0, 50), rng.uniform(0, 50)));
    }
    const Ledger replayed = Ledger::replay(ledger.events());
    CHECK(replayed.state_json().dump() == ledger.state_json().dump());
    CHECK(replayed.state_digest() == ledger.state_digest());
  }

  SUBCASE("interleaved updates from many nodes") {
    for (int i = 0; i < 10; ++i) {
      ledger.register_uav(uav_info("u" + std::to_string(i),
                                   rng.uniform(0, 50), rng.uniform(0, 50)));
      ledger.register_vehicle(veh_info("v" + std::to_string(i),
                                       rng.uniform(0, 50), rng.uniform(0, 50)));
    }
    for (int round = 0; round < 30; ++round) {
      const int i = static_cast<int>(rng.uniform_index(10));
      if (rng.uniform() < 0.5) {
        ledger.update_uav_info(uav_info("u" + std::to_string(i),
                                        rng.uniform(0, 50), rng.uniform(0, 50),
                                        rng.uniform(1, 20)));
      } else {
        ledger.update_vehicle_info(veh_info("v" + std::to_string(i),
                                            rng.uniform(0, 50),
                                            rng.uniform(0, 50)));
      }
    }
    const Ledger replayed = Ledger::replay_ndjson(ledger.event_log_ndjson());
    CHECK(replayed.state_json().dump() == ledger.state_json().dump());
  }

  SUBCASE("workload with proposals, allocations, resets, failures") {
    for (int i = 0; i < 8; ++i) {
      ledger.register_uav(uav_info("u" + std::to_string(i),
                                   rng.uniform(0, 50), rng.uniform(0, 50),
                                   rng.uniform(2, 20)));
    }
    for (int i = 0; i < 40; ++i) {
      ledger.register_vehicle(veh_info("v" + std::to_string(i),
                                       rng.uniform(0, 50), rng.uniform(0, 50),
                                       rng.uniform(1, 4)));
    }
    for (int i = 0; i < 40; ++i) {
      const auto v = ledger.vehicle("v" + std::to_string(i));
      const auto in_zone = ledger.uavs_in_zone(v->zone_id);
      if (in_zone.empty()) continue;
      ledger.submit_veh_selection(v->address,
                                  in_zone[rng.uniform_index(in_zone.size())],
                                  v->requested_bandwidth);
    }
    for (ZoneId zone : ledger.zones()) ledger.allocate_zone(zone);
    ledger.register_vehicle(veh_info("v0", 1, 1));  // duplicate -> failure event
    ledger.reset_uav_submission("u3");
    ledger.reset_lists_for_zone(ledger.zones().front());
    for (ZoneId zone : ledger.zones()) ledger.allocate_zone(zone);

    ledger.check_integrity();
    const Ledger replayed = Ledger::replay_ndjson(ledger.event_log_ndjson());
    replayed.check_integrity();
    CHECK(replayed.state_json().dump() == ledger.state_json().dump());
    CHECK(replayed.state_digest() == ledger.state_digest());
  }
}

TEST_CASE("replay rejects tampered logs") {
  Ledger ledger;
  ledger.register_uav(uav_info("u0", 5, 5));
  auto events = ledger.events();

  SUBCASE("missing genesis") {
    events.erase(events.begin());
    CHECK_THROWS_AS(Ledger::replay(events), IntegrityError);
  }
  SUBCASE("status tampering detected") {
    events[1].status = "rejected: forged";
    CHECK_THROWS_AS(Ledger::replay(events), IntegrityError);
  }
}

TEST_CASE("referential integrity holds through a random transaction walk") {
  Ledger ledger;
  Rng rng(314159);
  std::vector<std::string> uavs, vehicles;
  for (int step = 0; step < 400; ++step) {
    const double roll = rng.uniform();
    if (roll < 0.2 || uavs.empty()) {
      const std::string addr = "u" + std::to_string(uavs.size());
      if (ledger.register_uav(
                    uav_info(addr, rng.uniform(0, 50), rng.uniform(0, 50),
                             rng.uniform(1, 20)))
              .ok) {
        uavs.push_back(addr);
      }
    } else if (roll < 0.4 || vehicles.empty()) {
      const std::string addr = "v" + std::to_string(vehicles.size());
      if (ledger.register_vehicle(veh_info(addr, rng.uniform(0, 50),
                                           rng.uniform(0, 50),
                                           rng.uniform(1, 4)))
              .ok) {
        vehicles.push_back(addr);
      }
    } else if (roll < 0.55) {
      ledger.update_uav_info(uav_info(uavs[rng.uniform_index(uavs.size())],
                                      rng.uniform(0, 50), rng.uniform(0, 50),
                                      rng.uniform(1, 20)));
    } else if (roll < 0.7) {
      const auto& vaddr = vehicles[rng.uniform_index(vehicles.size())];
      const auto v = ledger.vehicle(vaddr);
      const auto in_zone = ledger.uavs_in_zone(v->zone_id);
      if (!in_zone.empty()) {
        ledger.submit_veh_selection(vaddr,
                                    in_zone[rng.uniform_index(in_zone.size())],
                                    v->requested_bandwidth);
      }
    } else if (roll < 0.8) {
      const auto zones = ledger.zones();
      if (!zones.empty()) {
        ledger.allocate_zone(zones[rng.uniform_index(zones.size())]);
      }
    } else if (roll < 0.9) {
      const auto zones = ledger.zones();
      if (!zones.empty()) {
        ledger.reset_lists_for_zone(zones[rng.uniform_index(zones.size())]);
      }
    } else {
      ledger.reset_uav_submission(uavs[rng.uniform_index(uavs.size())]);
    }
    ledger.check_integrity();
  }
  // Event log is append-only: sequence numbers are exactly 0..N-1.
  const auto events = ledger.events();
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].seq == i);
  }
}
