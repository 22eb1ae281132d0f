#include <doctest.h>

#include <filesystem>

#include "core/runner.hpp"
#include "core/scenario.hpp"

using namespace uaviov;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("uaviov_runner_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("population sampling respects configured ranges") {
  ScenarioConfig sc;
  sc.num_vehicles = 10000;
  const Population pop = generate_population(sc, 500, 99);
  REQUIRE(pop.vehicles.size() == 10000);
  REQUIRE(pop.uavs.size() == 500);
  for (const VehicleInfo& v : pop.vehicles) {
    CHECK(v.position.x >= 0);
    CHECK(v.position.x < sc.zone_grid.area_w);
    CHECK(v.position.y >= 0);
    CHECK(v.position.y < sc.zone_grid.area_h);
    CHECK(v.requested_bandwidth >= sc.rb_min);
    CHECK(v.requested_bandwidth <= sc.rb_max);
    CHECK(v.pay_per_mbps >= sc.pay_min);
    CHECK(v.pay_per_mbps <= sc.pay_max);
    CHECK(v.reputation >= sc.rep_min);
    CHECK(v.reputation <= sc.rep_max);
    CHECK(v.zone_id == zone_of(v.position, sc.zone_grid));
  }
  for (const UavInfo& u : pop.uavs) {
    CHECK(u.available_bandwidth >= sc.ab_min);
    CHECK(u.available_bandwidth <= sc.ab_max);
    CHECK(u.battery_level >= sc.bl_min);
    CHECK(u.battery_level <= sc.bl_max);
    CHECK(u.reputation >= sc.rep_min);
    CHECK(u.reputation <= sc.rep_max);
    CHECK(u.altitude >= sc.alt_min);
    CHECK(u.altitude <= sc.alt_max);
    CHECK(u.zone_id == zone_of(u.position, sc.zone_grid));
  }

  // Seeded generation is reproducible; different seeds diverge.
  const Population again = generate_population(sc, 500, 99);
  CHECK(again.vehicles[17].position.x == pop.vehicles[17].position.x);
  const Population other = generate_population(sc, 500, 100);
  CHECK(other.vehicles[17].position.x != pop.vehicles[17].position.x);
}

TEST_CASE("select sweep emits one csv row per population per mechanism") {
  const auto dir = temp_dir("select");
  ScenarioConfig sc;
  sc.num_vehicles = 30;
  sc.uav_counts = {6, 12};
  sc.iterations = 2;
  sc.seed = 4;
  const Json summary = runner::run_select(Json{{"out_dir", dir.string()},
                                               {"scenario", sc},
                                               {"emit_event_logs", false}});

  const std::string csv = runner::read_text_file(
      summary.at("metrics_csv").get<std::string>());
  // header + 2 counts x 2 iterations x 2 mechanisms
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 8);
  CHECK(csv.rfind("seed,num_uavs,num_vehicles,mechanism,iteration,", 0) == 0);

  const Json& sweep = summary.at("sweep");
  REQUIRE(sweep.contains("proposed"));
  REQUIRE(sweep.contains("nnm"));
  CHECK(sweep.at("proposed").size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("plotdata roundtrips csv values, sorted by x") {
  const auto dir = temp_dir("plot");
  const std::string csv_path = (dir / "input.csv").string();
  runner::write_text_file(csv_path,
                          "num_uavs,mechanism,score\n"
                          "40,a,2.5\n"
                          "20,a,1.25\n"
                          "40,b,4\n"
                          "20,b,3\n");
  const Json summary = runner::run_plotdata(
      Json{{"out_dir", dir.string()},
           {"input_csv", csv_path},
           {"x", "num_uavs"},
           {"y", "score"},
           {"group_by", "mechanism"}});
  const Json plot = Json::parse(
      runner::read_text_file(summary.at("plotdata").get<std::string>()));
  REQUIRE(plot.at("series").size() == 2);
  for (const Json& series : plot.at("series")) {
    CHECK(series.at("x") == Json::array({20.0, 40.0}));
    if (series.at("label") == "a.score") {
      CHECK(series.at("y") == Json::array({1.25, 2.5}));
    } else {
      CHECK(series.at("label") == "b.score");
      CHECK(series.at("y") == Json::array({3.0, 4.0}));
    }
  }

  SUBCASE("missing input is a clean error") {
    CHECK_THROWS_AS(
        runner::run_plotdata(Json{{"out_dir", dir.string()},
                                  {"input_csv", (dir / "nope.csv").string()},
                                  {"x", "a"},
                                  {"y", "b"}}),
        NotFoundError);
  }
  SUBCASE("unknown column is a clean error") {
    CHECK_THROWS_AS(
        runner::run_plotdata(Json{{"out_dir", dir.string()},
                                  {"input_csv", csv_path},
                                  {"x", "bogus"},
                                  {"y", "score"}}),
        DomainError);
  }
  fs::remove_all(dir);
}

TEST_CASE("select ledger event logs replay to the recorded outcome") {
  const auto dir = temp_dir("replay");
  ScenarioConfig sc;
  sc.num_vehicles = 25;
  sc.uav_counts = {8};
  sc.iterations = 1;
  sc.seed = 11;
  runner::run_select(Json{{"out_dir", dir.string()}, {"scenario", sc}});

  const fs::path log = dir / "select_eventlogs" / "uav8_iter0.ndjson";
  REQUIRE(fs::exists(log));
  const Json replayed = runner::run_ledger_replay(
      Json{{"out_dir", dir.string()}, {"log_path", log.string()}});
  CHECK(replayed.at("events").get<std::size_t>() > 50);

  // Replaying twice yields the same digest; tampering with the expectation
  // fails loudly.
  const std::string digest = replayed.at("state_digest").get<std::string>();
  const Json again = runner::run_ledger_replay(
      Json{{"out_dir", dir.string()},
           {"log_path", log.string()},
           {"expect_digest", digest}});
  CHECK(again.at("matched") == true);
  CHECK_THROWS_AS(runner::run_ledger_replay(
                      Json{{"out_dir", dir.string()},
                           {"log_path", log.string()},
                           {"expect_digest", std::string(64, '0')}}),
                  IntegrityError);
  fs::remove_all(dir);
}
