#include "core/runner.hpp"

#include <zlib.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "core/bench.hpp"
#include "core/errors.hpp"
#include "core/ledger.hpp"
#include "core/model_store.hpp"
#include "core/scenario.hpp"
#include "core/version.hpp"

namespace uaviov::runner {

namespace fs = std::filesystem;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write file: " + path);
  out << content;
}

namespace {

fs::path out_dir_of(const Json& config) {
  fs::path dir = config.value("out_dir", std::string("."));
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const Json& effective_config, const Json& artifacts) {
  const Json manifest{{"command", command},
                      {"version", kVersionString},
                      {"config", effective_config},
                      {"artifacts", artifacts}};
  write_text_file((out_dir / (command + "_manifest.json")).string(),
                  manifest.dump(2) + "\n");
}

void write_gzip_file(const std::string& path, const std::string& content) {
  gzFile gz = gzopen(path.c_str(), "wb");
  if (!gz) throw DomainError("cannot open gzip file: " + path);
  if (!content.empty() &&
      gzwrite(gz, content.data(), static_cast<unsigned>(content.size())) == 0) {
    gzclose(gz);
    throw DomainError("gzip write failed: " + path);
  }
  gzclose(gz);
}

std::uint64_t population_seed(std::uint64_t base, int num_uavs, int iteration) {
  return derive_seed(base, (static_cast<std::uint64_t>(num_uavs) << 20) |
                               static_cast<std::uint64_t>(iteration));
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    throw DomainError("CSV column not found: " + name);
  }
  return static_cast<std::size_t>(it - table.header.begin());
}

// Runs the proposed mechanism end to end through the ledger. Registration
// initializes reputation contract-side, so a follow-up info update applies
// the sampled attributes before any proposal is scored.
struct LedgerSelectResult {
  SelectionOutcome outcome;
  std::string event_log;
};

LedgerSelectResult ledger_select(const Population& pop,
                                 const NormalizationBounds& bounds,
                                 const ScoringWeights& weights,
                                 const ZoneGrid& grid) {
  Ledger ledger(LedgerConfig{bounds, weights, grid, 50.0});
  for (const UavInfo& u : pop.uavs) {
    ledger.register_uav(u);
    ledger.update_uav_info(u);
  }
  for (const VehicleInfo& v : pop.vehicles) {
    ledger.register_vehicle(v);
    ledger.update_vehicle_info(v);
  }

  for (const VehicleInfo& v : pop.vehicles) {
    const VehicleInfo stored = *ledger.vehicle(v.address);
    std::vector<UavInfo> zone_uavs;
    for (const NodeAddress& addr : ledger.uavs_in_zone(stored.zone_id)) {
      zone_uavs.push_back(*ledger.uav(addr));
    }
    const auto choice = vehicle_propose(stored, zone_uavs, bounds, weights);
    if (choice) {
      ledger.submit_veh_selection(v.address, choice->uav_address,
                                  stored.requested_bandwidth);
    }
  }

  LedgerSelectResult result;
  for (ZoneId zone : ledger.zones()) {
    const TransactionReceipt receipt = ledger.allocate_zone(zone);
    if (!receipt.ok) continue;
    const SelectionOutcome outcome = receipt.payload.get<SelectionOutcome>();
    for (const UavAllocation& a : outcome.allocations) {
      result.outcome.allocations.push_back(a);
    }
    for (const NodeAddress& v : outcome.unmatched_vehicles) {
      result.outcome.unmatched_vehicles.push_back(v);
    }
  }
  result.event_log = ledger.event_log_ndjson();
  return result;
}

Json outcome_records(const SelectionOutcome& outcome, const Population& pop,
                     const ZoneGrid& grid) {
  std::map<std::string, ZoneId> uav_zone;
  for (const UavInfo& u : pop.uavs) {
    uav_zone[u.address] = zone_of(u.position, grid);
  }
  Json records = Json::array();
  for (const UavAllocation& a : outcome.allocations) {
    records.push_back(Json{{"zone", uav_zone.at(a.uav_address)},
                           {"uav", a.uav_address},
                           {"vehicles", a.accepted_vehicles},
                           {"residual_AB", a.residual_bandwidth}});
  }
  return records;
}

Policy load_policy_from_config(const Json& config, const fs::path& out_dir) {
  if (config.contains("checkpoint_path")) {
    const std::string text =
        read_text_file(config.at("checkpoint_path").get<std::string>());
    return Policy::deserialize(
        std::vector<std::uint8_t>(text.begin(), text.end()));
  }
  const std::string store_dir = config.value(
      "store_dir", (out_dir / "modelstore").string());
  ModelStore store(store_dir);
  std::string hash;
  if (config.contains("content_hash")) {
    hash = config.at("content_hash").get<std::string>();
  } else if (config.contains("registry_path")) {
    // Resolve through the contract's model lookup.
    const Json registry =
        Json::parse(read_text_file(config.at("registry_path").get<std::string>()));
    Ledger ledger;
    for (const Json& entry : registry) {
      ledger.register_model(entry.get<ModelRegistryEntry>());
    }
    const ModelRegistryEntry entry = ledger.determine_mdrl_model(
        config.at("num_agents").get<std::int64_t>(),
        config.at("num_vehicles").get<std::int64_t>());
    hash = entry.content_hash;
  } else {
    throw ConfigError(
        "eval needs checkpoint_path, content_hash, or registry_path");
  }
  return Policy::deserialize(store.get(hash));
}

}  // namespace

Json run_generate(const Json& config) {
  const fs::path out_dir = out_dir_of(config);
  ScenarioConfig sc = config.value("scenario", ScenarioConfig{});
  sc.validate();

  Json populations = Json::array();
  for (int count : sc.uav_counts) {
    for (int iter = 0; iter < sc.iterations; ++iter) {
      const std::uint64_t seed = population_seed(sc.seed, count, iter);
      const Population pop = generate_population(sc, count, seed);
      populations.push_back(Json{{"num_uavs", count},
                                 {"iteration", iter},
                                 {"seed", seed},
                                 {"vehicles", pop.vehicles},
                                 {"uavs", pop.uavs}});
    }
  }

  const Json scenario{{"config", sc}, {"populations", populations}};
  const std::string scenario_path = (out_dir / "scenario.json").string();
  write_text_file(scenario_path, scenario.dump() + "\n");

  Json effective = config;
  effective["out_dir"] = out_dir.string();
  effective["scenario"] = sc;
  write_manifest(out_dir, "generate", effective,
                 Json::array({scenario_path}));
  return Json{{"scenario_path", scenario_path},
              {"num_populations", populations.size()},
              {"num_vehicles", sc.num_vehicles}};
}

Json run_select(const Json& config) {
  const fs::path out_dir = out_dir_of(config);
  Json scenario;
  if (config.contains("scenario_path")) {
    scenario =
        Json::parse(read_text_file(config.at("scenario_path").get<std::string>()));
  } else {
    ScenarioConfig sc = config.value("scenario", ScenarioConfig{});
    sc.validate();
    Json populations = Json::array();
    for (int count : sc.uav_counts) {
      for (int iter = 0; iter < sc.iterations; ++iter) {
        const std::uint64_t seed = population_seed(sc.seed, count, iter);
        const Population pop = generate_population(sc, count, seed);
        populations.push_back(Json{{"num_uavs", count},
                                   {"iteration", iter},
                                   {"seed", seed},
                                   {"vehicles", pop.vehicles},
                                   {"uavs", pop.uavs}});
      }
    }
    scenario = Json{{"config", sc}, {"populations", populations}};
  }

  const ScenarioConfig sc = scenario.at("config").get<ScenarioConfig>();
  const std::string mechanism = config.value("mechanism", std::string("both"));
  const bool run_proposed = mechanism == "proposed" || mechanism == "both";
  const bool run_nnm = mechanism == "nnm" || mechanism == "both";
  if (!run_proposed && !run_nnm) {
    throw ConfigError("mechanism must be proposed, nnm, or both");
  }
  const bool emit_logs = config.value("emit_event_logs", true);

  std::ostringstream csv;
  csv << "seed,num_uavs,num_vehicles,mechanism,iteration,"
         "vehicles_per_selected_uav,pct_uavs_selected,mean_qou,mean_qov,"
         "matched_vehicles,empty\n";
  Json outcomes = Json::array();
  Json artifacts = Json::array();

  // mechanism -> num_uavs -> per-iteration metrics
  std::map<std::string, std::map<int, std::vector<SelectionMetrics>>> sweep;

  for (const Json& pj : scenario.at("populations")) {
    Population pop;
    pj.at("vehicles").get_to(pop.vehicles);
    pj.at("uavs").get_to(pop.uavs);
    const int num_uavs = pj.at("num_uavs").get<int>();
    const int iteration = pj.at("iteration").get<int>();
    const std::uint64_t seed = pj.at("seed").get<std::uint64_t>();

    auto emit = [&](const std::string& mech, const SelectionOutcome& outcome) {
      const SelectionMetrics m = selection_metrics(outcome, pop.vehicles,
                                                   pop.uavs, sc.bounds,
                                                   sc.weights);
      csv << seed << ',' << num_uavs << ',' << sc.num_vehicles << ',' << mech
          << ',' << iteration << ',' << m.vehicles_per_selected_uav << ','
          << m.pct_uavs_selected << ',' << m.mean_qou << ',' << m.mean_qov
          << ',' << m.matched_vehicles << ',' << (m.empty ? 1 : 0) << '\n';
      outcomes.push_back(Json{{"num_uavs", num_uavs},
                              {"iteration", iteration},
                              {"mechanism", mech},
                              {"records",
                               outcome_records(outcome, pop, sc.zone_grid)}});
      sweep[mech][num_uavs].push_back(m);
    };

    if (run_proposed) {
      const LedgerSelectResult result =
          ledger_select(pop, sc.bounds, sc.weights, sc.zone_grid);
      emit("proposed", result.outcome);
      if (emit_logs) {
        const std::string log_path =
            (out_dir / "select_eventlogs" /
             ("uav" + std::to_string(num_uavs) + "_iter" +
              std::to_string(iteration) + ".ndjson"))
                .string();
        write_text_file(log_path, result.event_log);
        artifacts.push_back(log_path);
      }
    }
    if (run_nnm) {
      emit("nnm", nnm_baseline(pop.vehicles, pop.uavs, sc.bounds, sc.weights));
    }
  }

  const std::string csv_path = (out_dir / "select_metrics.csv").string();
  write_text_file(csv_path, csv.str());
  const std::string outcomes_path = (out_dir / "select_outcomes.json").string();
  write_text_file(outcomes_path, outcomes.dump() + "\n");
  artifacts.push_back(csv_path);
  artifacts.push_back(outcomes_path);

  Json summary{{"metrics_csv", csv_path}, {"outcomes", outcomes_path}};
  Json sweep_json = Json::object();
  for (const auto& [mech, by_count] : sweep) {
    Json points = Json::array();
    for (const auto& [count, metrics] : by_count) {
      double qou = 0, qov = 0, pct = 0, vpu = 0;
      for (const SelectionMetrics& m : metrics) {
        qou += m.mean_qou;
        qov += m.mean_qov;
        pct += m.pct_uavs_selected;
        vpu += m.vehicles_per_selected_uav;
      }
      const double n = static_cast<double>(metrics.size());
      points.push_back(Json{{"num_uavs", count},
                            {"mean_qou", qou / n},
                            {"mean_qov", qov / n},
                            {"pct_uavs_selected", pct / n},
                            {"vehicles_per_selected_uav", vpu / n}});
    }
    sweep_json[mech] = points;
  }
  summary["sweep"] = sweep_json;

  Json effective = config;
  effective["out_dir"] = out_dir.string();
  effective["mechanism"] = mechanism;
  write_manifest(out_dir, "select", effective, artifacts);
  return summary;
}

Json run_train(const Json& config) {
  const fs::path out_dir = out_dir_of(config);
  const std::uint64_t seed = config.value("seed", std::uint64_t{0});
  const EnvConfig env = config.value("env", EnvConfig{});
  const ArchDescriptor arch = [&] {
    ArchDescriptor a = config.value("arch", ArchDescriptor{});
    a.input_n = env.obs_n;  // the trunk consumes the env's observation side
    return a;
  }();
  PpoHyperparams hp = config.value("hp", PpoHyperparams{});
  hp.validate();
  env.validate();

  const bool verbose = config.value("verbose", false);
  TrainProgressFn progress;
  if (verbose) {
    progress = [&hp](long long steps, const UpdateDiagnostics& d) {
      std::cerr << "train step " << steps << "/" << hp.total_steps
                << " policy_loss=" << d.policy_loss
                << " value_loss=" << d.value_loss << " entropy=" << d.entropy
                << "\n";
    };
  }

  const TrainResult result = train(env, arch, hp, seed, progress);

  std::ostringstream curve;
  curve << "step,reward,coverage,connectivity\n";
  for (const CurvePoint& p : result.curve) {
    curve << p.step << ',' << p.mean_episodic_reward << ',' << p.mean_coverage
          << ',' << p.connectivity_fraction << '\n';
  }
  const std::string curve_path = (out_dir / "curve.csv").string();
  write_text_file(curve_path, curve.str());

  const std::string model_id =
      config.value("model_id", "model-" + std::to_string(seed));
  const std::vector<std::uint8_t> blob = result.policy.serialize();
  ModelStore store(config.value("store_dir", (out_dir / "modelstore").string()));
  const std::string content_hash = store.put(blob);

  ModelRegistryEntry entry;
  entry.model_id = model_id;
  entry.content_hash = content_hash;
  entry.min_agents = entry.max_agents = env.num_agents;
  entry.min_vehicles = entry.max_vehicles = env.num_vehicles;
  if (config.contains("register")) {
    const Json& reg = config.at("register");
    entry.min_agents = reg.value("min_agents", entry.min_agents);
    entry.max_agents = reg.value("max_agents", entry.max_agents);
    entry.min_vehicles = reg.value("min_vehicles", entry.min_vehicles);
    entry.max_vehicles = reg.value("max_vehicles", entry.max_vehicles);
  }

  // The registry index is shared across runs in the same out_dir.
  const std::string registry_path =
      config.value("registry_path", (out_dir / "model_registry.json").string());
  Json registry = Json::array();
  if (fs::exists(registry_path)) {
    registry = Json::parse(read_text_file(registry_path));
  }
  registry.push_back(entry);
  write_text_file(registry_path, registry.dump(2) + "\n");

  Json effective = config;
  effective["out_dir"] = out_dir.string();
  effective["seed"] = seed;
  effective["env"] = env;
  effective["arch"] = arch;
  effective["hp"] = hp;
  effective["model_id"] = model_id;
  write_manifest(out_dir, "train", effective,
                 Json::array({curve_path, registry_path, content_hash}));

  Json curve_json = Json::array();
  for (const CurvePoint& p : result.curve) {
    curve_json.push_back(Json{{"step", p.step},
                              {"reward", p.mean_episodic_reward},
                              {"coverage", p.mean_coverage},
                              {"connectivity", p.connectivity_fraction}});
  }
  return Json{{"model_id", model_id},
              {"content_hash", content_hash},
              {"param_count", result.policy.param_count()},
              {"curve_csv", curve_path},
              {"registry_path", registry_path},
              {"curve", curve_json}};
}

Json run_eval(const Json& config) {
  const fs::path out_dir = out_dir_of(config);
  const std::uint64_t seed = config.value("seed", std::uint64_t{0});
  const EnvConfig env = config.value("env", EnvConfig{});
  env.validate();
  const long long steps = config.value("steps", 4000LL);

  const Policy policy = load_policy_from_config(config, out_dir);
  const EvalMetrics metrics = evaluate_greedy(policy, env, steps, seed);

  Json result{{"mean_episodic_reward", metrics.mean_episodic_reward},
              {"mean_coverage", metrics.mean_coverage},
              {"connectivity_fraction", metrics.connectivity_fraction},
              {"episodes", metrics.episodes}};

  Json artifacts = Json::array();
  const std::string eval_path = (out_dir / "eval.json").string();
  write_text_file(eval_path, result.dump(2) + "\n");
  artifacts.push_back(eval_path);

  if (config.contains("dump_trajectory")) {
    // One greedy episode as gzip JSON-lines.
    CoverageEnv traj_env(env);
    std::vector<ObservationStack> obs = traj_env.reset(derive_seed(seed, 0));
    std::ostringstream lines;
    bool done = false;
    int t = 0;
    while (!done) {
      std::vector<int> actions(env.num_agents);
      for (int k = 0; k < env.num_agents; ++k) {
        actions[k] = policy.actor_forward(obs[k].data).greedy();
      }
      JointStep stepped = traj_env.step(actions);
      Json uav_cells = Json::array();
      for (const Cell& c : traj_env.state().uav_cells) {
        uav_cells.push_back(Json::array({c.x, c.y}));
      }
      Json veh_cells = Json::array();
      for (const Cell& c : traj_env.state().vehicle_cells) {
        veh_cells.push_back(Json::array({c.x, c.y}));
      }
      lines << Json{{"t", t},
                    {"uav_cells", uav_cells},
                    {"vehicle_cells", veh_cells},
                    {"actions", actions},
                    {"reward", stepped.reward}}
                   .dump()
            << '\n';
      done = stepped.done;
      obs = std::move(stepped.observations);
      ++t;
    }
    const std::string dump_path = config.at("dump_trajectory").get<std::string>();
    write_gzip_file(dump_path, lines.str());
    artifacts.push_back(dump_path);
  }

  Json effective = config;
  effective["out_dir"] = out_dir.string();
  effective["seed"] = seed;
  effective["env"] = env;
  effective["steps"] = steps;
  write_manifest(out_dir, "eval", effective, artifacts);
  return result;
}

Json run_bench(const Json& config) {
  const fs::path out_dir = out_dir_of(config);
  const std::uint64_t seed = config.value("seed", std::uint64_t{0});

  std::vector<BenchScenario> scenarios;
  if (config.contains("scenarios")) {
    for (const Json& sj : config.at("scenarios")) {
      BenchScenario sc;
      sc.name = sj.value("name", "scenario-" + std::to_string(scenarios.size()));
      sc.env = sj.value("env", EnvConfig{});
      sc.arch = sj.value("arch", ArchDescriptor{});
      sc.arch.input_n = sc.env.obs_n;
      sc.hp = sj.value("hp", PpoHyperparams{});
      sc.pso = sj.value("pso", PsoParams{});
      sc.eval_steps = sj.value("eval_steps", 2000LL);
      scenarios.push_back(std::move(sc));
    }
  }
  if (scenarios.empty()) throw ConfigError("bench needs at least one scenario");

  const std::vector<BenchRow> rows = benchmark_suite(scenarios, seed);

  std::ostringstream csv;
  csv << "scenario,method,mean_reward,mean_coverage,connectivity_fraction\n";
  for (const BenchRow& r : rows) {
    csv << r.scenario << ',' << r.method << ',' << r.mean_reward << ','
        << r.mean_coverage << ',' << r.connectivity_fraction << '\n';
  }
  const std::string csv_path = (out_dir / "bench.csv").string();
  write_text_file(csv_path, csv.str());

  // Plot data: one series per (method, metric) across scenarios.
  Json series = Json::array();
  const std::vector<std::pair<std::string, double BenchRow::*>> metrics = {
      {"mean_reward", &BenchRow::mean_reward},
      {"mean_coverage", &BenchRow::mean_coverage},
      {"connectivity_fraction", &BenchRow::connectivity_fraction}};
  std::vector<std::string> methods;
  for (const BenchRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  for (const std::string& method : methods) {
    for (const auto& [metric_name, member] : metrics) {
      Json xs = Json::array(), ys = Json::array();
      int x = 0;
      for (const BenchRow& r : rows) {
        if (r.method != method) continue;
        xs.push_back(x++);
        ys.push_back(r.*member);
      }
      series.push_back(Json{{"label", method + "." + metric_name},
                            {"x", xs},
                            {"y", ys}});
    }
  }
  const Json plot{{"axes", Json{{"x", "scenario"}, {"y", "value"}}},
                 {"series", series}};
  const std::string plot_path = (out_dir / "bench_plotdata.json").string();
  write_text_file(plot_path, plot.dump(2) + "\n");

  Json effective = config;
  effective["out_dir"] = out_dir.string();
  effective["seed"] = seed;
  write_manifest(out_dir, "bench", effective,
                 Json::array({csv_path, plot_path}));

  Json rows_json = Json::array();
  for (const BenchRow& r : rows) {
    rows_json.push_back(Json{{"scenario", r.scenario},
                             {"method", r.method},
                             {"mean_reward", r.mean_reward},
                             {"mean_coverage", r.mean_coverage},
                             {"connectivity_fraction", r.connectivity_fraction}});
  }
  return Json{{"bench_csv", csv_path}, {"plotdata", plot_path}, {"rows", rows_json}};
}

Json run_plotdata(const Json& config) {
  const fs::path out_dir = out_dir_of(config);
  const std::string input = config.at("input_csv").get<std::string>();
  const CsvTable table = parse_csv(read_text_file(input));
  const std::string x_col = config.at("x").get<std::string>();

  std::vector<std::string> y_cols;
  if (config.at("y").is_array()) {
    config.at("y").get_to(y_cols);
  } else {
    y_cols.push_back(config.at("y").get<std::string>());
  }

  const std::size_t xi = column_index(table, x_col);
  std::vector<std::size_t> yis;
  for (const std::string& y : y_cols) yis.push_back(column_index(table, y));

  const bool grouped = config.contains("group_by");
  std::size_t gi = 0;
  if (grouped) gi = column_index(table, config.at("group_by").get<std::string>());

  // group key -> y column -> sorted (x, y) points
  std::map<std::string, std::vector<std::vector<std::pair<double, double>>>> groups;
  for (const auto& row : table.rows) {
    const std::string key = grouped ? row.at(gi) : "all";
    auto& per_y = groups[key];
    if (per_y.empty()) per_y.resize(y_cols.size());
    const double x = std::stod(row.at(xi));
    for (std::size_t k = 0; k < yis.size(); ++k) {
      per_y[k].emplace_back(x, std::stod(row.at(yis[k])));
    }
  }

  Json series = Json::array();
  for (auto& [key, per_y] : groups) {
    for (std::size_t k = 0; k < y_cols.size(); ++k) {
      auto& points = per_y[k];
      std::stable_sort(points.begin(), points.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      Json xs = Json::array(), ys = Json::array();
      for (const auto& [x, y] : points) {
        xs.push_back(x);
        ys.push_back(y);
      }
      const std::string label =
          grouped ? key + "." + y_cols[k] : y_cols[k];
      series.push_back(Json{{"label", label}, {"x", xs}, {"y", ys}});
    }
  }

  const Json plot{{"axes", Json{{"x", x_col}, {"y", y_cols}}},
                 {"series", series}};
  const std::string out_path =
      config.value("out_json", (out_dir / "plotdata.json").string());
  write_text_file(out_path, plot.dump(2) + "\n");

  Json effective = config;
  effective["out_dir"] = out_dir.string();
  write_manifest(out_dir, "plotdata", effective, Json::array({out_path}));
  return Json{{"plotdata", out_path}, {"num_series", series.size()}};
}

Json run_ledger_replay(const Json& config) {
  const fs::path out_dir = out_dir_of(config);
  const std::string log_path = config.at("log_path").get<std::string>();
  const Ledger ledger = Ledger::replay_ndjson(read_text_file(log_path));
  ledger.check_integrity();
  const std::string digest = ledger.state_digest();

  Json result{{"events", ledger.event_count()}, {"state_digest", digest}};
  if (config.contains("expect_digest")) {
    const std::string expected = config.at("expect_digest").get<std::string>();
    result["matched"] = expected == digest;
    if (expected != digest) {
      throw IntegrityError("replayed state digest " + digest +
                           " does not match expected " + expected);
    }
  }
  Json artifacts = Json::array();
  if (config.contains("out_state_path")) {
    const std::string state_path = config.at("out_state_path").get<std::string>();
    write_text_file(state_path, ledger.state_json().dump() + "\n");
    artifacts.push_back(state_path);
  }

  Json effective = config;
  effective["out_dir"] = out_dir.string();
  write_manifest(out_dir, "ledger-replay", effective, artifacts);
  return result;
}

}  // namespace uaviov::runner
