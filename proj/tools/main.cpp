// Command-line front end. All work happens behind the C API in libuaviov;
// this binary only assembles config JSON from flags and prints summaries.

#include <uaviov.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(uaviov_status status) {
  switch (status) {
    case UAVIOV_OK:
      return kExitOk;
    case UAVIOV_ERR_INVALID_ARGUMENT:
    case UAVIOV_ERR_CONFIG:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CLI::ValidationError("--config", "cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

// Applies "a.b.c=value" onto the config; the value is parsed as JSON when
// possible and taken as a string otherwise.
void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw CLI::ValidationError("--set", "expected key=value: " + assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;
  }

  json* node = &config;
  std::istringstream keys(path);
  std::string key, next;
  std::getline(keys, key, '.');
  while (std::getline(keys, next, '.')) {
    node = &(*node)[key];
    key = next;
  }
  (*node)[key] = value;
}

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--set", opts.overrides,
                  "Override a config key, dotted path (key.sub=value)");
  cmd->add_option("--out", opts.out_dir,
                  "Output directory (overrides UAVIOV_OUT and the config)");
  cmd->add_option("--seed", opts.seed, "Master seed");
}

json build_config(const CommonOpts& opts) {
  json config = json::object();
  if (!opts.config_path.empty()) config = load_config_file(opts.config_path);
  for (const std::string& assignment : opts.overrides) {
    apply_override(config, assignment);
  }
  if (!opts.out_dir.empty()) {
    config["out_dir"] = opts.out_dir;
  } else if (!config.contains("out_dir")) {
    if (const char* env = std::getenv("UAVIOV_OUT")) config["out_dir"] = env;
  }
  if (opts.seed >= 0) config["seed"] = opts.seed;
  return config;
}

int run_command(const std::string& command, const json& config) {
  char* summary = nullptr;
  const uaviov_status status =
      uaviov_run(command.c_str(), config.dump().c_str(), &summary);
  if (status != UAVIOV_OK) {
    std::cerr << "uaviov " << command << ": " << uaviov_last_error() << "\n";
    return exit_code_for(status);
  }
  std::cout << summary << "\n";
  uaviov_string_free(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV-assisted IoV simulator: relay selection, ledger, MDRL"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(uaviov_version()); });

  CommonOpts generate_opts, select_opts, train_opts, eval_opts, bench_opts,
      plot_opts, replay_opts;

  CLI::App* generate =
      app.add_subcommand("generate", "Sample vehicle/UAV populations");
  add_common(generate, generate_opts);

  CLI::App* select = app.add_subcommand(
      "select", "Run relay selection (proposed mechanism and/or NNM)");
  add_common(select, select_opts);
  std::string scenario_path, mechanism;
  select->add_option("--scenario", scenario_path, "scenario.json from generate");
  select->add_option("--mechanism", mechanism, "proposed | nnm | both");

  CLI::App* train = app.add_subcommand("train", "Train the MDRL policy (PPO)");
  add_common(train, train_opts);
  std::string model_id;
  bool verbose = false;
  train->add_option("--model-id", model_id, "Registry id for the checkpoint");
  train->add_flag("--verbose", verbose, "Print per-update diagnostics");

  CLI::App* eval = app.add_subcommand("eval", "Greedy evaluation of a checkpoint");
  add_common(eval, eval_opts);
  std::string checkpoint, dump_trajectory;
  std::int64_t steps = -1;
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file path");
  eval->add_option("--steps", steps, "Evaluation step budget");
  eval->add_option("--dump-trajectory", dump_trajectory,
                   "Write one greedy episode as gzip JSON-lines");

  CLI::App* bench =
      app.add_subcommand("bench", "Compare MDRL, centralized, static, random");
  add_common(bench, bench_opts);

  CLI::App* plotdata =
      app.add_subcommand("plotdata", "Convert metric CSVs to plot series JSON");
  add_common(plotdata, plot_opts);
  std::string input_csv, x_col, y_cols, group_by, out_json;
  plotdata->add_option("--input", input_csv, "Input CSV path");
  plotdata->add_option("--x", x_col, "X column name");
  plotdata->add_option("--y", y_cols, "Y column name(s), comma-separated");
  plotdata->add_option("--group-by", group_by, "Series grouping column");
  plotdata->add_option("--out-json", out_json, "Output JSON path");

  CLI::App* replay = app.add_subcommand(
      "ledger-replay", "Replay an event log and report the state digest");
  add_common(replay, replay_opts);
  std::string log_path, expect_digest, out_state;
  replay->add_option("--log", log_path, "Event log (NDJSON)");
  replay->add_option("--expect-digest", expect_digest,
                     "Fail unless the replayed state digest matches");
  replay->add_option("--out-state", out_state, "Write the replayed state JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return run_command("generate", build_config(generate_opts));
    }
    if (select->parsed()) {
      json config = build_config(select_opts);
      if (!scenario_path.empty()) config["scenario_path"] = scenario_path;
      if (!mechanism.empty()) config["mechanism"] = mechanism;
      return run_command("select", config);
    }
    if (train->parsed()) {
      json config = build_config(train_opts);
      if (!model_id.empty()) config["model_id"] = model_id;
      if (verbose) config["verbose"] = true;
      return run_command("train", config);
    }
    if (eval->parsed()) {
      json config = build_config(eval_opts);
      if (!checkpoint.empty()) config["checkpoint_path"] = checkpoint;
      if (steps >= 0) config["steps"] = steps;
      if (!dump_trajectory.empty()) config["dump_trajectory"] = dump_trajectory;
      return run_command("eval", config);
    }
    if (bench->parsed()) {
      return run_command("bench", build_config(bench_opts));
    }
    if (plotdata->parsed()) {
      json config = build_config(plot_opts);
      if (!input_csv.empty()) config["input_csv"] = input_csv;
      if (!x_col.empty()) config["x"] = x_col;
      if (!y_cols.empty()) {
        if (y_cols.find(',') == std::string::npos) {
          config["y"] = y_cols;
        } else {
          json list = json::array();
          std::istringstream ys(y_cols);
          std::string y;
          while (std::getline(ys, y, ',')) list.push_back(y);
          config["y"] = list;
        }
      }
      if (!group_by.empty()) config["group_by"] = group_by;
      if (!out_json.empty()) config["out_json"] = out_json;
      return run_command("plotdata", config);
    }
    if (replay->parsed()) {
      json config = build_config(replay_opts);
      if (!log_path.empty()) config["log_path"] = log_path;
      if (!expect_digest.empty()) config["expect_digest"] = expect_digest;
      if (!out_state.empty()) config["out_state_path"] = out_state;
      return run_command("ledger-replay", config);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "uaviov: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "uaviov: bad config: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
