#pragma once

#include <string>

#include "core/jsonio.hpp"

namespace uaviov::runner {

// One entry point per CLI subcommand. Each takes a JSON config (documented in
// the README), writes its artifacts plus a manifest under config["out_dir"],
// and returns a summary JSON. ConfigError / DomainError and friends propagate
// to the caller.
Json run_generate(const Json& config);
Json run_select(const Json& config);
Json run_train(const Json& config);
Json run_eval(const Json& config);
Json run_bench(const Json& config);
Json run_plotdata(const Json& config);
Json run_ledger_replay(const Json& config);

// Shared helpers (also used by tests).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace uaviov::runner
