#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "citecheck/gateway.hpp"

namespace citecheck::cli {

enum ExitStatus : int {
  kExitOk = 0,
  kExitUsage = 1,    // usage or configuration error
  kExitPartial = 2,  // failures above the configured threshold
};

struct RunOptions {
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::filesystem::path backend_config;
  std::filesystem::path fewshot_file;  // empty: shipped defaults
  int k = 5;
  int shots = 2;
  int parallel = 4;
  bool resume = false;
  bool reverify = false;
  double max_failure_pct = 10.0;
};

struct EvalOptions {
  std::filesystem::path runs;
  std::filesystem::path dataset;
  std::filesystem::path backend_config;  // only the verifier section is used
  std::filesystem::path summary;         // empty: <runs>.summary.json
  std::vector<std::string> metrics{"em", "claim", "citation"};
  std::string stage = "final";  // or "initial" / "evidence": score that stage's verified statements
  double max_join_failure_pct = 0.0;
};

struct TraceOptions {
  std::filesystem::path runs;
  std::string id;
  bool show_prompts = true;
};

struct BackendSet {
  std::unique_ptr<GeneratorBackend> generator;
  std::unique_ptr<VerifierBackend> verifier;
};

/// Builds backends from a JSON file:
///   {"generator": {"type": "http", "base_url", "path", "model", "api_key_env",
///                  "timeout_ms", "max_attempts", "backoff_ms"}
///                | {"type": "scripted", "script": "<file>"},
///    "verifier":  {"type": "http", "base_url", "path", "api_key_env",
///                  "threshold", "char_budget", ...}
///                | {"type": "scripted", "script": "<file>"}}
/// Relative script paths resolve against the config file's directory.
/// Credentials are only ever named by environment variable.
BackendSet load_backends(const std::filesystem::path& config_path, bool need_generator = true);

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err);
int cmd_trace(const TraceOptions& options, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int main_entry(int argc, char** argv);

}  // namespace citecheck::cli
