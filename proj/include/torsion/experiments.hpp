#pragma once

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace torsion {

inline constexpr const char* kVersion = "torsion-lab 0.1.0";

// Exit statuses of experiment runs.
enum class RunStatus : int {
  Ok = 0,
  AssertionFailed = 1,
  ConfigError = 2,
};

struct RunOptions {
  std::string out_dir = ".";
  bool quiet = false;
  // CLI overrides; negative/empty means "use the config value"
  double tol = -1.0;
  int max_level = -1;
  std::string solver;  // "krylov" or "direct"
};

// Executes the named experiment from a JSON config, writing CSV + JSON
// reports and a run manifest into out_dir.  Validation failures return
// ConfigError; failed in-config assertions return AssertionFailed with the
// first failing row printed.
RunStatus run_experiment(const std::string& experiment, const nlohmann::json& config,
                         const RunOptions& opts, std::ostream& log);

// Prints closed-form value(s) with 12 significant digits and the formula tag.
RunStatus print_closed_form(const nlohmann::json& config, std::ostream& out);

}  // namespace torsion
