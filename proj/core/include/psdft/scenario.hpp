#pragma once

#include <string>

namespace psdft {

/// Scenario runner behind the CLI. Parses the JSON configuration with
/// strict key checking, executes the scenario, writes artifacts into the
/// output directory.
///
/// Exit codes: 0 success, 2 configuration error, 3 solver failure,
/// 4 validation-check failure.
struct RunFlags {
  std::string output_dir;  // overrides config output.directory when set
  int jobs = 1;
  bool verify = false;          // deterministic sequential reductions
  bool dump_operators = false;  // write operator matrices next to results
};

int run_scenario_file(const std::string& config_path, const RunFlags& flags);
int run_scenario_text(const std::string& config_text, const RunFlags& flags);

/// Parse + re-serialize (defaults filled in); throws on invalid input.
std::string normalize_config(const std::string& config_text);

}  // namespace psdft
