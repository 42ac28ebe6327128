#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ptspec {

/// Everything one CLI invocation needs. Text fields keep the user's syntax
/// (frequencies "p/q,...", potentials, g grids) so a config serializes back
/// to exactly what was given.
struct RunConfig {
  std::string command;
  int d = 2;
  int n_max = 20;
  std::string freqs;
  double omega = 1.0;
  std::string potential;
  std::string g;
  int order = 2;
  std::optional<double> tol;
  double rank_tol = 1e-10;
  int m_max = 10;
  std::string level;
  int buffer = 4;
  bool expect_real = false;
  std::optional<double> sup_norm;
  int samples = 100000;
  double radius = 10.0;
  int quad_order = 0;
  std::string verify_cutoff;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";

  bool operator==(const RunConfig&) const = default;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> list = {"basis", "parity", "delta",    "jordan",
                                                "rspt",  "scan",   "branches", "compare"};
  return list;
}

/// "x", "x,y,z" or "start:stop:step" (inclusive within half a step).
std::vector<double> parse_g_grid(const std::string& text);

struct ParseOutcome {
  RunConfig config;
  bool help = false;
  std::string help_text;
};

/// argv without the program name. `--config FILE` loads JSON first; flags
/// override it. Throws Error(invalid_argument) naming the first bad field.
ParseOutcome parse_config(const std::vector<std::string>& args);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Checks the fields the command needs; throws Error(invalid_argument).
void validate_config(const RunConfig& c);

struct RunResult {
  int exit_code = 0;
  std::string output;
  std::string diagnostics;
};

enum ExitCode : int { exit_ok = 0, exit_scientific = 1, exit_usage = 2, exit_numerical = 3 };

/// Dispatches the command. Output goes to config.out when set, otherwise
/// into RunResult::output. Never throws.
RunResult run(const RunConfig& config);

}  // namespace ptspec
