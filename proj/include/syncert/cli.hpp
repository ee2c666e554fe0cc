#pragma once

// Batch front end: loads games, strategies and constraint systems from JSON,
// runs one command and produces a deterministic JSON report.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syncert/io.hpp"
#include "syncert/random.hpp"

namespace syncert::cli {

enum class Command { Validate, Correlate, Certify, Dilate, Combine, Lcs2Game, Relations };

std::optional<Command> parse_command(std::string_view name);
std::string to_string(Command c);

inline constexpr int kExitPass = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitFailure = 2;

struct Tolerances {
  double validation = 1e-10;
  double certification = 1e-8;
  double dilation = 1e-7;
  double epsilon = 1e-2;  // target dilation error for the robustness constants
};

/// "default", "strict" (all / 100) or "loose" (all * 100). Throws
/// std::invalid_argument on any other name.
Tolerances tolerance_profile(std::string_view name);

/// Environment variable naming the default profile.
inline constexpr const char* kProfileEnv = "SYNCERT_TOLERANCE_PROFILE";

struct RunConfig {
  Command command = Command::Validate;
  std::vector<std::string> inputs;
  std::string ideal;  // dilate
  std::string game;   // correlate, relations
  std::string rep;    // lcs2game
  std::map<std::string, double> tolerances;  // overrides by name
  std::string profile = "default";
  std::uint64_t seed = kDefaultSeed;
  std::string out;     // empty: standard output
  bool timing = false; // add wall-clock seconds to the report
};

/// Parses "name=value"; throws std::invalid_argument.
std::pair<std::string, double> parse_tolerance(std::string_view spec);

struct RunResult {
  int status = kExitPass;
  io::json report;
  std::string error;  // set when status == kExitInputError
};

/// Runs the command without writing anything.
RunResult execute(const RunConfig& config);

/// execute(), then writes the report to config.out (or stdout) and any input
/// error to stderr. Returns the exit status.
int run(const RunConfig& config);

}  // namespace syncert::cli
