#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "syncert/cli.hpp"

int main(int argc, char** argv) {
  using namespace syncert::cli;

  CLI::App app{"Certification tools for synchronous nonlocal-game strategies"};
  std::string command;
  std::vector<std::string> tolerances;
  RunConfig config;

  app.add_option("command", command,
                 "validate | correlate | certify | dilate | combine | lcs2game | relations")
      ->required()
      ->check(CLI::IsMember({"validate", "correlate", "certify", "dilate", "combine", "lcs2game",
                             "relations"}));
  app.add_option("--input,-i", config.inputs, "Input file (repeatable)");
  app.add_option("--ideal", config.ideal, "Ideal PME strategy for dilate");
  app.add_option("--game", config.game, "Game file for correlate and relations");
  app.add_option("--rep", config.rep, "Operator solution for lcs2game");
  app.add_option("--tol", tolerances,
                 "Tolerance override name=value (validation, certification, dilation, epsilon)");
  app.add_option("--seed", config.seed, "Seed for randomized steps");
  app.add_option("--out,-o", config.out, "Report path (default: stdout)");
  app.add_flag("--timing", config.timing, "Record wall-clock time in the report");

  CLI11_PARSE(app, argc, argv);

  if (const char* profile = std::getenv(kProfileEnv); profile && *profile) config.profile = profile;
  try {
    config.command = *parse_command(command);
    tolerance_profile(config.profile);
    for (const auto& t : tolerances) {
      auto [name, value] = parse_tolerance(t);
      config.tolerances[name] = value;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return run(config);
}
